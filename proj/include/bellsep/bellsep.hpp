#pragma once

#include "bellsep/behavior.hpp"
#include "bellsep/determinize.hpp"
#include "bellsep/errors.hpp"
#include "bellsep/linalg.hpp"
#include "bellsep/local_model.hpp"
#include "bellsep/local_polytope.hpp"
#include "bellsep/monte_carlo.hpp"
#include "bellsep/nosignalling.hpp"
#include "bellsep/quantum.hpp"
#include "bellsep/random.hpp"
#include "bellsep/rational.hpp"
#include "bellsep/scenario.hpp"
#include "bellsep/simplex.hpp"
