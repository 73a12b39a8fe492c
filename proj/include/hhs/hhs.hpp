#pragma once

#include "hhs/axiom_checker.hpp"
#include "hhs/distance_formula.hpp"
#include "hhs/error.hpp"
#include "hhs/generators.hpp"
#include "hhs/hyperbolicity.hpp"
#include "hhs/limits.hpp"
#include "hhs/metric_space.hpp"
#include "hhs/rational.hpp"
#include "hhs/relation_axioms.hpp"
#include "hhs/structure.hpp"
