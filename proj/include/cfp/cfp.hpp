#pragma once

#include "cfp/certificate.hpp"
#include "cfp/certifier.hpp"
#include "cfp/error.hpp"
#include "cfp/expression.hpp"
#include "cfp/finite_set.hpp"
#include "cfp/graph.hpp"
#include "cfp/metric.hpp"
#include "cfp/operators.hpp"
#include "cfp/problem.hpp"
#include "cfp/run.hpp"
#include "cfp/sampling.hpp"
#include "cfp/solver.hpp"
