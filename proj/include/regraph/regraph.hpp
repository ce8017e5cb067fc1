#pragma once

// Umbrella header: trace formulae, walk counting and unitary evolution
// operators for d-regular graphs.

#include "regraph/bartholdi.hpp"
#include "regraph/ensemble.hpp"
#include "regraph/errors.hpp"
#include "regraph/exact.hpp"
#include "regraph/graph.hpp"
#include "regraph/operators.hpp"
#include "regraph/spectral.hpp"
#include "regraph/trace_formula.hpp"
#include "regraph/unitary.hpp"
#include "regraph/version.hpp"
#include "regraph/walks.hpp"
