#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "qcsp/calculus.hpp"
#include "qcsp/instance.hpp"
#include "qcsp/models.hpp"
#include "qcsp/network.hpp"

namespace qcsp {

// Independent ground truth for desk-scale validation. The size guards are
// hard errors: an oracle must never lie by timeout.

// SAT iff some complete satisfiable network on V implies every constraint.
// Guard: at most 8 variables for binary calculi, 5 when a ternary relation
// is present.
bool brute_solve(const Instance& inst);

// Evaluates every constraint's DNF directly against the concrete model
// semantics. Returns nullopt when all hold, else the index of the first
// violated constraint.
std::optional<std::size_t> verify_model(const Instance& inst, const Model& model);

// Semantic read-off: the basic relation the model assigns to a tuple.
RelId relation_of_model(const Calculus& calc, const Model& model, const Tuple& tuple);

// Exact count of complete satisfiable networks on m fresh unconstrained
// variables. Same guard as brute_solve.
std::uint64_t count_complete_satisfiable(const Calculus& calc, int m);

// Decider satisfiability + implication of every constraint + completeness.
// Used to validate extracted witnesses.
bool verify_certificate(const Instance& inst, const AtomicNetwork& cert);

int oracle_var_guard(const Calculus& calc);

}  // namespace qcsp
