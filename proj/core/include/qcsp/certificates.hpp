#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qcsp/calculus.hpp"
#include "qcsp/instance.hpp"
#include "qcsp/network.hpp"

namespace qcsp {

// True iff the network has an entry for every k-tuple (with repetition) of
// its variables, for every arity of the calculus.
bool is_complete(const Calculus& calc, const AtomicNetwork& network);

// Extends a satisfiable network to a complete one by realizing a concrete
// model and reading off the relation of every tuple. Returns nullopt when
// the input is unsatisfiable. Throws ContractError for calculi without a
// realizer (RCC completion goes through the enumerator path instead).
std::optional<AtomicNetwork> complete_network(const Calculus& calc, const AtomicNetwork& network);

// Reads off the complete network a model induces on `vars`.
AtomicNetwork network_of_model(const Calculus& calc, const Model& model,
                               std::span<const VarId> vars);

// Yields exactly the complete satisfiable networks on `vars` implying every
// constraint of instance[vars], without duplicates. Dispatches to the
// calculus's specialized enumerator when present, else to the generic
// filter enumerator. Returns false iff the sink stopped the stream.
bool enumerate_certificates(const Calculus& calc, const Instance& instance,
                            std::span<const VarId> vars, const CertSink& sink);

// Generic filter enumerator: walks relation assignments tuple by tuple in
// canonical order, cutting partial assignments the decider rejects, and
// filters complete networks by constraint implication. Exposed separately
// so specialized enumerators can be cross-checked against it.
bool enumerate_certificates_generic(const Calculus& calc, const Instance& instance,
                                    std::span<const VarId> vars, const CertSink& sink);

// Collects an enumeration into a vector (test/tooling convenience).
std::vector<AtomicNetwork> collect_certificates(const Calculus& calc, const Instance& instance,
                                                std::span<const VarId> vars);

}  // namespace qcsp
