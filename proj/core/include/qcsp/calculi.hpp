#pragma once

#include <optional>
#include <span>
#include <string>

#include "qcsp/calculus.hpp"
#include "qcsp/instance.hpp"
#include "qcsp/models.hpp"
#include "qcsp/network.hpp"
#include "qcsp/ordered_partition.hpp"

namespace qcsp {

// Per-calculus deciders, realizers and enumerators. These back the Calculus
// hooks returned by find_calculus() and are exposed directly for tests.

// Point algebra Q = (Q; <, =, >). Union-find on '=', cycle check plus
// longest-path layering on '<' between classes. The resulting partition
// realizes the network: rank(x) < rank(y) for every x<y entry, equal ranks
// for x=y.
std::optional<OrderedPartition> pa_decide(const AtomicNetwork& network);

// Allen's Interval Algebra: translate every entry to its endpoint formula
// over {<,=,>}, add lo < hi per variable, and solve as a point-algebra
// network.
std::optional<IntervalModel> ia_decide(const AtomicNetwork& network);

// Cardinal Direction Calculus / d-dimensional Block Algebra: decompose into
// per-coordinate point-algebra (CDC) or interval-algebra (BA_d) networks.
std::optional<PlaneModel> cdc_decide(const AtomicNetwork& network);
std::optional<BoxModel> ba_decide(const AtomicNetwork& network, int dims);

enum class RccVariant { Rcc5, Rcc8 };

// Algebraic closure with the embedded composition table; sat iff the
// network closes without an empty entry.
bool rcc_decide(const AtomicNetwork& network, RccVariant variant);

// Rooted-triple consistency: collapse equalities, then Aho-style recursion
// on x|yz constraints. Returns a witnessing binary tree plus leaf map.
std::optional<PhyloTreeModel> phylo_decide(const AtomicNetwork& network);

// The explicit set model for RCC5 networks whose off-diagonal entries are
// all DR or PO: every such network is satisfiable.
Rcc5SetModel rcc5_drpo_model(const AtomicNetwork& network);

// Partition-backed specialized enumerators. Each yields complete
// satisfiable networks on `vars` implying every constraint of
// instance[vars]; constraints are checked as soon as their scope is fully
// placed, which prunes the partition search.
bool pa_certificates_from_partitions(const Instance& inst, std::span<const VarId> vars,
                                     const CertSink& sink);
bool ia_certificates_from_partitions(const Instance& inst, std::span<const VarId> vars,
                                     const CertSink& sink);
bool cdc_certificates_from_partitions(const Instance& inst, std::span<const VarId> vars,
                                      const CertSink& sink);
bool ba_certificates_from_partitions(const Instance& inst, std::span<const VarId> vars,
                                     const CertSink& sink, int dims);

// Tree-shape analogue: set partitions of vars (equality classes) times
// leaf-labeled rooted binary tree topologies on the classes.
bool phylo_certificates_from_trees(const Instance& inst, std::span<const VarId> vars,
                                   const CertSink& sink);

// Backtracking refinement with composition-table propagation; doubles as
// the RCC completion path since RCC has no model realizer.
bool rcc_certificates_by_refinement(const Instance& inst, std::span<const VarId> vars,
                                    const CertSink& sink, RccVariant variant);

// Which of the 13 IA relations holds between [l1,r1] and [l2,r2], given
// l1 < r1 and l2 < r2; the cases are exhaustive and mutually exclusive.
RelId ia_relation_from_endpoints(long long l1, long long r1, long long l2, long long r2);

// RCC composition-table self-checks: converse closure and identity row.
// Throws Error on an inconsistent table (also applied to tables loaded from
// the data-file override path).
void rcc_check_table(RccVariant variant);

}  // namespace qcsp
