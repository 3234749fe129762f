#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qcsp/instance.hpp"
#include "qcsp/network.hpp"
#include "qcsp/tree_decomposition.hpp"

namespace qcsp {

// One certificate in a record, with back-pointers into the child records
// for witness extraction (-1 when absent or retention is off).
struct RecordMember {
  AtomicNetwork net;
  std::int32_t child_a = -1;
  std::int32_t child_b = -1;
};

// R(t): the certificates for the subtree instance, projected onto the bag.
// Members keep deterministic insertion order; the index enables hash
// lookups during the joins and introduce filters.
struct Record {
  std::vector<RecordMember> members;
  std::unordered_map<AtomicNetwork, std::int32_t, NetworkHash> index;

  bool contains(const AtomicNetwork& n) const { return index.contains(n); }
  std::int32_t find(const AtomicNetwork& n) const {
    auto it = index.find(n);
    return it == index.end() ? -1 : it->second;
  }
  void add(AtomicNetwork n, std::int32_t a = -1, std::int32_t b = -1) {
    auto [it, fresh] = index.try_emplace(n, static_cast<std::int32_t>(members.size()));
    if (fresh) members.push_back({std::move(n), a, b});
  }
  std::size_t size() const { return members.size(); }
};

struct NodeStat {
  int node = -1;
  NodeKind kind = NodeKind::Leaf;
  int bag_size = 0;
  std::size_t record_size = 0;
  long long micros = 0;
};

struct SolveStats {
  std::vector<NodeStat> nodes;
  std::size_t peak_record = 0;
  double wall_ms = 0.0;
};

struct SolveOptions {
  bool retain_records = true;  // needed for witness extraction
  bool parallel = false;       // subtree parallelism at join nodes
};

struct SolveOutcome {
  bool sat = false;
  SolveStats stats;
  std::vector<Record> records;  // indexed by nice node, empty unless retained
};

// The certificate-record dynamic program over a nice decomposition.
// Rejects invalid decompositions before solving.
SolveOutcome solve(const Instance& inst, const NiceDecomposition& nd, SolveOptions opts = {});

// The four node transitions, exposed for direct testing.
Record leaf_step();
Record introduce_step(const Record& child, const Instance& inst, std::span<const int> bag,
                      std::span<const int> child_bag);
Record forget_step(const Record& child, VarId forgotten, std::span<const int> bag);
Record join_step(const Record& r1, const Record& r2);

// Stitches one compatible certificate per node top-down via unions, then
// completes the result on all of V. Requires a SAT outcome with retained
// records.
AtomicNetwork extract_certificate(const Instance& inst, const NiceDecomposition& nd,
                                  const std::vector<Record>& records);

void write_stats_csv(std::ostream& out, const SolveStats& stats);
std::string kind_name(NodeKind k);

}  // namespace qcsp
