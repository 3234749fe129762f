#pragma once

#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "qcsp/types.hpp"

namespace qcsp {

// An ordered partition of a ground set: a sequence of disjoint non-empty
// blocks covering it, equivalently a surjection onto an initial segment of
// the integers. Ranks double as concrete coordinates when realizing models.
struct OrderedPartition {
  std::vector<std::vector<VarId>> blocks;
  std::unordered_map<VarId, int> rank;

  int num_blocks() const { return static_cast<int>(blocks.size()); }
  void validate() const;  // throws ContractError on malformed data
};

// Yields every ordered partition of `ground` exactly once. The sink returns
// false to stop early. Returns false iff the sink stopped the stream.
bool enumerate_ordered_partitions(std::span<const VarId> ground,
                                  const std::function<bool(const OrderedPartition&)>& sink);

}  // namespace qcsp
