#include "qcsp/ordered_partition.hpp"

#include <algorithm>
#include <set>

namespace qcsp {

void OrderedPartition::validate() const {
  std::set<VarId> seen;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].empty()) throw ContractError("ordered partition: empty block");
    for (VarId v : blocks[i]) {
      if (!seen.insert(v).second) throw ContractError("ordered partition: blocks overlap");
      auto it = rank.find(v);
      if (it == rank.end() || it->second != static_cast<int>(i))
        throw ContractError("ordered partition: rank inconsistent with blocks");
    }
  }
  if (seen.size() != rank.size()) throw ContractError("ordered partition: rank domain mismatch");
}

namespace {

struct PartitionEnum {
  std::span<const VarId> ground;
  const std::function<bool(const OrderedPartition&)>* sink;
  std::vector<std::vector<VarId>> blocks;

  bool emit() {
    OrderedPartition p;
    p.blocks = blocks;
    for (std::size_t i = 0; i < blocks.size(); ++i)
      for (VarId v : blocks[i]) p.rank[v] = static_cast<int>(i);
    return (*sink)(p);
  }

  // Each element either joins an existing block or opens a new one at any
  // position; every ordered partition is produced exactly once. Blocks are
  // addressed by index: deeper calls reshape the vector and restore it.
  bool place(std::size_t idx) {
    if (idx == ground.size()) return emit();
    VarId v = ground[idx];
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      blocks[b].push_back(v);
      if (!place(idx + 1)) return false;
      blocks[b].pop_back();
    }
    for (std::size_t pos = 0; pos <= blocks.size(); ++pos) {
      blocks.insert(blocks.begin() + static_cast<std::ptrdiff_t>(pos), {v});
      if (!place(idx + 1)) return false;
      blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(pos));
    }
    return true;
  }
};

}  // namespace

bool enumerate_ordered_partitions(std::span<const VarId> ground,
                                  const std::function<bool(const OrderedPartition&)>& sink) {
  PartitionEnum e{ground, &sink, {}};
  return e.place(0);
}

}  // namespace qcsp
