#pragma once

#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "qcsp/types.hpp"

namespace qcsp {

// Concrete models realized from atomic networks. Coordinates are plain
// integers read off partition ranks; the calculi are invariant under
// order-preserving maps, so any realization is as good as any other.

struct PointModel {
  std::unordered_map<VarId, long long> value;
};

struct IntervalModel {
  // lo < hi for every variable
  std::unordered_map<VarId, std::pair<long long, long long>> interval;
};

struct PlaneModel {
  std::unordered_map<VarId, std::pair<long long, long long>> point;
};

struct BoxModel {
  int dims = 0;
  std::unordered_map<VarId, std::vector<std::pair<long long, long long>>> box;
};

struct Rcc5SetModel {
  // Each variable denotes a non-empty union of abstract disjoint regions.
  std::unordered_map<VarId, std::set<std::string>> regions;
};

struct PhyloTreeModel {
  // Rooted binary tree: node 0 is the root; every non-root node has degree
  // 3 (internal) or 1 (leaf); the root has degree 2 or 0.
  struct Node {
    int parent = -1;
    int left = -1;
    int right = -1;
    int depth = 0;
  };
  std::vector<Node> nodes;
  std::unordered_map<VarId, int> leaf_of;  // total on the model's variables

  bool is_leaf(int n) const { return nodes[static_cast<std::size_t>(n)].left < 0; }
  int yca(int a, int b) const {
    while (a != b) {
      const auto& na = nodes[static_cast<std::size_t>(a)];
      const auto& nb = nodes[static_cast<std::size_t>(b)];
      if (na.depth >= nb.depth)
        a = na.parent;
      else
        b = nb.parent;
    }
    return a;
  }
};

using Model = std::variant<PointModel, IntervalModel, PlaneModel, BoxModel, Rcc5SetModel,
                           PhyloTreeModel>;

}  // namespace qcsp
