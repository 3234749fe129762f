#pragma once

#include <algorithm>
#include <set>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qcsp/types.hpp"

namespace qcsp {

// Simple undirected graph over integer vertex ids (not necessarily dense).
class Graph {
public:
  Graph() = default;
  explicit Graph(std::vector<int> vertices) {
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    verts_ = std::move(vertices);
    for (int v : verts_) adj_[v];
  }

  void add_vertex(int v) {
    if (adj_.contains(v)) return;
    verts_.insert(std::lower_bound(verts_.begin(), verts_.end(), v), v);
    adj_[v];
  }

  void add_edge(int u, int v) {
    if (u == v) return;  // no self-loops
    add_vertex(u);
    add_vertex(v);
    auto e = std::minmax(u, v);
    if (!edges_.insert({e.first, e.second}).second) return;
    insert_sorted(adj_[u], v);
    insert_sorted(adj_[v], u);
  }

  std::span<const int> vertices() const { return verts_; }
  std::size_t num_vertices() const { return verts_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  bool has_vertex(int v) const { return adj_.contains(v); }
  bool has_edge(int u, int v) const {
    auto e = std::minmax(u, v);
    return edges_.contains({e.first, e.second});
  }
  std::span<const int> neighbors(int v) const {
    auto it = adj_.find(v);
    if (it == adj_.end()) throw ContractError("graph: unknown vertex");
    return it->second;
  }
  const std::set<std::pair<int, int>>& edges() const { return edges_; }

private:
  static void insert_sorted(std::vector<int>& xs, int v) {
    xs.insert(std::lower_bound(xs.begin(), xs.end(), v), v);
  }

  std::vector<int> verts_;
  std::unordered_map<int, std::vector<int>> adj_;
  std::set<std::pair<int, int>> edges_;
};

}  // namespace qcsp
