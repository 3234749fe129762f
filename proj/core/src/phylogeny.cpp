#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_set>

#include "calculi_detail.hpp"
#include "qcsp/calculi.hpp"
#include "qcsp/oracle.hpp"

namespace qcsp {

namespace {

enum PhyloRel : RelId { kR1 = 0, kR2, kR3, kR4 };

struct UnionFind {
  std::map<VarId, VarId> parent;
  VarId find(VarId v) {
    auto it = parent.find(v);
    if (it == parent.end()) {
      parent[v] = v;
      return v;
    }
    if (it->second == v) return v;
    return it->second = find(it->second);
  }
  void merge(VarId a, VarId b) { parent[find(a)] = find(b); }
};

struct Triple {
  VarId outsider;
  VarId p;
  VarId q;
};

// Bare tree shape used while building; converted to PhyloTreeModel at the
// end (root reindexed to 0, depths filled in).
struct TreeBuild {
  struct Node {
    int parent = -1;
    int left = -1;
    int right = -1;
  };
  std::vector<Node> nodes;

  int add_leaf() {
    nodes.push_back({});
    return static_cast<int>(nodes.size()) - 1;
  }
  int combine(int a, int b) {
    int n = add_leaf();
    nodes[static_cast<std::size_t>(n)].left = a;
    nodes[static_cast<std::size_t>(n)].right = b;
    nodes[static_cast<std::size_t>(a)].parent = n;
    nodes[static_cast<std::size_t>(b)].parent = n;
    return n;
  }
};

PhyloTreeModel finalize_tree(const TreeBuild& tb, int root,
                             const std::map<VarId, int>& leaf_of_var) {
  PhyloTreeModel m;
  std::vector<int> remap(tb.nodes.size(), -1);
  std::deque<int> bfs{root};
  while (!bfs.empty()) {
    int n = bfs.front();
    bfs.pop_front();
    remap[static_cast<std::size_t>(n)] = static_cast<int>(m.nodes.size());
    m.nodes.push_back({});
    const auto& src = tb.nodes[static_cast<std::size_t>(n)];
    if (src.left >= 0) {
      bfs.push_back(src.left);
      bfs.push_back(src.right);
    }
  }
  for (std::size_t n = 0; n < tb.nodes.size(); ++n) {
    int id = remap[n];
    if (id < 0) continue;
    const auto& src = tb.nodes[n];
    auto& dst = m.nodes[static_cast<std::size_t>(id)];
    dst.parent = src.parent < 0 ? -1 : remap[static_cast<std::size_t>(src.parent)];
    dst.left = src.left < 0 ? -1 : remap[static_cast<std::size_t>(src.left)];
    dst.right = src.right < 0 ? -1 : remap[static_cast<std::size_t>(src.right)];
  }
  for (auto& node : m.nodes)
    node.depth = node.parent < 0 ? 0 : m.nodes[static_cast<std::size_t>(node.parent)].depth + 1;
  for (const auto& [v, leaf] : leaf_of_var) m.leaf_of[v] = remap[static_cast<std::size_t>(leaf)];
  return m;
}

// Aho-style recursion: classes linked by an edge whenever some x|yz keeps y
// and z together; a level that fails to split is unsatisfiable.
bool build_tree(TreeBuild& tb, const std::vector<VarId>& classes,
                const std::vector<Triple>& triples, std::map<VarId, int>& leaf_of_class,
                int& root_out) {
  if (classes.size() == 1) {
    int leaf = tb.add_leaf();
    leaf_of_class[classes[0]] = leaf;
    root_out = leaf;
    return true;
  }
  UnionFind uf;
  for (VarId c : classes) uf.find(c);
  for (const Triple& t : triples) uf.merge(t.p, t.q);
  std::map<VarId, std::vector<VarId>> groups;
  for (VarId c : classes) groups[uf.find(c)].push_back(c);
  if (groups.size() < 2) return false;

  int combined = -1;
  for (auto& [rep, members] : groups) {
    std::set<VarId> inside(members.begin(), members.end());
    std::vector<Triple> sub;
    for (const Triple& t : triples)
      if (inside.contains(t.outsider) && inside.contains(t.p) && inside.contains(t.q))
        sub.push_back(t);
    int sub_root = -1;
    if (!build_tree(tb, members, sub, leaf_of_class, sub_root)) return false;
    combined = combined < 0 ? sub_root : tb.combine(combined, sub_root);
  }
  root_out = combined;
  return true;
}

}  // namespace

std::optional<PhyloTreeModel> phylo_decide(const AtomicNetwork& network) {
  UnionFind uf;
  for (VarId v : network.vars()) uf.find(v);
  for (const auto& [t, r] : network.entries()) {
    if (t.size() != 3 || r < kR1 || r > kR4)
      throw ContractError("phylo_decide: entries must be ternary over {R1,R2,R3,R4}");
    if (r == kR4) {
      uf.merge(t[0], t[1]);
      uf.merge(t[1], t[2]);
    }
  }
  std::vector<Triple> triples;
  for (const auto& [t, r] : network.entries()) {
    if (r == kR4) continue;
    VarId o = r == kR1 ? t[0] : r == kR2 ? t[1] : t[2];
    VarId p = r == kR1 ? t[1] : r == kR2 ? t[0] : t[0];
    VarId q = r == kR1 ? t[2] : r == kR2 ? t[2] : t[1];
    VarId ro = uf.find(o), rp = uf.find(p), rq = uf.find(q);
    if (ro == rp || ro == rq) return std::nullopt;  // x|yz forces x != y, x != z
    if (rp != rq) triples.push_back({ro, rp, rq});
  }
  std::set<VarId> class_set;
  for (VarId v : network.vars()) class_set.insert(uf.find(v));
  if (class_set.empty()) {
    PhyloTreeModel m;
    m.nodes.push_back({});
    return m;
  }

  TreeBuild tb;
  std::map<VarId, int> leaf_of_class;
  int root = -1;
  std::vector<VarId> classes(class_set.begin(), class_set.end());
  if (!build_tree(tb, classes, triples, leaf_of_class, root)) return std::nullopt;

  std::map<VarId, int> leaf_of_var;
  for (VarId v : network.vars()) leaf_of_var[v] = leaf_of_class.at(uf.find(v));
  return finalize_tree(tb, root, leaf_of_var);
}

namespace detail {

namespace {

// All leaf-labeled rooted binary tree shapes on k labeled leaves: grow by
// attaching the next leaf onto any edge or above the root.
struct Shape {
  TreeBuild tb;
  int root = -1;
  std::vector<int> leaf_node;  // label -> node
};

std::vector<Shape> tree_shapes(int k) {
  std::vector<Shape> out;
  if (k == 0) return out;
  Shape s;
  s.root = s.tb.add_leaf();
  s.leaf_node = {s.root};
  out.push_back(s);
  for (int label = 1; label < k; ++label) {
    std::vector<Shape> next;
    for (const Shape& base : out) {
      int nodes = static_cast<int>(base.tb.nodes.size());
      for (int attach = 0; attach <= nodes; ++attach) {
        // attach < nodes: subdivide the edge above node `attach`;
        // attach == nodes: new root above the old one.
        if (attach < nodes && attach == base.root) continue;  // root has no parent edge
        Shape s2 = base;
        int leaf = s2.tb.add_leaf();
        if (attach == nodes) {
          s2.root = s2.tb.combine(s2.root, leaf);
        } else {
          int parent = s2.tb.nodes[static_cast<std::size_t>(attach)].parent;
          int mid = s2.tb.combine(attach, leaf);
          auto& pn = s2.tb.nodes[static_cast<std::size_t>(parent)];
          if (pn.left == attach)
            pn.left = mid;
          else
            pn.right = mid;
          s2.tb.nodes[static_cast<std::size_t>(mid)].parent = parent;
        }
        s2.leaf_node.push_back(leaf);
        next.push_back(std::move(s2));
      }
    }
    out = std::move(next);
  }
  return out;
}

// Restricted growth strings: every set partition of 0..n-1 exactly once.
bool set_partitions(int n, const std::function<bool(const std::vector<int>&)>& sink) {
  std::vector<int> rgs(static_cast<std::size_t>(n), 0);
  std::function<bool(int, int)> go = [&](int i, int maxb) -> bool {
    if (i == n) return sink(rgs);
    for (int b = 0; b <= maxb; ++b) {
      rgs[static_cast<std::size_t>(i)] = b;
      if (!go(i + 1, std::max(maxb, b + 1))) return false;
    }
    return true;
  };
  if (n == 0) return sink(rgs);
  return go(0, 0);
}

}  // namespace

bool phylo_enumerate(ActiveConstraints cons, std::span<const VarId> vars, const CertSink& sink) {
  std::vector<VarId> sorted(vars.begin(), vars.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.empty()) return sink(AtomicNetwork{});
  int n = static_cast<int>(sorted.size());

  std::unordered_set<AtomicNetwork, NetworkHash> seen;
  const Calculus& calc = phylo_calculus();
  bool keep = set_partitions(n, [&](const std::vector<int>& rgs) {
    int k = 1 + *std::max_element(rgs.begin(), rgs.end());
    for (const Shape& shape : tree_shapes(k)) {
      std::map<VarId, int> leaf_of_var;
      for (int i = 0; i < n; ++i)
        leaf_of_var[sorted[static_cast<std::size_t>(i)]] =
            shape.leaf_node[static_cast<std::size_t>(rgs[static_cast<std::size_t>(i)])];
      PhyloTreeModel model = finalize_tree(shape.tb, shape.root, leaf_of_var);

      AtomicNetwork net = AtomicNetwork::on_vars(sorted);
      Model m{std::move(model)};
      for (VarId a : sorted)
        for (VarId b : sorted)
          for (VarId c : sorted) {
            Tuple t{a, b, c};
            net.append(t, relation_of_model(calc, m, t));
          }
      if (!seen.insert(net).second) continue;  // same network from another shape
      bool ok = true;
      for (const Constraint* con : cons)
        if (!implies(net, *con)) {
          ok = false;
          break;
        }
      if (ok && !sink(net)) return false;
    }
    return true;
  });
  return keep;
}

const Calculus& phylo_calculus() {
  static const Calculus calc = [] {
    Calculus c;
    c.name = "phylo";
    const char* names[] = {"R1", "R2", "R3", "R4"};
    for (RelId i = 0; i < 4; ++i)
      c.relations.push_back({i, names[i], 3, i == kR4});
    c.arities = {3};
    c.decide = [](const AtomicNetwork& n) { return phylo_decide(n).has_value(); };
    c.realize = [](const AtomicNetwork& n) -> std::optional<Model> {
      auto m = phylo_decide(n);
      if (!m) return std::nullopt;
      return Model{std::move(*m)};
    };
    c.relation_in_model = [](const Model& m, const Tuple& t) {
      return relation_of_model(phylo_calculus(), m, t);
    };
    c.enumerate = [](std::span<const Constraint* const> cons, std::span<const VarId> vars,
                     const CertSink& sink) { return phylo_enumerate(cons, vars, sink); };
    c.finalize();
    return c;
  }();
  return calc;
}

}  // namespace detail

bool phylo_certificates_from_trees(const Instance& inst, std::span<const VarId> vars,
                                   const CertSink& sink) {
  auto active = detail::active_constraints(inst, vars);
  return detail::phylo_enumerate(active, vars, sink);
}

}  // namespace qcsp
