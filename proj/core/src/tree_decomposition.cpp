#include "qcsp/tree_decomposition.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace qcsp {

int TreeDecomposition::width() const {
  int w = -1;
  for (const Node& n : nodes) w = std::max(w, static_cast<int>(n.bag.size()) - 1);
  return w;
}

int TreeDecomposition::add_node(std::vector<int> bag, int parent) {
  std::sort(bag.begin(), bag.end());
  bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
  int id = static_cast<int>(nodes.size());
  nodes.push_back({parent, {}, std::move(bag)});
  if (parent >= 0)
    nodes[static_cast<std::size_t>(parent)].children.push_back(id);
  else if (root < 0)
    root = id;
  return id;
}

namespace {

// Decomposition from an elimination order: the bag of v is {v} plus its
// neighborhood at elimination time; the bag attaches below the bag of the
// first-eliminated neighbor. An eliminated vertex never reappears in later
// bags, which gives the connectivity property.
TreeDecomposition td_from_elimination(const Graph& graph, const std::vector<int>& order) {
  std::map<int, std::set<int>> adj;
  for (int v : graph.vertices())
    adj[v] = std::set<int>(graph.neighbors(v).begin(), graph.neighbors(v).end());

  std::map<int, std::size_t> elim_pos;
  for (std::size_t i = 0; i < order.size(); ++i) elim_pos[order[i]] = i;

  std::vector<std::vector<int>> bags(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    int v = order[i];
    std::vector<int> bag{v};
    for (int u : adj[v]) {
      bag.push_back(u);
      adj[u].erase(v);
    }
    for (int a : adj[v])
      for (int b : adj[v])
        if (a < b) {
          adj[a].insert(b);
          adj[b].insert(a);
        }
    adj.erase(v);
    bags[i] = std::move(bag);
  }

  TreeDecomposition td;
  if (order.empty()) {
    td.add_node({}, -1);
    return td;
  }
  // Parent index per bag; the last-eliminated vertex anchors the root.
  std::vector<int> parent(order.size(), -1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::size_t first = order.size();
    for (int u : bags[i])
      if (u != order[i]) first = std::min(first, elim_pos[u]);
    if (first < order.size())
      parent[i] = static_cast<int>(first);
    else if (i + 1 < order.size())
      parent[i] = static_cast<int>(i + 1);  // lone bag, attach anywhere
  }
  std::vector<int> node_of(order.size(), -1);
  // Create from the root (last) downwards so parents exist first.
  for (std::size_t step = order.size(); step-- > 0;) {
    int p = parent[step] < 0 ? -1 : node_of[static_cast<std::size_t>(parent[step])];
    node_of[step] = td.add_node(bags[step], p);
  }
  return td;
}

std::vector<int> min_fill_order(const Graph& graph) {
  std::map<int, std::set<int>> adj;
  for (int v : graph.vertices())
    adj[v] = std::set<int>(graph.neighbors(v).begin(), graph.neighbors(v).end());
  std::vector<int> order;
  while (!adj.empty()) {
    int best = -1;
    long best_fill = -1;
    std::size_t best_deg = 0;
    for (const auto& [v, nb] : adj) {
      long fill = 0;
      for (auto it = nb.begin(); it != nb.end(); ++it)
        for (auto jt = std::next(it); jt != nb.end(); ++jt)
          if (!adj[*it].contains(*jt)) ++fill;
      if (best < 0 || fill < best_fill || (fill == best_fill && nb.size() < best_deg)) {
        best = v;
        best_fill = fill;
        best_deg = nb.size();
      }
    }
    order.push_back(best);
    auto nb = adj[best];
    for (int u : nb) adj[u].erase(best);
    for (int a : nb)
      for (int b : nb)
        if (a < b) {
          adj[a].insert(b);
          adj[b].insert(a);
        }
    adj.erase(best);
  }
  return order;
}

// Exact treewidth by the subset dynamic program over elimination orderings:
// f(S) is the best width eliminating exactly the vertices of S first, and
// the cost of eliminating v after S is the number of vertices outside
// S ∪ {v} reachable from v through S.
std::vector<int> exact_order(const Graph& graph) {
  int n = static_cast<int>(graph.num_vertices());
  if (n > 22) throw GuardError("exact decomposition is limited to 22 vertices");
  std::vector<int> verts(graph.vertices().begin(), graph.vertices().end());
  std::vector<std::uint32_t> adj_mask(static_cast<std::size_t>(n), 0);
  auto idx = [&](int v) {
    return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
  };
  for (int v : verts)
    for (int u : graph.neighbors(v))
      adj_mask[static_cast<std::size_t>(idx(v))] |= 1u << idx(u);

  auto contrib = [&](std::uint32_t eliminated, int v) {
    std::uint32_t closure = 1u << v;
    std::uint32_t frontier = closure;
    std::uint32_t reach = 0;
    while (frontier) {
      std::uint32_t next = 0;
      for (std::uint32_t f = frontier; f;) {
        int u = std::countr_zero(f);
        f &= f - 1;
        next |= adj_mask[static_cast<std::size_t>(u)];
      }
      reach |= next;
      frontier = next & eliminated & ~closure;
      closure |= frontier;
    }
    return std::popcount(reach & ~eliminated & ~(1u << v));
  };

  std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
  std::vector<std::uint8_t> f(static_cast<std::size_t>(full) + 1, 0);
  std::vector<std::uint8_t> pick(static_cast<std::size_t>(full) + 1, 0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    int best = 255;
    int best_v = -1;
    for (std::uint32_t rem = s; rem;) {
      int v = std::countr_zero(rem);
      rem &= rem - 1;
      std::uint32_t without = s & ~(1u << v);
      int w = std::max<int>(f[without], contrib(without, v));
      if (w < best) {
        best = w;
        best_v = v;
      }
    }
    f[s] = static_cast<std::uint8_t>(best);
    pick[s] = static_cast<std::uint8_t>(best_v);
  }

  // pick[S] is eliminated last within S; unwind back to front.
  std::vector<int> order(static_cast<std::size_t>(n));
  std::uint32_t s = full;
  for (int i = n - 1; i >= 0; --i) {
    int v = pick[s];
    order[static_cast<std::size_t>(i)] = verts[static_cast<std::size_t>(v)];
    s &= ~(1u << v);
  }
  return order;
}

}  // namespace

TreeDecomposition decompose(const Graph& graph, DecomposeMode mode) {
  if (graph.num_vertices() == 0) {
    TreeDecomposition td;
    td.add_node({}, -1);
    return td;
  }
  std::vector<int> order =
      mode == DecomposeMode::Exact ? exact_order(graph) : min_fill_order(graph);
  return td_from_elimination(graph, order);
}

TreeDecomposition decompose_random(const Graph& graph, std::mt19937_64& rng) {
  if (graph.num_vertices() == 0) {
    TreeDecomposition td;
    td.add_node({}, -1);
    return td;
  }
  std::vector<int> order(graph.vertices().begin(), graph.vertices().end());
  std::shuffle(order.begin(), order.end(), rng);
  return td_from_elimination(graph, order);
}

std::optional<std::string> validate(const TreeDecomposition& td, const Graph& graph) {
  if (td.nodes.empty() || td.root < 0) return "decomposition has no nodes";
  // structural sanity: single root, parent/children agree, connected
  int roots = 0;
  for (std::size_t i = 0; i < td.nodes.size(); ++i) {
    const auto& n = td.nodes[i];
    if (n.parent < 0) {
      ++roots;
      if (static_cast<int>(i) != td.root) return "node without parent is not the root";
    } else {
      const auto& kids = td.nodes[static_cast<std::size_t>(n.parent)].children;
      if (std::find(kids.begin(), kids.end(), static_cast<int>(i)) == kids.end())
        return "parent/children pointers disagree";
    }
  }
  if (roots != 1) return "decomposition must have exactly one root";

  std::map<int, std::vector<int>> nodes_with;
  for (std::size_t i = 0; i < td.nodes.size(); ++i)
    for (int v : td.nodes[i].bag) nodes_with[v].push_back(static_cast<int>(i));

  for (int v : graph.vertices())
    if (!nodes_with.contains(v))
      return "variable " + std::to_string(v) + " missing from every bag";
  for (auto [u, v] : graph.edges()) {
    bool covered = false;
    for (const auto& n : td.nodes) {
      if (std::binary_search(n.bag.begin(), n.bag.end(), u) &&
          std::binary_search(n.bag.begin(), n.bag.end(), v)) {
        covered = true;
        break;
      }
    }
    if (!covered)
      return "edge {" + std::to_string(u) + "," + std::to_string(v) + "} not inside any bag";
  }
  for (const auto& [v, occ] : nodes_with) {
    std::set<int> occ_set(occ.begin(), occ.end());
    std::set<int> seen{occ[0]};
    std::deque<int> bfs{occ[0]};
    while (!bfs.empty()) {
      int t = bfs.front();
      bfs.pop_front();
      std::vector<int> around = td.nodes[static_cast<std::size_t>(t)].children;
      if (td.nodes[static_cast<std::size_t>(t)].parent >= 0)
        around.push_back(td.nodes[static_cast<std::size_t>(t)].parent);
      for (int s : around)
        if (occ_set.contains(s) && seen.insert(s).second) bfs.push_back(s);
    }
    if (seen.size() != occ_set.size())
      return "occurrences of variable " + std::to_string(v) + " are not connected";
  }
  return std::nullopt;
}

int NiceDecomposition::width() const {
  int w = -1;
  for (const Node& n : nodes) w = std::max(w, static_cast<int>(n.bag.size()) - 1);
  return w;
}

std::vector<int> NiceDecomposition::postorder() const {
  std::vector<int> order;
  std::vector<std::pair<int, bool>> stack{{root, false}};
  while (!stack.empty()) {
    auto [t, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      order.push_back(t);
      continue;
    }
    stack.push_back({t, true});
    const Node& n = nodes[static_cast<std::size_t>(t)];
    if (n.left >= 0) stack.push_back({n.left, false});
    if (n.right >= 0) stack.push_back({n.right, false});
  }
  return order;
}

std::vector<VarId> NiceDecomposition::vars_in_subtree(int node) const {
  std::set<VarId> seen;
  std::deque<int> todo{node};
  while (!todo.empty()) {
    int t = todo.front();
    todo.pop_front();
    const Node& n = nodes[static_cast<std::size_t>(t)];
    seen.insert(n.bag.begin(), n.bag.end());
    if (n.left >= 0) todo.push_back(n.left);
    if (n.right >= 0) todo.push_back(n.right);
  }
  return {seen.begin(), seen.end()};
}

namespace {

struct NiceBuilder {
  NiceDecomposition nd;

  int add(NodeKind kind, VarId var, std::vector<int> bag, int left = -1, int right = -1) {
    int id = static_cast<int>(nd.nodes.size());
    nd.nodes.push_back({kind, var, -1, left, right, std::move(bag)});
    if (left >= 0) nd.nodes[static_cast<std::size_t>(left)].parent = id;
    if (right >= 0) nd.nodes[static_cast<std::size_t>(right)].parent = id;
    return id;
  }

  // Introduce chain from the empty leaf up to `bag`, ascending by id.
  int leaf_chain(const std::vector<int>& bag) {
    int cur = add(NodeKind::Leaf, -1, {});
    std::vector<int> partial;
    for (int v : bag) {
      partial.push_back(v);
      cur = add(NodeKind::Introduce, v, partial, cur);
    }
    return cur;
  }

  // Forget what `from` has beyond `to`, then introduce what is missing.
  int transition(int cur, const std::vector<int>& from, const std::vector<int>& to) {
    std::vector<int> bag = from;
    for (int v : from) {
      if (std::binary_search(to.begin(), to.end(), v)) continue;
      bag.erase(std::find(bag.begin(), bag.end(), v));
      cur = add(NodeKind::Forget, v, bag, cur);
    }
    for (int v : to) {
      if (std::binary_search(from.begin(), from.end(), v)) continue;
      bag.insert(std::lower_bound(bag.begin(), bag.end(), v), v);
      cur = add(NodeKind::Introduce, v, bag, cur);
    }
    return cur;
  }
};

}  // namespace

NiceDecomposition make_nice(const TreeDecomposition& td) {
  if (td.nodes.empty() || td.root < 0) throw ContractError("make_nice: empty decomposition");
  NiceBuilder b;

  // Iterative postorder over the original decomposition.
  std::vector<int> order;
  std::vector<std::pair<int, bool>> stack{{td.root, false}};
  while (!stack.empty()) {
    auto [t, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      order.push_back(t);
      continue;
    }
    stack.push_back({t, true});
    for (int c : td.nodes[static_cast<std::size_t>(t)].children) stack.push_back({c, false});
  }

  std::vector<int> top(td.nodes.size(), -1);  // nice node whose bag equals X(t)
  for (int t : order) {
    const auto& node = td.nodes[static_cast<std::size_t>(t)];
    if (node.children.empty()) {
      top[static_cast<std::size_t>(t)] = b.leaf_chain(node.bag);
      continue;
    }
    int combined = -1;
    for (int c : node.children) {
      int arm = b.transition(top[static_cast<std::size_t>(c)],
                             td.nodes[static_cast<std::size_t>(c)].bag, node.bag);
      combined = combined < 0 ? arm : b.add(NodeKind::Join, -1, node.bag, combined, arm);
    }
    top[static_cast<std::size_t>(t)] = combined;
  }

  int cur = top[static_cast<std::size_t>(td.root)];
  std::vector<int> bag = td.nodes[static_cast<std::size_t>(td.root)].bag;
  while (!bag.empty()) {
    int v = bag.front();
    bag.erase(bag.begin());
    cur = b.add(NodeKind::Forget, v, bag, cur);
  }
  b.nd.root = cur;
  return b.nd;
}

std::optional<std::string> validate_nice(const NiceDecomposition& nd, const Graph& graph) {
  if (nd.nodes.empty() || nd.root < 0) return "nice decomposition has no nodes";
  if (!nd.nodes[static_cast<std::size_t>(nd.root)].bag.empty()) return "root bag must be empty";
  for (std::size_t i = 0; i < nd.nodes.size(); ++i) {
    const auto& n = nd.nodes[i];
    if (!std::is_sorted(n.bag.begin(), n.bag.end())) return "bag not sorted";
    switch (n.kind) {
      case NodeKind::Leaf:
        if (n.left >= 0 || n.right >= 0) return "leaf with children";
        if (!n.bag.empty()) return "leaf bag must be empty";
        break;
      case NodeKind::Introduce: {
        if (n.left < 0 || n.right >= 0) return "introduce must have one child";
        auto child = nd.nodes[static_cast<std::size_t>(n.left)].bag;
        child.insert(std::lower_bound(child.begin(), child.end(), n.var), n.var);
        if (child != n.bag) return "introduce node does not add exactly its variable";
        break;
      }
      case NodeKind::Forget: {
        if (n.left < 0 || n.right >= 0) return "forget must have one child";
        auto bag = n.bag;
        bag.insert(std::lower_bound(bag.begin(), bag.end(), n.var), n.var);
        if (bag != nd.nodes[static_cast<std::size_t>(n.left)].bag)
          return "forget node does not drop exactly its variable";
        break;
      }
      case NodeKind::Join:
        if (n.left < 0 || n.right < 0) return "join must have two children";
        if (nd.nodes[static_cast<std::size_t>(n.left)].bag != n.bag ||
            nd.nodes[static_cast<std::size_t>(n.right)].bag != n.bag)
          return "join children must share the join bag";
        break;
    }
  }
  // The three decomposition properties, via the plain-tree view.
  TreeDecomposition td;
  for (const auto& n : nd.nodes) td.nodes.push_back({n.parent, {}, n.bag});
  for (std::size_t i = 0; i < nd.nodes.size(); ++i) {
    const auto& n = nd.nodes[i];
    if (n.left >= 0) td.nodes[i].children.push_back(n.left);
    if (n.right >= 0) td.nodes[i].children.push_back(n.right);
  }
  td.root = nd.root;
  return validate(td, graph);
}

void write_decomposition(std::ostream& out, const TreeDecomposition& td,
                         const std::vector<std::string>& var_names) {
  out << "# one line per node: id parent bag-members...\n";
  for (std::size_t i = 0; i < td.nodes.size(); ++i) {
    out << i << ' ' << td.nodes[i].parent;
    for (int v : td.nodes[i].bag) out << ' ' << var_names.at(static_cast<std::size_t>(v));
    out << '\n';
  }
}

TreeDecomposition read_decomposition(std::istream& in,
                                     const std::vector<std::string>& var_names) {
  std::unordered_map<std::string, int> id_of;
  for (std::size_t i = 0; i < var_names.size(); ++i) id_of[var_names[i]] = static_cast<int>(i);

  struct Line {
    int id;
    int parent;
    std::vector<int> bag;
  };
  std::vector<Line> lines;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    Line ln;
    if (!(ls >> ln.id >> ln.parent)) {
      std::string leftover;
      if (ls.clear(), ls >> leftover)
        throw ParseError("decomposition line " + std::to_string(lineno) + ": expected `id parent`");
      continue;  // blank line
    }
    std::string name;
    while (ls >> name) {
      auto it = id_of.find(name);
      if (it == id_of.end())
        throw ParseError("decomposition line " + std::to_string(lineno) + ": unknown variable '" +
                         name + "'");
      ln.bag.push_back(it->second);
    }
    lines.push_back(std::move(ln));
  }
  if (lines.empty()) throw ParseError("decomposition file has no nodes");

  TreeDecomposition td;
  std::map<int, int> node_of;
  td.nodes.resize(lines.size());
  int next = 0;
  for (const Line& ln : lines) {
    if (node_of.contains(ln.id)) throw ParseError("duplicate decomposition node id");
    node_of[ln.id] = next++;
  }
  for (const Line& ln : lines) {
    auto& n = td.nodes[static_cast<std::size_t>(node_of[ln.id])];
    n.bag = ln.bag;
    std::sort(n.bag.begin(), n.bag.end());
    n.bag.erase(std::unique(n.bag.begin(), n.bag.end()), n.bag.end());
    if (ln.parent < 0) {
      if (td.root >= 0) throw ParseError("decomposition has two roots");
      n.parent = -1;
      td.root = node_of[ln.id];
    } else {
      if (!node_of.contains(ln.parent)) throw ParseError("decomposition parent id unknown");
      n.parent = node_of[ln.parent];
      td.nodes[static_cast<std::size_t>(n.parent)].children.push_back(node_of[ln.id]);
    }
  }
  if (td.root < 0) throw ParseError("decomposition has no root (parent -1)");
  return td;
}

}  // namespace qcsp
