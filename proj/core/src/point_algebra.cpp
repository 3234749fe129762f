#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "calculi_detail.hpp"
#include "qcsp/calculi.hpp"
#include "qcsp/oracle.hpp"

namespace qcsp {

namespace {

constexpr RelId kLt = 0;
constexpr RelId kEq = 1;
constexpr RelId kGt = 2;

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

}  // namespace

std::optional<OrderedPartition> pa_decide(const AtomicNetwork& network) {
  UnionFind uf;
  for (VarId v : network.vars()) uf.find(v);
  for (const auto& [t, r] : network.entries()) {
    if (t.size() != 2 || r < kLt || r > kGt)
      throw ContractError("pa_decide: entries must be binary over {<,=,>}");
    if (r == kEq) uf.merge(t[0], t[1]);
  }

  // Strict edges between classes; a strict edge inside a class or a
  // directed cycle means unsat.
  std::map<VarId, std::set<VarId>> succ;
  std::map<VarId, int> indeg;
  for (VarId v : network.vars()) {
    succ[uf.find(v)];
    indeg[uf.find(v)];
  }
  for (const auto& [t, r] : network.entries()) {
    if (r == kEq) continue;
    VarId lo = r == kLt ? t[0] : t[1];
    VarId hi = r == kLt ? t[1] : t[0];
    VarId a = uf.find(lo), b = uf.find(hi);
    if (a == b) return std::nullopt;
    if (succ[a].insert(b).second) ++indeg[b];
  }

  std::deque<VarId> ready;
  for (const auto& [c, d] : indeg)
    if (d == 0) ready.push_back(c);
  std::map<VarId, int> rank;
  std::size_t seen = 0;
  while (!ready.empty()) {
    VarId c = ready.front();
    ready.pop_front();
    ++seen;
    for (VarId d : succ[c]) {
      rank[d] = std::max(rank[d], rank[c] + 1);
      if (--indeg[d] == 0) ready.push_back(d);
    }
  }
  if (seen != succ.size()) return std::nullopt;  // cycle among strict edges

  // Longest-path layering keeps ranks dense: a class of rank k has a chain
  // of k strictly-smaller predecessors.
  int max_rank = 0;
  for (const auto& [c, r] : rank) max_rank = std::max(max_rank, r);
  OrderedPartition part;
  part.blocks.resize(static_cast<std::size_t>(max_rank) + 1);
  for (VarId v : network.vars()) {
    int r = rank[uf.find(v)];
    part.blocks[static_cast<std::size_t>(r)].push_back(v);
    part.rank[v] = r;
  }
  // Layering starts every chain at rank 0, so no block can be empty; keep a
  // defensive compaction for robustness.
  std::erase_if(part.blocks, [](const auto& b) { return b.empty(); });
  for (std::size_t i = 0; i < part.blocks.size(); ++i) {
    std::sort(part.blocks[i].begin(), part.blocks[i].end());
    for (VarId v : part.blocks[i]) part.rank[v] = static_cast<int>(i);
  }
  return part;
}

namespace detail {

namespace {

RelId pa_cmp(long long a, long long b) { return a < b ? kLt : a == b ? kEq : kGt; }

struct PaEnum {
  std::span<const VarId> vars;  // sorted
  std::vector<std::vector<const Constraint*>> trigger;
  const CertSink* sink;
  RankedPartition part;
  std::vector<int> local;  // dense local index per var position

  explicit PaEnum(std::span<const VarId> vs) : vars(vs), part(static_cast<int>(vs.size())) {}

  int local_of(VarId v) const {
    auto it = std::lower_bound(vars.begin(), vars.end(), v);
    return static_cast<int>(it - vars.begin());
  }

  bool constraints_ok(int idx) {
    for (const Constraint* c : trigger[static_cast<std::size_t>(idx)]) {
      bool ok = constraint_holds(*c, [&](const Tuple& args) {
        return pa_cmp(part.rank_of(local_of(args[0])), part.rank_of(local_of(args[1])));
      });
      if (!ok) return false;
    }
    return true;
  }

  bool emit() {
    AtomicNetwork net = AtomicNetwork::on_vars({vars.begin(), vars.end()});
    for (std::size_t i = 0; i < vars.size(); ++i)
      for (std::size_t j = 0; j < vars.size(); ++j)
        net.append(Tuple{vars[i], vars[j]},
                   pa_cmp(part.rank_of(static_cast<int>(i)), part.rank_of(static_cast<int>(j))));
    return (*sink)(net);
  }

  bool place(int idx) {
    if (idx == static_cast<int>(vars.size())) return emit();
    for (int b = 0; b < part.num_blocks(); ++b) {
      part.join_block(idx, b);
      if (constraints_ok(idx) && !place(idx + 1)) return false;
      part.unjoin_block(idx, b);
    }
    for (int pos = 0; pos <= part.num_blocks(); ++pos) {
      part.open_block(idx, pos);
      if (constraints_ok(idx) && !place(idx + 1)) return false;
      part.close_block(idx, pos);
    }
    return true;
  }
};

}  // namespace

std::vector<std::vector<const Constraint*>> triggers_by_last_var(
    ActiveConstraints cons, std::span<const VarId> sorted_vars) {
  std::vector<std::vector<const Constraint*>> out(std::max<std::size_t>(sorted_vars.size(), 1));
  for (const Constraint* c : cons) {
    int last = 0;
    for (VarId v : c->scope) {
      auto it = std::lower_bound(sorted_vars.begin(), sorted_vars.end(), v);
      last = std::max(last, static_cast<int>(it - sorted_vars.begin()));
    }
    out[static_cast<std::size_t>(last)].push_back(c);
  }
  return out;
}

bool pa_enumerate(ActiveConstraints cons, std::span<const VarId> vars, const CertSink& sink) {
  std::vector<VarId> sorted(vars.begin(), vars.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.empty()) {
    bool keep = true;
    for (const Constraint* c : cons) (void)c;  // no constraint can have empty scope
    keep = sink(AtomicNetwork{});
    return keep;
  }
  PaEnum e{std::span<const VarId>(sorted)};
  e.trigger = triggers_by_last_var(cons, sorted);
  e.sink = &sink;
  return e.place(0);
}

const Calculus& pa_calculus() {
  static const Calculus calc = [] {
    Calculus c;
    c.name = "pa";
    c.relations = {{kLt, "<", 2, false}, {kEq, "=", 2, true}, {kGt, ">", 2, false}};
    c.arities = {2};
    c.decide = [](const AtomicNetwork& n) { return pa_decide(n).has_value(); };
    c.realize = [](const AtomicNetwork& n) -> std::optional<Model> {
      auto p = pa_decide(n);
      if (!p) return std::nullopt;
      PointModel m;
      for (const auto& [v, r] : p->rank) m.value[v] = r;
      return Model{std::move(m)};
    };
    c.relation_in_model = [](const Model& m, const Tuple& t) {
      return relation_of_model(pa_calculus(), m, t);
    };
    c.enumerate = [](std::span<const Constraint* const> cons, std::span<const VarId> vars,
                     const CertSink& sink) { return pa_enumerate(cons, vars, sink); };
    c.finalize();
    return c;
  }();
  return calc;
}

}  // namespace detail

bool pa_certificates_from_partitions(const Instance& inst, std::span<const VarId> vars,
                                     const CertSink& sink) {
  auto active = detail::active_constraints(inst, vars);
  return detail::pa_enumerate(active, vars, sink);
}

}  // namespace qcsp
