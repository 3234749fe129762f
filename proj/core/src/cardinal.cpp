#include <algorithm>

#include "calculi_detail.hpp"
#include "qcsp/calculi.hpp"
#include "qcsp/oracle.hpp"

namespace qcsp {

namespace {

// {=,N,E,S,W,NE,SE,SW,NW} as pairs (R1,R2) over {<,=,>} applied per
// coordinate.
constexpr RelId kCdcComponents[9][2] = {
    {1, 1},  // =
    {1, 2},  // N
    {2, 1},  // E
    {1, 0},  // S
    {0, 1},  // W
    {2, 2},  // NE
    {2, 0},  // SE
    {0, 0},  // SW
    {0, 2},  // NW
};

RelId cdc_from_components(RelId c1, RelId c2) {
  for (RelId r = 0; r < 9; ++r)
    if (kCdcComponents[r][0] == c1 && kCdcComponents[r][1] == c2) return r;
  throw ContractError("cdc: bad component pair");
}

RelId pa_cmp(long long a, long long b) { return a < b ? 0 : a == b ? 1 : 2; }

}  // namespace

std::optional<PlaneModel> cdc_decide(const AtomicNetwork& network) {
  AtomicNetwork xs = AtomicNetwork::on_vars({network.vars().begin(), network.vars().end()});
  AtomicNetwork ys = xs;
  for (const auto& [t, r] : network.entries()) {
    if (t.size() != 2 || r < 0 || r >= 9)
      throw ContractError("cdc_decide: entries must be binary over the 9 CDC relations");
    if (!xs.insert(t, kCdcComponents[r][0])) return std::nullopt;
    if (!ys.insert(t, kCdcComponents[r][1])) return std::nullopt;
  }
  auto px = pa_decide(xs);
  if (!px) return std::nullopt;
  auto py = pa_decide(ys);
  if (!py) return std::nullopt;
  PlaneModel m;
  for (VarId v : network.vars()) m.point[v] = {px->rank.at(v), py->rank.at(v)};
  return m;
}

namespace detail {

namespace {

// Two phases: an ordered partition of the x coordinates, then one of the y
// coordinates. During the first phase a constraint prunes as soon as its
// scope is placed and no term's first components match; the second phase
// checks full relations.
struct CdcEnum {
  std::span<const VarId> vars;  // sorted
  std::vector<std::vector<const Constraint*>> trigger;
  const CertSink* sink;
  RankedPartition xs;
  RankedPartition ys;
  bool in_y_phase = false;

  explicit CdcEnum(std::span<const VarId> vs)
      : vars(vs), xs(static_cast<int>(vs.size())), ys(static_cast<int>(vs.size())) {}

  int local_of(VarId v) const {
    auto it = std::lower_bound(vars.begin(), vars.end(), v);
    return static_cast<int>(it - vars.begin());
  }

  bool x_feasible(int idx) {
    for (const Constraint* c : trigger[static_cast<std::size_t>(idx)]) {
      bool ok = false;
      for (const Term& term : c->dnf) {
        bool all = true;
        for (const Atom& a : term) {
          RelId cmp = pa_cmp(xs.rank_of(local_of(a.args[0])), xs.rank_of(local_of(a.args[1])));
          if (kCdcComponents[a.rel][0] != cmp) {
            all = false;
            break;
          }
        }
        if (all) {
          ok = true;
          break;
        }
      }
      if (!ok) return false;
    }
    return true;
  }

  bool full_ok(int idx) {
    for (const Constraint* c : trigger[static_cast<std::size_t>(idx)]) {
      bool ok = constraint_holds(*c, [&](const Tuple& args) {
        int i = local_of(args[0]), j = local_of(args[1]);
        return cdc_from_components(pa_cmp(xs.rank_of(i), xs.rank_of(j)),
                                   pa_cmp(ys.rank_of(i), ys.rank_of(j)));
      });
      if (!ok) return false;
    }
    return true;
  }

  bool emit() {
    AtomicNetwork net = AtomicNetwork::on_vars({vars.begin(), vars.end()});
    int m = static_cast<int>(vars.size());
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        net.append(Tuple{vars[static_cast<std::size_t>(i)], vars[static_cast<std::size_t>(j)]},
                   cdc_from_components(pa_cmp(xs.rank_of(i), xs.rank_of(j)),
                                       pa_cmp(ys.rank_of(i), ys.rank_of(j))));
    return (*sink)(net);
  }

  bool place(int idx) {
    RankedPartition& part = in_y_phase ? ys : xs;
    if (idx == static_cast<int>(vars.size())) {
      if (in_y_phase) return emit();
      in_y_phase = true;
      bool keep = place(0);
      in_y_phase = false;
      return keep;
    }
    auto check = [&](int i) { return in_y_phase ? full_ok(i) : x_feasible(i); };
    for (int b = 0; b < part.num_blocks(); ++b) {
      part.join_block(idx, b);
      if (check(idx) && !place(idx + 1)) return false;
      part.unjoin_block(idx, b);
    }
    for (int pos = 0; pos <= part.num_blocks(); ++pos) {
      part.open_block(idx, pos);
      if (check(idx) && !place(idx + 1)) return false;
      part.close_block(idx, pos);
    }
    return true;
  }
};

}  // namespace

bool cdc_enumerate(ActiveConstraints cons, std::span<const VarId> vars, const CertSink& sink) {
  std::vector<VarId> sorted(vars.begin(), vars.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.empty()) return sink(AtomicNetwork{});
  CdcEnum e{std::span<const VarId>(sorted)};
  e.trigger = triggers_by_last_var(cons, sorted);
  e.sink = &sink;
  return e.place(0);
}

const Calculus& cdc_calculus() {
  static const Calculus calc = [] {
    Calculus c;
    c.name = "cdc";
    const char* names[] = {"=", "N", "E", "S", "W", "NE", "SE", "SW", "NW"};
    for (RelId i = 0; i < 9; ++i)
      c.relations.push_back({i, names[i], 2, i == 0});
    c.arities = {2};
    c.decide = [](const AtomicNetwork& n) { return cdc_decide(n).has_value(); };
    c.realize = [](const AtomicNetwork& n) -> std::optional<Model> {
      auto m = cdc_decide(n);
      if (!m) return std::nullopt;
      return Model{std::move(*m)};
    };
    c.relation_in_model = [](const Model& m, const Tuple& t) {
      return relation_of_model(cdc_calculus(), m, t);
    };
    c.enumerate = [](std::span<const Constraint* const> cons, std::span<const VarId> vars,
                     const CertSink& sink) { return cdc_enumerate(cons, vars, sink); };
    c.finalize();
    return c;
  }();
  return calc;
}

}  // namespace detail

bool cdc_certificates_from_partitions(const Instance& inst, std::span<const VarId> vars,
                                      const CertSink& sink) {
  auto active = detail::active_constraints(inst, vars);
  return detail::cdc_enumerate(active, vars, sink);
}

}  // namespace qcsp
