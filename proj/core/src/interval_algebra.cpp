#include <algorithm>

#include "calculi_detail.hpp"
#include "qcsp/calculi.hpp"
#include "qcsp/oracle.hpp"

namespace qcsp {

namespace {

enum IaRel : RelId {
  kP = 0,
  kPi,
  kM,
  kMi,
  kO,
  kOi,
  kD,
  kDi,
  kS,
  kSi,
  kF,
  kFi,
  kE
};

constexpr RelId kPaLt = 0;
constexpr RelId kPaEq = 1;

struct EndpointAtom {
  int a;  // 0 = lx, 1 = rx, 2 = ly, 3 = ry
  int b;
  RelId rel;  // over {<,=}; '>' is expressed by swapping
};

// Endpoint formulas per relation; together with lx < rx and ly < ry these
// pin the relation exactly.
const std::vector<EndpointAtom>& endpoint_atoms(RelId r) {
  static const std::vector<std::vector<EndpointAtom>> table = [] {
    std::vector<std::vector<EndpointAtom>> t(13);
    t[kP] = {{1, 2, kPaLt}};
    t[kPi] = {{3, 0, kPaLt}};
    t[kM] = {{1, 2, kPaEq}};
    t[kMi] = {{3, 0, kPaEq}};
    t[kO] = {{0, 2, kPaLt}, {2, 1, kPaLt}, {1, 3, kPaLt}};
    t[kOi] = {{2, 0, kPaLt}, {0, 3, kPaLt}, {3, 1, kPaLt}};
    t[kD] = {{2, 0, kPaLt}, {1, 3, kPaLt}};
    t[kDi] = {{0, 2, kPaLt}, {3, 1, kPaLt}};
    t[kS] = {{0, 2, kPaEq}, {1, 3, kPaLt}};
    t[kSi] = {{0, 2, kPaEq}, {3, 1, kPaLt}};
    t[kF] = {{1, 3, kPaEq}, {2, 0, kPaLt}};
    t[kFi] = {{1, 3, kPaEq}, {0, 2, kPaLt}};
    t[kE] = {{0, 2, kPaEq}, {1, 3, kPaEq}};
    return t;
  }();
  return table.at(static_cast<std::size_t>(r));
}

}  // namespace

RelId ia_relation_from_endpoints(long long l1, long long r1, long long l2, long long r2) {
  if (l1 < l2) {
    if (r1 < l2) return kP;
    if (r1 == l2) return kM;
    if (r1 < r2) return kO;
    if (r1 == r2) return kFi;
    return kDi;
  }
  if (l1 == l2) {
    if (r1 < r2) return kS;
    if (r1 == r2) return kE;
    return kSi;
  }
  if (r2 < l1) return kPi;
  if (r2 == l1) return kMi;
  if (r1 < r2) return kD;
  if (r1 == r2) return kF;
  return kOi;
}

std::optional<IntervalModel> ia_decide(const AtomicNetwork& network) {
  std::vector<VarId> vars(network.vars().begin(), network.vars().end());
  auto lo = [&](VarId v) {
    auto it = std::lower_bound(vars.begin(), vars.end(), v);
    return static_cast<VarId>(2 * (it - vars.begin()));
  };
  auto hi = [&](VarId v) { return static_cast<VarId>(lo(v) + 1); };

  AtomicNetwork pts;
  for (VarId v : vars)
    if (!pts.insert(Tuple{lo(v), hi(v)}, kPaLt)) return std::nullopt;
  for (const auto& [t, r] : network.entries()) {
    if (t.size() != 2 || r < 0 || r > kE)
      throw ContractError("ia_decide: entries must be binary over the 13 IA relations");
    VarId ep[4] = {lo(t[0]), hi(t[0]), lo(t[1]), hi(t[1])};
    for (const EndpointAtom& a : endpoint_atoms(r))
      if (!pts.insert(Tuple{ep[a.a], ep[a.b]}, a.rel)) return std::nullopt;
  }
  auto part = pa_decide(pts);
  if (!part) return std::nullopt;
  IntervalModel m;
  for (VarId v : vars) m.interval[v] = {part->rank.at(lo(v)), part->rank.at(hi(v))};
  return m;
}

namespace detail {

namespace {

// Endpoints of local variable i are elements 2i (left) and 2i+1 (right).
struct IaEnum {
  std::span<const VarId> vars;  // sorted
  std::vector<std::vector<const Constraint*>> trigger;
  const CertSink* sink;
  RankedPartition part;

  explicit IaEnum(std::span<const VarId> vs)
      : vars(vs), part(2 * static_cast<int>(vs.size())) {}

  int local_of(VarId v) const {
    auto it = std::lower_bound(vars.begin(), vars.end(), v);
    return static_cast<int>(it - vars.begin());
  }

  RelId rel_between(int i, int j) const {
    if (i == j) return kE;
    return ia_relation_from_endpoints(part.rank_of(2 * i), part.rank_of(2 * i + 1),
                                      part.rank_of(2 * j), part.rank_of(2 * j + 1));
  }

  bool constraints_ok(int idx) {
    for (const Constraint* c : trigger[static_cast<std::size_t>(idx)]) {
      bool ok = constraint_holds(*c, [&](const Tuple& args) {
        return rel_between(local_of(args[0]), local_of(args[1]));
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
                   rel_between(i, j));
    return (*sink)(net);
  }

  // Place 2idx (left endpoint), then 2idx+1 strictly after it, then check
  // the constraints whose scope is now fully placed.
  bool place_var(int idx) {
    if (idx == static_cast<int>(vars.size())) return emit();
    int le = 2 * idx;
    for (int b = 0; b < part.num_blocks(); ++b) {
      part.join_block(le, b);
      if (!place_right(idx)) return false;
      part.unjoin_block(le, b);
    }
    for (int pos = 0; pos <= part.num_blocks(); ++pos) {
      part.open_block(le, pos);
      if (!place_right(idx)) return false;
      part.close_block(le, pos);
    }
    return true;
  }

  bool place_right(int idx) {
    int re = 2 * idx + 1;
    int after = part.rank_of(2 * idx);  // right endpoint comes strictly later
    for (int b = after + 1; b < part.num_blocks(); ++b) {
      part.join_block(re, b);
      if (constraints_ok(idx) && !place_var(idx + 1)) return false;
      part.unjoin_block(re, b);
    }
    for (int pos = after + 1; pos <= part.num_blocks(); ++pos) {
      part.open_block(re, pos);
      if (constraints_ok(idx) && !place_var(idx + 1)) return false;
      part.close_block(re, pos);
    }
    return true;
  }
};

}  // namespace

bool ia_enumerate(ActiveConstraints cons, std::span<const VarId> vars, const CertSink& sink) {
  std::vector<VarId> sorted(vars.begin(), vars.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.empty()) return sink(AtomicNetwork{});
  IaEnum e{std::span<const VarId>(sorted)};
  e.trigger = triggers_by_last_var(cons, sorted);
  e.sink = &sink;
  return e.place_var(0);
}

const Calculus& ia_calculus() {
  static const Calculus calc = [] {
    Calculus c;
    c.name = "ia";
    const char* names[] = {"p", "pi", "m", "mi", "o", "oi", "d", "di", "s", "si", "f", "fi", "e"};
    for (RelId i = 0; i < 13; ++i)
      c.relations.push_back({i, names[i], 2, i == kE});
    c.arities = {2};
    c.decide = [](const AtomicNetwork& n) { return ia_decide(n).has_value(); };
    c.realize = [](const AtomicNetwork& n) -> std::optional<Model> {
      auto m = ia_decide(n);
      if (!m) return std::nullopt;
      return Model{std::move(*m)};
    };
    c.relation_in_model = [](const Model& m, const Tuple& t) {
      return relation_of_model(ia_calculus(), m, t);
    };
    c.enumerate = [](std::span<const Constraint* const> cons, std::span<const VarId> vars,
                     const CertSink& sink) { return ia_enumerate(cons, vars, sink); };
    c.finalize();
    return c;
  }();
  return calc;
}

}  // namespace detail

bool ia_certificates_from_partitions(const Instance& inst, std::span<const VarId> vars,
                                     const CertSink& sink) {
  auto active = detail::active_constraints(inst, vars);
  return detail::ia_enumerate(active, vars, sink);
}

}  // namespace qcsp
