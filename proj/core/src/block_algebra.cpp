#include <algorithm>
#include <string>

#include "calculi_detail.hpp"
#include "qcsp/calculi.hpp"
#include "qcsp/oracle.hpp"

namespace qcsp {

namespace {

constexpr RelId kIaEq = 12;

RelId ba_component(RelId rel, int dim, int dims) {
  int div = 1;
  for (int i = dims - 1; i > dim; --i) div *= 13;
  return static_cast<RelId>((rel / div) % 13);
}

RelId ba_compose(std::span<const RelId> components) {
  int id = 0;
  for (RelId c : components) id = id * 13 + c;
  return static_cast<RelId>(id);
}

}  // namespace

std::optional<BoxModel> ba_decide(const AtomicNetwork& network, int dims) {
  if (dims < 1 || dims > 3) throw ContractError("ba_decide: dims must be 1..3");
  int count = 1;
  for (int i = 0; i < dims; ++i) count *= 13;

  std::vector<AtomicNetwork> per_dim(
      static_cast<std::size_t>(dims),
      AtomicNetwork::on_vars({network.vars().begin(), network.vars().end()}));
  for (const auto& [t, r] : network.entries()) {
    if (t.size() != 2 || r < 0 || r >= count)
      throw ContractError("ba_decide: entries must be binary BA relations");
    for (int d = 0; d < dims; ++d)
      if (!per_dim[static_cast<std::size_t>(d)].insert(t, ba_component(r, d, dims)))
        return std::nullopt;
  }
  BoxModel m;
  m.dims = dims;
  for (VarId v : network.vars()) m.box[v].resize(static_cast<std::size_t>(dims));
  for (int d = 0; d < dims; ++d) {
    auto im = ia_decide(per_dim[static_cast<std::size_t>(d)]);
    if (!im) return std::nullopt;
    for (VarId v : network.vars()) m.box[v][static_cast<std::size_t>(d)] = im->interval.at(v);
  }
  return m;
}

namespace detail {

namespace {

// One interval-endpoint partition per dimension, solved dimension-major.
// After a variable's endpoints land in dimension k, every constraint whose
// scope is fully placed must still have a term whose atoms match on the
// components decided so far.
struct BaEnum {
  std::span<const VarId> vars;  // sorted
  int dims = 2;
  std::vector<std::vector<const Constraint*>> trigger;
  const CertSink* sink;
  std::vector<RankedPartition> parts;
  int dim = 0;

  BaEnum(std::span<const VarId> vs, int d) : vars(vs), dims(d) {
    for (int i = 0; i < d; ++i) parts.emplace_back(2 * static_cast<int>(vs.size()));
  }

  int local_of(VarId v) const {
    auto it = std::lower_bound(vars.begin(), vars.end(), v);
    return static_cast<int>(it - vars.begin());
  }

  RelId rel_in_dim(int d, int i, int j) const {
    const RankedPartition& p = parts[static_cast<std::size_t>(d)];
    if (i == j) return kIaEq;
    return ia_relation_from_endpoints(p.rank_of(2 * i), p.rank_of(2 * i + 1), p.rank_of(2 * j),
                                      p.rank_of(2 * j + 1));
  }

  bool feasible(int idx) {
    for (const Constraint* c : trigger[static_cast<std::size_t>(idx)]) {
      bool ok = false;
      for (const Term& term : c->dnf) {
        bool all = true;
        for (const Atom& a : term) {
          int i = local_of(a.args[0]), j = local_of(a.args[1]);
          for (int d = 0; d <= dim && all; ++d)
            if (ba_component(a.rel, d, dims) != rel_in_dim(d, i, j)) all = false;
          if (!all) break;
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

  bool emit() {
    AtomicNetwork net = AtomicNetwork::on_vars({vars.begin(), vars.end()});
    int m = static_cast<int>(vars.size());
    std::vector<RelId> comp(static_cast<std::size_t>(dims));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        for (int d = 0; d < dims; ++d) comp[static_cast<std::size_t>(d)] = rel_in_dim(d, i, j);
        net.append(Tuple{vars[static_cast<std::size_t>(i)], vars[static_cast<std::size_t>(j)]},
                   ba_compose(comp));
      }
    return (*sink)(net);
  }

  bool place_var(int idx) {
    if (idx == static_cast<int>(vars.size())) {
      if (dim + 1 == dims) return emit();
      ++dim;
      bool keep = place_var(0);
      --dim;
      return keep;
    }
    RankedPartition& part = parts[static_cast<std::size_t>(dim)];
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
    RankedPartition& part = parts[static_cast<std::size_t>(dim)];
    int re = 2 * idx + 1;
    int after = part.rank_of(2 * idx);
    for (int b = after + 1; b < part.num_blocks(); ++b) {
      part.join_block(re, b);
      if (feasible(idx) && !place_var(idx + 1)) return false;
      part.unjoin_block(re, b);
    }
    for (int pos = after + 1; pos <= part.num_blocks(); ++pos) {
      part.open_block(re, pos);
      if (feasible(idx) && !place_var(idx + 1)) return false;
      part.close_block(re, pos);
    }
    return true;
  }
};

std::string ba_rel_name(RelId rel, int dims) {
  const char* ia_names[] = {"p", "pi", "m", "mi", "o", "oi", "d",
                            "di", "s", "si", "f", "fi", "e"};
  std::string name;
  for (int d = 0; d < dims; ++d) {
    if (d) name += '.';
    name += ia_names[ba_component(rel, d, dims)];
  }
  return name;
}

}  // namespace

bool ba_enumerate(ActiveConstraints cons, std::span<const VarId> vars, const CertSink& sink,
                  int dims) {
  std::vector<VarId> sorted(vars.begin(), vars.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.empty()) return sink(AtomicNetwork{});
  BaEnum e{std::span<const VarId>(sorted), dims};
  e.trigger = triggers_by_last_var(cons, sorted);
  e.sink = &sink;
  return e.place_var(0);
}

const Calculus& ba_calculus(int dims) {
  static const Calculus tables[3] = {
      [] {
        Calculus c;
        c.name = "ba1";
        int count = 13;
        for (RelId i = 0; i < count; ++i)
          c.relations.push_back({i, ba_rel_name(i, 1), 2, i == kIaEq});
        c.arities = {2};
        c.decide = [](const AtomicNetwork& n) { return ba_decide(n, 1).has_value(); };
        c.realize = [](const AtomicNetwork& n) -> std::optional<Model> {
          auto m = ba_decide(n, 1);
          if (!m) return std::nullopt;
          return Model{std::move(*m)};
        };
        c.relation_in_model = [](const Model& m, const Tuple& t) {
          return relation_of_model(ba_calculus(1), m, t);
        };
        c.enumerate = [](std::span<const Constraint* const> cons, std::span<const VarId> vars,
                         const CertSink& sink) { return ba_enumerate(cons, vars, sink, 1); };
        c.finalize();
        return c;
      }(),
      [] {
        Calculus c;
        c.name = "ba2";
        int count = 13 * 13;
        for (int i = 0; i < count; ++i)
          c.relations.push_back({static_cast<RelId>(i), ba_rel_name(static_cast<RelId>(i), 2), 2,
                                 i == kIaEq * 13 + kIaEq});
        c.arities = {2};
        c.decide = [](const AtomicNetwork& n) { return ba_decide(n, 2).has_value(); };
        c.realize = [](const AtomicNetwork& n) -> std::optional<Model> {
          auto m = ba_decide(n, 2);
          if (!m) return std::nullopt;
          return Model{std::move(*m)};
        };
        c.relation_in_model = [](const Model& m, const Tuple& t) {
          return relation_of_model(ba_calculus(2), m, t);
        };
        c.enumerate = [](std::span<const Constraint* const> cons, std::span<const VarId> vars,
                         const CertSink& sink) { return ba_enumerate(cons, vars, sink, 2); };
        c.finalize();
        return c;
      }(),
      [] {
        Calculus c;
        c.name = "ba3";
        int count = 13 * 13 * 13;
        for (int i = 0; i < count; ++i)
          c.relations.push_back({static_cast<RelId>(i), ba_rel_name(static_cast<RelId>(i), 3), 2,
                                 i == (kIaEq * 13 + kIaEq) * 13 + kIaEq});
        c.arities = {2};
        c.decide = [](const AtomicNetwork& n) { return ba_decide(n, 3).has_value(); };
        c.realize = [](const AtomicNetwork& n) -> std::optional<Model> {
          auto m = ba_decide(n, 3);
          if (!m) return std::nullopt;
          return Model{std::move(*m)};
        };
        c.relation_in_model = [](const Model& m, const Tuple& t) {
          return relation_of_model(ba_calculus(3), m, t);
        };
        c.enumerate = [](std::span<const Constraint* const> cons, std::span<const VarId> vars,
                         const CertSink& sink) { return ba_enumerate(cons, vars, sink, 3); };
        c.finalize();
        return c;
      }(),
  };
  if (dims < 1 || dims > 3) throw ContractError("ba_calculus: dims must be 1..3");
  return tables[static_cast<std::size_t>(dims - 1)];
}

}  // namespace detail

bool ba_certificates_from_partitions(const Instance& inst, std::span<const VarId> vars,
                                     const CertSink& sink, int dims) {
  auto active = detail::active_constraints(inst, vars);
  return detail::ba_enumerate(active, vars, sink, dims);
}

}  // namespace qcsp
