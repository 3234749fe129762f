#include "qcsp/oracle.hpp"

#include <algorithm>

#include "qcsp/calculi.hpp"
#include "qcsp/certificates.hpp"

namespace qcsp {

namespace {

RelId pa_cmp(long long a, long long b) { return a < b ? 0 : a == b ? 1 : 2; }

RelId cdc_of(RelId c1, RelId c2) {
  static constexpr RelId table[3][3] = {
      // c2:  <   =   >        c1:
      {7, 4, 8},  // <   -> SW W NW
      {3, 0, 1},  // =   -> S  =  N
      {6, 2, 5},  // >   -> SE E NE
  };
  return table[c1][c2];
}

}  // namespace

RelId relation_of_model(const Calculus& calc, const Model& model, const Tuple& tuple) {
  if (calc.name == "pa") {
    const auto& m = std::get<PointModel>(model);
    return pa_cmp(m.value.at(tuple[0]), m.value.at(tuple[1]));
  }
  if (calc.name == "ia" || calc.name == "ba1") {
    long long l1, r1, l2, r2;
    if (std::holds_alternative<IntervalModel>(model)) {
      const auto& m = std::get<IntervalModel>(model);
      std::tie(l1, r1) = m.interval.at(tuple[0]);
      std::tie(l2, r2) = m.interval.at(tuple[1]);
    } else {
      const auto& m = std::get<BoxModel>(model);
      std::tie(l1, r1) = m.box.at(tuple[0])[0];
      std::tie(l2, r2) = m.box.at(tuple[1])[0];
    }
    return ia_relation_from_endpoints(l1, r1, l2, r2);
  }
  if (calc.name == "cdc") {
    const auto& m = std::get<PlaneModel>(model);
    auto [x1, y1] = m.point.at(tuple[0]);
    auto [x2, y2] = m.point.at(tuple[1]);
    return cdc_of(pa_cmp(x1, x2), pa_cmp(y1, y2));
  }
  if (calc.name == "ba2" || calc.name == "ba3") {
    const auto& m = std::get<BoxModel>(model);
    const auto& a = m.box.at(tuple[0]);
    const auto& b = m.box.at(tuple[1]);
    int id = 0;
    for (int d = 0; d < m.dims; ++d)
      id = id * 13 + ia_relation_from_endpoints(a[static_cast<std::size_t>(d)].first,
                                                a[static_cast<std::size_t>(d)].second,
                                                b[static_cast<std::size_t>(d)].first,
                                                b[static_cast<std::size_t>(d)].second);
    return static_cast<RelId>(id);
  }
  if (calc.name == "rcc5") {
    const auto& m = std::get<Rcc5SetModel>(model);
    const auto& a = m.regions.at(tuple[0]);
    const auto& b = m.regions.at(tuple[1]);
    bool meets = std::any_of(a.begin(), a.end(), [&](const auto& x) { return b.contains(x); });
    bool a_in_b = std::includes(b.begin(), b.end(), a.begin(), a.end());
    bool b_in_a = std::includes(a.begin(), a.end(), b.begin(), b.end());
    if (a_in_b && b_in_a) return calc.rel("EQ");
    if (a_in_b) return calc.rel("PP");
    if (b_in_a) return calc.rel("PPi");
    if (meets) return calc.rel("PO");
    return calc.rel("DR");
  }
  if (calc.name == "phylo") {
    const auto& m = std::get<PhyloTreeModel>(model);
    int la = m.leaf_of.at(tuple[0]);
    int lb = m.leaf_of.at(tuple[1]);
    int lc = m.leaf_of.at(tuple[2]);
    if (la == lb && lb == lc) return 3;  // R4
    int top = m.yca(m.yca(la, lb), lc);
    if (m.yca(lb, lc) != top) return 0;  // R1: x | yz
    if (m.yca(la, lc) != top) return 1;  // R2: y | xz
    return 2;                            // R3: z | xy
  }
  throw ContractError("relation_of_model: calculus '" + calc.name + "' has no model semantics");
}

int oracle_var_guard(const Calculus& calc) { return calc.max_arity() >= 3 ? 5 : 8; }

bool brute_solve(const Instance& inst) {
  int guard = oracle_var_guard(*inst.calc);
  if (inst.num_vars() > guard)
    throw GuardError("brute_solve: instance has " + std::to_string(inst.num_vars()) +
                     " variables, guard is " + std::to_string(guard));
  bool found = false;
  enumerate_certificates(*inst.calc, inst, inst.vars, [&](const AtomicNetwork&) {
    found = true;
    return false;  // first certificate settles it
  });
  return found;
}

std::optional<std::size_t> verify_model(const Instance& inst, const Model& model) {
  for (std::size_t i = 0; i < inst.constraints.size(); ++i) {
    const Constraint& c = inst.constraints[i];
    bool ok = false;
    for (const Term& term : c.dnf) {
      bool all = true;
      for (const Atom& a : term)
        if (relation_of_model(*inst.calc, model, a.args) != a.rel) {
          all = false;
          break;
        }
      if (all) {
        ok = true;
        break;
      }
    }
    if (!ok) return i;
  }
  return std::nullopt;
}

std::uint64_t count_complete_satisfiable(const Calculus& calc, int m) {
  int guard = oracle_var_guard(calc);
  if (m > guard)
    throw GuardError("count_complete_satisfiable: m=" + std::to_string(m) + " exceeds guard " +
                     std::to_string(guard));
  std::vector<std::string> names;
  for (int i = 0; i < m; ++i) names.push_back("v" + std::to_string(i));
  Instance inst = make_instance(calc, names);
  std::uint64_t count = 0;
  enumerate_certificates(calc, inst, inst.vars, [&](const AtomicNetwork&) {
    ++count;
    return true;
  });
  return count;
}

bool verify_certificate(const Instance& inst, const AtomicNetwork& cert) {
  std::vector<VarId> vs(cert.vars().begin(), cert.vars().end());
  if (vs != inst.vars) return false;
  if (!is_complete(*inst.calc, cert)) return false;
  if (!inst.calc->decide(cert)) return false;
  for (const Constraint& c : inst.constraints)
    if (!implies(cert, c)) return false;
  return true;
}

}  // namespace qcsp
