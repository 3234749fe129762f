#include "qcsp/instance.hpp"

#include <algorithm>
#include <set>

namespace qcsp {

VarId Instance::var(std::string_view name) const {
  for (std::size_t i = 0; i < var_names.size(); ++i)
    if (var_names[i] == name) return static_cast<VarId>(i);
  throw ContractError("unknown variable '" + std::string(name) + "'");
}

Instance make_instance(const Calculus& calc, std::vector<std::string> var_names) {
  Instance inst;
  inst.calc = &calc;
  inst.var_names = std::move(var_names);
  for (std::size_t i = 0; i < inst.var_names.size(); ++i)
    inst.vars.push_back(static_cast<VarId>(i));
  return inst;
}

Constraint make_disjunction(const Instance& inst, std::vector<std::string> scope,
                            std::vector<std::string> rel_names) {
  Constraint c;
  for (const auto& s : scope) c.scope.push_back(inst.var(s));
  Tuple args(std::span<const VarId>(c.scope.data(), c.scope.size()));
  c.sugar = true;
  for (const auto& rn : rel_names) {
    RelId r = inst.calc->rel(rn);
    c.sugar_rels.push_back(r);
    c.dnf.push_back({Atom{r, args, false}});
  }
  return normalize_constraint(*inst.calc, std::move(c));
}

Constraint normalize_constraint(const Calculus& calc, Constraint c) {
  if (c.dnf.empty()) throw ContractError("constraint with empty DNF");
  for (const Term& t : c.dnf)
    if (t.empty()) throw ContractError("constraint with empty term");
  for (const Term& t : c.dnf)
    for (const Atom& a : t) {
      const BasicRelation& rel = calc.relation(a.rel);
      if (rel.arity != a.args.size())
        throw ContractError("atom arity mismatch for relation '" + rel.name + "'");
    }

  // Negation-free DNF: replace each negated atom by the disjunction of all
  // other relations of that arity, distributing over the term.
  std::vector<Term> work(std::move(c.dnf));
  std::vector<Term> done;
  while (!work.empty()) {
    Term t = std::move(work.back());
    work.pop_back();
    auto neg = std::find_if(t.begin(), t.end(), [](const Atom& a) { return a.negated; });
    if (neg == t.end()) {
      done.push_back(std::move(t));
      continue;
    }
    Atom negated = *neg;
    t.erase(neg);
    for (RelId other : calc.rels_of_arity(calc.relation(negated.rel).arity)) {
      if (other == negated.rel) continue;
      Term split = t;
      split.push_back(Atom{other, negated.args, false});
      work.push_back(std::move(split));
    }
  }
  if (done.empty()) throw ContractError("constraint normalized to an empty relation");
  c.dnf = std::move(done);

  // Re-derive the sugar flag after normalization.
  c.sugar = true;
  c.sugar_rels.clear();
  Tuple full_scope(std::span<const VarId>(c.scope.data(), c.scope.size()));
  if (c.scope.size() > static_cast<std::size_t>(kMaxTupleArity)) c.sugar = false;
  for (const Term& t : c.dnf) {
    if (t.size() != 1 || !(t[0].args == full_scope)) {
      c.sugar = false;
      break;
    }
  }
  if (c.sugar) {
    for (const Term& t : c.dnf) c.sugar_rels.push_back(t[0].rel);
    std::sort(c.sugar_rels.begin(), c.sugar_rels.end());
    c.sugar_rels.erase(std::unique(c.sugar_rels.begin(), c.sugar_rels.end()),
                       c.sugar_rels.end());
  }
  return c;
}

Instance subinstance(const Instance& inst, std::span<const VarId> u) {
  std::set<VarId> all(inst.vars.begin(), inst.vars.end());
  std::set<VarId> keep;
  for (VarId v : u) {
    if (!all.contains(v)) throw ContractError("subinstance: variable outside instance");
    keep.insert(v);
  }
  Instance out;
  out.calc = inst.calc;
  out.var_names = inst.var_names;
  out.vars.assign(keep.begin(), keep.end());
  for (const Constraint& c : inst.constraints) {
    bool inside = std::all_of(c.scope.begin(), c.scope.end(),
                              [&](VarId v) { return keep.contains(v); });
    if (inside) out.constraints.push_back(c);
  }
  return out;
}

Graph primal_graph(const Instance& inst) {
  Graph g(std::vector<int>(inst.vars.begin(), inst.vars.end()));
  for (const Constraint& c : inst.constraints)
    for (std::size_t i = 0; i < c.scope.size(); ++i)
      for (std::size_t j = i + 1; j < c.scope.size(); ++j)
        g.add_edge(c.scope[i], c.scope[j]);
  return g;
}

bool implies(const AtomicNetwork& network, const Constraint& constraint) {
  for (VarId v : constraint.scope)
    if (!network.has_var(v)) throw ContractError("implies: scope variable absent from network");
  for (const Term& term : constraint.dnf) {
    bool all = true;
    for (const Atom& a : term) {
      auto r = network.find(a.args);
      if (!r || *r != a.rel) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace qcsp
