#include "qcsp/certificates.hpp"

#include <algorithm>
#include <set>

#include "calculi_detail.hpp"

namespace qcsp {

namespace detail {

std::vector<const Constraint*> active_constraints(const Instance& inst,
                                                  std::span<const VarId> vars) {
  std::vector<VarId> sorted(vars.begin(), vars.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<const Constraint*> out;
  for (const Constraint& c : inst.constraints) {
    bool inside = std::all_of(c.scope.begin(), c.scope.end(), [&](VarId v) {
      return std::binary_search(sorted.begin(), sorted.end(), v);
    });
    if (inside) out.push_back(&c);
  }
  return out;
}

bool generic_enumerate(const Calculus& calc, ActiveConstraints cons, std::span<const VarId> vars,
                       const CertSink& sink) {
  std::vector<VarId> sorted(vars.begin(), vars.end());
  std::sort(sorted.begin(), sorted.end());

  // All k-tuples with repetition, arity-major then lexicographic; this is
  // the canonical entry order, so the partial network grows by appends.
  std::vector<Tuple> tuples;
  for (int k : calc.arities) {
    std::vector<int> odo(static_cast<std::size_t>(k), 0);
    if (sorted.empty()) continue;
    while (true) {
      Tuple t;
      for (int d : odo) t.push_back(sorted[static_cast<std::size_t>(d)]);
      tuples.push_back(t);
      int pos = k - 1;
      while (pos >= 0 && odo[static_cast<std::size_t>(pos)] + 1 == static_cast<int>(sorted.size()))
        odo[static_cast<std::size_t>(pos--)] = 0;
      if (pos < 0) break;
      ++odo[static_cast<std::size_t>(pos)];
    }
  }

  std::vector<std::vector<RelId>> rels_by_arity(
      static_cast<std::size_t>(calc.max_arity()) + 1);
  for (int k : calc.arities) rels_by_arity[static_cast<std::size_t>(k)] = calc.rels_of_arity(k);

  AtomicNetwork net = AtomicNetwork::on_vars(sorted);
  std::function<bool(std::size_t)> walk = [&](std::size_t i) -> bool {
    if (i == tuples.size()) {
      for (const Constraint* c : cons)
        if (!implies(net, *c)) return true;
      return sink(net);
    }
    for (RelId r : rels_by_arity[static_cast<std::size_t>(tuples[i].size())]) {
      net.append(tuples[i], r);
      bool keep = true;
      if (calc.decide(net)) keep = walk(i + 1);
      net.pop_entry();
      if (!keep) return false;
    }
    return true;
  };
  return walk(0);
}

}  // namespace detail

bool is_complete(const Calculus& calc, const AtomicNetwork& network) {
  std::size_t expected = 0;
  for (int k : calc.arities) {
    std::size_t n = 1;
    for (int i = 0; i < k; ++i) n *= network.vars().size();
    expected += n;
  }
  if (network.num_entries() != expected) return false;
  for (const auto& [t, r] : network.entries())
    if (calc.relation(r).arity != t.size()) return false;
  return true;
}

AtomicNetwork network_of_model(const Calculus& calc, const Model& model,
                               std::span<const VarId> vars) {
  if (!calc.relation_in_model)
    throw ContractError("calculus '" + calc.name + "' has no model read-off");
  std::vector<VarId> sorted(vars.begin(), vars.end());
  std::sort(sorted.begin(), sorted.end());
  AtomicNetwork net = AtomicNetwork::on_vars(sorted);
  for (int k : calc.arities) {
    std::vector<int> odo(static_cast<std::size_t>(k), 0);
    if (sorted.empty()) continue;
    while (true) {
      Tuple t;
      for (int d : odo) t.push_back(sorted[static_cast<std::size_t>(d)]);
      net.append(t, calc.relation_in_model(model, t));
      int pos = k - 1;
      while (pos >= 0 && odo[static_cast<std::size_t>(pos)] + 1 == static_cast<int>(sorted.size()))
        odo[static_cast<std::size_t>(pos--)] = 0;
      if (pos < 0) break;
      ++odo[static_cast<std::size_t>(pos)];
    }
  }
  return net;
}

std::optional<AtomicNetwork> complete_network(const Calculus& calc,
                                              const AtomicNetwork& network) {
  if (!calc.has_realizer())
    throw ContractError("calculus '" + calc.name +
                        "' has no realizer; complete through the enumerator path");
  auto model = calc.realize(network);
  if (!model) return std::nullopt;
  return network_of_model(calc, *model, network.vars());
}

bool enumerate_certificates(const Calculus& calc, const Instance& instance,
                            std::span<const VarId> vars, const CertSink& sink) {
  std::set<VarId> known(instance.vars.begin(), instance.vars.end());
  for (VarId v : vars)
    if (!known.contains(v))
      throw ContractError("enumerate_certificates: variable outside instance");
  auto active = detail::active_constraints(instance, vars);
  if (calc.enumerate) return calc.enumerate(active, vars, sink);
  return detail::generic_enumerate(calc, active, vars, sink);
}

bool enumerate_certificates_generic(const Calculus& calc, const Instance& instance,
                                    std::span<const VarId> vars, const CertSink& sink) {
  auto active = detail::active_constraints(instance, vars);
  return detail::generic_enumerate(calc, active, vars, sink);
}

std::vector<AtomicNetwork> collect_certificates(const Calculus& calc, const Instance& instance,
                                                std::span<const VarId> vars) {
  std::vector<AtomicNetwork> out;
  enumerate_certificates(calc, instance, vars, [&](const AtomicNetwork& n) {
    out.push_back(n);
    return true;
  });
  return out;
}

}  // namespace qcsp
