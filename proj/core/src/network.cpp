#include "qcsp/network.hpp"

#include <algorithm>

namespace qcsp {

AtomicNetwork project(const AtomicNetwork& network, std::span<const VarId> vars) {
  std::vector<VarId> keep(vars.begin(), vars.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (VarId v : keep)
    if (!network.has_var(v)) throw ContractError("project: variable not in network");

  AtomicNetwork out = AtomicNetwork::on_vars(keep);
  auto inside = [&](const Tuple& t) {
    for (VarId v : t)
      if (!std::binary_search(keep.begin(), keep.end(), v)) return false;
    return true;
  };
  for (const auto& [t, r] : network.entries())
    if (inside(t)) out.append(t, r);  // entry order is preserved under filtering
  return out;
}

std::optional<AtomicNetwork> union_networks(const AtomicNetwork& a, const AtomicNetwork& b) {
  std::vector<VarId> vars(a.vars().begin(), a.vars().end());
  vars.insert(vars.end(), b.vars().begin(), b.vars().end());
  AtomicNetwork out = AtomicNetwork::on_vars(std::move(vars));

  auto ea = a.entries();
  auto eb = b.entries();
  std::size_t i = 0, j = 0;
  while (i < ea.size() || j < eb.size()) {
    if (j == eb.size() || (i < ea.size() && ea[i].first < eb[j].first)) {
      out.append(ea[i].first, ea[i].second);
      ++i;
    } else if (i == ea.size() || eb[j].first < ea[i].first) {
      out.append(eb[j].first, eb[j].second);
      ++j;
    } else {
      if (ea[i].second != eb[j].second) return std::nullopt;  // disagreement on a shared tuple
      out.append(ea[i].first, ea[i].second);
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace qcsp
