#include "qcsp/calculus.hpp"

#include <set>

#include "calculi_detail.hpp"

namespace qcsp {

void Calculus::finalize() {
  rel_by_name_.clear();
  std::set<int> arity_set;
  for (std::size_t i = 0; i < relations.size(); ++i) {
    const BasicRelation& r = relations[i];
    if (r.id != static_cast<RelId>(i)) throw ContractError("calculus: relation ids must be dense");
    if (!rel_by_name_.emplace(r.name, r.id).second)
      throw ContractError("calculus: duplicate relation name '" + r.name + "'");
    arity_set.insert(r.arity);
  }
  for (int k : arities)
    if (!arity_set.contains(k)) throw ContractError("calculus: arity without relations");
  // at most one diagonal relation per arity
  std::set<int> diag_arities;
  for (const BasicRelation& r : relations)
    if (r.is_diagonal && !diag_arities.insert(r.arity).second)
      throw ContractError("calculus: two diagonal relations of the same arity");
}

const Calculus& find_calculus(std::string_view name) {
  if (name == "pa") return detail::pa_calculus();
  if (name == "ia") return detail::ia_calculus();
  if (name == "cdc") return detail::cdc_calculus();
  if (name == "ba1") return detail::ba_calculus(1);
  if (name == "ba2") return detail::ba_calculus(2);
  if (name == "ba3") return detail::ba_calculus(3);
  if (name == "rcc5") return detail::rcc_calculus(false);
  if (name == "rcc8") return detail::rcc_calculus(true);
  if (name == "phylo") return detail::phylo_calculus();
  throw ContractError("unknown calculus '" + std::string(name) + "'");
}

std::vector<std::string> calculus_names() {
  return {"pa", "ia", "cdc", "ba1", "ba2", "ba3", "rcc5", "rcc8", "phylo"};
}

}  // namespace qcsp
