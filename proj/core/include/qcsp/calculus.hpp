#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qcsp/models.hpp"
#include "qcsp/network.hpp"
#include "qcsp/types.hpp"

namespace qcsp {

struct Instance;
struct Constraint;

// Consumes complete satisfiable certificates; return false to stop the
// stream early.
using CertSink = std::function<bool(const AtomicNetwork&)>;

// A specialized certificate enumerator: yields exactly the complete
// satisfiable networks on `vars` that imply every constraint in the active
// list, without duplicates. The active list holds the constraints of
// instance[vars]; the solver precomputes it per bag.
using SpecializedEnumerator = std::function<bool(
    std::span<const Constraint* const>, std::span<const VarId>, const CertSink&)>;

// Descriptor of a JEPD basic-relation structure plus its executable hooks.
// The relation tables are immutable shared data; deciders, enumerators and
// realizers are pure and safe to call concurrently.
struct Calculus {
  std::string name;
  std::vector<BasicRelation> relations;  // ids dense 0..|A|-1
  std::vector<int> arities;              // distinct arities, ascending

  // Atomic satisfiability of a (possibly partial) network over this
  // calculus's relations.
  std::function<bool(const AtomicNetwork&)> decide;

  // Model construction; empty when the calculus has no realizer (RCC).
  // Returns nullopt on unsatisfiable input.
  std::function<std::optional<Model>(const AtomicNetwork&)> realize;

  // Reads off the basic relation a model assigns to a tuple. Present iff
  // `realize` is.
  std::function<RelId(const Model&, const Tuple&)> relation_in_model;

  // Empty when the paper-backed construction does not give one; the generic
  // filter enumerator is used instead.
  SpecializedEnumerator enumerate;

  bool has_realizer() const { return static_cast<bool>(realize); }
  int max_arity() const { return arities.back(); }

  RelId rel(std::string_view rel_name) const {
    auto it = rel_by_name_.find(std::string(rel_name));
    if (it == rel_by_name_.end())
      throw ContractError("unknown relation '" + std::string(rel_name) + "' in calculus " + name);
    return it->second;
  }
  bool has_rel(std::string_view rel_name) const {
    return rel_by_name_.contains(std::string(rel_name));
  }
  const BasicRelation& relation(RelId id) const {
    return relations.at(static_cast<std::size_t>(id));
  }
  std::vector<RelId> rels_of_arity(int k) const {
    std::vector<RelId> out;
    for (const auto& r : relations)
      if (r.arity == k) out.push_back(r.id);
    return out;
  }

  void finalize();  // builds the name index, checks id density

private:
  std::unordered_map<std::string, RelId> rel_by_name_;
};

// Shipped calculi: pa, ia, cdc, ba1, ba2, ba3, rcc5, rcc8, phylo.
// Throws ContractError for unknown names.
const Calculus& find_calculus(std::string_view name);
std::vector<std::string> calculus_names();

}  // namespace qcsp
