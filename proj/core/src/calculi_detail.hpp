#pragma once

// Internal helpers shared by the calculus backends.

#include <functional>
#include <span>
#include <vector>

#include "qcsp/calculus.hpp"
#include "qcsp/instance.hpp"

namespace qcsp::detail {

// Active-constraint enumerator entry points. The public wrappers filter
// instance constraints down to those with scope inside `vars`; the solver
// passes a precomputed list instead.
using ActiveConstraints = std::span<const Constraint* const>;

bool pa_enumerate(ActiveConstraints cons, std::span<const VarId> vars, const CertSink& sink);
bool ia_enumerate(ActiveConstraints cons, std::span<const VarId> vars, const CertSink& sink);
bool cdc_enumerate(ActiveConstraints cons, std::span<const VarId> vars, const CertSink& sink);
bool ba_enumerate(ActiveConstraints cons, std::span<const VarId> vars, const CertSink& sink,
                  int dims);
bool phylo_enumerate(ActiveConstraints cons, std::span<const VarId> vars, const CertSink& sink);
bool rcc_enumerate(ActiveConstraints cons, std::span<const VarId> vars, const CertSink& sink,
                   bool rcc8);
bool generic_enumerate(const Calculus& calc, ActiveConstraints cons, std::span<const VarId> vars,
                       const CertSink& sink);

std::vector<const Constraint*> active_constraints(const Instance& inst,
                                                  std::span<const VarId> vars);

// Factories; each returns a process-lifetime singleton.
const Calculus& pa_calculus();
const Calculus& ia_calculus();
const Calculus& cdc_calculus();
const Calculus& ba_calculus(int dims);
const Calculus& rcc_calculus(bool rcc8);
const Calculus& phylo_calculus();

// Evaluates a constraint whose scope is fully determined: true iff some DNF
// term has all atoms holding under `rel_of`, which maps an atom's argument
// tuple to the basic relation currently holding on it.
template <typename RelOf>
bool constraint_holds(const Constraint& c, RelOf&& rel_of) {
  for (const Term& term : c.dnf) {
    bool all = true;
    for (const Atom& a : term) {
      if (rel_of(a.args) != a.rel) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

// Ordered-partition workspace for the partition-backed enumerators.
// Elements are dense local indices; ranks track block positions under
// insertions and removals.
class RankedPartition {
public:
  explicit RankedPartition(int num_elements)
      : rank_(static_cast<std::size_t>(num_elements), -1) {}

  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int rank_of(int e) const { return rank_[static_cast<std::size_t>(e)]; }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }

  void join_block(int e, int b) {
    blocks_[static_cast<std::size_t>(b)].push_back(e);
    rank_[static_cast<std::size_t>(e)] = b;
  }
  void unjoin_block(int e, int b) {
    blocks_[static_cast<std::size_t>(b)].pop_back();
    rank_[static_cast<std::size_t>(e)] = -1;
  }
  void open_block(int e, int pos) {
    blocks_.insert(blocks_.begin() + pos, {e});
    rank_[static_cast<std::size_t>(e)] = pos;
    for (std::size_t b = static_cast<std::size_t>(pos) + 1; b < blocks_.size(); ++b)
      for (int x : blocks_[b]) rank_[static_cast<std::size_t>(x)] = static_cast<int>(b);
  }
  void close_block(int e, int pos) {
    blocks_.erase(blocks_.begin() + pos);
    rank_[static_cast<std::size_t>(e)] = -1;
    for (std::size_t b = static_cast<std::size_t>(pos); b < blocks_.size(); ++b)
      for (int x : blocks_[b]) rank_[static_cast<std::size_t>(x)] = static_cast<int>(b);
  }

private:
  std::vector<std::vector<int>> blocks_;
  std::vector<int> rank_;
};

// Constraints to check right after the element with a given local index is
// placed: exactly those whose scope just became fully determined.
std::vector<std::vector<const Constraint*>> triggers_by_last_var(
    ActiveConstraints cons, std::span<const VarId> sorted_vars);

}  // namespace qcsp::detail
