#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "qcsp/types.hpp"

namespace qcsp {

// An atomic network: a (possibly partial) CSP(A) instance in canonical form.
// Variables are kept as a sorted vector; entries map variable tuples to
// basic-relation ids and are kept sorted by (arity, tuple), so two networks
// over the same variables are equal iff their entry vectors are equal.
// A network is complete when it has an entry for every k-tuple (with
// repetition) of its variables, for every supported arity k.
class AtomicNetwork {
public:
  using Entry = std::pair<Tuple, RelId>;

  AtomicNetwork() = default;

  static AtomicNetwork on_vars(std::vector<VarId> vars) {
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    AtomicNetwork n;
    n.vars_ = std::move(vars);
    return n;
  }

  std::span<const VarId> vars() const { return vars_; }
  std::span<const Entry> entries() const { return entries_; }
  std::size_t num_entries() const { return entries_.size(); }
  bool empty() const { return vars_.empty() && entries_.empty(); }

  bool has_var(VarId v) const {
    return std::binary_search(vars_.begin(), vars_.end(), v);
  }

  std::optional<RelId> find(const Tuple& t) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), t,
                               [](const Entry& e, const Tuple& key) { return e.first < key; });
    if (it != entries_.end() && it->first == t) return it->second;
    return std::nullopt;
  }

  // Sorted insert. Returns false if the tuple is already present with a
  // different relation (the caller decides what a conflict means).
  bool insert(const Tuple& t, RelId r) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), t,
                               [](const Entry& e, const Tuple& key) { return e.first < key; });
    if (it != entries_.end() && it->first == t) return it->second == r;
    for (VarId v : t)
      if (!has_var(v)) {
        auto vit = std::lower_bound(vars_.begin(), vars_.end(), v);
        vars_.insert(vit, v);
      }
    entries_.insert(it, {t, r});
    return true;
  }

  // Fast path for builders that emit entries in canonical order.
  void append(const Tuple& t, RelId r) {
    entries_.emplace_back(t, r);
  }

  void pop_entry() { entries_.pop_back(); }

  friend bool operator==(const AtomicNetwork& a, const AtomicNetwork& b) {
    return a.vars_ == b.vars_ && a.entries_ == b.entries_;
  }

  std::uint64_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (VarId v : vars_) h = hash_mix(h, static_cast<std::uint64_t>(v) + 1);
    for (const Entry& e : entries_) {
      for (VarId v : e.first) h = hash_mix(h, static_cast<std::uint64_t>(v) + 1);
      h = hash_mix(h, static_cast<std::uint64_t>(e.first.size()) << 32 |
                          static_cast<std::uint64_t>(static_cast<std::uint16_t>(e.second)));
    }
    return h;
  }

private:
  std::vector<VarId> vars_;
  std::vector<Entry> entries_;
};

struct NetworkHash {
  std::size_t operator()(const AtomicNetwork& n) const {
    return static_cast<std::size_t>(n.hash());
  }
};

// Keeps exactly the entries whose tuples lie inside `vars`.
// Completeness is preserved under projection.
AtomicNetwork project(const AtomicNetwork& network, std::span<const VarId> vars);

// Entry-map union; nullopt if the inputs assign different relations to a
// shared tuple.
std::optional<AtomicNetwork> union_networks(const AtomicNetwork& a, const AtomicNetwork& b);

}  // namespace qcsp
