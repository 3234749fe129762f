#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>

namespace qcsp {

using VarId = std::int32_t;
using RelId = std::int16_t;

inline constexpr int kMaxTupleArity = 4;

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Contract violations: a caller broke a documented precondition.
class ContractError : public Error {
public:
  using Error::Error;
};

// Malformed input files (instances, decompositions, graphs, tables).
class ParseError : public Error {
public:
  using Error::Error;
};

// Oracle size guards are hard errors, never silent truncation.
class GuardError : public Error {
public:
  using Error::Error;
};

// A variable tuple of small fixed capacity. Tuples key atomic-network
// entries; their length always equals the arity of the relation assigned
// to them.
class Tuple {
public:
  Tuple() : size_(0) { data_.fill(-1); }
  Tuple(std::initializer_list<VarId> vs) : Tuple() {
    if (vs.size() > kMaxTupleArity) throw ContractError("tuple arity exceeds cap");
    for (VarId v : vs) data_[size_++] = v;
  }
  explicit Tuple(std::span<const VarId> vs) : Tuple() {
    if (vs.size() > kMaxTupleArity) throw ContractError("tuple arity exceeds cap");
    for (VarId v : vs) data_[size_++] = v;
  }

  int size() const { return size_; }
  VarId operator[](int i) const { return data_[static_cast<std::size_t>(i)]; }
  const VarId* begin() const { return data_.data(); }
  const VarId* end() const { return data_.data() + size_; }

  void push_back(VarId v) {
    if (size_ == kMaxTupleArity) throw ContractError("tuple arity exceeds cap");
    data_[size_++] = v;
  }

  friend bool operator==(const Tuple& a, const Tuple& b) {
    return a.size_ == b.size_ && a.data_ == b.data_;
  }
  // Entries sort by arity first, then lexicographically by variable id.
  friend std::strong_ordering operator<=>(const Tuple& a, const Tuple& b) {
    if (a.size_ != b.size_) return a.size_ <=> b.size_;
    for (int i = 0; i < a.size_; ++i)
      if (a.data_[static_cast<std::size_t>(i)] != b.data_[static_cast<std::size_t>(i)])
        return a.data_[static_cast<std::size_t>(i)] <=> b.data_[static_cast<std::size_t>(i)];
    return std::strong_ordering::equal;
  }

private:
  std::array<VarId, kMaxTupleArity> data_;
  std::int8_t size_;
};

struct BasicRelation {
  RelId id = -1;
  std::string name;
  int arity = 2;
  bool is_diagonal = false;  // true iff the relation is Eq_k = {(d,...,d)}
};

inline std::uint64_t hash_mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

}  // namespace qcsp
