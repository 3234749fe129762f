#include <algorithm>
#include <functional>
#include <set>
#include <vector>

#include "doctest.h"
#include "qcsp/ordered_partition.hpp"

using namespace qcsp;

namespace {

// Independent oracle: every rank function onto a dense initial segment,
// deduplicated.
std::set<std::vector<int>> rank_function_oracle(int n) {
  std::set<std::vector<int>> out;
  std::vector<int> ranks(static_cast<std::size_t>(n), 0);
  std::function<void(int)> go = [&](int i) {
    if (i == n) {
      int mx = -1;
      for (int r : ranks) mx = std::max(mx, r);
      std::set<int> used(ranks.begin(), ranks.end());
      if (static_cast<int>(used.size()) == mx + 1) out.insert(ranks);  // surjective onto 0..mx
      return;
    }
    for (int r = 0; r < n; ++r) {
      ranks[static_cast<std::size_t>(i)] = r;
      go(i + 1);
    }
  };
  go(0);
  return out;
}

std::set<std::vector<int>> enumerated_rank_vectors(int n) {
  std::vector<VarId> ground;
  for (int i = 0; i < n; ++i) ground.push_back(i);
  std::set<std::vector<int>> out;
  enumerate_ordered_partitions(ground, [&](const OrderedPartition& p) {
    p.validate();
    std::vector<int> ranks;
    for (int i = 0; i < n; ++i) ranks.push_back(p.rank.at(i));
    CHECK(out.insert(ranks).second);  // no duplicates
    return true;
  });
  return out;
}

}  // namespace

TEST_CASE("ordered partition counts against the rank-function oracle") {
  CHECK(enumerated_rank_vectors(1).size() == 1);
  CHECK(enumerated_rank_vectors(3) == rank_function_oracle(3));
  CHECK(enumerated_rank_vectors(3).size() == 13);
  CHECK(enumerated_rank_vectors(4) == rank_function_oracle(4));
  CHECK(enumerated_rank_vectors(4).size() == 75);
}

TEST_CASE("ordered partition stream stops on demand") {
  std::vector<VarId> ground{0, 1, 2, 3, 4};
  int seen = 0;
  bool finished = enumerate_ordered_partitions(ground, [&](const OrderedPartition&) {
    return ++seen < 7;
  });
  CHECK(!finished);
  CHECK(seen == 7);
}
