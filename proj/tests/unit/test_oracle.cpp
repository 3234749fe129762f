#include "doctest.h"
#include "qcsp/oracle.hpp"
#include "support/gen.hpp"

using namespace qcsp;

TEST_CASE("brute_solve on the worked examples") {
  CHECK(brute_solve(testgen::betweenness_instance()));
  CHECK(!brute_solve(testgen::patchwork_union_instance()));

  const Calculus& pa = find_calculus("pa");
  Instance free4 = make_instance(pa, {"a", "b", "c", "d"});
  CHECK(brute_solve(free4));
}

TEST_CASE("oracle guards are hard errors") {
  const Calculus& pa = find_calculus("pa");
  CHECK(oracle_var_guard(pa) == 8);
  Instance big = make_instance(pa, testgen::var_names(9));
  CHECK_THROWS_AS((void)brute_solve(big), GuardError);
  CHECK_THROWS_AS((void)count_complete_satisfiable(pa, 9), GuardError);

  const Calculus& ph = find_calculus("phylo");
  CHECK(oracle_var_guard(ph) == 5);
  Instance big3 = make_instance(ph, testgen::var_names(6));
  CHECK_THROWS_AS((void)brute_solve(big3), GuardError);
}

TEST_CASE("verify_model evaluates constraints against concrete semantics") {
  Instance between = testgen::betweenness_instance();
  PointModel good;
  good.value = {{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  CHECK(!verify_model(between, Model{good}).has_value());

  PointModel bad;
  bad.value = {{0, 0}, {1, 2}, {2, 1}, {3, 3}};
  auto violated = verify_model(between, Model{bad});
  REQUIRE(violated.has_value());
  CHECK(*violated == 0);  // B(w,x,y) fails first

  const Calculus& pa = find_calculus("pa");
  Instance empty = make_instance(pa, {});
  CHECK(!verify_model(empty, Model{PointModel{}}).has_value());
}

TEST_CASE("counting identities") {
  CHECK(count_complete_satisfiable(find_calculus("pa"), 1) == 1);
  CHECK(count_complete_satisfiable(find_calculus("pa"), 2) == 3);
  CHECK(count_complete_satisfiable(find_calculus("pa"), 3) == 13);
  CHECK(count_complete_satisfiable(find_calculus("pa"), 4) == 75);
  CHECK(count_complete_satisfiable(find_calculus("ia"), 2) == 13);
  CHECK(count_complete_satisfiable(find_calculus("cdc"), 2) == 9);
  CHECK(count_complete_satisfiable(find_calculus("rcc8"), 2) == 8);
  CHECK(count_complete_satisfiable(find_calculus("rcc5"), 2) == 5);
}

TEST_CASE("sat verdicts come with verifiable models where realizers exist") {
  std::mt19937_64 rng(53);
  for (std::string name : {"pa", "ia", "cdc"}) {
    const Calculus& calc = find_calculus(name);
    int seen = 0;
    for (int round = 0; round < 40 && seen < 10; ++round) {
      Instance inst = testgen::random_instance(calc, 4, rng);
      bool sat = false;
      enumerate_certificates(calc, inst, inst.vars, [&](const AtomicNetwork& cert) {
        sat = true;
        auto model = calc.realize(cert);
        REQUIRE(model.has_value());
        CHECK(!verify_model(inst, *model).has_value());
        return false;
      });
      seen += sat;
    }
    CHECK(seen > 0);
  }
}
