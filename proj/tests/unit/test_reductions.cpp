#include <sstream>

#include "doctest.h"
#include "qcsp/oracle.hpp"
#include "qcsp/reductions.hpp"
#include "support/gen.hpp"

using namespace qcsp;

namespace {

ColouringInstance triangle(int k) {
  ColouringInstance col;
  col.vertex_names = {"a", "b", "c"};
  col.graph = testgen::complete_graph(3);
  col.k = k;
  return col;
}

}  // namespace

TEST_CASE("edge-list parsing") {
  std::istringstream in("a b\n# comment\nb c\n\nc a\n");
  ColouringInstance col = read_edge_list(in, 3);
  CHECK(col.vertex_names.size() == 3);
  CHECK(col.graph.num_edges() == 3);
  CHECK(col.k == 3);

  std::istringstream self("a a\n");
  CHECK_THROWS_AS((void)read_edge_list(self, 2), ParseError);
  std::istringstream partial("a\n");
  CHECK_THROWS_AS((void)read_edge_list(partial, 2), ParseError);
}

TEST_CASE("colouring encoding shape and constraint count") {
  // 3(k-1) staircase + 2|V| anchors + (k-2)|V| middles + (k-1)|V|
  // forbidden rectangles + |E| edge constraints
  Instance inst = coloring_to_cdc(triangle(3));
  CHECK(inst.calc->name == "cdc");
  CHECK(inst.num_vars() == 3 + 3 + 2);  // z_a z_b z_c, c1..c3, h1 h2
  std::size_t expected = 3 * (3 - 1) + 2 * 3 + (3 - 2) * 3 + (3 - 1) * 3 + 3;
  CHECK(inst.constraints.size() == expected);
  for (const Constraint& c : inst.constraints) CHECK(c.sugar);

  CHECK_THROWS_AS((void)coloring_to_cdc(triangle(1)), ContractError);
}

TEST_CASE("triangle colourability through the solver") {
  CHECK(testgen::solve_with_heuristic_td(coloring_to_cdc(triangle(3))).sat);
  CHECK(!testgen::solve_with_heuristic_td(coloring_to_cdc(triangle(2))).sat);
}

TEST_CASE("cdc-to-ia translation table") {
  const Calculus& cdc = find_calculus("cdc");
  const Calculus& ia = find_calculus("ia");

  Instance north = make_instance(cdc, {"x", "y"});
  north.constraints.push_back(make_disjunction(north, {"x", "y"}, {"N"}));
  Instance tn = cdc_to_ia(north);
  CHECK(tn.calc == &ia);
  REQUIRE(tn.constraints.size() == 1);
  CHECK(tn.constraints[0].sugar_rels == std::vector<RelId>{ia.rel("si")});

  Instance diag = make_instance(cdc, {"x", "y"});
  diag.constraints.push_back(make_disjunction(diag, {"x", "y"}, {"SW", "NE"}));
  Instance td = cdc_to_ia(diag);
  REQUIRE(td.constraints.size() == 1);
  std::vector<RelId> want{ia.rel("p"),  ia.rel("pi"), ia.rel("m"),
                          ia.rel("mi"), ia.rel("o"),  ia.rel("oi")};
  std::sort(want.begin(), want.end());
  CHECK(td.constraints[0].sugar_rels == want);

  const Calculus& pa = find_calculus("pa");
  Instance wrong = make_instance(pa, {"x", "y"});
  CHECK_THROWS_AS((void)cdc_to_ia(wrong), ContractError);
}

TEST_CASE("translation preserves the primal graph exactly") {
  std::mt19937_64 rng(61);
  const Calculus& cdc = find_calculus("cdc");
  for (int round = 0; round < 50; ++round) {
    Instance inst = testgen::random_instance(cdc, 5, rng);
    Instance out = cdc_to_ia(inst);
    Graph a = primal_graph(inst);
    Graph b = primal_graph(out);
    CHECK(a.edges() == b.edges());
    CHECK(std::vector<int>(a.vertices().begin(), a.vertices().end()) ==
          std::vector<int>(b.vertices().begin(), b.vertices().end()));
  }
}

TEST_CASE("translation preserves satisfiability on random instances") {
  std::mt19937_64 rng(67);
  const Calculus& cdc = find_calculus("cdc");
  for (int round = 0; round < 40; ++round) {
    Instance inst = testgen::random_instance(cdc, 4, rng);
    Instance out = cdc_to_ia(inst);
    bool sat_cdc = brute_solve(inst);
    CHECK(sat_cdc == brute_solve(out));
    CHECK(sat_cdc == testgen::solve_with_heuristic_td(inst).sat);
    CHECK(sat_cdc == testgen::solve_with_heuristic_td(out).sat);
  }
}

TEST_CASE("generated instances agree with brute-force colourability") {
  std::mt19937_64 rng(71);
  for (int round = 0; round < 12; ++round) {
    int n = 3 + static_cast<int>(rng() % 3);
    Graph g = testgen::random_graph(n, 0.5, rng);
    ColouringInstance col;
    col.graph = g;
    for (int v = 0; v < n; ++v) col.vertex_names.push_back("v" + std::to_string(v));
    for (int k = 2; k <= 3; ++k) {
      col.k = k;
      Instance inst = coloring_to_cdc(col);
      CHECK(testgen::solve_with_heuristic_td(inst).sat == testgen::k_colorable(g, k));
    }
  }
}
