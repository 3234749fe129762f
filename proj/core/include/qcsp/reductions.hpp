#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qcsp/graph.hpp"
#include "qcsp/instance.hpp"

namespace qcsp {

// A vertex-colouring question: does G admit a proper k-colouring?
struct ColouringInstance {
  Graph graph;
  std::vector<std::string> vertex_names;  // dense ids = index
  int k = 1;
};

// Edge-list text: one `u v` pair per line, '#' starts a comment. Vertex
// names are arbitrary tokens.
ColouringInstance read_edge_list(std::istream& in, int k);

// Encodes k-colourability of G as a CDC instance with disjunctive
// constraints over variables z_v, c_1..c_k and h_1..h_{k-1}; satisfiable iff
// G is k-colourable. Requires k >= 2. The forbidden-direction constraint on
// the h variables is emitted as the expanded 8-relation disjunction
// (negation-free DNF policy).
Instance coloring_to_cdc(const ColouringInstance& col);

// Per-pair translation of CDC relations into Allen relations; disjunctions
// map to unions and the primal graph is preserved exactly. The input must
// consist of disjunction-sugar constraints.
Instance cdc_to_ia(const Instance& cdc_instance);

}  // namespace qcsp
