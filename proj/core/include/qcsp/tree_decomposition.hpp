#pragma once

#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qcsp/graph.hpp"
#include "qcsp/types.hpp"

namespace qcsp {

struct TreeDecomposition {
  struct Node {
    int parent = -1;
    std::vector<int> children;
    std::vector<int> bag;  // sorted variable ids
  };
  std::vector<Node> nodes;
  int root = -1;

  // max bag size - 1; a lone empty bag reports -1 (surfaced as 0 with a
  // note in user-facing stats).
  int width() const;
  int add_node(std::vector<int> bag, int parent);
};

enum class DecomposeMode { Heuristic, Exact };

// Heuristic = min-fill elimination ordering. Exact = subset dynamic program
// over elimination orderings, feasible up to ~20 vertices. An empty graph
// yields a single empty bag.
TreeDecomposition decompose(const Graph& graph, DecomposeMode mode = DecomposeMode::Heuristic);

// Any elimination order yields a valid decomposition; used for
// decomposition-invariance tests.
TreeDecomposition decompose_random(const Graph& graph, std::mt19937_64& rng);

// Checks the three decomposition properties; nullopt means valid, otherwise
// a report naming the first violated edge or variable.
std::optional<std::string> validate(const TreeDecomposition& td, const Graph& graph);

enum class NodeKind { Leaf, Introduce, Forget, Join };

struct NiceDecomposition {
  struct Node {
    NodeKind kind = NodeKind::Leaf;
    VarId var = -1;  // introduced/forgotten variable
    int parent = -1;
    int left = -1;
    int right = -1;
    std::vector<int> bag;  // sorted
  };
  std::vector<Node> nodes;
  int root = -1;

  int width() const;
  std::vector<int> postorder() const;
  // Variables occurring in the bags of the subtree rooted at `node`
  // (computed on demand; not stored).
  std::vector<VarId> vars_in_subtree(int node) const;
};

// Root/leaf bags empty; introduce adds exactly one variable, forget removes
// exactly one, joins duplicate their bag. Width is preserved; node count is
// linear. Chains are ordered by variable id for determinism, joins are
// binarized left-deep.
NiceDecomposition make_nice(const TreeDecomposition& td);

std::optional<std::string> validate_nice(const NiceDecomposition& nd, const Graph& graph);

// Text exchange format: one line per node, `id parent member...` with -1
// for the root's parent; members are variable names. '#' starts a comment.
void write_decomposition(std::ostream& out, const TreeDecomposition& td,
                         const std::vector<std::string>& var_names);
TreeDecomposition read_decomposition(std::istream& in, const std::vector<std::string>& var_names);

}  // namespace qcsp
