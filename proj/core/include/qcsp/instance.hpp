#pragma once

#include <span>
#include <string>
#include <vector>

#include "qcsp/calculus.hpp"
#include "qcsp/graph.hpp"
#include "qcsp/types.hpp"

namespace qcsp {

struct Atom {
  RelId rel = -1;
  Tuple args;
  bool negated = false;  // only before load-time normalization
};

using Term = std::vector<Atom>;

// A relation from boole(A) in negation-free DNF, applied to a scope.
// `sugar` marks pure disjunctions: every term is a single atom over the
// full scope, which is the dominant case in practice and serializes
// compactly.
struct Constraint {
  std::vector<VarId> scope;  // ordered; repeats permitted
  std::vector<Term> dnf;
  bool sugar = false;
  std::vector<RelId> sugar_rels;  // populated iff sugar
};

struct Instance {
  const Calculus* calc = nullptr;
  std::vector<std::string> var_names;  // dense VarId = index into this table
  std::vector<VarId> vars;             // the instance's variable set V
  std::vector<Constraint> constraints;

  int num_vars() const { return static_cast<int>(vars.size()); }
  const std::string& name_of(VarId v) const { return var_names.at(static_cast<std::size_t>(v)); }
  VarId var(std::string_view name) const;  // throws on unknown name
};

// Convenience builders used by tests, generators and the CLI.
Instance make_instance(const Calculus& calc, std::vector<std::string> var_names);
Constraint make_disjunction(const Instance& inst, std::vector<std::string> scope,
                            std::vector<std::string> rel_names);

// Replaces every negated atom by the disjunction of all other relations of
// its arity, distributing over the term. Checks arities along the way.
Constraint normalize_constraint(const Calculus& calc, Constraint c);

// Keeps exactly the constraints whose scope lies inside U.
Instance subinstance(const Instance& inst, std::span<const VarId> u);

// Variables as vertices; u–v is an edge iff u != v co-occur in some scope.
Graph primal_graph(const Instance& inst);

// True iff some DNF term of the constraint has all of its atoms present in
// the network (same tuple, same relation). Scope variables must belong to
// the network.
bool implies(const AtomicNetwork& network, const Constraint& constraint);

}  // namespace qcsp
