#include "qcsp/reductions.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <set>
#include <sstream>

namespace qcsp {

ColouringInstance read_edge_list(std::istream& in, int k) {
  ColouringInstance col;
  col.k = k;
  std::map<std::string, int> id_of;
  auto vertex = [&](const std::string& name) {
    auto it = id_of.find(name);
    if (it != id_of.end()) return it->second;
    int id = static_cast<int>(col.vertex_names.size());
    col.vertex_names.push_back(name);
    id_of[name] = id;
    col.graph.add_vertex(id);
    return id;
  };
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::string u, v, extra;
    if (!(ls >> u)) continue;
    if (!(ls >> v) || (ls >> extra))
      throw ParseError("edge list line " + std::to_string(lineno) + ": expected `u v`");
    if (u == v)
      throw ParseError("edge list line " + std::to_string(lineno) + ": self-loop");
    int a = vertex(u);
    int b = vertex(v);
    col.graph.add_edge(a, b);
  }
  return col;
}

Instance coloring_to_cdc(const ColouringInstance& col) {
  if (col.k < 2) throw ContractError("coloring_to_cdc: k must be at least 2");
  const Calculus& cdc = find_calculus("cdc");

  std::vector<std::string> names;
  for (const std::string& v : col.vertex_names) names.push_back("z_" + v);
  for (int i = 1; i <= col.k; ++i) names.push_back("c" + std::to_string(i));
  for (int j = 1; j <= col.k - 1; ++j) names.push_back("h" + std::to_string(j));
  Instance inst = make_instance(cdc, std::move(names));

  auto z = [&](int v) { return "z_" + col.vertex_names[static_cast<std::size_t>(v)]; };
  auto c = [&](int i) { return "c" + std::to_string(i); };
  auto h = [&](int j) { return "h" + std::to_string(j); };

  // Colour staircase: c_i sits strictly south-west of c_{i+1}; h_i pins the
  // rectangle between them.
  for (int i = 1; i <= col.k - 1; ++i) {
    inst.constraints.push_back(make_disjunction(inst, {c(i), c(i + 1)}, {"SW"}));
    inst.constraints.push_back(make_disjunction(inst, {h(i), c(i)}, {"N"}));
    inst.constraints.push_back(make_disjunction(inst, {h(i), c(i + 1)}, {"W"}));
  }
  for (int v : col.graph.vertices()) {
    inst.constraints.push_back(make_disjunction(inst, {z(v), c(1)}, {"=", "NE"}));
    inst.constraints.push_back(make_disjunction(inst, {z(v), c(col.k)}, {"=", "SW"}));
  }
  for (int v : col.graph.vertices())
    for (int i = 2; i <= col.k - 1; ++i)
      inst.constraints.push_back(make_disjunction(inst, {z(v), c(i)}, {"SW", "=", "NE"}));
  // not-SE, expanded to the complementary disjunction
  for (int v : col.graph.vertices())
    for (int j = 1; j <= col.k - 1; ++j)
      inst.constraints.push_back(
          make_disjunction(inst, {z(v), h(j)}, {"S", "SW", "W", "NW", "N", "NE", "E", "="}));
  for (auto [u, v] : col.graph.edges())
    inst.constraints.push_back(make_disjunction(inst, {z(u), z(v)}, {"SW", "NE"}));
  return inst;
}

Instance cdc_to_ia(const Instance& cdc_instance) {
  if (cdc_instance.calc->name != "cdc")
    throw ContractError("cdc_to_ia: input must be a cdc instance");
  const Calculus& ia = find_calculus("ia");

  // Per-relation translation; disjunctions map to unions.
  static const std::map<std::string, std::vector<std::string>> table = {
      {"=", {"e"}},          {"N", {"si"}},
      {"E", {"f"}},          {"S", {"s"}},
      {"W", {"fi"}},         {"NE", {"oi", "mi", "pi"}},
      {"SE", {"d"}},         {"SW", {"p", "m", "o"}},
      {"NW", {"di"}},
  };

  Instance out;
  out.calc = &ia;
  out.var_names = cdc_instance.var_names;
  out.vars = cdc_instance.vars;
  for (const Constraint& c : cdc_instance.constraints) {
    if (!c.sugar || c.scope.size() != 2)
      throw ContractError("cdc_to_ia: input must consist of binary disjunction constraints");
    std::set<std::string> rels;
    for (RelId r : c.sugar_rels)
      for (const std::string& t : table.at(cdc_instance.calc->relation(r).name)) rels.insert(t);
    Constraint translated;
    translated.scope = c.scope;
    Tuple args(std::span<const VarId>(c.scope.data(), c.scope.size()));
    for (const std::string& name : rels)
      translated.dnf.push_back({Atom{ia.rel(name), args, false}});
    out.constraints.push_back(normalize_constraint(ia, std::move(translated)));
  }
  return out;
}

}  // namespace qcsp
