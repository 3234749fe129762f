#include "qcsp/instance_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qcsp {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

Tuple parse_args(const Instance& inst, const json& args, const std::string& where,
                 const std::set<VarId>& scope_vars) {
  if (!args.is_array() || args.empty()) fail(where, "args must be a non-empty list");
  if (args.size() > static_cast<std::size_t>(kMaxTupleArity))
    fail(where, "args arity exceeds supported cap");
  Tuple t;
  for (const auto& a : args) {
    if (!a.is_string()) fail(where, "args must be variable names");
    VarId v;
    try {
      v = inst.var(a.get<std::string>());
    } catch (const Error&) {
      fail(where, "unknown variable '" + a.get<std::string>() + "'");
    }
    if (!scope_vars.contains(v))
      fail(where, "atom argument '" + a.get<std::string>() + "' outside the constraint scope");
    t.push_back(v);
  }
  return t;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("instance document: ") + e.what());
  }
  if (!doc.is_object()) fail("document", "top level must be an object");
  if (!doc.contains("calculus") || !doc["calculus"].is_string())
    fail("document", "missing string field 'calculus'");
  if (!doc.contains("variables") || !doc["variables"].is_array())
    fail("document", "missing list field 'variables'");

  const Calculus* calc;
  try {
    calc = &find_calculus(doc["calculus"].get<std::string>());
  } catch (const Error&) {
    fail("calculus", "unknown calculus '" + doc["calculus"].get<std::string>() + "'");
  }

  std::vector<std::string> names;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < doc["variables"].size(); ++i) {
    const auto& v = doc["variables"][i];
    if (!v.is_string()) fail("variables[" + std::to_string(i) + "]", "must be a string");
    if (!seen.insert(v.get<std::string>()).second)
      fail("variables[" + std::to_string(i) + "]",
           "duplicate variable '" + v.get<std::string>() + "'");
    names.push_back(v.get<std::string>());
  }
  Instance inst = make_instance(*calc, std::move(names));

  if (doc.contains("constraints")) {
    if (!doc["constraints"].is_array()) fail("constraints", "must be a list");
    for (std::size_t i = 0; i < doc["constraints"].size(); ++i) {
      std::string where = "constraints[" + std::to_string(i) + "]";
      const auto& c = doc["constraints"][i];
      if (!c.is_object()) fail(where, "must be an object");
      if (!c.contains("scope") || !c["scope"].is_array() || c["scope"].empty())
        fail(where, "missing non-empty list 'scope'");

      Constraint con;
      for (const auto& s : c["scope"]) {
        if (!s.is_string()) fail(where + ".scope", "must contain variable names");
        try {
          con.scope.push_back(inst.var(s.get<std::string>()));
        } catch (const Error&) {
          fail(where + ".scope", "unknown variable '" + s.get<std::string>() + "'");
        }
      }
      std::set<VarId> scope_vars(con.scope.begin(), con.scope.end());

      if (c.contains("relations")) {
        if (c.contains("dnf")) fail(where, "give either 'relations' or 'dnf', not both");
        if (!c["relations"].is_array() || c["relations"].empty())
          fail(where + ".relations", "must be a non-empty list");
        if (con.scope.size() > static_cast<std::size_t>(kMaxTupleArity))
          fail(where, "scope arity exceeds supported cap");
        Tuple args(std::span<const VarId>(con.scope.data(), con.scope.size()));
        for (std::size_t r = 0; r < c["relations"].size(); ++r) {
          const auto& rel = c["relations"][r];
          std::string rwhere = where + ".relations[" + std::to_string(r) + "]";
          if (!rel.is_string()) fail(rwhere, "must be a relation name");
          if (!calc->has_rel(rel.get<std::string>()))
            fail(rwhere, "unknown relation '" + rel.get<std::string>() + "'");
          con.dnf.push_back({Atom{calc->rel(rel.get<std::string>()), args, false}});
        }
      } else if (c.contains("dnf")) {
        if (!c["dnf"].is_array() || c["dnf"].empty())
          fail(where + ".dnf", "must be a non-empty list of terms");
        for (std::size_t t = 0; t < c["dnf"].size(); ++t) {
          const auto& term = c["dnf"][t];
          std::string twhere = where + ".dnf[" + std::to_string(t) + "]";
          if (!term.is_array() || term.empty()) fail(twhere, "term must be a non-empty list");
          Term out;
          for (std::size_t a = 0; a < term.size(); ++a) {
            const auto& atom = term[a];
            std::string awhere = twhere + "[" + std::to_string(a) + "]";
            if (!atom.is_object() || !atom.contains("rel") || !atom.contains("args"))
              fail(awhere, "atom must be {rel, args}");
            if (!atom["rel"].is_string() || !calc->has_rel(atom["rel"].get<std::string>()))
              fail(awhere, "unknown relation '" + atom["rel"].dump() + "'");
            Atom parsed;
            parsed.rel = calc->rel(atom["rel"].get<std::string>());
            parsed.args = parse_args(inst, atom["args"], awhere, scope_vars);
            if (atom.contains("neg")) {
              if (!atom["neg"].is_boolean()) fail(awhere, "'neg' must be a boolean");
              parsed.negated = atom["neg"].get<bool>();
            }
            out.push_back(parsed);
          }
          con.dnf.push_back(std::move(out));
        }
      } else {
        fail(where, "constraint needs 'relations' or 'dnf'");
      }

      try {
        inst.constraints.push_back(normalize_constraint(*calc, std::move(con)));
      } catch (const Error& e) {
        fail(where, e.what());
      }
    }
  }
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string serialize_instance(const Instance& inst) {
  json doc;
  doc["calculus"] = inst.calc->name;
  doc["variables"] = json::array();
  for (VarId v : inst.vars) doc["variables"].push_back(inst.name_of(v));
  doc["constraints"] = json::array();
  for (const Constraint& c : inst.constraints) {
    json jc;
    jc["scope"] = json::array();
    for (VarId v : c.scope) jc["scope"].push_back(inst.name_of(v));
    if (c.sugar) {
      jc["relations"] = json::array();
      for (RelId r : c.sugar_rels) jc["relations"].push_back(inst.calc->relation(r).name);
    } else {
      jc["dnf"] = json::array();
      for (const Term& t : c.dnf) {
        json jt = json::array();
        for (const Atom& a : t) {
          json ja;
          ja["rel"] = inst.calc->relation(a.rel).name;
          ja["args"] = json::array();
          for (VarId v : a.args) ja["args"].push_back(inst.name_of(v));
          jt.push_back(ja);
        }
        jc["dnf"].push_back(jt);
      }
    }
    doc["constraints"].push_back(jc);
  }
  return doc.dump(2) + "\n";
}

}  // namespace qcsp
