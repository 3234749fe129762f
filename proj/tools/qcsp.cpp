#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qcsp/calculi.hpp"
#include "qcsp/certificates.hpp"
#include "qcsp/instance_io.hpp"
#include "qcsp/oracle.hpp"
#include "qcsp/reductions.hpp"
#include "qcsp/solver.hpp"
#include "qcsp/tree_decomposition.hpp"

namespace {

using namespace qcsp;

constexpr int kExitSat = 0;
constexpr int kExitUnsat = 1;
constexpr int kExitError = 2;

void print_network(std::ostream& out, const Instance& inst, const AtomicNetwork& net) {
  for (const auto& [t, r] : net.entries()) {
    out << inst.calc->relation(r).name << '(';
    for (int i = 0; i < t.size(); ++i) out << (i ? "," : "") << inst.name_of(t[i]);
    out << ")\n";
  }
}

void print_model(std::ostream& out, const Instance& inst, const Model& model) {
  for (VarId v : inst.vars) {
    out << inst.name_of(v) << " = ";
    if (const auto* m = std::get_if<PointModel>(&model)) {
      out << m->value.at(v);
    } else if (const auto* m = std::get_if<IntervalModel>(&model)) {
      auto [lo, hi] = m->interval.at(v);
      out << '[' << lo << ", " << hi << ']';
    } else if (const auto* m = std::get_if<PlaneModel>(&model)) {
      auto [x, y] = m->point.at(v);
      out << '(' << x << ", " << y << ')';
    } else if (const auto* m = std::get_if<BoxModel>(&model)) {
      bool first = true;
      for (auto [lo, hi] : m->box.at(v)) {
        out << (first ? "" : " x ") << '[' << lo << ", " << hi << ']';
        first = false;
      }
    } else if (const auto* m = std::get_if<Rcc5SetModel>(&model)) {
      out << '{';
      bool first = true;
      for (const auto& region : m->regions.at(v)) {
        out << (first ? "" : ", ") << region;
        first = false;
      }
      out << '}';
    } else if (const auto* m = std::get_if<PhyloTreeModel>(&model)) {
      out << "leaf " << m->leaf_of.at(v);
    }
    out << '\n';
  }
}

NiceDecomposition decomposition_for(const Instance& inst, const std::string& td_file,
                                    const std::string& td_mode) {
  Graph g = primal_graph(inst);
  TreeDecomposition td;
  if (!td_file.empty()) {
    std::ifstream in(td_file);
    if (!in) throw ParseError("cannot open decomposition file '" + td_file + "'");
    td = read_decomposition(in, inst.var_names);
    if (auto err = validate(td, g)) throw ParseError("decomposition invalid: " + *err);
  } else {
    td = decompose(g, td_mode == "exact" ? DecomposeMode::Exact : DecomposeMode::Heuristic);
  }
  return make_nice(td);
}

int cmd_solve(const std::string& input, const std::string& td_file, const std::string& td_mode,
              bool witness, bool no_witness, bool model, const std::string& stats_path,
              bool parallel) {
  Instance inst = load_instance(input);
  NiceDecomposition nd = decomposition_for(inst, td_file, td_mode);

  SolveOptions opts;
  opts.retain_records = !no_witness;
  opts.parallel = parallel;
  SolveOutcome outcome = solve(inst, nd, opts);

  if (!stats_path.empty()) {
    std::ofstream out(stats_path);
    if (!out) throw Error("cannot write stats file '" + stats_path + "'");
    write_stats_csv(out, outcome.stats);
  }

  std::cout << (outcome.sat ? "SAT" : "UNSAT") << '\n';
  if (outcome.sat && (witness || model)) {
    if (no_witness) throw Error("--witness/--model need record retention (drop --no-witness)");
    AtomicNetwork cert = extract_certificate(inst, nd, outcome.records);
    if (witness) print_network(std::cout, inst, cert);
    if (model) {
      if (!inst.calc->has_realizer())
        throw Error("calculus '" + inst.calc->name + "' has no model realizer");
      auto m = inst.calc->realize(cert);
      if (!m) throw Error("internal: witness certificate failed to realize");
      print_model(std::cout, inst, *m);
    }
  }
  return outcome.sat ? kExitSat : kExitUnsat;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Treewidth-based solver for CSPs over qualitative calculi"};
  app.require_subcommand(1);
  app.footer(
      "Instance files are JSON documents (see docs/format.md).\n"
      "QCSP_DATA_DIR can point at a directory with composition-table overrides\n"
      "(rcc8.tbl, rcc5.tbl).");

  std::string input, td_file, output;
  std::string td_mode = "heuristic";
  std::string stats_path;
  bool witness = false, no_witness = false, model = false, parallel = false;

  auto* solve_cmd = app.add_subcommand("solve", "Decide an instance file");
  solve_cmd->add_option("--input", input, "instance file")->required();
  solve_cmd->add_option("--decomposition", td_file, "externally computed tree decomposition");
  solve_cmd->add_option("--td", td_mode, "decomposition mode when none is given")
      ->check(CLI::IsMember({"heuristic", "exact"}));
  solve_cmd->add_flag("--witness", witness, "print an extracted certificate");
  solve_cmd->add_flag("--no-witness", no_witness, "drop provenance records, saves memory");
  solve_cmd->add_flag("--model", model, "realize and print a concrete model");
  solve_cmd->add_option("--stats", stats_path, "write per-node statistics CSV");
  solve_cmd->add_flag("--parallel", parallel, "process independent subtrees concurrently");

  auto* gen_cmd = app.add_subcommand("gen", "Instance generators");
  gen_cmd->require_subcommand(1);
  std::string graph_file;
  int colours = 3;
  auto* gen_col = gen_cmd->add_subcommand("coloring-cdc", "Vertex colouring as a CDC instance");
  gen_col->add_option("--graph", graph_file, "edge-list file (`u v` per line)")->required();
  gen_col->add_option("-k,--colours", colours, "number of colours")->required();
  gen_col->add_option("--output", output, "output instance file (default stdout)");
  auto* gen_ia = gen_cmd->add_subcommand("cdc-to-ia", "Translate a CDC instance to IA");
  gen_ia->add_option("--input", input, "CDC instance file")->required();
  gen_ia->add_option("--output", output, "output instance file (default stdout)");

  auto* dec_cmd = app.add_subcommand("decompose", "Emit a tree decomposition");
  dec_cmd->add_option("--input", input, "instance file")->required();
  dec_cmd->add_option("--mode", td_mode, "heuristic or exact")
      ->check(CLI::IsMember({"heuristic", "exact"}));
  dec_cmd->add_option("--output", output, "output file (default stdout)");

  auto* count_cmd = app.add_subcommand("count", "Count complete satisfiable networks");
  std::string calculus;
  int m = 2;
  count_cmd->add_option("--calculus", calculus, "calculus name")->required();
  count_cmd->add_option("-m,--vars", m, "number of variables")->required();

  auto* oracle_cmd = app.add_subcommand("oracle", "Desk-scale ground-truth tools");
  oracle_cmd->require_subcommand(1);
  auto* brute_cmd = oracle_cmd->add_subcommand("brute-solve", "Global certificate enumeration");
  brute_cmd->add_option("--input", input, "instance file")->required();

  try {
    app.parse(argc, argv);

    if (solve_cmd->parsed())
      return cmd_solve(input, td_file, td_mode, witness, no_witness, model, stats_path, parallel);

    if (gen_col->parsed()) {
      std::ifstream in(graph_file);
      if (!in) throw ParseError("cannot open graph file '" + graph_file + "'");
      Instance inst = coloring_to_cdc(read_edge_list(in, colours));
      std::string text = serialize_instance(inst);
      if (output.empty())
        std::cout << text;
      else
        std::ofstream(output) << text;
      return kExitSat;
    }
    if (gen_ia->parsed()) {
      Instance inst = cdc_to_ia(load_instance(input));
      std::string text = serialize_instance(inst);
      if (output.empty())
        std::cout << text;
      else
        std::ofstream(output) << text;
      return kExitSat;
    }
    if (dec_cmd->parsed()) {
      Instance inst = load_instance(input);
      Graph g = primal_graph(inst);
      TreeDecomposition td =
          decompose(g, td_mode == "exact" ? DecomposeMode::Exact : DecomposeMode::Heuristic);
      int w = td.width();
      std::ostringstream header;
      header << "# width " << std::max(w, 0);
      if (w < 0) header << " (single empty bag)";
      header << "\n";
      if (output.empty()) {
        std::cout << header.str();
        write_decomposition(std::cout, td, inst.var_names);
      } else {
        std::ofstream out(output);
        out << header.str();
        write_decomposition(out, td, inst.var_names);
      }
      return kExitSat;
    }
    if (count_cmd->parsed()) {
      std::cout << count_complete_satisfiable(find_calculus(calculus), m) << '\n';
      return kExitSat;
    }
    if (brute_cmd->parsed()) {
      Instance inst = load_instance(input);
      bool sat = brute_solve(inst);
      std::cout << (sat ? "SAT" : "UNSAT") << '\n';
      return sat ? kExitSat : kExitUnsat;
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const qcsp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
