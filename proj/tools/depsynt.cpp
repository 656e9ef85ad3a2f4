// Command-line front end. Exit codes: 0 realizable / success, 2 unrealizable
// or failed verification, 1 errors.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "depsynt/controller.hpp"
#include "depsynt/dependency.hpp"
#include "depsynt/error.hpp"
#include "depsynt/nba.hpp"
#include "depsynt/pipeline.hpp"
#include "depsynt/projection.hpp"
#include "depsynt/spec.hpp"

namespace {

using namespace depsynt;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

bool is_hoa(const std::string& path) {
  return std::filesystem::path(path).extension() == ".hoa";
}

double since_ms(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t).count();
}

struct Globals {
  bool timings = false;
  std::uint64_t seed = 0;
  std::size_t state_cap = 5000;
};

int run_deps(const Globals& g, const std::string& path, std::uint64_t budget) {
  const auto t0 = std::chrono::steady_clock::now();
  auto mgr = std::make_shared<BddManager>();
  const Nba nba = is_hoa(path) ? trim(parse_hoa(read_file(path), mgr)) : translate(load_spec(path), mgr, {g.state_cap});
  const double nba_ms = since_ms(t0);
  const auto report = find_maximal_dependent_set(nba, {}, budget);
  const auto stats = dependency_stats(report, nba);
  for (const auto& v : report.vars)
    std::cout << v.name << '\t' << to_string(v.status) << '\t' << std::fixed << std::setprecision(3) << v.millis
              << '\n';
  std::cout.unsetf(std::ios::floatfield);
  std::cout << std::setprecision(6) << "dependent=" << stats.dependent << " total=" << stats.outputs
            << " ratio=" << stats.ratio << '\n';
  if (g.timings) {
    std::cout << "nba_ms,deps_ms\n" << std::fixed << std::setprecision(3) << nba_ms << ',' << report.total_ms << '\n';
  }
  return 0;
}

int run_synth(const Globals& g, const std::string& path, const std::string& out, std::uint64_t budget, bool no_deps,
              const std::string& json_out) {
  const Spec spec = load_spec(path);
  SynthOptions options;
  options.use_deps = !no_deps;
  options.dep_budget_ms = budget;
  options.state_cap = g.state_cap;
  const auto r = synthesize(spec, options);
  if (r.realizable && r.verified == false) {
    std::cerr << "error: synthesized controller failed verification\n";
    return 1;
  }
  std::cout << (r.realizable ? "REALIZABLE" : "UNREALIZABLE") << '\n';
  if (r.realizable && r.controller) {
    if (!out.empty()) write_file(out, emit_aiger(*r.controller));
    if (!json_out.empty()) write_file(json_out, controller_json(*r.controller));
  }
  if (g.timings) {
    const auto& t = r.times;
    std::cout << "nba_ms,deps_ms,nondep_ms,dep_ms,verify_ms,total_ms\n"
              << std::fixed << std::setprecision(3) << t.nba_ms << ',' << t.deps_ms << ',' << t.nondep_ms << ','
              << t.dep_ms << ',' << t.verify_ms << ',' << t.total_ms << '\n';
  }
  return r.realizable ? 0 : 2;
}

int run_project_stats(const Globals& g, const std::string& path, std::uint64_t budget, bool header) {
  auto mgr = std::make_shared<BddManager>();
  const Nba nba = is_hoa(path) ? trim(parse_hoa(read_file(path), mgr)) : translate(load_spec(path), mgr, {g.state_cap});
  const auto report = find_maximal_dependent_set(nba, {}, budget);
  const auto stats = projection_stats(nba, project(nba, report.dependent));
  if (header) std::cout << "spec,states,edges,bdd_before,bdd_after\n";
  std::cout << std::filesystem::path(path).stem().string() << ',' << stats.states << ',' << stats.edges << ','
            << stats.bdd_before << ',' << stats.bdd_after << '\n';
  return 0;
}

int run_verify(const Globals& g, const std::string& spec_path, const std::string& aag_path) {
  const Spec spec = load_spec(spec_path);
  const Controller c = controller_from_aig(Aig::parse_aag(read_file(aag_path)), spec.inputs, spec.outputs);
  VerifyOptions options;
  options.nba_state_cap = g.state_cap;
  const bool ok = verify(c, spec, options);
  std::cout << (ok ? "VERIFIED" : "FAILED") << '\n';
  return ok ? 0 : 2;
}

int run_translate(const Globals& g, const std::string& path, const std::string& hoa, const std::string& dot) {
  const Nba nba = translate(load_spec(path), nullptr, {g.state_cap});
  std::cout << "states=" << nba.state_count() << " edges=" << nba.edges().size() << '\n';
  if (!hoa.empty()) write_file(hoa, emit_hoa(nba));
  if (!dot.empty()) write_file(dot, nba.to_dot());
  return 0;
}

int run_gen_midbit(int n, const std::string& out) {
  const std::string text = to_string(gen_midbit_spec(n));
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reactive synthesis with dependent output variables"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--timings", g.timings, "Print the phase breakdown as CSV");
  app.add_option("--seed", g.seed, "Seed for randomized choices (the pipeline is deterministic)");
  app.add_option("--state-cap", g.state_cap, "Maximum automaton states")->check(CLI::PositiveNumber);

  std::string path, out, json_out, hoa, dot, aag;
  std::uint64_t budget = 12000;
  bool no_deps = false;
  bool header = false;
  int n = 0;

  auto* deps = app.add_subcommand("deps", "Report dependent outputs");
  deps->add_option("spec", path, "Specification (.hoa for an automaton)")->required();
  deps->add_option("--dep-budget-ms", budget, "Per-variable budget in milliseconds");

  auto* synth = app.add_subcommand("synth", "Synthesize a controller");
  synth->add_option("spec", path, "Specification")->required();
  synth->add_option("-o,--output", out, "AIGER output file");
  synth->add_option("--dep-budget-ms", budget, "Per-variable budget in milliseconds");
  synth->add_flag("--no-deps", no_deps, "Treat every output as non-dependent");
  synth->add_option("--json", json_out, "Write the explicit controller as JSON");

  auto* pstats = app.add_subcommand("project-stats", "Edge BDD sizes before and after projection");
  pstats->add_option("spec", path, "Specification")->required();
  pstats->add_option("--dep-budget-ms", budget, "Per-variable budget in milliseconds");
  pstats->add_flag("--header", header, "Print the CSV header");

  auto* ver = app.add_subcommand("verify", "Check a controller against a specification");
  ver->add_option("spec", path, "Specification")->required();
  ver->add_option("controller", aag, "AIGER controller")->required();

  auto* tr = app.add_subcommand("translate", "Build the Büchi automaton");
  tr->add_option("spec", path, "Specification")->required();
  tr->add_option("--hoa", hoa, "HOA output file");
  tr->add_option("--dot", dot, "DOT output file");

  auto* gen = app.add_subcommand("gen-midbit", "Write the middle-bit multiplier specification");
  gen->add_option("n", n, "Operand width")->required();
  gen->add_option("-o,--output", out, "Output file");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*deps) return run_deps(g, path, budget);
    if (*synth) return run_synth(g, path, out, budget, no_deps, json_out);
    if (*pstats) return run_project_stats(g, path, budget, header);
    if (*ver) return run_verify(g, path, aag);
    if (*tr) return run_translate(g, path, hoa, dot);
    if (*gen) return run_gen_midbit(n, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
