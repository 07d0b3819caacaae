// Command-line front end: validate and check specifications, build and solve
// the generated programs, decode solutions, and enumerate isomers.

#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "molinfer/check.hpp"
#include "molinfer/feature_io.hpp"
#include "molinfer/isomer_pipeline.hpp"
#include "molinfer/milp_build.hpp"
#include "molinfer/solver.hpp"

namespace fs = std::filesystem;
using namespace molinfer;

namespace {

constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kInfeasible = 1, kUsage = 2, kInternal = 3 };

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << content;
  }
  fs::rename(tmp, path);
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct Options {
  bool json_out = false;
  std::string workdir = ".";
  std::string solver_bin;
  std::string solver_args;
  double time_limit = 120.0;
};

std::string shim_path(const char* argv0) {
  // the fallback solver driver sits next to the executable or in tools/
  std::error_code ec;
  fs::path exe = fs::canonical("/proc/self/exe", ec);
  if (!ec) {
    fs::path p = exe.parent_path() / "milp_solve.py";
    if (fs::exists(p)) return p.string();
    p = exe.parent_path().parent_path() / "milp_solve.py";
    if (fs::exists(p)) return p.string();
  }
  fs::path local = fs::path(argv0).parent_path() / "milp_solve.py";
  if (fs::exists(local)) return local.string();
  return "milp_solve.py";
}

SolverConfig make_solver_config(const Options& o, const char* argv0) {
  SolverConfig cfg = SolverConfig::from_environment(shim_path(argv0));
  if (!o.solver_bin.empty()) {
    cfg.binary = o.solver_bin;
    cfg.args = {"{lp}", "{sol}", "{limit}"};
  }
  if (!o.solver_args.empty()) {
    cfg.args.clear();
    std::istringstream is(o.solver_args);
    std::string tok;
    while (is >> tok) cfg.args.push_back(tok);
  }
  cfg.time_limit_seconds = o.time_limit;
  return cfg;
}

void write_run_manifest(const Options& o, const std::string& command,
                        const std::vector<std::string>& inputs, const json& outcome) {
  json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
  json hashes = json::object();
  for (const auto& path : inputs) {
    try {
      hashes[path] = fnv1a(slurp(path));
    } catch (...) {
      hashes[path] = nullptr;
    }
  }
  j["inputs"] = hashes;
  j["outcome"] = outcome;
  fs::create_directories(o.workdir);
  atomic_write((fs::path(o.workdir) / "run_manifest.json").string(), j.dump(2) + "\n");
}

TargetSpec load_spec(const std::string& path) { return parse_spec_text(slurp(path)); }

int cmd_validate(const Options& o, const std::string& spec_path) {
  auto s = load_spec(spec_path);
  auto m = minimum_extension(s.seed, s.core);
  json out{{"valid", true},
           {"vertices", s.seed.n_vertices},
           {"edges", s.seed.edges.size()},
           {"cs", {s.core.cs.lb, s.core.cs.ub}},
           {"n", {s.noncore.n_lb, s.noncore.n_star}},
           {"rho", s.noncore.rho},
           {"minimum_extension_ok", m.condition_holds()}};
  if (o.json_out)
    std::cout << out.dump(2) << "\n";
  else
    std::cout << "valid: " << spec_path << " (cs in [" << s.core.cs.lb << "," << s.core.cs.ub
              << "], n in [" << s.noncore.n_lb << "," << s.noncore.n_star << "], rho "
              << s.noncore.rho << ", minimum extension "
              << (m.condition_holds() ? "ok" : "violates the sufficiency condition") << ")\n";
  return kOk;
}

int cmd_features(const Options& o, const std::string& graph_path, const std::string& spec_path) {
  TargetSpec spec;
  bool have_spec = !spec_path.empty();
  if (have_spec) spec = load_spec(spec_path);
  ElementTable mut = have_spec ? spec.chem.table : ElementTable::builtin();
  auto g = read_graph_file(graph_path, mut);
  g.validate(mut);
  DescriptorAlphabet a = have_spec ? spec.chem.alphabet() : observed_alphabet(g, g.rho, mut);
  int rho = have_spec ? spec.rho() : g.rho;
  auto f = feature_vector(g, rho, a, mut);
  if (o.json_out)
    std::cout << feature_to_json(f, mut).dump(2) << "\n";
  else
    std::cout << f.str(mut) << "\n";
  return kOk;
}

int cmd_check(const Options& o, const std::string& graph_path, const std::string& spec_path) {
  auto spec = load_spec(spec_path);
  ElementTable mut = spec.chem.table;
  auto g = read_graph_file(graph_path, mut);
  auto rep = check_extension(g, spec);
  if (o.json_out) {
    json clauses = json::array();
    for (auto& c : rep.clauses)
      clauses.push_back({{"family", c.family}, {"name", c.name}, {"pass", c.pass},
                         {"witness", c.witness}});
    std::cout << json{{"pass", rep.pass}, {"cs", rep.cs}, {"clauses", clauses}}.dump(2) << "\n";
  } else {
    std::cout << rep.summary();
    std::cout << "cs=" << rep.cs << "\n";
  }
  return rep.pass ? kOk : kInfeasible;
}

int cmd_build_milp(const Options& o, const std::string& spec_path, const std::string& out_path,
                   const std::string& pin_path, const std::string& objective,
                   const std::string& stats_path) {
  auto spec = load_spec(spec_path);
  TargetMode mode;
  if (!pin_path.empty()) {
    mode.pin = true;
    mode.x_star = feature_from_json(json::parse(slurp(pin_path)), spec.chem.table);
  }
  Objective obj = objective == "n" ? Objective::MinimizeN
                  : objective == "mass" ? Objective::MinimizeMass
                                        : Objective::None;
  auto bm = build_model(spec, mode, obj);
  atomic_write(out_path, bm.model.lp_string());
  if (!stats_path.empty()) atomic_write(stats_path, bm.model.stats().dump(2) + "\n");
  json outcome{{"lp", out_path},
               {"vars", bm.model.vars().size()},
               {"cons", bm.model.cons().size()}};
  write_run_manifest(o, "build-milp", {spec_path}, outcome);
  if (o.json_out) std::cout << outcome.dump(2) << "\n";
  else std::cout << "wrote " << out_path << " (" << bm.model.vars().size() << " variables, "
                 << bm.model.cons().size() << " constraints)\n";
  return kOk;
}

int cmd_solve(const Options& o, const char* argv0, const std::string& lp_path) {
  auto cfg = make_solver_config(o, argv0);
  auto a = solve_lp(lp_path, cfg);
  json outcome{{"status", status_name(a.status)}, {"nonzeros", a.values.size()}};
  write_run_manifest(o, "solve", {lp_path}, outcome);
  if (o.json_out) std::cout << outcome.dump(2) << "\n";
  else std::cout << "status: " << status_name(a.status) << " (solution written to " << lp_path
                 << ".sol)\n";
  return a.solution_available() ? kOk : kInfeasible;
}

int cmd_decode(const Options& o, const std::string& spec_path, const std::string& sol_path,
               const std::string& out_path, const std::string& pin_path) {
  auto spec = load_spec(spec_path);
  TargetMode mode;
  if (!pin_path.empty()) {
    mode.pin = true;
    mode.x_star = feature_from_json(json::parse(slurp(pin_path)), spec.chem.table);
  }
  auto bm = build_model(spec, mode);
  Assignment a = parse_solution_text(slurp(sol_path), "generic");
  if (!a.solution_available()) {
    std::cout << "status: " << status_name(a.status) << "\n";
    return kInfeasible;
  }
  auto d = decode_and_verify(bm, spec, a);
  std::string text = graph_to_string(d.graph, spec.chem.table);
  if (out_path.empty())
    std::cout << text;
  else
    atomic_write(out_path, text);
  write_run_manifest(o, "decode", {spec_path, sol_path},
                     {{"n", d.graph.n()}, {"graph", out_path}});
  if (o.json_out)
    std::cout << json{{"n", d.graph.n()},
                      {"features", feature_to_json(d.features, spec.chem.table)}}
                     .dump(2)
              << "\n";
  return kOk;
}

int cmd_infer(const Options& o, const char* argv0, const std::string& spec_path,
              const std::string& out_path, const std::string& pin_path, int count_solutions,
              const std::string& objective) {
  auto spec = load_spec(spec_path);
  TargetMode mode;
  if (!pin_path.empty()) {
    mode.pin = true;
    mode.x_star = feature_from_json(json::parse(slurp(pin_path)), spec.chem.table);
  }
  Objective obj = objective == "n" ? Objective::MinimizeN
                  : objective == "mass" ? Objective::MinimizeMass
                                        : Objective::None;
  auto bm = build_model(spec, mode, obj);
  fs::create_directories(o.workdir);
  auto cfg = make_solver_config(o, argv0);
  std::vector<std::string> graph_files;
  std::set<std::string> seen;
  int round = 0;
  while (count_solutions < 1 ? round < 1 : int(seen.size()) < count_solutions) {
    std::string lp = (fs::path(o.workdir) / ("infer_" + std::to_string(round) + ".lp")).string();
    atomic_write(lp, bm.model.lp_string());
    Assignment a = solve_lp(lp, cfg, &bm.model);
    if (!a.solution_available()) {
      if (round == 0) {
        std::cout << "status: " << status_name(a.status) << "\n";
        write_run_manifest(o, "infer", {spec_path}, {{"status", status_name(a.status)}});
        return kInfeasible;
      }
      break;  // enumerated everything reachable
    }
    auto d = decode_and_verify(bm, spec, a);
    std::string code = canonical_code(d.graph);
    if (seen.insert(code).second) {
      std::string path = out_path.empty()
                             ? (fs::path(o.workdir) /
                                ("inferred_" + std::to_string(seen.size()) + ".graph"))
                                   .string()
                             : out_path;
      atomic_write(path, graph_to_string(d.graph, spec.chem.table));
      graph_files.push_back(path);
      if (!out_path.empty() && count_solutions < 1) break;
    }
    if (count_solutions < 1) break;
    // no-good cut on the binary selection variables of this assignment
    std::vector<LinTerm> cut;
    long long ones = 0;
    for (size_t vi = 0; vi < bm.model.vars().size(); ++vi) {
      const auto& v = bm.model.vars()[vi];
      if (!v.binary) continue;
      long long val = std::llround(a.value(v.name));
      if (val >= 1) {
        cut.push_back({int(vi), -1});
        ++ones;
      } else {
        cut.push_back({int(vi), 1});
      }
    }
    bm.model.add_con("SPEC_link", cut, 1, 1 - ones);
    ++round;
  }
  json outcome{{"status", "feasible"},
               {"solutions", seen.size()},
               {"graphs", graph_files}};
  write_run_manifest(o, "infer", {spec_path}, outcome);
  if (o.json_out) std::cout << outcome.dump(2) << "\n";
  else {
    std::cout << "found " << seen.size() << " graph(s)\n";
    for (auto& f : graph_files) std::cout << "  " << f << "\n";
  }
  return seen.empty() ? kInfeasible : kOk;
}

int cmd_isomers(const Options& o, const std::string& spec_path, const std::string& graph_path,
                long long limit, bool dedupe, int sample_cap, bool count_only) {
  auto spec = load_spec(spec_path);
  ElementTable mut = spec.chem.table;
  auto g = read_graph_file(graph_path, mut);
  IsomerOptions opt;
  opt.limit = count_only ? 1 : limit;
  opt.dedupe = dedupe;
  opt.dp.sample_cap = sample_cap;
  auto res = generate_isomers(g, spec, opt);
  fs::create_directories(o.workdir);
  json files = json::array();
  if (!count_only) {
    for (size_t i = 0; i < res.graphs.size(); ++i) {
      std::string path =
          (fs::path(o.workdir) / ("isomer_" + std::to_string(i + 1) + ".graph")).string();
      atomic_write(path, graph_to_string(res.graphs[i], spec.chem.table));
      files.push_back(path);
    }
  }
  res.manifest["graph_files"] = files;
  atomic_write((fs::path(o.workdir) / "isomer_manifest.json").string(),
               res.manifest.dump(2) + "\n");
  write_run_manifest(o, count_only ? "count" : "isomers", {spec_path, graph_path},
                     {{"count_lower_bound", res.count_bound.str()},
                      {"emitted", count_only ? 0 : res.graphs.size()}});
  if (o.json_out) std::cout << res.manifest.dump(2) << "\n";
  else
    std::cout << "count lower bound: " << res.count_bound.str() << "\n"
              << (count_only ? 0 : res.graphs.size()) << " graph(s) written under " << o.workdir
              << "\n";
  return res.count_bound.is_zero() ? kInfeasible : kOk;
}

int cmd_preset(const Options& o, const std::string& name) {
  auto p = preset_seed(name);
  // wrap into a skeleton specification document
  json doc;
  doc["seed"]["vertices"] = p.seed.n_vertices;
  json edges = json::array();
  for (auto& e : p.seed.edges)
    edges.push_back({{"id", e.id}, {"u", e.u + 1}, {"v", e.v + 1}, {"kind", kind_name(e.kind)}});
  doc["seed"]["edges"] = edges;
  json ell = json::object();
  for (auto& e : p.seed.edges)
    if (e.kind == EdgeKind::Ge2) ell[e.id] = {2, 6};
    else if (e.kind == EdgeKind::Ge1) ell[e.id] = {1, 6};
  doc["core"]["ell"] = ell;
  doc["core"]["cs"] = {p.seed.n_vertices + 1, 12};
  doc["noncore"]["n"] = {p.seed.n_vertices + 1, 20};
  doc["noncore"]["rho"] = 2;
  doc["chem"]["lambda"] = {"C", "N", "O"};
  json side = json::array();
  for (auto& c : p.side) {
    json terms = json::array();
    for (auto& term : c.terms)
      terms.push_back({{"coef", term.coef.num}, {"kind", "ell"},
                       {"edge", p.seed.edges[size_t(term.edge)].id}});
    side.push_back({{"terms", terms}, {"op", c.rel < 0 ? "<=" : c.rel == 0 ? "==" : ">="},
                    {"rhs", c.rhs.num}});
  }
  doc["side"] = side;
  std::cout << doc.dump(2) << "\n";
  (void)o;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inverse molecular inference toolkit"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json", o.json_out, "machine-readable output");
  app.add_option("--workdir", o.workdir, "directory for generated files");
  app.add_option("--solver-bin", o.solver_bin, "external solver binary");
  app.add_option("--solver-args", o.solver_args,
                 "argument template ({lp} {sol} {limit} placeholders)");
  app.add_option("--time-limit", o.time_limit, "solver time limit in seconds");

  std::string spec_path, graph_path, lp_path, sol_path, out_path, pin_path, stats_path;
  std::string objective = "none", preset_name;
  long long limit = -1;
  int count_solutions = 0, sample_cap = 1;
  bool dedupe = false;

  auto* validate = app.add_subcommand("validate", "parse and validate a specification");
  validate->add_option("spec", spec_path)->required();

  auto* features = app.add_subcommand("features", "feature vector of a graph");
  features->add_option("graph", graph_path)->required();
  features->add_option("--spec", spec_path);

  auto* check = app.add_subcommand("check", "test a graph against a specification");
  check->add_option("graph", graph_path)->required();
  check->add_option("spec", spec_path)->required();

  auto* build = app.add_subcommand("build-milp", "generate the feasibility program");
  build->add_option("spec", spec_path)->required();
  build->add_option("-o,--output", lp_path)->required();
  build->add_option("--pin-features", pin_path);
  build->add_option("--objective", objective)->check(CLI::IsMember({"none", "n", "mass"}));
  build->add_option("--stats", stats_path);

  auto* solve = app.add_subcommand("solve", "run the external solver on an LP file");
  solve->add_option("lp", lp_path)->required();

  auto* decode = app.add_subcommand("decode", "decode a solver assignment into a graph");
  decode->add_option("spec", spec_path)->required();
  decode->add_option("solution", sol_path)->required();
  decode->add_option("-o,--output", out_path);
  decode->add_option("--pin-features", pin_path);

  auto* infer = app.add_subcommand("infer", "build, solve and decode in one step");
  infer->add_option("spec", spec_path)->required();
  infer->add_option("-o,--output", out_path);
  infer->add_option("--pin-features", pin_path);
  infer->add_option("--count-solutions", count_solutions);
  infer->add_option("--objective", objective)->check(CLI::IsMember({"none", "n", "mass"}));

  auto* isomers = app.add_subcommand("isomers", "enumerate isomorphic target graphs");
  isomers->add_option("spec", spec_path)->required();
  isomers->add_option("graph", graph_path)->required();
  isomers->add_option("--limit", limit);
  isomers->add_flag("--dedupe", dedupe);
  isomers->add_option("--sample-cap", sample_cap, "samples per vector, -1 keeps all");

  auto* count = app.add_subcommand("count", "count bound without writing graphs");
  count->add_option("spec", spec_path)->required();
  count->add_option("graph", graph_path)->required();
  count->add_option("--sample-cap", sample_cap);

  auto* preset = app.add_subcommand("preset", "print a skeleton spec for a named seed");
  preset->add_option("name", preset_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, spec_path);
    if (features->parsed()) return cmd_features(o, graph_path, spec_path);
    if (check->parsed()) return cmd_check(o, graph_path, spec_path);
    if (build->parsed())
      return cmd_build_milp(o, spec_path, lp_path, pin_path, objective, stats_path);
    if (solve->parsed()) return cmd_solve(o, argv[0], lp_path);
    if (decode->parsed()) return cmd_decode(o, spec_path, sol_path, out_path, pin_path);
    if (infer->parsed())
      return cmd_infer(o, argv[0], spec_path, out_path, pin_path, count_solutions, objective);
    if (isomers->parsed())
      return cmd_isomers(o, spec_path, graph_path, limit, dedupe, sample_cap, false);
    if (count->parsed())
      return cmd_isomers(o, spec_path, graph_path, 0, dedupe, sample_cap, true);
    if (preset->parsed()) return cmd_preset(o, preset_name);
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
