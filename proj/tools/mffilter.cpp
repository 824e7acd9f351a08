// Benchmark harness for the meshfree implicit filter and its baselines.
// Subcommands: run (one method), bench (a method matrix over shared truth
// realizations), emit-plotdata (long-format CSVs from prior trajectories).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "meshfree/io.hpp"
#include "meshfree/runner.hpp"
#include "meshfree/scenarios.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace meshfree;

namespace {

constexpr int kExitDivergence = 1;
constexpr int kExitUsage = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunSpec {
  std::string scenario = "tumor";
  std::string method = "implicit";
  int points = -1;     // N; -1 = scenario default
  int samples = -1;    // M
  int particles = -1;  // P
  int neighbors = -1;  // L
  double epsilon = -1.0;
  double tau = 0.2;
  int reps = 20;
  std::uint64_t seed = 1;
  std::string out = ".";
  std::string weight_mode = "inverse_distance";
  std::string discretization = "euler";
  int threads = 1;
  double jitter_scale = 1.0;
  double idw_exponent = 2.0;
  bool shared_noise = false;
  int steps = -1;   // horizon override
  double dt = -1.0; // step-size override

  json bench_cells = json::array();  // bench subcommand only
};

const std::set<std::string> kKnownKeys = {
    "scenario",   "method",         "points",       "samples",      "particles",
    "neighbors",  "epsilon",        "tau",          "reps",         "seed",
    "out",        "weight_mode",    "discretization", "threads",    "jitter_scale",
    "idw_exponent", "shared_noise", "steps",        "dt",           "bench_cells"};

const std::set<std::string> kKnownCellKeys = {"method",    "points",  "samples", "particles",
                                              "neighbors", "epsilon", "tau"};

void load_config(const std::string& path, RunSpec& spec) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config not readable: " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("config parse error: ") + err.what());
  }
  if (!cfg.is_object()) throw ConfigError("config root must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    if (!kKnownKeys.count(key)) throw ConfigError("unknown config key: " + key);
    try {
      if (key == "scenario") spec.scenario = value.get<std::string>();
      else if (key == "method") spec.method = value.get<std::string>();
      else if (key == "points") spec.points = value.get<int>();
      else if (key == "samples") spec.samples = value.get<int>();
      else if (key == "particles") spec.particles = value.get<int>();
      else if (key == "neighbors") spec.neighbors = value.get<int>();
      else if (key == "epsilon") spec.epsilon = value.get<double>();
      else if (key == "tau") spec.tau = value.get<double>();
      else if (key == "reps") spec.reps = value.get<int>();
      else if (key == "seed") spec.seed = value.get<std::uint64_t>();
      else if (key == "out") spec.out = value.get<std::string>();
      else if (key == "weight_mode") spec.weight_mode = value.get<std::string>();
      else if (key == "discretization") spec.discretization = value.get<std::string>();
      else if (key == "threads") spec.threads = value.get<int>();
      else if (key == "jitter_scale") spec.jitter_scale = value.get<double>();
      else if (key == "idw_exponent") spec.idw_exponent = value.get<double>();
      else if (key == "shared_noise") spec.shared_noise = value.get<bool>();
      else if (key == "steps") spec.steps = value.get<int>();
      else if (key == "dt") spec.dt = value.get<double>();
      else if (key == "bench_cells") {
        if (!value.is_array()) throw ConfigError("bench_cells must be an array");
        for (const auto& cell : value) {
          if (!cell.is_object()) throw ConfigError("bench_cells entries must be objects");
          for (const auto& [ck, cv] : cell.items()) {
            (void)cv;
            if (!kKnownCellKeys.count(ck)) throw ConfigError("unknown bench cell key: " + ck);
          }
        }
        spec.bench_cells = value;
      }
    } catch (const json::type_error& err) {
      throw ConfigError("config key '" + key + "': " + err.what());
    }
  }
}

void validate(const RunSpec& spec) {
  if (spec.scenario != "tumor" && spec.scenario != "bearing" &&
      spec.scenario != "linear_gaussian")
    throw ConfigError("scenario must be one of tumor|bearing|linear_gaussian");
  if (spec.method != "implicit" && spec.method != "pf" && spec.method != "ekf")
    throw ConfigError("method must be one of implicit|pf|ekf");
  if (spec.weight_mode != "inverse_distance" && spec.weight_mode != "paper_literal")
    throw ConfigError("weight_mode must be inverse_distance|paper_literal");
  if (spec.discretization != "euler" && spec.discretization != "paper_literal")
    throw ConfigError("discretization must be euler|paper_literal");
  if (spec.tau < 0.0 || spec.tau > 1.0) throw ConfigError("tau must lie in [0,1]");
  if (spec.reps < 1) throw ConfigError("reps must be >= 1");
  if (spec.threads < 1) throw ConfigError("threads must be >= 1");
  if (spec.points == 0 || spec.samples == 0 || spec.particles == 0 || spec.neighbors == 0)
    throw ConfigError("points/samples/particles/neighbors must be positive when given");
  if (spec.idw_exponent <= 0.0) throw ConfigError("idw_exponent must be positive");
}

Scenario make_scenario(const RunSpec& spec) {
  if (spec.scenario == "tumor") {
    TumorParams p;
    p.mode = spec.discretization == "euler" ? Discretization::Euler
                                            : Discretization::PaperLiteral;
    if (spec.steps > 0) p.steps = spec.steps;
    if (spec.dt > 0) p.dt = spec.dt;
    return tumor_scenario(p);
  }
  if (spec.scenario == "bearing") {
    BearingParams p;
    if (spec.steps > 0) p.steps = spec.steps;
    if (spec.dt > 0) p.dt = spec.dt;
    return bearing_scenario(p);
  }
  LinearGaussianParams p;
  if (spec.steps > 0) p.steps = spec.steps;
  if (spec.dt > 0) p.dt = spec.dt;
  return linear_gaussian_scenario(p);
}

Method parse_method(const std::string& name) {
  if (name == "implicit") return Method::Implicit;
  if (name == "pf") return Method::ParticleFilter;
  return Method::Ekf;
}

MethodConfig make_method_config(const RunSpec& spec, const Scenario& scenario) {
  MethodConfig mc;
  mc.method = parse_method(spec.method);
  mc.filter = scenario.filter_defaults;
  if (spec.points > 0) mc.filter.node_count = spec.points;
  if (spec.samples > 0) mc.filter.noise_samples = spec.samples;
  if (spec.neighbors > 0) mc.filter.shepard.neighbors = spec.neighbors;
  if (spec.epsilon > 0) mc.filter.epsilon = spec.epsilon;
  mc.filter.tau = spec.tau;
  mc.filter.jitter_scale = spec.jitter_scale;
  mc.filter.shepard.idw_exponent = spec.idw_exponent;
  mc.filter.shepard.mode = spec.weight_mode == "paper_literal" ? WeightMode::PaperLiteral
                                                               : WeightMode::InverseDistance;
  mc.filter.shared_noise = spec.shared_noise;
  mc.particles = spec.particles > 0 ? spec.particles : scenario.default_particles;
  return mc;
}

json parameter_echo(const RunSpec& spec, const MethodConfig& mc, const Scenario& scenario) {
  json p;
  p["points"] = mc.filter.node_count;
  p["samples"] = mc.filter.noise_samples;
  p["particles"] = mc.particles;
  p["neighbors"] = mc.filter.shepard.neighbors;
  p["epsilon"] = mc.filter.effective_epsilon();
  p["tau"] = mc.filter.tau;
  p["weight_mode"] = spec.weight_mode;
  p["discretization"] = spec.discretization;
  p["jitter_scale"] = mc.filter.jitter_scale;
  p["idw_exponent"] = mc.filter.shepard.idw_exponent;
  p["shared_noise"] = mc.filter.shared_noise;
  p["steps"] = scenario.steps;
  p["dt"] = scenario.dt;
  return p;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string cell_label(const MethodConfig& mc) {
  switch (mc.method) {
    case Method::Implicit:
      return "implicit_n" + std::to_string(mc.filter.node_count) + "_m" +
             std::to_string(mc.filter.noise_samples);
    case Method::ParticleFilter: return "pf_p" + std::to_string(mc.particles);
    case Method::Ekf: return "ekf";
  }
  return "unknown";
}

json run_block(const Scenario& scenario, const MethodConfig& mc, const MultiRunResult& result,
               const RunSpec& spec, const std::string& label, std::vector<std::string>* files) {
  json block;
  block["method"] = method_name(mc.method);
  block["scenario"] = scenario.name;
  block["parameters"] = parameter_echo(spec, mc, scenario);
  block["config_hash"] = fnv1a_hex(block["parameters"].dump());
  block["repetitions"] = spec.reps;
  block["base_seed"] = spec.seed;
  json seeds = json::array();
  for (const auto& r : result.realizations) seeds.push_back(r.seed);
  block["seeds"] = seeds;
  block["err_G"] = result.err_global;
  block["wall_clock_seconds"] = result.mean_filter_seconds;
  block["divergences"] = result.divergences;
  json reals = json::array();
  for (const auto& r : result.realizations) {
    json entry;
    entry["seed"] = r.seed;
    entry["diverged"] = r.diverged;
    if (r.diverged) entry["reason"] = r.divergence_reason;
    entry["wall_clock_seconds"] = r.filter_seconds;
    reals.push_back(entry);
  }
  block["realizations"] = reals;
  if (files) block["trajectory_files"] = *files;
  block["label"] = label;
  return block;
}

std::vector<std::string> write_trajectories(const Scenario& scenario,
                                            const MultiRunResult& result,
                                            const std::string& label, const fs::path& out_dir) {
  std::vector<std::string> files;
  for (const auto& r : result.realizations) {
    if (r.diverged) continue;
    const std::string name =
        "trajectory_" + scenario.name + "_" + label + "_seed" + std::to_string(r.seed) + ".csv";
    const fs::path path = out_dir / name;
    write_trajectory_csv(path.string(), r);
    files.push_back(name);
  }
  return files;
}

int cmd_run(const RunSpec& spec) {
  const Scenario scenario = make_scenario(spec);
  const MethodConfig mc = make_method_config(spec, scenario);
  const fs::path out_dir(spec.out);
  fs::create_directories(out_dir);

  const MultiRunResult result =
      run_realizations(scenario, mc, spec.seed, spec.reps, spec.threads);
  auto files = write_trajectories(scenario, result, method_name(mc.method), out_dir);

  const json summary = run_block(scenario, mc, result, spec, method_name(mc.method), &files);
  std::ofstream out(out_dir / ("summary_" + scenario.name + "_" + method_name(mc.method) + ".json"));
  out << summary.dump(2) << '\n';

  const int completed = spec.reps - result.divergences;
  std::cout << scenario.name << " " << method_name(mc.method) << ": err_G=" << result.err_global
            << " wall=" << result.mean_filter_seconds << "s divergences=" << result.divergences
            << "/" << spec.reps << "\n";
  return 5 * completed >= 4 * spec.reps ? 0 : kExitDivergence;
}

int cmd_bench(const RunSpec& spec) {
  const Scenario scenario = make_scenario(spec);
  const fs::path out_dir(spec.out);
  fs::create_directories(out_dir);

  // Cells from config, or the standard comparison matrix for the scenario.
  std::vector<MethodConfig> cells;
  std::vector<RunSpec> specs;
  if (spec.bench_cells.empty()) {
    RunSpec implicit_spec = spec;
    implicit_spec.method = "implicit";
    specs.push_back(implicit_spec);
    for (int p : {15000, 20000, 25000}) {
      RunSpec pf_spec = spec;
      pf_spec.method = "pf";
      pf_spec.particles = p;
      specs.push_back(pf_spec);
    }
  } else {
    for (const auto& cell : spec.bench_cells) {
      RunSpec cell_spec = spec;
      if (cell.contains("method")) cell_spec.method = cell["method"].get<std::string>();
      if (cell.contains("points")) cell_spec.points = cell["points"].get<int>();
      if (cell.contains("samples")) cell_spec.samples = cell["samples"].get<int>();
      if (cell.contains("particles")) cell_spec.particles = cell["particles"].get<int>();
      if (cell.contains("neighbors")) cell_spec.neighbors = cell["neighbors"].get<int>();
      if (cell.contains("epsilon")) cell_spec.epsilon = cell["epsilon"].get<double>();
      if (cell.contains("tau")) cell_spec.tau = cell["tau"].get<double>();
      validate(cell_spec);
      specs.push_back(cell_spec);
    }
  }
  for (const RunSpec& s : specs) cells.push_back(make_method_config(s, scenario));

  json bench;
  bench["scenario"] = scenario.name;
  bench["repetitions"] = spec.reps;
  bench["base_seed"] = spec.seed;
  json rows = json::array();

  std::ofstream csv(out_dir / ("bench_" + scenario.name + ".csv"));
  csv << "label,method,err_G,wall_clock_seconds,divergences\n";

  bool majority_ok = true;
  for (size_t c = 0; c < cells.size(); ++c) {
    const MethodConfig& mc = cells[c];
    const std::string label = cell_label(mc);
    const MultiRunResult result =
        run_realizations(scenario, mc, spec.seed, spec.reps, spec.threads);
    auto files = write_trajectories(scenario, result, label, out_dir);
    rows.push_back(run_block(scenario, mc, result, specs[c], label, &files));
    csv << label << ',' << method_name(mc.method) << ',' << format_real(result.err_global) << ','
        << format_real(result.mean_filter_seconds) << ',' << result.divergences << '\n';
    const int completed = spec.reps - result.divergences;
    if (5 * completed < 4 * spec.reps) majority_ok = false;
    std::cout << label << ": err_G=" << result.err_global
              << " wall=" << result.mean_filter_seconds << "s\n";
  }
  bench["cells"] = rows;
  std::ofstream jout(out_dir / ("bench_" + scenario.name + ".json"));
  jout << bench.dump(2) << '\n';
  return majority_ok ? 0 : kExitDivergence;
}

int cmd_emit_plotdata(const std::vector<std::string>& inputs, const std::string& out) {
  const fs::path out_dir(out);
  fs::create_directories(out_dir);
  std::vector<std::pair<std::string, TrajectoryTable>> tables;
  for (const std::string& arg : inputs) {
    std::string label, path;
    const auto eq = arg.find('=');
    if (eq == std::string::npos) {
      path = arg;
      label = fs::path(arg).stem().string();
    } else {
      label = arg.substr(0, eq);
      path = arg.substr(eq + 1);
    }
    tables.emplace_back(label, read_trajectory_csv(path));
  }
  write_plotdata((out_dir / "plotdata_states.csv").string(),
                 (out_dir / "plotdata_err.csv").string(), tables);
  return 0;
}

void add_common_flags(CLI::App* cmd, RunSpec& spec, std::string& config_path) {
  cmd->add_option("--config", config_path, "JSON config file (flags override its keys)");
  cmd->add_option("--scenario", spec.scenario, "tumor|bearing|linear_gaussian");
  cmd->add_option("--points", spec.points, "implicit filter node count N");
  cmd->add_option("--samples", spec.samples, "noise samples per node M");
  cmd->add_option("--particles", spec.particles, "particle count P");
  cmd->add_option("--neighbors", spec.neighbors, "Shepard neighbor count L");
  cmd->add_option("--epsilon", spec.epsilon, "degeneracy threshold");
  cmd->add_option("--tau", spec.tau, "resampling trigger ratio");
  cmd->add_option("--reps", spec.reps, "number of realizations J");
  cmd->add_option("--seed", spec.seed, "base seed (realization j uses seed+j)");
  cmd->add_option("--out", spec.out, "output directory");
  cmd->add_option("--weight-mode", spec.weight_mode, "inverse_distance|paper_literal");
  cmd->add_option("--discretization", spec.discretization, "euler|paper_literal");
  cmd->add_option("--threads", spec.threads, "realization worker pool size");
  cmd->add_option("--steps", spec.steps, "horizon override K");
  cmd->add_option("--jitter-scale", spec.jitter_scale, "resampling jitter multiplier");
}

// Config keys load first; any flag given on the command line wins.
void apply_flag_overrides(const CLI::App* cmd, const RunSpec& flags, RunSpec& spec) {
  auto apply = [&](const char* name, auto member) {
    if (cmd->count(name) > 0) spec.*member = flags.*member;
  };
  apply("--scenario", &RunSpec::scenario);
  apply("--points", &RunSpec::points);
  apply("--samples", &RunSpec::samples);
  apply("--particles", &RunSpec::particles);
  apply("--neighbors", &RunSpec::neighbors);
  apply("--epsilon", &RunSpec::epsilon);
  apply("--tau", &RunSpec::tau);
  apply("--reps", &RunSpec::reps);
  apply("--seed", &RunSpec::seed);
  apply("--out", &RunSpec::out);
  apply("--weight-mode", &RunSpec::weight_mode);
  apply("--discretization", &RunSpec::discretization);
  apply("--threads", &RunSpec::threads);
  apply("--steps", &RunSpec::steps);
  apply("--jitter-scale", &RunSpec::jitter_scale);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"meshfree implicit filtering benchmarks"};
  app.require_subcommand(1);

  RunSpec run_flags, bench_flags;
  std::string run_config, bench_config, run_method;
  std::vector<std::string> plot_inputs;
  std::string plot_out = ".";

  CLI::App* run = app.add_subcommand("run", "run one method over J realizations");
  add_common_flags(run, run_flags, run_config);
  run->add_option("--method", run_method, "implicit|pf|ekf");

  CLI::App* bench = app.add_subcommand("bench", "run a method matrix over shared realizations");
  add_common_flags(bench, bench_flags, bench_config);

  CLI::App* plot = app.add_subcommand("emit-plotdata", "long-format CSVs from trajectory CSVs");
  plot->add_option("inputs", plot_inputs, "trajectory CSVs, optionally label=path")->required();
  plot->add_option("--out", plot_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (run->parsed()) {
      RunSpec spec;
      if (!run_config.empty()) load_config(run_config, spec);
      apply_flag_overrides(run, run_flags, spec);
      if (run->count("--method") > 0) spec.method = run_method;
      validate(spec);
      return cmd_run(spec);
    }
    if (bench->parsed()) {
      RunSpec spec;
      if (!bench_config.empty()) load_config(bench_config, spec);
      apply_flag_overrides(bench, bench_flags, spec);
      validate(spec);
      return cmd_bench(spec);
    }
    if (plot->parsed()) return cmd_emit_plotdata(plot_inputs, plot_out);
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
