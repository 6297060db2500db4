// rideshare: generate instances, enumerate trips, and solve matching,
// fairness, frontier and trade-off problems from the command line.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "rideshare/analysis.hpp"
#include "rideshare/fairness.hpp"
#include "rideshare/generator.hpp"
#include "rideshare/instance_io.hpp"
#include "rideshare/matching.hpp"
#include "rideshare/report.hpp"
#include "rideshare/rtv.hpp"

namespace rs = rideshare;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitValidation = 3;
constexpr int kExitLimit = 4;

struct RunConfig {
  std::string instance;
  std::string problem;
  std::string generate;
  int users = 50;
  std::string ratio = "1:1";
  std::uint64_t seed = 1;
  bool ir = false;
  bool stability = false;
  bool role_flex = false;
  int max_trip_size = 0;
  std::vector<double> thetas;
  std::string theta_file;
  std::string objective = "cost";
  bool no_decompose = false;
  bool no_warm_start = false;
  std::string out;
  int jobs = 0;
  int runs = 20;
  int max_iters = 200;
};

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void emit(const RunConfig& cfg, const std::string& name, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << "# " << name << '\n' << text;
    return;
  }
  std::filesystem::create_directories(cfg.out);
  rs::write_text_file((std::filesystem::path(cfg.out) / name).string(), text);
}

int jobs_of(const RunConfig& cfg) {
  if (cfg.jobs > 0) return cfg.jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

void check_config(const RunConfig& cfg) {
  for (double t : cfg.thetas) {
    if (!(t >= 0.0 && t <= 1.0)) throw rs::ValidationError("--theta must lie in [0, 1]");
  }
  if (cfg.users < 1) throw rs::ValidationError("--users must be positive");
  if (cfg.max_trip_size < 0) throw rs::ValidationError("--max-trip-size must be nonnegative");
  if (!cfg.generate.empty()) rs::parse_ratio(cfg.ratio);
}

rs::Instance generated(const RunConfig& cfg) {
  const auto ratio = rs::parse_ratio(cfg.ratio);
  if (cfg.generate == "rush") {
    rs::RushHourConfig g;
    g.users = cfg.users;
    g.ratio = ratio;
    g.seed = cfg.seed;
    return rs::gen_rush_hour(g);
  }
  rs::UniformConfig g;
  g.users = cfg.users;
  g.ratio = ratio;
  g.seed = cfg.seed;
  return rs::gen_uniform(g);
}

// Each driver gets a mirror rider; the pair either drives or rides.
std::vector<std::pair<int, int>> add_mirror_riders(rs::Instance& inst) {
  std::vector<std::pair<int, int>> pairs;
  for (int d = 0; d < static_cast<int>(inst.drivers.size()); ++d) {
    const auto& drv = inst.drivers[d];
    rs::Rider r;
    static_cast<rs::User&>(r) = static_cast<const rs::User&>(drv);
    r.id = drv.id + "/rider";
    r.lambda = drv.value;
    pairs.emplace_back(d, static_cast<int>(inst.riders.size()));
    inst.riders.push_back(r);
  }
  return pairs;
}

struct Pipeline {
  rs::MatchingProblem problem;
  rs::MatchOptions match;
  double seconds_enumeration = 0.0;
};

Pipeline build(const RunConfig& cfg) {
  check_config(cfg);
  Pipeline out;
  out.match.require_ir = cfg.ir;
  out.match.require_stability = cfg.stability;
  out.match.objective = cfg.objective == "welfare" ? rs::ObjectiveMode::kWelfare : rs::ObjectiveMode::kCost;
  out.match.decompose = !cfg.no_decompose;
  out.match.jobs = jobs_of(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  if (!cfg.problem.empty()) {
    if (cfg.role_flex) throw rs::ValidationError("--role-flex needs an instance, not a cost table");
    out.problem = rs::load_matching_problem(cfg.problem);
  } else {
    std::vector<std::string> warnings;
    rs::Instance inst = cfg.instance.empty() ? generated(cfg) : rs::load_instance(cfg.instance, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    const auto problems = rs::validate(inst);
    if (!problems.empty()) {
      std::string msg = "invalid instance:";
      for (const auto& p : problems) msg += "\n  " + p;
      throw rs::ValidationError(msg);
    }
    if (cfg.role_flex) out.match.role_flex = add_mirror_riders(inst);
    rs::RtvOptions opts;
    if (cfg.max_trip_size > 0) opts.max_trip_size = cfg.max_trip_size;
    opts.warm_start = !cfg.no_warm_start;
    opts.decompose = !cfg.no_decompose;
    opts.jobs = jobs_of(cfg);
    const auto rv = rs::build_rv(inst);
    out.problem = rs::build_rtv(inst, rv, opts);
  }
  out.seconds_enumeration = elapsed(t0);
  return out;
}

rs::FairnessOptions fairness_options(const Pipeline& p) {
  rs::FairnessOptions f;
  f.match = p.match;
  f.match.objective = rs::ObjectiveMode::kCost;
  return f;
}

int cmd_generate(const RunConfig& cfg) {
  if (cfg.generate.empty()) throw rs::ValidationError("generate needs --generate rush|uniform");
  check_config(cfg);
  const auto inst = generated(cfg);
  emit(cfg, "instance.json", rs::dump_instance(inst));
  std::cerr << "seed " << cfg.seed << ": " << inst.drivers.size() << " drivers, " << inst.riders.size()
            << " riders\n";
  return kExitOk;
}

int cmd_match(const RunConfig& cfg) {
  const auto pipe = build(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = rs::solve_matching(pipe.problem, pipe.match);
  if (!res.optimal()) {
    std::cerr << (cfg.stability ? "no stable matching exists" : "no feasible matching") << '\n';
    return kExitInfeasible;
  }
  emit(cfg, "matching.csv", rs::matching_csv(pipe.problem, res.matching));
  emit(cfg, "summary.csv",
       rs::matching_summary_csv(pipe.problem, res.matching, pipe.seconds_enumeration + elapsed(t0)));
  return kExitOk;
}

std::vector<double> read_thetas(const RunConfig& cfg, const rs::MatchingProblem& p) {
  const std::string text = rs::read_text_file(cfg.theta_file);
  std::vector<double> out(p.riders.size(), 0.0);
  std::vector<char> seen(p.riders.size(), 0);
  std::size_t pos = 0;
  int line = 0;
  while (pos < text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const std::string row = text.substr(pos, end - pos);
    pos = end + 1;
    ++line;
    if (row.empty() || row[0] == '#') continue;
    const auto comma = row.find(',');
    if (comma == std::string::npos) throw rs::ValidationError(cfg.theta_file + ":" + std::to_string(line) + ": expected id,theta");
    const std::string id = row.substr(0, comma);
    if (id == "rider") continue;
    int r = -1;
    for (int i = 0; i < static_cast<int>(p.riders.size()); ++i) {
      if (p.riders[i].id == id) r = i;
    }
    if (r < 0) throw rs::ValidationError(cfg.theta_file + ":" + std::to_string(line) + ": unknown rider '" + id + "'");
    double v = 0.0;
    try {
      v = std::stod(row.substr(comma + 1));
    } catch (const std::exception&) {
      throw rs::ValidationError(cfg.theta_file + ":" + std::to_string(line) + ": bad number");
    }
    out[r] = v;
    seen[r] = 1;
  }
  return out;
}

int cmd_fair(const RunConfig& cfg) {
  if (cfg.thetas.size() > 1) throw rs::ValidationError("fair takes a single --theta");
  if (cfg.thetas.empty() == cfg.theta_file.empty()) throw rs::ValidationError("fair needs exactly one of --theta, --theta-file");
  const auto pipe = build(cfg);
  const auto opts = fairness_options(pipe);
  const auto res = cfg.theta_file.empty() ? rs::min_cost_fair(pipe.problem, cfg.thetas[0], opts)
                                          : rs::min_cost_fair_hetero(pipe.problem, read_thetas(cfg, pipe.problem), opts);
  if (!res.optimal()) {
    std::cerr << "fairness level not attainable\n";
    return kExitInfeasible;
  }
  emit(cfg, "lottery.csv", rs::lottery_csv(pipe.problem, res.matching));
  std::string summary = "expected_cost,slope,support,iterations\n" + rs::format_number(res.cost) + ',' +
                        rs::format_number(res.slope) + ',' + std::to_string(res.matching.support.size()) + ',' +
                        std::to_string(res.iterations) + '\n';
  emit(cfg, "fair_summary.csv", summary);
  return kExitOk;
}

int cmd_pareto(const RunConfig& cfg) {
  const auto pipe = build(cfg);
  const auto frontier = rs::pareto_frontier(pipe.problem, cfg.max_iters, fairness_options(pipe));
  if (frontier.no_feasible_riders) std::cerr << "no feasible riders; frontier is a single point\n";
  if (frontier.approximate) std::cerr << "iteration cap reached; frontier is approximate\n";
  emit(cfg, "frontier.csv", rs::frontier_csv(frontier));
  return kExitOk;
}

int cmd_analyze(const RunConfig& cfg) {
  const auto pipe = build(cfg);
  auto thetas = cfg.thetas;
  if (thetas.empty()) thetas = {0.0, 0.1, 0.2};
  const auto rep = rs::tradeoff_report(pipe.problem, thetas, fairness_options(pipe));
  emit(cfg, "tradeoff.csv", rs::tradeoff_csv(rep));
  return kExitOk;
}

// Random small inputs checked against the brute-force oracles.
int cmd_oracle_check(const RunConfig& cfg) {
  check_config(cfg);
  int failures = 0;
  for (int run = 0; run < cfg.runs; ++run) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(run);
    rs::RushHourConfig g;
    g.users = 8;
    g.ratio = {1, 3};
    g.seed = seed;
    const auto inst = rs::gen_rush_hour(g);
    std::mt19937_64 rng(seed);
    for (int d = 0; d < static_cast<int>(inst.drivers.size()); ++d) {
      std::vector<int> riders;
      for (int r = 0; r < static_cast<int>(inst.riders.size()); ++r) {
        if (riders.size() < 2 && rng() % 3 == 0) riders.push_back(r);
      }
      const auto fast = rs::trip_cost(inst, d, riders);
      const auto slow = rs::oracle_trip_cost(inst, d, riders);
      const bool ok = fast.feasible() == slow.feasible() && (!fast.feasible() || (fast.cost <= slow.cost + 1e-6 &&
                                                                                  slow.cost - fast.cost <= 0.2));
      if (!ok) {
        ++failures;
        std::cout << "seed " << seed << " driver " << d << ": trip " << fast.cost << " vs oracle " << slow.cost << '\n';
      }
    }
    rs::RtvOptions ro;
    ro.max_trip_size = 2;
    const auto problem = rs::build_rtv(inst, rs::build_rv(inst), ro);
    for (int flags = 0; flags < 4; ++flags) {
      rs::MatchOptions mo;
      mo.require_ir = flags & 1;
      mo.require_stability = flags & 2;
      const auto res = rs::solve_matching(problem, mo);
      const auto ref = rs::oracle_matching(problem, mo);
      const bool ok = res.optimal() == ref.has_value() &&
                      (!ref || std::abs(rs::matching_objective(problem, res.matching, mo) -
                                        rs::matching_objective(problem, *ref, mo)) <= 1e-6);
      if (!ok) {
        ++failures;
        std::cout << "seed " << seed << " flags " << flags << ": matching disagrees with oracle\n";
      }
    }
  }
  std::cout << (failures == 0 ? "oracle-check: all agree" : "oracle-check: " + std::to_string(failures) + " mismatches")
            << " over " << cfg.runs << " seeds\n";
  return failures == 0 ? kExitOk : 1;
}

void add_source_options(CLI::App* sub, RunConfig& cfg) {
  auto* inst = sub->add_option("--instance", cfg.instance, "Instance JSON file")->check(CLI::ExistingFile);
  auto* prob = sub->add_option("--problem", cfg.problem, "Cost-table JSON file (drivers, riders, pairs)")
                   ->check(CLI::ExistingFile);
  auto* gen = sub->add_option("--generate", cfg.generate, "Synthetic generator")
                  ->check(CLI::IsMember({"rush", "uniform"}));
  inst->excludes(prob)->excludes(gen);
  prob->excludes(gen);
  sub->add_option("--users", cfg.users, "Users to generate");
  sub->add_option("--ratio", cfg.ratio, "Driver:rider ratio, e.g. 1:4");
  sub->add_option("--seed", cfg.seed, "Generator seed");
}

void add_model_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_flag("--ir", cfg.ir, "Require individual rationality");
  sub->add_flag("--stability", cfg.stability, "Require stability");
  sub->add_flag("--role-flex", cfg.role_flex, "Drivers may ride instead of driving");
  sub->add_option("--max-trip-size", cfg.max_trip_size, "Cap on riders per trip (0 = capacity)");
  sub->add_option("--objective", cfg.objective, "cost or welfare")->check(CLI::IsMember({"cost", "welfare"}));
  sub->add_flag("--no-decompose", cfg.no_decompose, "Solve as one program");
  sub->add_flag("--no-warm-start", cfg.no_warm_start, "Disable trip warm starts");
  sub->add_option("--jobs", cfg.jobs, "Worker threads (default: all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Peer-to-peer ridesharing matching engine"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* gen = app.add_subcommand("generate", "Write a synthetic instance");
  add_source_options(gen, cfg);
  gen->add_option("--out", cfg.out, "Output directory (default: stdout)");

  std::vector<std::pair<CLI::App*, int (*)(const RunConfig&)>> commands;
  const auto solver_cmd = [&](const char* name, const char* help, int (*fn)(const RunConfig&)) {
    auto* sub = app.add_subcommand(name, help);
    add_source_options(sub, cfg);
    add_model_options(sub, cfg);
    sub->add_option("--out", cfg.out, "Output directory (default: stdout)");
    commands.emplace_back(sub, fn);
    return sub;
  };
  solver_cmd("match", "Minimum-cost (or welfare) deterministic matching", cmd_match);
  auto* fair = solver_cmd("fair", "Minimum-cost θ-fair probabilistic matching", cmd_fair);
  fair->add_option("--theta", cfg.thetas, "Fairness level in [0, 1]");
  fair->add_option("--theta-file", cfg.theta_file, "CSV of rider,theta rows")->check(CLI::ExistingFile);
  auto* pareto = solver_cmd("pareto", "Exact cost/fairness frontier", cmd_pareto);
  pareto->add_option("--max-iters", cfg.max_iters, "Probe cap before the frontier is flagged approximate");
  auto* analyze = solver_cmd("analyze", "Prices of fairness and stability", cmd_analyze);
  analyze->add_option("--theta", cfg.thetas, "Fairness levels (repeatable)");
  auto* oracle = app.add_subcommand("oracle-check", "Compare solvers with brute force on random inputs");
  oracle->add_option("--seed", cfg.seed, "First seed");
  oracle->add_option("--runs", cfg.runs, "Number of seeds");
  commands.emplace_back(gen, cmd_generate);
  commands.emplace_back(oracle, cmd_oracle_check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }
  try {
    for (const auto& [sub, fn] : commands) {
      if (sub->parsed()) return fn(cfg);
    }
  } catch (const rs::LimitError& e) {
    std::cerr << "limit: " << e.what() << '\n';
    return kExitLimit;
  } catch (const rs::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}
