// Command-line front end; talks to the library exclusively through the C API.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "episim/episim.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

int exit_code_for(episim_status st) {
  switch (st) {
    case EPISIM_OK: return kExitOk;
    case EPISIM_ERR_VALIDATION: return kExitValidation;
    case EPISIM_ERR_NO_CONVERGENCE: return kExitValidation;
    default: return kExitIo;
  }
}

int report(episim_status st) {
  if (st == EPISIM_OK) return kExitOk;
  std::fprintf(stderr, "error: %s\n", episim_last_error());
  return exit_code_for(st);
}

std::string fmt(double v) {
  if (v != v) return "";  // NaN renders as a missing value
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

using MatrixPtr = std::unique_ptr<episim_matrix, decltype(&episim_matrix_free)>;
using ScenarioPtr = std::unique_ptr<episim_scenario, decltype(&episim_scenario_free)>;
using ResultPtr = std::unique_ptr<episim_result, decltype(&episim_result_free)>;
using RankingPtr = std::unique_ptr<episim_ranking, decltype(&episim_ranking_free)>;

struct ScenarioOptions {
  std::string scenario_path;
  std::string engine;
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned replicas = 0;
};

int load_scenario(const ScenarioOptions& opt, ScenarioPtr& out) {
  episim_scenario* raw = nullptr;
  if (auto st = episim_scenario_read(opt.scenario_path.c_str(), &raw); st != EPISIM_OK)
    return report(st);
  out = ScenarioPtr(raw, &episim_scenario_free);
  if (!opt.engine.empty())
    if (auto st = episim_scenario_set_engine(out.get(), opt.engine.c_str()); st != EPISIM_OK)
      return report(st);
  if (opt.seed_set)
    if (auto st = episim_scenario_set_seed(out.get(), opt.seed); st != EPISIM_OK)
      return report(st);
  if (opt.replicas > 0)
    if (auto st = episim_scenario_set_replicas(out.get(), opt.replicas); st != EPISIM_OK)
      return report(st);
  return kExitOk;
}

int check_valid(const episim_scenario* s, bool print_ok) {
  char* reportbuf = nullptr;
  size_t count = 0;
  if (auto st = episim_scenario_validate(s, &reportbuf, &count); st != EPISIM_OK)
    return report(st);
  if (count == 0) {
    if (print_ok) std::printf("OK\n");
    return kExitOk;
  }
  std::fprintf(stderr, "%zu violation(s):\n%s\n", count, reportbuf ? reportbuf : "");
  episim_string_free(reportbuf);
  return kExitValidation;
}

int cmd_validate(const ScenarioOptions& opt) {
  ScenarioPtr scenario(nullptr, &episim_scenario_free);
  if (int rc = load_scenario(opt, scenario); rc != kExitOk) return rc;
  return check_valid(scenario.get(), /*print_ok=*/true);
}

int cmd_run(const ScenarioOptions& opt, const std::string& out_dir) {
  ScenarioPtr scenario(nullptr, &episim_scenario_free);
  if (int rc = load_scenario(opt, scenario); rc != kExitOk) return rc;
  if (int rc = check_valid(scenario.get(), /*print_ok=*/false); rc != kExitOk) return rc;

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::fprintf(stderr, "error: cannot create %s\n", out_dir.c_str());
    return kExitIo;
  }

  const unsigned replicas = episim_scenario_replicas(scenario.get());
  std::vector<ResultPtr> results;
  std::vector<const episim_result*> raw;
  for (unsigned r = 0; r < replicas; ++r) {
    episim_result* res = nullptr;
    if (auto st = episim_run(scenario.get(), r, &res); st != EPISIM_OK) return report(st);
    results.emplace_back(res, &episim_result_free);
    raw.push_back(res);

    const std::string name = replicas == 1
                                 ? out_dir + "/trajectory.csv"
                                 : out_dir + "/trajectory_" + std::to_string(r) + ".csv";
    if (auto st = episim_result_write_trajectory(res, name.c_str()); st != EPISIM_OK)
      return report(st);
  }
  const std::string summary_path = out_dir + "/summary.csv";
  if (auto st = episim_results_write_summary(raw.data(), raw.size(), summary_path.c_str());
      st != EPISIM_OK)
    return report(st);

  double i_inf = 0, tau = 0, r0 = 0;
  int stationary = 0;
  episim_result_summary(raw[0], &i_inf, &tau, &stationary, &r0);
  std::printf("i_inf=%s,tau=%s,stationary=%s\n", fmt(i_inf).c_str(), fmt(tau).c_str(),
              stationary ? "true" : "false");
  return kExitOk;
}

int cmd_sweep(const ScenarioOptions& opt, const std::string& out_dir, unsigned threads) {
  ScenarioPtr scenario(nullptr, &episim_scenario_free);
  if (int rc = load_scenario(opt, scenario); rc != kExitOk) return rc;
  if (int rc = check_valid(scenario.get(), /*print_ok=*/false); rc != kExitOk) return rc;
  return report(episim_sweep(scenario.get(), out_dir.c_str(), threads));
}

int cmd_centrality(const std::string& matrix_path, const std::string& kind,
                   const std::string& out_dir) {
  episim_matrix* raw = nullptr;
  if (auto st = episim_matrix_read(matrix_path.c_str(), &raw); st != EPISIM_OK)
    return report(st);
  MatrixPtr matrix(raw, &episim_matrix_free);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  std::vector<std::string> kinds;
  if (kind == "all")
    kinds = {"degree", "closeness", "betweenness", "eigenvector"};
  else
    kinds = {kind};
  for (const auto& k : kinds) {
    episim_ranking* rr = nullptr;
    if (auto st = episim_centrality(matrix.get(), k.c_str(), &rr); st != EPISIM_OK)
      return report(st);
    RankingPtr ranking(rr, &episim_ranking_free);
    const std::string path = out_dir + "/centrality_" + k + ".csv";
    if (auto st = episim_ranking_write(ranking.get(), path.c_str()); st != EPISIM_OK)
      return report(st);
  }
  return kExitOk;
}

int cmd_build_matrix(const std::string& type, const std::string& records, size_t n,
                     std::int64_t max_gap, const std::string& out_path) {
  episim_matrix* raw = nullptr;
  episim_status st;
  if (type == "calls")
    st = episim_matrix_from_calls_csv(records.c_str(), n, &raw);
  else
    st = episim_matrix_from_trajectories_csv(records.c_str(), n, max_gap, &raw);
  if (st != EPISIM_OK) return report(st);
  MatrixPtr matrix(raw, &episim_matrix_free);
  return report(episim_matrix_write(matrix.get(), out_path.c_str()));
}

int cmd_synth(const std::string& kind, size_t n, double diag_weight, std::uint64_t seed,
              const std::string& out_path) {
  episim_matrix* raw = nullptr;
  if (auto st = episim_matrix_synth(kind.c_str(), n, diag_weight, seed, &raw);
      st != EPISIM_OK)
    return report(st);
  MatrixPtr matrix(raw, &episim_matrix_free);
  return report(episim_matrix_write(matrix.get(), out_path.c_str()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"episim: metapopulation disease/awareness spreading simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(episim_version()));

  ScenarioOptions opt;
  std::string out_dir = ".";
  unsigned threads = 1;

  auto add_scenario_flags = [&](CLI::App* cmd, bool with_out) {
    cmd->add_option("--scenario", opt.scenario_path, "scenario config file")->required();
    cmd->add_option("--engine", opt.engine, "deterministic|stochastic");
    cmd->add_option("--seed", opt.seed, "RNG seed override")
        ->each([&](const std::string&) { opt.seed_set = true; });
    cmd->add_option("--replicas", opt.replicas, "replica count override");
    if (with_out) cmd->add_option("--out", out_dir, "output directory");
  };

  auto* run = app.add_subcommand("run", "run one scenario, write trajectory + summary");
  add_scenario_flags(run, true);

  auto* sweep = app.add_subcommand("sweep", "run the configured parameter sweeps");
  add_scenario_flags(sweep, true);
  sweep->add_option("--threads", threads, "worker threads for sweep cells");

  auto* validate = app.add_subcommand("validate", "check a scenario file");
  add_scenario_flags(validate, false);

  std::string matrix_path, kind = "all";
  auto* cent = app.add_subcommand("centrality", "rank subpopulations of a matrix");
  cent->add_option("--matrix", matrix_path, "matrix CSV")->required();
  cent->add_option("--kind", kind, "degree|closeness|betweenness|eigenvector|all");
  cent->add_option("--out", out_dir, "output directory");

  std::string rec_type, rec_path, out_path = "matrix.csv";
  size_t n = 0;
  std::int64_t max_gap = 0;
  auto* build = app.add_subcommand("build-matrix", "build a flow matrix from event records");
  build->add_option("--type", rec_type, "calls|mobility")
      ->required()
      ->check(CLI::IsMember({"calls", "mobility"}));
  build->add_option("--records", rec_path, "record CSV")->required();
  build->add_option("--n", n, "subpopulation count")->required();
  build->add_option("--max-gap", max_gap,
                    "break mobility chains when the timestamp gap exceeds this (0 = never)");
  build->add_option("--out", out_path, "output matrix file");

  std::string synth_kind;
  double diag_weight = 0.9;
  std::uint64_t synth_seed = 0;
  auto* synth = app.add_subcommand("synth", "generate a synthetic matrix");
  synth->add_option("--kind", synth_kind, "identity|uniform|hub|diagonal-dominant")
      ->required();
  synth->add_option("--n", n, "subpopulation count")->required();
  synth->add_option("--diag-weight", diag_weight, "self-transition weight");
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--out", out_path, "output matrix file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitIo;
  }

  if (run->parsed()) return cmd_run(opt, out_dir);
  if (sweep->parsed()) return cmd_sweep(opt, out_dir, threads);
  if (validate->parsed()) return cmd_validate(opt);
  if (cent->parsed()) return cmd_centrality(matrix_path, kind, out_dir);
  if (build->parsed()) return cmd_build_matrix(rec_type, rec_path, n, max_gap, out_path);
  if (synth->parsed()) return cmd_synth(synth_kind, n, diag_weight, synth_seed, out_path);
  return kExitIo;
}
