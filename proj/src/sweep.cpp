#include "sweep.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "engine.hpp"

namespace episim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void set_param(ModelParams& p, const std::string& name, double value) {
  if (name == "lambda") p.lambda = value;
  else if (name == "gamma") p.gamma = value;
  else if (name == "omega") p.omega = value;
  else if (name == "psi") p.psi = value;
  else if (name == "xi") p.xi = value;
  else throw err::Validation("unknown sweep parameter '" + name + "'");
}

void run_tasks(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      task(i);
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(count));
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace

std::string seeding_label(const SeedingSpec& spec) {
  if (spec.strategy == SeedStrategy::CentralityTopK)
    return "centrality-top-" + std::to_string(spec.k);
  return to_string(spec.strategy);
}

std::vector<HeatmapCell> heatmap(const Scenario& tmpl, const SweepGrid& grid,
                                 unsigned threads) {
  if (grid.axes.empty()) throw err::Validation("sweep grid has no axes");
  std::size_t cells = 1;
  for (const auto& axis : grid.axes) {
    if (axis.values.empty()) throw err::Validation("sweep axis has no values");
    if (axis.params.empty()) throw err::Validation("sweep axis names no parameter");
    for (const auto& name : axis.params) {
      ModelParams probe;
      set_param(probe, name, 0.0);  // validates the name
    }
    for (double v : axis.values)
      if (!(v >= 0.0 && v <= 1.0))
        throw err::Validation("sweep axis value " + std::to_string(v) + " out of [0,1]");
    cells *= axis.values.size();
  }

  const unsigned replicas =
      tmpl.engine == EngineKind::Stochastic ? std::max(1u, grid.replicas) : 1u;

  std::vector<HeatmapCell> out(cells);
  run_tasks(cells, threads, [&](std::size_t cell) {
    HeatmapCell& rec = out[cell];
    rec.replicas = replicas;
    try {
      Scenario scn = tmpl;
      // Decode the cell index, first axis slowest.
      std::size_t rest = cell;
      for (std::size_t a = grid.axes.size(); a-- > 0;) {
        const auto& axis = grid.axes[a];
        const std::size_t idx = rest % axis.values.size();
        rest /= axis.values.size();
        for (const auto& name : axis.params) set_param(scn.params, name, axis.values[idx]);
      }
      rec.params = scn.params;

      double sum = 0.0, sumsq = 0.0, tau_sum = 0.0;
      bool all_stationary = true;
      for (unsigned r = 0; r < replicas; ++r) {
        RunSummary run = run_scenario(scn, r, static_cast<std::uint64_t>(cell));
        if (!run.stationary) {
          all_stationary = false;
          break;
        }
        sum += run.i_inf;
        sumsq += run.i_inf * run.i_inf;
        tau_sum += static_cast<double>(run.tau);
      }
      rec.stationary = all_stationary;
      if (all_stationary) {
        const double mean = sum / replicas;
        rec.mean_i_inf = mean;
        rec.mean_tau = tau_sum / replicas;
        if (replicas >= 2) {
          const double var =
              std::max(0.0, (sumsq - replicas * mean * mean) / (replicas - 1.0));
          rec.se_i_inf = std::sqrt(var / replicas);
        } else {
          rec.se_i_inf = kNaN;
        }
      } else {
        rec.mean_i_inf = rec.se_i_inf = rec.mean_tau = kNaN;
      }
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
      rec.stationary = false;
      rec.mean_i_inf = rec.se_i_inf = rec.mean_tau = kNaN;
    }
  });
  return out;
}

std::vector<R0Point> r0_curve(const Scenario& tmpl, std::span<const double> r0_values,
                              double gamma, std::span<const SeedingSpec> seedings,
                              unsigned threads) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw err::Validation("r0 curve needs gamma in (0,1]");
  if (seedings.empty()) throw err::Validation("r0 curve needs at least one seeding");
  for (double r0 : r0_values) {
    const double lambda = r0 * gamma;
    if (!(lambda >= 0.0 && lambda <= 1.0))
      throw err::Validation("lambda " + std::to_string(lambda) +
                            " out of [0,1] for requested r0 " + std::to_string(r0));
  }

  const std::size_t rows = r0_values.size() * seedings.size();
  std::vector<R0Point> out(rows);
  run_tasks(rows, threads, [&](std::size_t row) {
    const std::size_t ri = row / seedings.size();
    const std::size_t si = row % seedings.size();
    R0Point& rec = out[row];
    rec.r0 = r0_values[ri];
    rec.seeding = seeding_label(seedings[si]);
    try {
      Scenario scn = tmpl;
      scn.params.gamma = gamma;
      scn.params.lambda = r0_values[ri] * gamma;
      scn.infection_seed = seedings[si];
      RunSummary run = run_scenario(scn, 0, static_cast<std::uint64_t>(row));
      rec.stationary = run.stationary;
      rec.i_inf = run.stationary ? run.i_inf : kNaN;
      rec.tau = run.stationary ? static_cast<double>(run.tau) : kNaN;
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
      rec.i_inf = rec.tau = kNaN;
    }
  });
  return out;
}

}  // namespace episim
