#include "episim/episim.h"

#include <cstring>
#include <limits>
#include <string>

#include "engine.hpp"
#include "ingest.hpp"
#include "interventions.hpp"
#include "io.hpp"
#include "version.hpp"

using namespace episim;

struct episim_matrix {
  FlowMatrix m;
};

struct episim_ranking {
  CentralityRanking r;
};

struct episim_scenario {
  ScenarioFile file;
};

struct episim_result {
  RunSummary run;
  OutputMeta meta;
  unsigned replica = 0;
};

namespace {

thread_local std::string g_last_error;

episim_status fail(episim_status code, const char* what) {
  g_last_error = what;
  return code;
}

template <typename Fn>
episim_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return EPISIM_OK;
  } catch (const err::Validation& e) {
    return fail(EPISIM_ERR_VALIDATION, e.what());
  } catch (const err::Io& e) {
    return fail(EPISIM_ERR_IO, e.what());
  } catch (const err::Convergence& e) {
    return fail(EPISIM_ERR_NO_CONVERGENCE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(EPISIM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(EPISIM_ERR_INTERNAL, e.what());
  }
}

bool args_ok(const void* p) { return p != nullptr; }

}  // namespace

extern "C" {

const char* episim_version(void) { return EPISIM_VERSION_STRING; }

const char* episim_last_error(void) { return g_last_error.c_str(); }

void episim_string_free(char* s) { std::free(s); }

episim_status episim_matrix_synth(const char* kind, size_t n, double diag_weight,
                                  uint64_t seed, episim_matrix** out) {
  if (!args_ok(kind) || !args_ok(out))
    return fail(EPISIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto k = synth_kind_from(kind);
    if (!k) throw std::invalid_argument(std::string("unknown synth kind '") + kind + "'");
    *out = new episim_matrix{synth_matrix(*k, n, diag_weight, seed)};
  });
}

episim_status episim_matrix_read(const char* path, episim_matrix** out) {
  if (!args_ok(path) || !args_ok(out))
    return fail(EPISIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new episim_matrix{FlowMatrix::checked(read_matrix_csv(path))};
  });
}

episim_status episim_matrix_write(const episim_matrix* m, const char* path) {
  if (!args_ok(m) || !args_ok(path))
    return fail(EPISIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { write_matrix_csv(m->m, path, meta_for_matrix(m->m.data())); });
}

episim_status episim_matrix_from_calls_csv(const char* path, size_t n,
                                           episim_matrix** out) {
  if (!args_ok(path) || !args_ok(out))
    return fail(EPISIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto records = read_calls_csv(path);
    *out = new episim_matrix{build_calls_matrix(records, n)};
  });
}

episim_status episim_matrix_from_trajectories_csv(const char* path, size_t n,
                                                  int64_t max_gap, episim_matrix** out) {
  if (!args_ok(path) || !args_ok(out))
    return fail(EPISIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto records = read_trajectories_csv(path);
    *out = new episim_matrix{build_mobility_matrix(records, n, max_gap)};
  });
}

episim_status episim_matrix_quarantine(const episim_matrix* m, const size_t* targets,
                                       size_t count, episim_matrix** out) {
  if (!args_ok(m) || !args_ok(out) || (count > 0 && !args_ok(targets)))
    return fail(EPISIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new episim_matrix{quarantine(m->m, std::span<const size_t>(targets, count))};
  });
}

size_t episim_matrix_dim(const episim_matrix* m) { return m ? m->m.dim() : 0; }

double episim_matrix_entry(const episim_matrix* m, size_t i, size_t j) {
  if (!m || i >= m->m.dim() || j >= m->m.dim())
    return std::numeric_limits<double>::quiet_NaN();
  return m->m.at(i, j);
}

void episim_matrix_free(episim_matrix* m) { delete m; }

episim_status episim_centrality(const episim_matrix* m, const char* kind,
                                episim_ranking** out) {
  if (!args_ok(m) || !args_ok(kind) || !args_ok(out))
    return fail(EPISIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto k = centrality_kind_from(kind);
    if (!k)
      throw std::invalid_argument(std::string("unknown centrality kind '") + kind + "'");
    *out = new episim_ranking{centrality(m->m, *k)};
  });
}

size_t episim_ranking_size(const episim_ranking* r) { return r ? r->r.ranked.size() : 0; }

size_t episim_ranking_node(const episim_ranking* r, size_t rank) {
  if (!r || rank >= r->r.ranked.size()) return static_cast<size_t>(-1);
  return r->r.ranked[rank];
}

double episim_ranking_score(const episim_ranking* r, size_t node) {
  if (!r || node >= r->r.scores.size())
    return std::numeric_limits<double>::quiet_NaN();
  return r->r.scores[node];
}

episim_status episim_ranking_write(const episim_ranking* r, const char* path) {
  if (!args_ok(r) || !args_ok(path))
    return fail(EPISIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    OutputMeta meta;
    meta.content_hash = fnv1a64(r->r.scores.data(), r->r.scores.size() * sizeof(double));
    write_ranking_csv(r->r, path, meta);
  });
}

void episim_ranking_free(episim_ranking* r) { delete r; }

episim_status episim_scenario_read(const char* path, episim_scenario** out) {
  if (!args_ok(path) || !args_ok(out))
    return fail(EPISIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new episim_scenario{load_scenario_file(path)}; });
}

episim_status episim_scenario_validate(const episim_scenario* s, char** out_report,
                                       size_t* out_count) {
  if (!args_ok(s)) return fail(EPISIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto violations = validate_scenario(s->file.scenario);
    if (out_count) *out_count = violations.size();
    if (out_report) {
      if (violations.empty()) {
        *out_report = nullptr;
      } else {
        std::string joined;
        for (std::size_t i = 0; i < violations.size(); ++i) {
          if (i) joined += '\n';
          joined += violations[i];
        }
        char* buf = static_cast<char*>(std::malloc(joined.size() + 1));
        if (!buf) throw std::bad_alloc();
        std::memcpy(buf, joined.c_str(), joined.size() + 1);
        *out_report = buf;
      }
    }
  });
}

episim_status episim_scenario_set_engine(episim_scenario* s, const char* engine) {
  if (!args_ok(s) || !args_ok(engine))
    return fail(EPISIM_ERR_INVALID_ARGUMENT, "null argument");
  auto e = engine_kind_from(engine);
  if (!e) return fail(EPISIM_ERR_INVALID_ARGUMENT, "unknown engine");
  s->file.scenario.engine = *e;
  return EPISIM_OK;
}

episim_status episim_scenario_set_seed(episim_scenario* s, uint64_t seed) {
  if (!args_ok(s)) return fail(EPISIM_ERR_INVALID_ARGUMENT, "null argument");
  s->file.scenario.rng_seed = seed;
  return EPISIM_OK;
}

episim_status episim_scenario_set_replicas(episim_scenario* s, unsigned replicas) {
  if (!args_ok(s) || replicas < 1)
    return fail(EPISIM_ERR_INVALID_ARGUMENT, "replicas must be >= 1");
  s->file.scenario.replicas = replicas;
  if (s->file.sweep && s->file.sweep->grid) s->file.sweep->grid->replicas = replicas;
  return EPISIM_OK;
}

unsigned episim_scenario_replicas(const episim_scenario* s) {
  return s ? s->file.scenario.replicas : 0;
}

void episim_scenario_free(episim_scenario* s) { delete s; }

episim_status episim_run(const episim_scenario* s, unsigned replica, episim_result** out) {
  if (!args_ok(s) || !args_ok(out))
    return fail(EPISIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto run = run_scenario(s->file.scenario, replica);
    *out = new episim_result{std::move(run), meta_for(s->file.scenario), replica};
  });
}

episim_status episim_result_summary(const episim_result* r, double* i_inf, double* tau,
                                    int* stationary, double* r0) {
  if (!args_ok(r)) return fail(EPISIM_ERR_INVALID_ARGUMENT, "null argument");
  if (i_inf) *i_inf = r->run.i_inf;
  if (tau)
    *tau = r->run.stationary ? static_cast<double>(r->run.tau)
                             : std::numeric_limits<double>::quiet_NaN();
  if (stationary) *stationary = r->run.stationary ? 1 : 0;
  if (r0) *r0 = r->run.r0;
  return EPISIM_OK;
}

size_t episim_result_steps(const episim_result* r) {
  return r ? static_cast<size_t>(r->run.trajectory.steps) : 0;
}

size_t episim_result_dim(const episim_result* r) { return r ? r->run.trajectory.n : 0; }

double episim_result_value(const episim_result* r, size_t t, size_t subpop,
                           char compartment) {
  if (!r) return std::numeric_limits<double>::quiet_NaN();
  const auto& traj = r->run.trajectory;
  int comp;
  switch (compartment) {
    case 'S': comp = 0; break;
    case 'I': comp = 1; break;
    case 'R': comp = 2; break;
    case 'A': comp = 3; break;
    case 'U': comp = 4; break;
    default: return std::numeric_limits<double>::quiet_NaN();
  }
  if (t > static_cast<size_t>(traj.steps) || subpop >= traj.n)
    return std::numeric_limits<double>::quiet_NaN();
  return traj.at(static_cast<int>(t), subpop, comp);
}

episim_status episim_result_write_trajectory(const episim_result* r, const char* path) {
  if (!args_ok(r) || !args_ok(path))
    return fail(EPISIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { write_trajectory_csv(r->run.trajectory, path, r->meta); });
}

episim_status episim_results_write_summary(const episim_result* const* results,
                                           size_t count, const char* path) {
  if (!args_ok(results) || !args_ok(path) || count == 0)
    return fail(EPISIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::vector<RunSummary> runs;
    runs.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (!results[i]) throw std::invalid_argument("null result in array");
      RunSummary r = results[i]->run;
      r.trajectory = Trajectory();  // summaries only
      runs.push_back(std::move(r));
    }
    write_summary_csv(runs, path, results[0]->meta);
  });
}

void episim_result_free(episim_result* r) { delete r; }

episim_status episim_sweep(const episim_scenario* s, const char* out_dir,
                           unsigned threads) {
  if (!args_ok(s) || !args_ok(out_dir))
    return fail(EPISIM_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { write_sweep_outputs(s->file, out_dir, threads); });
}

}  // extern "C"
