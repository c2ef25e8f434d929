#include "io.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "ingest.hpp"
#include "version.hpp"
#include "rng.hpp"

namespace episim {

using nlohmann::json;

std::string fmt_double(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

namespace {

struct Hasher {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  void bytes(const void* p, std::size_t len) { h = fnv1a64(p, len, h); }
  void u64(std::uint64_t v) { bytes(&v, sizeof v); }
  void f64(double v) { bytes(&v, sizeof v); }
  void str(const std::string& s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
  void matrix(const MatrixData& m) {
    u64(m.n);
    for (const auto& l : m.labels) str(l);
    for (double v : m.w) f64(v);
  }
  void seeding(const SeedingSpec& s) {
    u64(static_cast<std::uint64_t>(s.strategy));
    f64(s.fraction);
    u64(static_cast<std::uint64_t>(s.k));
    u64(static_cast<std::uint64_t>(s.centrality));
    u64(s.nodes.size());
    for (auto v : s.nodes) u64(v);
  }
};

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw err::Io("cannot open " + path + " for writing");
  return os;
}

void finish(std::ofstream& os, const std::string& path) {
  os.flush();
  if (!os.good()) throw err::Io("write failed for " + path);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r')
    out.back().pop_back();
  return out;
}

double parse_double(const std::string& field, const std::string& path, std::size_t lineno) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw err::Io(path + ":" + std::to_string(lineno) + ": bad number '" + field + "'");
  return v;
}

std::string hex16(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return s;
}

}  // namespace

std::uint64_t matrix_hash(const MatrixData& m) {
  Hasher h;
  h.matrix(m);
  return h.h;
}

std::uint64_t scenario_hash(const Scenario& s) {
  Hasher h;
  h.matrix(s.mobility);
  h.u64(s.calls.has_value());
  if (s.calls) h.matrix(*s.calls);
  h.f64(s.params.lambda);
  h.f64(s.params.gamma);
  h.f64(s.params.omega);
  h.f64(s.params.psi);
  h.f64(s.params.xi);
  h.u64(static_cast<std::uint64_t>(s.params.horizon));
  h.u64(s.population.size());
  for (auto p : s.population) h.u64(p);
  h.seeding(s.infection_seed);
  h.u64(s.awareness_seed.has_value());
  if (s.awareness_seed) h.seeding(*s.awareness_seed);
  h.u64(s.quarantine.size());
  for (auto q : s.quarantine) h.u64(q);
  h.u64(s.rng_seed);
  h.u64(static_cast<std::uint64_t>(s.engine));
  h.u64(s.replicas);
  h.f64(s.stationarity.epsilon);
  h.u64(static_cast<std::uint64_t>(s.stationarity.window));
  h.u64(s.simultaneous_updates);
  return h.h;
}

void write_metadata(std::ostream& os, const OutputMeta& meta) {
  os << "# episim " << EPISIM_VERSION_STRING << "\n";
  os << "# scenario_hash=" << hex16(meta.content_hash) << "\n";
  os << "# rng=" << meta.rng << "\n";
  os << "# seed=" << meta.seed << "\n";
}

OutputMeta meta_for(const Scenario& s) {
  return {scenario_hash(s), kRngAlgorithm, s.rng_seed};
}

OutputMeta meta_for_matrix(const MatrixData& m) { return {matrix_hash(m), "none", 0}; }

void write_matrix_csv(const FlowMatrix& m, const std::string& path, const OutputMeta& meta) {
  auto os = open_out(path);
  write_metadata(os, meta);
  const std::size_t n = m.dim();
  for (std::size_t j = 0; j < n; ++j) {
    if (m.labels()[j].find_first_of(",\n") != std::string::npos)
      throw err::Io("label contains a delimiter: " + m.labels()[j]);
    os << m.labels()[j] << (j + 1 < n ? "," : "\n");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      os << fmt_double(m.at(i, j)) << (j + 1 < n ? "," : "\n");
  finish(os, path);
}

MatrixData read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw err::Io("cannot open " + path);
  std::string line;
  std::size_t lineno = 0;
  MatrixData d;
  bool labels_seen = false;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_line(line);
    if (!labels_seen) {
      d.n = fields.size();
      d.labels = fields;
      d.w.assign(d.n * d.n, 0.0);
      labels_seen = true;
      continue;
    }
    if (row >= d.n) throw err::Io(path + ": more rows than labels");
    if (fields.size() != d.n)
      throw err::Io(path + ":" + std::to_string(lineno) + ": expected " +
                    std::to_string(d.n) + " entries");
    for (std::size_t j = 0; j < d.n; ++j) d.at(row, j) = parse_double(fields[j], path, lineno);
    ++row;
  }
  if (!labels_seen) throw err::Io(path + ": empty matrix file");
  if (row != d.n) throw err::Io(path + ": expected " + std::to_string(d.n) + " rows, got " +
                                std::to_string(row));
  return d;
}

void write_trajectory_csv(const Trajectory& t, const std::string& path,
                          const OutputMeta& meta) {
  auto os = open_out(path);
  write_metadata(os, meta);
  os << "t,subpop,S,I,R,A,U\n";
  for (int step = 0; step <= t.steps; ++step)
    for (std::size_t i = 0; i < t.n; ++i) {
      os << step << ',' << i;
      for (int c = 0; c < 5; ++c) os << ',' << fmt_double(t.at(step, i, c));
      os << '\n';
    }
  finish(os, path);
}

void write_summary_csv(std::span<const RunSummary> runs, const std::string& path,
                       const OutputMeta& meta) {
  auto os = open_out(path);
  write_metadata(os, meta);
  os << "replica,i_inf,tau,stationary,r0\n";
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& run = runs[r];
    os << r << ',' << (run.stationary ? fmt_double(run.i_inf) : "") << ','
       << (run.stationary ? std::to_string(run.tau) : "") << ','
       << (run.stationary ? 1 : 0) << ',' << fmt_double(run.r0) << '\n';
  }
  finish(os, path);
}

void write_ranking_csv(const CentralityRanking& r, const std::string& path,
                       const OutputMeta& meta) {
  auto os = open_out(path);
  write_metadata(os, meta);
  os << "node_id,score,rank\n";
  for (std::size_t rank = 0; rank < r.ranked.size(); ++rank) {
    const std::size_t node = r.ranked[rank];
    os << node << ',' << fmt_double(r.scores[node]) << ',' << rank << '\n';
  }
  finish(os, path);
}

void write_heatmap_csv(std::span<const HeatmapCell> cells, const std::string& path,
                       const OutputMeta& meta) {
  auto os = open_out(path);
  write_metadata(os, meta);
  os << "omega,psi,xi,lambda,gamma,replica_mean_i_inf,replica_se_i_inf,tau,stationary\n";
  for (const auto& c : cells) {
    os << fmt_double(c.params.omega) << ',' << fmt_double(c.params.psi) << ','
       << fmt_double(c.params.xi) << ',' << fmt_double(c.params.lambda) << ','
       << fmt_double(c.params.gamma) << ',' << fmt_double(c.mean_i_inf) << ','
       << fmt_double(c.se_i_inf) << ',' << fmt_double(c.mean_tau) << ','
       << (c.stationary ? 1 : 0) << '\n';
  }
  bool first = true;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].ok) continue;
    if (first) {
      os << "# cell errors\n";
      first = false;
    }
    os << "# cell " << i << ": " << cells[i].error << '\n';
  }
  finish(os, path);
}

void write_r0_csv(std::span<const R0Point> rows, const std::string& path,
                  const OutputMeta& meta) {
  auto os = open_out(path);
  write_metadata(os, meta);
  os << "r0,seeding,i_inf,tau,stationary\n";
  for (const auto& r : rows) {
    os << fmt_double(r.r0) << ',' << r.seeding << ',' << fmt_double(r.i_inf) << ','
       << fmt_double(r.tau) << ',' << (r.stationary ? 1 : 0) << '\n';
  }
  finish(os, path);
}

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw err::Io("unknown key '" + it.key() + "' in " + where);
  }
}

MatrixData load_matrix_spec(const json& spec, const std::string& dir) {
  if (spec.is_string()) {
    std::filesystem::path p = spec.get<std::string>();
    if (p.is_relative()) p = std::filesystem::path(dir) / p;
    return read_matrix_csv(p.string());
  }
  if (!spec.is_object()) throw err::Io("matrix spec must be a path or a generator object");
  check_keys(spec, {"kind", "n", "diag_weight", "seed"}, "matrix spec");
  const std::string kind_s = spec.at("kind").get<std::string>();
  auto kind = synth_kind_from(kind_s);
  if (!kind) throw err::Io("unknown synthetic matrix kind '" + kind_s + "'");
  const auto n = spec.at("n").get<std::size_t>();
  const double dw = spec.value("diag_weight", 0.9);
  const std::uint64_t seed = spec.value("seed", 0ULL);
  return synth_matrix(*kind, n, dw, seed).data();
}

SeedingSpec load_seeding(const json& j, const std::string& where) {
  check_keys(j, {"strategy", "fraction", "k", "centrality", "nodes"}, where);
  SeedingSpec spec;
  if (j.contains("strategy")) {
    auto s = seed_strategy_from(j.at("strategy").get<std::string>());
    if (!s) throw err::Io("unknown seeding strategy in " + where);
    spec.strategy = *s;
  }
  spec.fraction = j.value("fraction", 0.0);
  spec.k = j.value("k", 1);
  if (j.contains("centrality")) {
    auto c = centrality_kind_from(j.at("centrality").get<std::string>());
    if (!c) throw err::Io("unknown centrality kind in " + where);
    spec.centrality = *c;
  }
  if (j.contains("nodes")) spec.nodes = j.at("nodes").get<std::vector<std::size_t>>();
  return spec;
}

SweepGrid load_grid(const json& j, unsigned default_replicas) {
  SweepGrid grid;
  grid.replicas = j.value("replicas", default_replicas);
  if (!j.contains("axes")) throw err::Io("sweep grid needs 'axes'");
  for (const auto& a : j.at("axes")) {
    check_keys(a, {"param", "values"}, "sweep axis");
    SweepAxis axis;
    const auto& p = a.at("param");
    if (p.is_string()) {
      axis.params.push_back(p.get<std::string>());
    } else {
      axis.params = p.get<std::vector<std::string>>();
    }
    axis.values = a.at("values").get<std::vector<double>>();
    grid.axes.push_back(std::move(axis));
  }
  return grid;
}

}  // namespace

ScenarioFile load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw err::Io("cannot open " + path);
  json root;
  try {
    root = json::parse(in, nullptr, /*allow_exceptions=*/true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw err::Io(path + ": " + e.what());
  }
  const std::string dir = std::filesystem::path(path).parent_path().string();

  try {
    check_keys(root,
               {"mobility", "calls", "params", "population", "infection_seed",
                "awareness_seed", "quarantine", "rng_seed", "engine", "replicas",
                "stationarity", "simultaneous_updates", "sweep"},
               "scenario");
    ScenarioFile sf;
    Scenario& s = sf.scenario;

    if (!root.contains("mobility")) throw err::Io("scenario needs 'mobility'");
    s.mobility = load_matrix_spec(root.at("mobility"), dir);
    if (root.contains("calls")) s.calls = load_matrix_spec(root.at("calls"), dir);

    if (root.contains("params")) {
      const auto& p = root.at("params");
      check_keys(p, {"lambda", "gamma", "omega", "psi", "xi", "horizon"}, "params");
      s.params.lambda = p.value("lambda", 0.0);
      s.params.gamma = p.value("gamma", 0.0);
      s.params.omega = p.value("omega", 0.0);
      s.params.psi = p.value("psi", 0.0);
      s.params.xi = p.value("xi", 0.0);
      s.params.horizon = p.value("horizon", 180);
    }

    if (!root.contains("population")) throw err::Io("scenario needs 'population'");
    const auto& pop = root.at("population");
    const std::size_t n = s.mobility.n;
    if (pop.is_array()) {
      s.population = pop.get<std::vector<std::uint64_t>>();
    } else {
      std::uint64_t total = 0;
      if (pop.is_number()) {
        total = pop.get<std::uint64_t>();
      } else {
        check_keys(pop, {"total"}, "population");
        total = pop.at("total").get<std::uint64_t>();
      }
      // Even split, remainder to the lowest indices.
      s.population.assign(n, n ? total / n : 0);
      for (std::size_t i = 0; n && i < total % n; ++i) ++s.population[i];
    }

    if (root.contains("infection_seed"))
      s.infection_seed = load_seeding(root.at("infection_seed"), "infection_seed");
    if (root.contains("awareness_seed"))
      s.awareness_seed = load_seeding(root.at("awareness_seed"), "awareness_seed");

    if (root.contains("quarantine")) {
      const auto& q = root.at("quarantine");
      if (q.is_array()) {
        s.quarantine = q.get<std::vector<std::size_t>>();
      } else {
        check_keys(q, {"top_k", "centrality"}, "quarantine");
        auto kind = centrality_kind_from(q.value("centrality", std::string("eigenvector")));
        if (!kind) throw err::Io("unknown centrality kind in quarantine");
        const auto k = q.at("top_k").get<std::size_t>();
        // Needs a valid matrix now; invalid ones surface here instead of in
        // validate_scenario.
        auto ranking = centrality(FlowMatrix::checked(s.mobility), *kind);
        s.quarantine = top_k(ranking, k);
      }
    }

    s.rng_seed = root.value("rng_seed", 0ULL);
    if (root.contains("engine")) {
      auto e = engine_kind_from(root.at("engine").get<std::string>());
      if (!e) throw err::Io("unknown engine");
      s.engine = *e;
    }
    s.replicas = root.value("replicas", 1u);
    if (root.contains("stationarity")) {
      const auto& st = root.at("stationarity");
      check_keys(st, {"epsilon", "window"}, "stationarity");
      s.stationarity.epsilon = st.value("epsilon", 1e-6);
      s.stationarity.window = st.value("window", 10);
    }
    s.simultaneous_updates = root.value("simultaneous_updates", false);

    if (root.contains("sweep")) {
      const auto& sw = root.at("sweep");
      check_keys(sw, {"replicas", "axes", "pairs", "r0"}, "sweep");
      SweepConfig cfg;
      if (sw.contains("axes")) cfg.grid = load_grid(sw, sw.value("replicas", s.replicas));
      if (sw.contains("pairs")) {
        for (const auto& pr : sw.at("pairs")) {
          check_keys(pr, {"lambda", "gamma"}, "sweep pair");
          cfg.pairs.emplace_back(pr.at("lambda").get<double>(),
                                 pr.at("gamma").get<double>());
        }
      }
      if (sw.contains("r0")) {
        const auto& r = sw.at("r0");
        check_keys(r, {"values", "gamma", "seedings"}, "sweep r0");
        R0Config rc;
        rc.values = r.at("values").get<std::vector<double>>();
        rc.gamma = r.value("gamma", 0.4);
        if (r.contains("seedings"))
          for (const auto& sd : r.at("seedings"))
            rc.seedings.push_back(load_seeding(sd, "r0 seeding"));
        if (rc.seedings.empty()) rc.seedings.push_back(sf.scenario.infection_seed);
        cfg.r0 = std::move(rc);
      }
      sf.sweep = std::move(cfg);
    }
    return sf;
  } catch (const json::exception& e) {
    throw err::Io(path + ": " + e.what());
  }
}

void write_sweep_outputs(const ScenarioFile& sf, const std::string& out_dir,
                         unsigned threads) {
  if (!sf.sweep) throw err::Validation("scenario file has no sweep section");
  std::filesystem::create_directories(out_dir);
  const auto meta = meta_for(sf.scenario);
  const auto& cfg = *sf.sweep;

  if (cfg.grid) {
    if (cfg.pairs.empty()) {
      auto cells = heatmap(sf.scenario, *cfg.grid, threads);
      write_heatmap_csv(cells, out_dir + "/heatmap.csv", meta);
    } else {
      for (const auto& [lambda, gamma] : cfg.pairs) {
        Scenario scn = sf.scenario;
        scn.params.lambda = lambda;
        scn.params.gamma = gamma;
        auto cells = heatmap(scn, *cfg.grid, threads);
        write_heatmap_csv(cells,
                          out_dir + "/heatmap_l" + fmt_double(lambda) + "_g" +
                              fmt_double(gamma) + ".csv",
                          meta_for(scn));
      }
    }
  }
  if (cfg.r0) {
    auto rows = r0_curve(sf.scenario, cfg.r0->values, cfg.r0->gamma, cfg.r0->seedings,
                         threads);
    write_r0_csv(rows, out_dir + "/r0_curve.csv", meta);
  }
}

}  // namespace episim
