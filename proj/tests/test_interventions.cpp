#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "engine.hpp"
#include "ingest.hpp"
#include "interventions.hpp"
#include "oracles.hpp"

using namespace episim;

TEST_CASE("quarantine of one node in a 2x2 matrix") {
  auto m = FlowMatrix::checked(oracle::matrix_from_rows({{0.9, 0.1}, {0.2, 0.8}}));
  std::vector<std::size_t> targets = {1};
  auto q = quarantine(m, targets);
  CHECK(q.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(q.at(0, 1) == 0.0);
  CHECK(q.at(1, 0) == 0.0);
  CHECK(q.at(1, 1) == 1.0);
}

TEST_CASE("quarantine redirects removed column mass to the diagonal") {
  auto m = FlowMatrix::checked(oracle::matrix_from_rows(
      {{0.8, 0.1, 0.1}, {0.1, 0.8, 0.1}, {0.1, 0.1, 0.8}}));
  std::vector<std::size_t> targets = {2};
  auto q = quarantine(m, targets);
  CHECK(q.at(0, 0) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(q.at(0, 1) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(q.at(0, 2) == 0.0);
  CHECK(q.at(1, 0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(q.at(1, 1) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(q.at(1, 2) == 0.0);
  CHECK(q.at(2, 0) == 0.0);
  CHECK(q.at(2, 1) == 0.0);
  CHECK(q.at(2, 2) == 1.0);
}

TEST_CASE("empty target set leaves the matrix unchanged") {
  auto m = synth_matrix(SynthKind::DiagonalDominant, 5, 0.8, 12);
  auto q = quarantine(m, {});
  CHECK(q.data().w == m.data().w);
}

TEST_CASE("quarantine is idempotent and order-independent") {
  std::mt19937_64 gen(6060);
  for (int round = 0; round < 10; ++round) {
    const std::size_t n = 4 + gen() % 5;
    auto m = FlowMatrix::checked(oracle::random_dense_matrix(n, gen));
    std::vector<std::size_t> targets = {1, n - 1};
    std::vector<std::size_t> reversed = {n - 1, 1};
    auto once = quarantine(m, targets);
    auto twice = quarantine(once, targets);
    auto swapped = quarantine(m, reversed);
    CHECK(once.data().w == twice.data().w);
    CHECK(once.data().w == swapped.data().w);
    CHECK(FlowMatrix::violations(once.data()).empty());
  }
}

TEST_CASE("quarantine cuts all flux both ways") {
  std::mt19937_64 gen(7171);
  const std::size_t n = 6;
  auto m = FlowMatrix::checked(oracle::random_dense_matrix(n, gen));
  std::vector<std::size_t> targets = {0, 3};
  auto q = quarantine(m, targets);

  // Mass inside the targets stays inside; mass outside never enters.
  std::vector<double> inside(n, 0.0), outside(n, 0.0), scratch;
  inside[0] = 5.0;
  inside[3] = 7.0;
  outside[1] = 2.0;
  outside[2] = 4.0;
  outside[4] = 1.0;
  outside[5] = 3.0;
  MassState s(n);
  s.S = inside;
  s.I = outside;
  s.R.assign(n, 0.0);
  s.A.assign(n, 0.0);
  s.U = inside;
  for (std::size_t i = 0; i < n; ++i) s.U[i] += outside[i];
  ModelParams p;  // all rates zero: pure mobility
  auto next = step_disease(s, q, p);
  CHECK(next.S[0] == 5.0);
  CHECK(next.S[3] == 7.0);
  for (std::size_t i : {1ul, 2ul, 4ul, 5ul}) CHECK(next.S[i] == 0.0);
  CHECK(next.I[0] == 0.0);
  CHECK(next.I[3] == 0.0);
}

TEST_CASE("quarantine rejects out-of-range targets") {
  auto m = synth_matrix(SynthKind::Uniform, 3, 0.0, 0);
  std::vector<std::size_t> bad = {5};
  CHECK_THROWS_AS(quarantine(m, bad), err::Validation);
}

TEST_CASE("uniform seeding: same fraction everywhere") {
  std::vector<std::uint64_t> pop = {10000, 10000, 10000};
  SeedingSpec spec;
  spec.strategy = SeedStrategy::Uniform;
  spec.fraction = 0.001;
  RngStream rng(1);
  auto state = seed_infection(pop, spec, nullptr, rng);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(state.infected(i) == 10);
    CHECK(state.aware(i) == 0);
  }
  CHECK(state.total_population() == 30000);
}

TEST_CASE("zero fraction: everyone susceptible") {
  std::vector<std::uint64_t> pop = {500, 700};
  SeedingSpec spec;
  spec.fraction = 0.0;
  RngStream rng(1);
  auto state = seed_infection(pop, spec, nullptr, rng);
  CHECK(state.infected(0) + state.infected(1) == 0);
  CHECK(state.cell(0, kSU) == 500);
}

TEST_CASE("centrality-top-1 on a star puts every seed in the hub") {
  auto star = FlowMatrix::checked(oracle::star_matrix(4, 0.3));
  auto ranking = centrality(star, CentralityKind::Eigenvector);
  std::vector<std::uint64_t> pop = {1000, 1000, 1000, 1000};
  SeedingSpec spec;
  spec.strategy = SeedStrategy::CentralityTopK;
  spec.k = 1;
  spec.fraction = 0.01;
  RngStream rng(1);
  auto state = seed_infection(pop, spec, &ranking, rng);
  CHECK(state.infected(0) == 40);  // 1% of the total, all in the hub
  for (std::size_t i = 1; i < 4; ++i) CHECK(state.infected(i) == 0);
}

TEST_CASE("random-single caps the seed at the chosen subpopulation size") {
  std::vector<std::uint64_t> pop = {5, 1000000};
  SeedingSpec spec;
  spec.strategy = SeedStrategy::RandomSingle;
  spec.fraction = 0.5;
  bool saw_capped = false, saw_large = false;
  for (std::uint64_t seed = 0; seed < 40 && !(saw_capped && saw_large); ++seed) {
    RngStream rng(derive_seed(seed, kSeedingStream));
    auto state = seed_infection(pop, spec, nullptr, rng);
    if (state.infected(0) > 0) {
      CHECK(state.infected(0) == 5);
      saw_capped = true;
    } else {
      CHECK(state.infected(1) == round_half_even(0.5 * 1000005.0));
      saw_large = true;
    }
  }
  CHECK(saw_capped);
  CHECK(saw_large);
}

TEST_CASE("explicit-list seeding beyond capacity fails loudly") {
  std::vector<std::uint64_t> pop = {10, 100000};
  SeedingSpec spec;
  spec.strategy = SeedStrategy::ExplicitList;
  spec.nodes = {0};
  spec.fraction = 0.9;
  RngStream rng(3);
  CHECK_THROWS_WITH_AS(seed_infection(pop, spec, nullptr, rng),
                       doctest::Contains("exceeds target population"), err::Validation);
}

TEST_CASE("proportional split conserves the global total exactly") {
  std::mt19937_64 gen(8822);
  for (int round = 0; round < 20; ++round) {
    const std::size_t n = 2 + gen() % 8;
    std::vector<std::uint64_t> pop(n);
    for (auto& p : pop) p = 100 + gen() % 100000;
    std::uint64_t total = 0;
    for (auto p : pop) total += p;

    SeedingSpec spec;
    spec.strategy = SeedStrategy::Uniform;
    spec.fraction = 0.003;
    RngStream rng(round);
    auto state = seed_infection(pop, spec, nullptr, rng);
    std::uint64_t infected = 0;
    for (std::size_t i = 0; i < n; ++i) infected += state.infected(i);
    CHECK(infected == round_half_even(0.003 * static_cast<double>(total)));
    CHECK(state.total_population() == total);
  }
}

TEST_CASE("awareness seeding marks the exact count and nothing else") {
  std::vector<std::uint64_t> pop = {15000, 15000};
  SeedingSpec spec;
  spec.strategy = SeedStrategy::Uniform;
  spec.fraction = 0.01;
  RngStream rng(5);
  auto state = seed_infection(pop, spec, nullptr, rng);
  const auto infected_before = state.infected(0) + state.infected(1);

  seed_awareness(state, 0.01, rng);
  CHECK(state.aware(0) + state.aware(1) == 300);
  CHECK(state.infected(0) + state.infected(1) == infected_before);
  CHECK(state.total_population() == 30000);

  seed_awareness(state, 1.0, rng);
  CHECK(state.unaware(0) + state.unaware(1) == 0);
}

TEST_CASE("awareness draw is uniform over the population") {
  std::vector<std::uint64_t> pop = {2000, 2000};
  RngStream rng(88);
  const int draws = 10000;
  std::vector<double> in_first(draws);
  for (int k = 0; k < draws; ++k) {
    auto state = CountState::all_susceptible(pop);
    seed_awareness(state, 0.5, rng);
    in_first[static_cast<std::size_t>(k)] = static_cast<double>(state.aware(0));
  }
  auto st = oracle::stats(in_first);
  CHECK(std::abs(st.mean - 1000.0) <= 3.0 * st.se);
}
