#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "ingest.hpp"
#include "oracles.hpp"

using namespace episim;

TEST_CASE("calls matrix from direct counts") {
  std::vector<CallAggregateRecord> recs = {{0, 1, 3}, {0, 0, 1}};
  auto m = build_calls_matrix(recs, 2);
  CHECK(m.at(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(m.at(0, 1) == doctest::Approx(0.75).epsilon(1e-15));
  // No calls originate at 1: absorbing fallback.
  CHECK(m.at(1, 0) == 0.0);
  CHECK(m.at(1, 1) == 1.0);
}

TEST_CASE("single self-loop record") {
  std::vector<CallAggregateRecord> recs = {{0, 0, 5}};
  auto m = build_calls_matrix(recs, 1);
  CHECK(m.at(0, 0) == 1.0);
}

TEST_CASE("call record id out of range is rejected with the record") {
  std::vector<CallAggregateRecord> recs = {{0, 0, 1}, {0, 7, 2}};
  CHECK_THROWS_WITH_AS(build_calls_matrix(recs, 2),
                       doctest::Contains("record 1"), err::Validation);
}

TEST_CASE("mobility matrix counts cross and self transitions") {
  std::vector<TrajectoryRecord> recs = {{1, 0, 0}, {1, 1, 1}, {1, 2, 0}};
  auto m = build_mobility_matrix(recs, 2);
  CHECK(m.at(0, 1) == 1.0);
  CHECK(m.at(1, 0) == 1.0);
  CHECK(m.at(0, 0) == 0.0);

  std::vector<TrajectoryRecord> recs2 = {{1, 0, 0}, {1, 1, 0}, {1, 2, 1}};
  auto m2 = build_mobility_matrix(recs2, 2);
  CHECK(m2.at(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m2.at(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m2.at(1, 1) == 1.0);  // fallback row

  std::vector<TrajectoryRecord> lone = {{1, 0, 0}};
  auto m3 = build_mobility_matrix(lone, 1);
  CHECK(m3.at(0, 0) == 1.0);
}

TEST_CASE("unsorted user records are rejected naming the user") {
  std::vector<TrajectoryRecord> recs = {{42, 5, 0}, {42, 3, 1}};
  CHECK_THROWS_WITH_AS(build_mobility_matrix(recs, 2),
                       doctest::Contains("user 42"), err::Validation);
}

TEST_CASE("max_gap breaks transition chains") {
  std::vector<TrajectoryRecord> recs = {{1, 0, 0}, {1, 100, 1}, {1, 110, 0}};
  auto all = build_mobility_matrix(recs, 2, 0);
  CHECK(all.at(0, 1) == 1.0);
  CHECK(all.at(1, 0) == 1.0);
  auto gapped = build_mobility_matrix(recs, 2, 50);
  // The 0->1 hop exceeds the gap; only 1->0 remains.
  CHECK(gapped.at(0, 0) == 1.0);
  CHECK(gapped.at(1, 0) == 1.0);
}

TEST_CASE("synthetic matrices") {
  auto id = synth_matrix(SynthKind::Identity, 3, 0.0, 0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(id.at(i, j) == (i == j ? 1.0 : 0.0));

  auto uni = synth_matrix(SynthKind::Uniform, 4, 0.0, 0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(uni.at(i, j) == doctest::Approx(0.25));

  auto dd = synth_matrix(SynthKind::DiagonalDominant, 5, 0.9, 7);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(dd.at(i, i) == doctest::Approx(0.9).epsilon(1e-12));
    double row = 0.0;
    for (std::size_t j = 0; j < 5; ++j) {
      row += dd.at(i, j);
      if (i != j) CHECK(dd.at(i, j) > 0.0);
    }
    CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
  }

  auto again = synth_matrix(SynthKind::DiagonalDominant, 5, 0.9, 7);
  CHECK(dd.data().w == again.data().w);  // same seed, same matrix
  auto other = synth_matrix(SynthKind::DiagonalDominant, 5, 0.9, 8);
  CHECK(dd.data().w != other.data().w);

  auto hub = synth_matrix(SynthKind::Hub, 6, 0.8, 0);
  for (std::size_t i = 1; i < 6; ++i) CHECK(hub.at(i, 0) > hub.at(i, 1));

  auto tiny = synth_matrix(SynthKind::DiagonalDominant, 1, 0.3, 0);
  CHECK(tiny.at(0, 0) == 1.0);
}

TEST_CASE("builders match the counting oracle on random record sets") {
  std::mt19937_64 gen(20260810);
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = 1 + gen() % 24;
    std::uniform_int_distribution<std::size_t> node(0, n - 1);
    std::uniform_int_distribution<int> count(0, 50);
    std::uniform_int_distribution<int> len(0, 1000);

    std::vector<CallAggregateRecord> calls;
    const int m = len(gen);
    calls.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
      calls.push_back({static_cast<std::uint32_t>(node(gen)),
                       static_cast<std::uint32_t>(node(gen)),
                       static_cast<std::uint64_t>(count(gen))});
    auto built = build_calls_matrix(calls, n);
    auto expect = oracle::calls_counting_oracle(calls, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        CHECK(std::abs(built.at(i, j) - expect[i][j]) <= 1e-12);

    std::vector<TrajectoryRecord> moves;
    const std::size_t users = 1 + gen() % 20;
    for (std::size_t u = 0; u < users; ++u) {
      std::int64_t t = 0;
      const int steps = static_cast<int>(gen() % 50);
      for (int k = 0; k < steps; ++k) {
        t += 1 + static_cast<std::int64_t>(gen() % 10);
        moves.push_back({u, t, static_cast<std::uint32_t>(node(gen))});
      }
    }
    auto mob = build_mobility_matrix(moves, n);
    auto mexpect = oracle::mobility_counting_oracle(moves, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        CHECK(std::abs(mob.at(i, j) - mexpect[i][j]) <= 1e-12);
  }
}

TEST_CASE("mobility builder is invariant under relabeling and interleaving") {
  std::mt19937_64 gen(99);
  std::uniform_int_distribution<std::uint32_t> node(0, 5);

  std::vector<std::vector<TrajectoryRecord>> streams(4);
  for (std::size_t u = 0; u < streams.size(); ++u) {
    std::int64_t t = 0;
    for (int k = 0; k < 30; ++k) {
      t += 1 + static_cast<std::int64_t>(gen() % 5);
      streams[u].push_back({u, t, node(gen)});
    }
  }

  std::vector<TrajectoryRecord> sequential;
  for (const auto& s : streams) sequential.insert(sequential.end(), s.begin(), s.end());

  // Random merge preserving each user's order, plus shifted user ids.
  std::vector<TrajectoryRecord> interleaved;
  std::vector<std::size_t> pos(streams.size(), 0);
  while (interleaved.size() < sequential.size()) {
    const std::size_t u = gen() % streams.size();
    if (pos[u] < streams[u].size()) {
      auto r = streams[u][pos[u]++];
      r.user = r.user * 7919 + 13;  // relabeled
      interleaved.push_back(r);
    }
  }

  auto a = build_mobility_matrix(sequential, 6);
  auto b = build_mobility_matrix(interleaved, 6);
  CHECK(a.data().w == b.data().w);
}

TEST_CASE("record csv round trip") {
  const std::string dir = "/tmp/episim_ingest_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream os(dir + "/calls.csv");
    os << "origin_id,destination_id,call_count\n0,1,3\n0,0,1\n";
  }
  auto recs = read_calls_csv(dir + "/calls.csv");
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].destination == 1);
  CHECK(recs[1].call_count == 1);

  {
    std::ofstream os(dir + "/moves.csv");
    os << "user_id,timestamp,location_id\n1,0,0\n1,5,1\n";
  }
  auto moves = read_trajectories_csv(dir + "/moves.csv");
  REQUIRE(moves.size() == 2);
  CHECK(moves[1].timestamp == 5);

  CHECK_THROWS_AS(read_calls_csv(dir + "/missing.csv"), err::Io);
  {
    std::ofstream os(dir + "/bad.csv");
    os << "origin_id,destination_id,call_count\n0,x,1\n";
  }
  CHECK_THROWS_AS(read_calls_csv(dir + "/bad.csv"), err::Io);
}
