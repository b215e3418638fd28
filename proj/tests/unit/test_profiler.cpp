#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "reform/error.hpp"
#include "reform/profiler.hpp"

using namespace reform;

namespace {

Trajectory traj(std::size_t id, double step, std::vector<double> estimates) {
  Trajectory t;
  t.network_id = id;
  for (std::size_t k = 0; k < estimates.size(); ++k) {
    t.samples.push_back({scheduled_time(static_cast<std::int64_t>(k + 1), step), estimates[k]});
  }
  return t;
}

Corpus small_corpus(std::size_t count = 6) {
  Corpus c;
  c.params.n_nodes = 12;
  c.seed = 5;
  c.count = count;
  return c;
}

std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("reform_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("profiler") {
  TEST_CASE("rho histogram of a halving then flat trajectory") {
    auto tm = fit_transition_model({traj(0, 0.5, {16, 8, 8})}, 0.5, {0.0});
    REQUIRE(tm.rho.size() == 1);
    const auto& bins = tm.rho[0].bins();
    REQUIRE(bins.size() == 2);
    CHECK(bins[0].value == 0.5);
    CHECK(bins[0].mass == doctest::Approx(0.5));
    CHECK(bins[1].atom());
    CHECK(bins[1].value == 1.0);
    CHECK(bins[1].mass == doctest::Approx(0.5));
  }

  TEST_CASE("non-improving trajectories give a point mass at one") {
    auto tm = fit_transition_model({traj(0, 0.5, {9, 9, 9, 9}), traj(1, 0.5, {4, 4, 4, 4})}, 1.0, {0.0, 1.0});
    for (const auto& h : tm.rho) {
      REQUIRE(h.size() == 1);
      CHECK(h.bins()[0].value == 1.0);
      CHECK(h.bins()[0].mass == 1.0);
    }
  }

  TEST_CASE("empty t_r bins inherit their nearest neighbour") {
    auto tm = fit_transition_model({traj(0, 0.5, {16, 8, 4, 4})}, 0.5, {0.0, 1.2, 5.0, 9.0});
    CHECK(tm.inherited == std::vector<bool>{false, false, true, true});
    CHECK(tm.rho[2] == tm.rho[1]);
    CHECK(tm.rho[3] == tm.rho[1]);
    auto low = fit_transition_model({traj(0, 0.5, {16, 8, 4, 4, 4, 4})}, 0.5, {0.0, 0.6, 0.7, 2.0});
    CHECK(low.inherited == std::vector<bool>{false, true, false, false});
    CHECK(low.rho[1] == low.rho[0]);
  }

  TEST_CASE("transition fitting rejects bad inputs") {
    CHECK_THROWS_AS(fit_transition_model({traj(0, 0.5, {4, 2})}, 0.75, {0.0}), ConfigError);
    CHECK_THROWS_AS(fit_transition_model({traj(0, 0.5, {4})}, 0.5, {0.0}), ConfigError);
    CHECK_THROWS_AS(fit_transition_model({traj(0, 0.5, {4, 2})}, 0.5, {}), ConfigError);
    CHECK_THROWS_AS(fit_transition_model({traj(0, 0.5, {2, 4})}, 0.5, {0.0}), std::logic_error);
  }

  TEST_CASE("exec family from two trajectories and a point-mass tau") {
    ExecPerUnitModel pu{Histogram::atoms(std::vector<double>{1.0}, std::vector<double>{1.0}), ""};
    auto fam = derive_exec_family({traj(0, 0.5, {8, 8}), traj(1, 0.5, {32, 16})}, pu, {0.5, 1.0});
    REQUIRE(fam.dists.size() == 2);
    const auto& d1 = fam.dists[1].hist.bins();
    REQUIRE(d1.size() == 2);
    CHECK(d1[0].value == 8.0);
    CHECK(d1[0].mass == doctest::Approx(0.5));
    CHECK(d1[1].value == 16.0);
    CHECK(d1[1].mass == doctest::Approx(0.5));
    CHECK(fam.dists[0].hist.mean() == doctest::Approx(20.0));
    CHECK_THROWS_AS(derive_exec_family({traj(0, 0.5, {8, 8})}, pu, {0.75}), ConfigError);
  }

  TEST_CASE("point-mass trajectories with point-mass tau give point-mass execution times") {
    ExecPerUnitModel pu{Histogram::atoms(std::vector<double>{2e-6}, std::vector<double>{1.0}), ""};
    auto fam = derive_exec_family({traj(0, 0.5, {1000, 500}), traj(1, 0.5, {1000, 500})}, pu, {0.5, 1.0});
    CHECK(fam.dists[0].hist.size() == 1);
    CHECK(fam.dists[0].hist.mean() == doctest::Approx(2e-3));
    CHECK(fam.dists[1].hist.mean() == doctest::Approx(1e-3));
  }

  TEST_CASE("corpus manifest round trip and validation") {
    auto c = small_corpus();
    c.params.edge_density = 0.3;
    CHECK(read_corpus_manifest(write_corpus_manifest(c)) == c);
    CHECK(c.network(2) == c.network(2));
    CHECK_FALSE(c.network(2) == c.network(3));
    CHECK_THROWS_AS(read_corpus_manifest(R"({"version":1,"generator":{"n_nodes":0},"seed":1,"count":2})"), ConfigError);
    CHECK_THROWS_AS(read_corpus_manifest("not json"), ParseError);
  }

  TEST_CASE("network tau is a per-network lognormal draw") {
    auto c = small_corpus(200);
    TauSpec spec;
    CHECK(network_tau(c, spec, 3) == network_tau(c, spec, 3));
    std::vector<double> logs;
    for (std::size_t i = 0; i < c.count; ++i) logs.push_back(std::log(network_tau(c, spec, i) / spec.median));
    std::sort(logs.begin(), logs.end());
    CHECK(std::abs(logs[100]) < 0.15);
    TauSpec point{3e-6, 0.0};
    CHECK(network_tau(c, point, 7) == doctest::Approx(3e-6).epsilon(1e-12));
    auto clk = make_clock(ProfileClock{}, c, 0);
    CHECK(clk->simulated());
    ProfileClock wall;
    wall.mode = ClockMode::Wall;
    CHECK_FALSE(make_clock(wall, c, 0)->simulated());
  }

  TEST_CASE("trajectory collection is deterministic and monotone") {
    auto c = small_corpus();
    ProfileClock clock;
    auto a = collect_trajectories(c, 2.0, 0.5, clock, 13);
    auto b = collect_trajectories(c, 2.0, 0.5, clock, 13);
    CHECK(a == b);
    REQUIRE(a.size() == c.count);
    for (const auto& t : a) {
      REQUIRE(t.samples.size() == 4);
      CHECK(t.samples[0].t_r == 0.5);
      CHECK(t.samples[3].t_r == 2.0);
      for (std::size_t j = 1; j < t.samples.size(); ++j) CHECK(t.samples[j].estimate <= t.samples[j - 1].estimate);
      CHECK(t.normalized().front() == 1.0);
    }
    ProfileClock serial = clock;
    serial.threads = 1;
    CHECK(collect_trajectories(c, 2.0, 0.5, serial, 13) == a);
  }

  TEST_CASE("per-unit model: point-mass tau reproduces the median exactly") {
    auto c = small_corpus();
    ProfileClock clock;
    clock.tau = TauSpec{2e-6, 0.0};
    auto pu = collect_exec_per_unit(c, clock, 1);
    CHECK(pu.tau.mean() == doctest::Approx(2e-6).epsilon(1e-9));
    CHECK(pu.context.find("clock=sim") != std::string::npos);
    ProfileClock spread;
    auto a = collect_exec_per_unit(c, spread, 1);
    CHECK(write_exec_per_unit(a) == write_exec_per_unit(collect_exec_per_unit(c, spread, 1)));
  }

  TEST_CASE("trajectory archive round trip") {
    auto dir = fresh_dir("archive");
    std::vector<Trajectory> ts{traj(0, 0.5, {16, 8, 8}), traj(7, 0.5, {3, 3, 1})};
    write_trajectory_archive(ts, dir);
    CHECK(std::filesystem::exists(dir / "trajectory_7.csv"));
    CHECK(read_trajectory_archive(dir) == ts);
    std::filesystem::remove_all(dir);
  }
}
