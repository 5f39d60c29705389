#include <doctest.h>

#include <numeric>

#include "mpcp/io.hpp"
#include "mpcp/taskgen.hpp"

using namespace mpcp;

TEST_SUITE("taskgen") {

TEST_CASE("SplitMix64 reference outputs") {
  SplitMix64 sm(1234567);
  CHECK(sm.next() == 6457827717110365317ULL);
  CHECK(sm.next() == 3203168211198807973ULL);
  CHECK(sm.next() == 9817491932198370423ULL);
}

TEST_CASE("xoshiro256** frozen outputs") {
  Xoshiro256 rng(42);
  CHECK(rng.next() == 1546998764402558742ULL);
  CHECK(rng.next() == 6990951692964543102ULL);
  CHECK(rng.next() == 12544586762248559009ULL);

  auto trial = Xoshiro256::for_trial(42, 3);
  CHECK(trial.next() == 16041810072113905099ULL);
  CHECK(Xoshiro256::for_trial(42, 3).uniform() == 0.869628266539287);
}

TEST_CASE("uniform draws stay in range") {
  Xoshiro256 rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const auto k = rng.uniform_int(2, 3);
    CHECK((k == 2 || k == 3));
  }
}

TEST_CASE("constrained UUnifast") {
  Xoshiro256 rng(3);
  SUBCASE("single value is the total") {
    auto u = constrained_uunifast(0.12, 1, 0.1, 0.15, rng);
    REQUIRE(u.size() == 1);
    CHECK(u[0] == doctest::Approx(0.12).epsilon(1e-12));
  }
  SUBCASE("sum and range hold across draws") {
    for (int round = 0; round < 500; ++round) {
      const std::size_t n = 1 + rng.uniform_int(0, 80);
      const double total = rng.uniform(0.1 * n, 0.15 * n);
      auto u = constrained_uunifast(total, n, 0.1, 0.15, rng);
      CHECK(std::accumulate(u.begin(), u.end(), 0.0) == doctest::Approx(total).epsilon(1e-9));
      for (double x : u) {
        CHECK(x >= 0.1 - 1e-12);
        CHECK(x <= 0.15 + 1e-12);
      }
    }
  }
  SUBCASE("infeasible requests") {
    CHECK_THROWS_AS(constrained_uunifast(2.0, 10, 0.1, 0.15, rng), InfeasibleError);
    CHECK_THROWS_AS(constrained_uunifast(0.5, 10, 0.1, 0.15, rng), InfeasibleError);
    CHECK_THROWS_AS(constrained_uunifast(0.5, 0, 0.1, 0.15, rng), InfeasibleError);
  }
}

TEST_CASE("classic UUnifast sums to the total") {
  Xoshiro256 rng(9);
  auto u = uunifast(3.0, 20, rng);
  CHECK(u.size() == 20);
  CHECK(std::accumulate(u.begin(), u.end(), 0.0) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("default generator shape") {
  GenConfig cfg;
  cfg.seed = 42;
  const TaskSet ts = generate(cfg);
  CHECK(ts.size() == 64);
  CHECK(ts.resource_count() == 25);
  CHECK(ts.total_utilization() == doctest::Approx(8.0).epsilon(1e-9));

  for (TaskId i = 0; i < ts.size(); ++i) {
    const Task& t = ts.task(i);
    CHECK(t.wcet >= 20.0);
    CHECK(t.wcet < 100.0);
    CHECK(t.deadline == t.period);
    CHECK(t.utilization() >= 0.1 - 1e-9);
    CHECK(t.utilization() <= 0.15 + 1e-9);
    CHECK((t.sections.size() == 2 || t.sections.size() == 3));
    const std::size_t group = i / 15;
    for (const auto& s : t.sections) {
      CHECK(s.resource / 5 == group);
      CHECK(s.duration == doctest::Approx(0.12 * t.wcet).epsilon(1e-12));
    }
  }
  // Rate-monotonic, ties by lower id.
  for (TaskId a = 0; a < ts.size(); ++a)
    for (TaskId b = a + 1; b < ts.size(); ++b) {
      const Task& ta = ts.task(a);
      const Task& tb = ts.task(b);
      if (ta.period < tb.period || ta.period == tb.period) CHECK(ta.priority > tb.priority);
      else CHECK(ta.priority < tb.priority);
    }
}

TEST_CASE("generator statistics") {
  GenConfig cfg;
  cfg.total_load = 1.0;  // 8 tasks per set
  double wcet_sum = 0;
  std::size_t n_tasks = 0, two = 0, three = 0;
  for (std::uint64_t trial = 0; n_tasks < 10000; ++trial) {
    auto rng = Xoshiro256::for_trial(17, trial);
    const TaskSet ts = generate(cfg, rng);
    for (const auto& t : ts.tasks()) {
      wcet_sum += t.wcet;
      (t.sections.size() == 2 ? two : three)++;
      ++n_tasks;
    }
  }
  CHECK(wcet_sum / n_tasks == doctest::Approx(60.0).epsilon(0.02));
  CHECK(double(two) / n_tasks >= 0.45);
  CHECK(double(two) / n_tasks <= 0.55);
  CHECK(double(three) / n_tasks >= 0.45);
}

TEST_CASE("same seed gives byte-identical output") {
  GenConfig cfg;
  cfg.seed = 2024;
  CHECK(task_set_to_json(generate(cfg)).dump() == task_set_to_json(generate(cfg)).dump());
  GenConfig other = cfg;
  other.seed = 2025;
  CHECK(task_set_to_json(generate(cfg)).dump() != task_set_to_json(generate(other)).dump());
}

TEST_CASE("degenerate configurations") {
  GenConfig cfg;
  SUBCASE("no critical sections") {
    cfg.cs_ratio = 0;
    const TaskSet ts = generate(cfg);
    for (const auto& t : ts.tasks())
      for (const auto& s : t.sections) CHECK(s.duration == 0);
  }
  SUBCASE("fixed utilization") {
    cfg.util_min = cfg.util_max = 0.17;
    const TaskSet ts = generate(cfg);
    CHECK(ts.size() == 47);
    for (const auto& t : ts.tasks()) CHECK(t.utilization() == doctest::Approx(0.17).epsilon(1e-12));
  }
  SUBCASE("classic UUnifast mode") {
    cfg.mode = GenMode::UUnifast;
    cfg.total_load = 2;
    const TaskSet ts = generate(cfg);
    CHECK(ts.total_utilization() == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("invalid settings") {
    GenConfig bad = cfg;
    bad.total_load = 0;
    CHECK_THROWS_AS(generate(bad), ConfigError);
    bad = cfg;
    bad.util_min = 0.2;
    CHECK_THROWS_AS(generate(bad), ConfigError);
    bad = cfg;
    bad.cs_ratio = 0.5;
    CHECK_THROWS_AS(generate(bad), ConfigError);
    bad = cfg;
    bad.resources_per_group = 0;
    CHECK_THROWS_AS(generate(bad), ConfigError);
  }
}

}  // TEST_SUITE
