#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "hbq/errors.hpp"
#include "hbq/experiments.hpp"

using namespace hbq;

namespace {

void check_same(const ResultSet& a, const ResultSet& b) {
  REQUIRE(a.tables.size() == b.tables.size());
  for (std::size_t i = 0; i < a.tables.size(); ++i) {
    CHECK(a.tables[i].columns == b.tables[i].columns);
    REQUIRE(a.tables[i].rows.size() == b.tables[i].rows.size());
    for (std::size_t r = 0; r < a.tables[i].rows.size(); ++r) {
      const auto& x = a.tables[i].rows[r];
      const auto& y = b.tables[i].rows[r];
      REQUIRE(x.size() == y.size());
      for (std::size_t c = 0; c < x.size(); ++c)
        CHECK((x[c] == y[c] || (std::isnan(x[c]) && std::isnan(y[c]))));
    }
  }
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("scenario names round trip") {
    CHECK(all_scenarios().size() == 9);
    for (Scenario s : all_scenarios()) CHECK(parse_scenario(to_string(s)) == s);
    CHECK_FALSE(parse_scenario("table9").has_value());
  }

  TEST_CASE("presets are valid") {
    for (Scenario s : all_scenarios()) {
      const ExperimentConfig c = default_config(s);
      CHECK(c.scenario == s);
      CHECK_NOTHROW(c.validate());
    }
    const auto t1 = default_config(Scenario::time_convergence);
    CHECK(t1.M_list == std::vector<int>{2, 5, 10, 50, 100});
    CHECK(t1.N == 512);
    CHECK(t1.T == 5.0);
  }

  TEST_CASE("config validation") {
    auto c = default_config(Scenario::collision);
    c.jobs = 0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = default_config(Scenario::blowup_refinement);
    c.guard = c.threshold / 2;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = default_config(Scenario::time_convergence);
    c.N = 7;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
  }

  TEST_CASE("table helpers") {
    Table t{"x", {"a", "b"}, {}};
    t.add_row({1.0, 2.0});
    CHECK_THROWS_AS(t.add_row({1.0}), InvalidArgument);
    CHECK(t.column("b") == 1);
    CHECK_THROWS_AS(t.column("c"), InvalidArgument);
    ResultSet rs{"x", {t}, {{"k", "v"}}};
    CHECK(rs.table("x").rows.size() == 1);
    CHECK_THROWS_AS(rs.table("y"), InvalidArgument);
    CHECK(*rs.find_metadata("k") == "v");
    CHECK(rs.find_metadata("z") == nullptr);
    CHECK_FALSE(rs.empty());
    CHECK(ResultSet{"e", {}, {}}.empty());
  }

  TEST_CASE("parallel_for covers every index and rethrows") {
    std::vector<int> hits(50, 0);
    parallel_for(50, 4, [&](int i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    std::atomic<int> ran{0};
    CHECK_THROWS_AS(parallel_for(10, 3,
                                 [&](int i) {
                                   ++ran;
                                   if (i == 4) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
  }

  TEST_CASE("time convergence runner layout") {
    auto c = default_config(Scenario::time_convergence);
    c.M_list = {2, 5};
    const ResultSet rs = run_experiment(c);
    CHECK(rs.scenario == "time_convergence");
    const Table& t = rs.tables.front();
    CHECK(t.columns == std::vector<std::string>{"M", "linf_error", "order"});
    REQUIRE(t.rows.size() == 2);
    CHECK(std::isnan(t.rows[0][2]));
    CHECK(t.rows[0][1] == doctest::Approx(8.662e-3).epsilon(0.01));
    CHECK(t.rows[1][2] == doctest::Approx(3.8561).epsilon(0.01));
  }

  TEST_CASE("space convergence: errors fall and orders grow") {
    const ResultSet rs = run_experiment(default_config(Scenario::space_convergence));
    const Table& t = rs.tables.front();
    REQUIRE(t.rows.size() == 5);
    for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i][1] < t.rows[i - 1][1]);
    for (std::size_t i = 2; i < t.rows.size(); ++i) CHECK(t.rows[i][2] > t.rows[i - 1][2]);
    CHECK(t.rows.back()[1] <= 1e-10);
  }

  TEST_CASE("time convergence and nonlinearity sweep agree at a shared (N, M)") {
    auto sweep = default_config(Scenario::nonlinearity_sweep);
    sweep.p_list = {2};
    sweep.N_list = {512};
    const ResultSet a = run_experiment(sweep);
    const Table& ta = a.tables.front();
    REQUIRE(ta.rows.size() == 1);
    const int M = static_cast<int>(ta.rows[0][ta.column("M")]);

    auto tc = default_config(Scenario::time_convergence);
    tc.M_list = {M / 2, M};
    const ResultSet b = run_experiment(tc);
    const double eb = b.tables.front().rows[1][1];
    CHECK(std::abs(ta.rows[0][ta.column("linf_error")] - eb) <= 1e-12);
  }

  TEST_CASE("runners are deterministic") {
    auto c = default_config(Scenario::collision);
    c.N = 128;
    c.M = 200;
    c.T = 2.0;
    c.sample_stride = 50;
    c.jobs = 2;
    check_same(run_experiment(c), run_experiment(c));

    auto s = default_config(Scenario::space_convergence);
    s.N_list = {10, 50};
    check_same(run_experiment(s), run_experiment(s));
  }

  TEST_CASE("blow-up refinement rows carry the precondition checks") {
    auto c = default_config(Scenario::blowup_refinement);
    c.ladder = {{64, 500}};
    const ResultSet rs = run_experiment(c);
    const Table& t = rs.tables.front();
    REQUIRE(t.rows.size() == 2);
    for (const auto& row : t.rows) {
      CHECK(row[t.column("I3_0")] < 0.0);
      CHECK(row[t.column("criterion_met")] == 1.0);
      CHECK(row[t.column("blowup_labeled")] == 1.0);
      CHECK(std::isfinite(row[t.column("t_blowup")]));
    }
    const Table& pre = rs.table("preconditions");
    for (const auto& row : pre.rows) CHECK(row[pre.column("mu_check")] == 1.0);
    CHECK_FALSE(rs.table("trace").rows.empty());
  }

  TEST_CASE("blow-up runner rejects other scenarios") {
    CHECK_THROWS_AS(run_blowup(default_config(Scenario::collision)), InvalidArgument);
  }

  TEST_CASE("collision initial data is the sum of two mirrored waves") {
    const HbqParams p{1, 1, 2, +1};
    const GridSpec g = make_grid(100.0, 512);
    const State s = collision_initial_state(p, g, -40.0, 40.0);
    // mirror symmetry about x = 0 (x_j -> -x_j is j -> N - j)
    for (int j = 1; j < g.size(); ++j) {
      CHECK(s.u[j] == doctest::Approx(s.u[g.size() - j]).epsilon(1e-12));
    }
    CHECK(max_abs(s.u) == doctest::Approx(0.3947).epsilon(1e-3));
  }
}
