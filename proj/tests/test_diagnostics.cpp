#include <doctest.h>

#include <cmath>
#include <utility>

#include "hbq/diagnostics.hpp"
#include "hbq/errors.hpp"
#include "hbq/experiments.hpp"
#include "hbq/waves.hpp"

using namespace hbq;

TEST_SUITE("diagnostics") {
  TEST_CASE("linf error examples") {
    const std::vector<double> a{1.0, -2.0, 3.5};
    CHECK(linf_error(a, a) == 0.0);
    std::vector<double> b = a;
    for (auto& x : b) x += 0.25;
    CHECK(linf_error(b, a) == 0.25);
  }

  TEST_CASE("convergence order examples") {
    std::vector<std::pair<int, double>> rows{{2, 8.662e-3}, {5, 2.530e-4}};
    auto t = convergence_order(rows);
    REQUIRE(t.size() == 2);
    CHECK_FALSE(t[0].order.has_value());
    CHECK(*t[1].order == doctest::Approx(3.8561).epsilon(5e-5));

    rows = {{10, 16.0}, {20, 1.0}};
    CHECK(*convergence_order(rows)[1].order == doctest::Approx(4.0));
    rows = {{10, 1e-3}, {20, 1e-3}};
    CHECK(*convergence_order(rows)[1].order == 0.0);
  }

  TEST_CASE("convergence order errors") {
    std::vector<std::pair<int, double>> one{{2, 1e-3}};
    CHECK_THROWS_AS(convergence_order(one), InvalidArgument);
    std::vector<std::pair<int, double>> zero{{2, 1e-3}, {4, 0.0}};
    CHECK_THROWS_AS(convergence_order(zero), DegenerateInput);
    std::vector<std::pair<int, double>> unsorted{{4, 1e-3}, {2, 1e-4}};
    CHECK_THROWS_AS(convergence_order(unsorted), InvalidArgument);
  }

  TEST_CASE("convergence order reproduces the reference orders") {
    // reference time-convergence errors and their orders to four decimals
    const std::vector<std::pair<int, double>> time{
        {2, 8.6620e-3}, {5, 2.5301e-4}, {10, 1.6142e-5}, {50, 2.6233e-8}, {100, 1.6369e-9}};
    const std::vector<double> time_orders{3.8561, 3.9703, 3.9908, 4.0024};
    const auto t = convergence_order(time);
    for (std::size_t i = 0; i < time_orders.size(); ++i)
      CHECK(std::abs(*t[i + 1].order - time_orders[i]) <= 0.05);
  }

  TEST_CASE("conserved integrals of the zero state") {
    const GridSpec g = make_grid(10.0, 64);
    const auto c = conserved_integrals({RealField(64, 0.0), RealField(64, 0.0), 0.0}, g, {});
    CHECK(c.I1 == 0.0);
    CHECK(c.I1_surrogate == 0.0);
    CHECK(c.I2 == 0.0);
    CHECK(c.I3 == 0.0);
    CHECK_THROWS_AS(conserved_integrals({RealField(64, 0.0), RealField(64, 1.0), 0.0}, g, {}),
                    NonzeroMean);
  }

  TEST_CASE("blow-up data has negative initial energy") {
    for (BlowupCase c : {BlowupCase::quadratic, BlowupCase::cubic}) {
      const BlowupData d = blowup_data(c);
      const GridSpec g = make_grid(10.0, 512);
      const double I3 = blowup_initial_energy(d, g, d.params);
      CHECK(I3 < 0.0);
      // the closed form Psi agrees with the spectral antiderivative of psi away from the
      // tails, so both routes to I3 agree closely
      const State s = blowup_initial_state(d, g);
      const auto ci = conserved_integrals(s, g, d.params);
      CHECK(ci.I3 == doctest::Approx(I3).epsilon(1e-6));
    }
  }

  TEST_CASE("I3 is nearly conserved for a propagating solitary wave") {
    const HbqParams p{1, 1, 2, +1};
    const GridSpec g = make_grid(100.0, 512);
    const SolitaryWave w = solitary_params(p);
    const State s0 = solitary_initial_state(w, g);
    const Trajectory tr = evolve(s0, g, p, TimeGrid(5.0, 5000), 5000);
    const double I0 = conserved_integrals(s0, g, p).I3;
    const double I1 = conserved_integrals(tr.final, g, p).I3;
    CHECK(std::abs(I1 - I0) <= 1e-6 * std::abs(I0));
  }

  TEST_CASE("blow-up inequality sampling") {
    CHECK(blowup_condition_check({1, 1, 2, +1}, 0.25, -10.0, 10.0, 10'001));
    CHECK(blowup_condition_check({1, 1, 3, -1}, 0.5, -10.0, 10.0, 10'001));
    CHECK(blowup_condition_check({1, 1, 2, +1}, 0.25, -100.0, 100.0, 1'000'000));
    CHECK(blowup_mu(2) == 0.25);
    CHECK(blowup_mu(3) == 0.5);
    // gap 2 mu u^2 + (4 mu - 1) u^3 / 3 for +u^2 and 2 mu u^2 + (1 - 2 mu) u^4 / 2 for -u^3
    CHECK_FALSE(blowup_condition_check({1, 1, 2, +1}, 0.2, -100.0, 100.0, 10'001));
    CHECK_FALSE(blowup_condition_check({1, 1, 2, +1}, 0.3, -100.0, 100.0, 10'001));
    CHECK_FALSE(blowup_condition_check({1, 1, 3, -1}, 0.7, -10.0, 10.0, 10'001));
    CHECK_THROWS_AS(blowup_condition_check({1, 1, 2, +1}, 0.25, -1.0, 1.0, 10), InvalidArgument);
  }

  TEST_CASE("blow-up time detection") {
    Trajectory tr;
    tr.norms = {{0.0, 1.0}, {1.0, 50.0}, {2.0, 150.0}};
    const auto t = detect_blowup_time(tr, 100.0);
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(1.5));
    CHECK_FALSE(detect_blowup_time(tr, 1000.0).has_value());

    const HbqParams p{1, 1, 2, +1};
    const GridSpec g = make_grid(100.0, 256);
    const Trajectory sol = evolve(solitary_initial_state(solitary_params(p), g), g, p,
                                  TimeGrid(5.0, 200), 50);
    CHECK_FALSE(detect_blowup_time(sol, 10.0).has_value());
  }

  TEST_CASE("amplitude of the initial IBq data") {
    const GridSpec g = make_grid(100.0, 512);
    Trajectory tr;
    tr.final = ibq_initial_state(0.9, g);
    CHECK(amplitude(tr) == 0.9);
  }

  TEST_CASE("diagnostics record") {
    const HbqParams p{1, 1, 2, +1};
    const GridSpec g = make_grid(100.0, 256);
    const State s = solitary_initial_state(solitary_params(p), g);
    const auto r = make_record(s, g, p, s.u);
    CHECK(r.linf_u >= r.amplitude);
    CHECK(r.linf_error.value() == 0.0);
    CHECK_FALSE(r.blowup_flag);
    CHECK(r.I1 == doctest::Approx(mass_surrogate(s.u, g)));
    CHECK(r.I3.has_value());
    CHECK(make_record(s, g, p, {}, 0.3).blowup_flag);
    State bad = s;
    bad.u[5] = NAN;
    const auto rb = make_record(bad, g, p);
    CHECK(rb.blowup_flag);
    CHECK_FALSE(rb.I3.has_value());
  }
}
