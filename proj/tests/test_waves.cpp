#include <doctest.h>

#include <cmath>

#include "hbq/errors.hpp"
#include "hbq/waves.hpp"

using namespace hbq;

TEST_SUITE("waves") {
  TEST_CASE("quadratic family constants") {
    const SolitaryWave w = solitary_params({1, 1, 2, +1});
    // independent evaluation: c^2 = 1/(1 - 4 eta1^2 (p+1)^2 / (eta2 (p^2+2p+5)^2))
    const double c2 = 1.0 / (1.0 - 36.0 / 169.0);
    CHECK(w.speed == doctest::Approx(std::sqrt(c2)).epsilon(1e-14));
    CHECK(w.speed == doctest::Approx(1.1272).epsilon(5e-5));
    CHECK(w.amplitude == doctest::Approx(0.3947).epsilon(2e-4));
    CHECK(w.inverse_width == doctest::Approx(0.1387).epsilon(3e-4));
    CHECK(w.sech_power() == 4.0);
  }

  TEST_CASE("eta1 = eta2 = 2 gives the larger collision wave") {
    const SolitaryWave w = solitary_params({2, 2, 2, +1});
    CHECK(w.speed * w.speed == doctest::Approx(338.0 / 194.0).epsilon(1e-14));
    CHECK(w.amplitude == doctest::Approx(4.0 * 338.0 / 194.0 * 105.0 / 676.0).epsilon(1e-14));
    CHECK(w.amplitude == doctest::Approx(1.08).epsilon(5e-3));
  }

  TEST_CASE("families without a solitary wave") {
    CHECK_THROWS_AS(solitary_params({1, 0.1, 2, +1}), NoSolitaryWave);
    CHECK_THROWS_AS(solitary_params({1, 0.0, 2, +1}), NoSolitaryWave);
    CHECK_THROWS_AS(solitary_params({1, 1, 3, -1}), NoSolitaryWave);
  }

  TEST_CASE("profile shape") {
    const SolitaryWave w = solitary_params({1, 1, 3, +1}).centered_at(-5.0);
    const double t = 2.5;
    const double peak = w.center + w.speed * t;
    CHECK(solitary_profile(w, peak, t) == w.amplitude);
    double prev = w.amplitude;
    for (double d = 0.5; d < 80; d += 0.5) {
      const double right = solitary_profile(w, peak + d, t);
      CHECK(right < prev);
      CHECK(right == doctest::Approx(solitary_profile(w, peak - d, t)).epsilon(1e-12));
      prev = right;
    }
    CHECK(prev < 1e-12);

    const SolitaryWave left = w.reversed();
    CHECK(left.speed == -w.speed);
    CHECK(solitary_profile(left, w.center - w.speed * t, t) == w.amplitude);
  }

  TEST_CASE("velocity is the time derivative of the profile") {
    for (int p : {2, 3, 4, 5}) {
      const SolitaryWave w = solitary_params({1, 1, p, +1}).centered_at(1.0);
      const double h = 1e-5;
      double err = 0.0;
      for (double x = -40; x <= 40; x += 0.37) {
        const double fd = (solitary_profile(w, x, 0.3 + h) - solitary_profile(w, x, 0.3 - h)) / (2 * h);
        err = std::max(err, std::abs(fd - solitary_velocity(w, x, 0.3)));
      }
      CHECK(err < 1e-9);
    }
  }

  TEST_CASE("traveling-wave ODE residual") {
    const GridSpec g = make_grid(100.0, 512);
    for (int p : {2, 3, 4, 5}) {
      const SolitaryWave w = solitary_params({1, 1, p, +1});
      CHECK(traveling_ode_residual(w, g) < 1e-10);
    }
    for (double eta : {0.5, 2.0, 3.0}) {
      CHECK(traveling_ode_residual(solitary_params({eta, eta, 2, +1}), g) < 1e-10);
    }
    SolitaryWave bad = solitary_params({1, 1, 2, +1});
    bad.amplitude *= 1.01;
    CHECK(traveling_ode_residual(bad, g) > 1e-4);
  }

  TEST_CASE("improved Boussinesq wave") {
    CHECK(ibq_speed(0.9) == doctest::Approx(std::sqrt(1.6)).epsilon(1e-15));
    CHECK(ibq_speed(0.9) == doctest::Approx(1.2649).epsilon(1e-4));
    CHECK(ibq_profile(0.9, 0.0, 0.0) == 0.9);
    CHECK(ibq_profile(0.9, ibq_speed(0.9) * 3.0, 3.0) == doctest::Approx(0.9));

    const GridSpec g = make_grid(100.0, 512);
    const State s = ibq_initial_state(0.9, g);
    const double h = 1e-5;
    double err_u = 0.0, err_v = 0.0;
    for (int j = 0; j < g.size(); ++j) {
      const double x = g.node(j);
      err_u = std::max(err_u, std::abs(s.u[j] - ibq_profile(0.9, x, 0.0)));
      const double fd = (ibq_profile(0.9, x, h) - ibq_profile(0.9, x, -h)) / (2 * h);
      err_v = std::max(err_v, std::abs(s.v[j] - fd));
    }
    CHECK(err_u == 0.0);
    CHECK(err_v < 1e-9);
  }

  TEST_CASE("solitary state samples profile and velocity") {
    const GridSpec g = make_grid(50.0, 256);
    const SolitaryWave w = solitary_params({1, 1, 2, +1});
    const State s = solitary_state(w, g, 1.5);
    CHECK(s.t == 1.5);
    for (int j = 0; j < g.size(); j += 17) {
      CHECK(s.u[j] == solitary_profile(w, g.node(j), 1.5));
      CHECK(s.v[j] == solitary_velocity(w, g.node(j), 1.5));
    }
  }
}
