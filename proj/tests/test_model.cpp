#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hbq/errors.hpp"
#include "hbq/model.hpp"
#include "hbq/waves.hpp"
#include "support.hpp"

using namespace hbq;
using std::numbers::pi;

TEST_SUITE("model") {
  TEST_CASE("parameter validation") {
    CHECK_NOTHROW(HbqParams{}.validate());
    CHECK_NOTHROW((HbqParams{1.0, 0.0, 2, +1}.validate()));
    CHECK_THROWS_AS((HbqParams{0.0, 1.0, 2, +1}.validate()), InvalidArgument);
    CHECK_THROWS_AS((HbqParams{1.0, -0.1, 2, +1}.validate()), InvalidArgument);
    CHECK_THROWS_AS((HbqParams{1.0, 1.0, 1, +1}.validate()), InvalidArgument);
    CHECK_THROWS_AS((HbqParams{1.0, 1.0, 2, 0}.validate()), InvalidArgument);
  }

  TEST_CASE("nonlinearity and potential") {
    const HbqParams q{1, 1, 2, +1};
    const HbqParams c{1, 1, 3, -1};
    CHECK(q.nonlinearity(-3.0) == 9.0);
    CHECK(c.nonlinearity(2.0) == -8.0);
    CHECK(c.potential(2.0) == doctest::Approx(-4.0));
    // F' = f by central difference
    for (double u : {-1.3, 0.2, 2.7}) {
      const double h = 1e-5;
      CHECK((c.potential(u + h) - c.potential(u - h)) / (2 * h) ==
            doctest::Approx(c.nonlinearity(u)).epsilon(1e-8));
    }
    CHECK(int_pow(-2.0, 5) == -32.0);
  }

  TEST_CASE("symbol examples") {
    const GridSpec g = make_grid(pi, 16);
    const HbqParams p{1, 1, 2, +1};
    CHECK(symbol_sigma(0, g, p) == 0.0);
    CHECK(symbol_sigma(1, g, p) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    const HbqParams ibq{1.5, 0.0, 2, +1};
    for (int k = -8; k < 8; ++k) {
      const double kk = k * k;
      CHECK(symbol_sigma(k, g, ibq) == doctest::Approx(kk / (1 + 1.5 * kk)));
    }
  }

  TEST_CASE("symbol is positive, bounded and decreasing in eta2") {
    const GridSpec g = make_grid(100.0, 4096);
    for (double eta1 : {0.5, 1.0, 2.0}) {
      for (double eta2 : {0.01, 0.3, 1.0, 5.0}) {
        const HbqParams p{eta1, eta2, 2, +1};
        const HbqParams stiffer{eta1, eta2 * 1.5, 2, +1};
        // max of y/(1 + eta1 y + eta2 y^2) over y >= 0 is at y = 1/sqrt(eta2)
        const double bound = 1.0 / (eta1 + 2.0 * std::sqrt(eta2));
        for (int k = -2048; k < 2048; ++k) {
          const double s = symbol_sigma(k, g, p);
          if (k != 0) {
            CHECK(s > 0.0);
            CHECK(symbol_sigma(k, g, stiffer) < s);
          }
          CHECK(s <= bound * (1 + 1e-15));
        }
      }
    }
  }

  TEST_CASE("nonlinear term examples") {
    auto c = nonlinear_term(RealField(16, 2.0), {1, 1, 2, +1});
    CHECK(c(0).real() == doctest::Approx(4.0));
    for (int k = 1; k < 8; ++k) CHECK(std::abs(c(k)) < 1e-14);
    c = nonlinear_term(RealField(16, 2.0), {1, 1, 3, -1});
    CHECK(c(0).real() == doctest::Approx(-8.0));
    c = nonlinear_term(RealField(16, 0.0), {});
    for (int k = -8; k < 8; ++k) CHECK(c(k) == Complex(0.0));
  }

  TEST_CASE("rhs examples") {
    const GridSpec g = make_grid(10.0, 32);
    State zero{RealField(32, 0.0), RealField(32, 0.0), 0.0};
    const auto r = rhs(zero, g, {});
    for (int k = -16; k < 16; ++k) {
      CHECK(r.du_dt(k) == Complex(0.0));
      CHECK(r.dv_dt(k) == Complex(0.0));
    }
    State s{test::noise(32, 5), RealField(32, 0.0), 0.0};
    const auto r2 = rhs(s, g, {});
    for (int k = -16; k < 16; ++k) CHECK(r2.du_dt(k) == Complex(0.0));
  }

  TEST_CASE("rhs matches a finite-difference time derivative of the solitary wave") {
    const HbqParams p{1, 1, 2, +1};
    const GridSpec g = make_grid(100.0, 512);
    const SolitaryWave w = solitary_params(p).centered_at(3.0);
    const State s = solitary_initial_state(w, g);
    const auto r = rhs(s, g, p);
    const auto dv = inverse_dft(r.dv_dt);
    const auto du = inverse_dft(r.du_dt);
    const double h = 1e-5;
    double err_v = 0.0, err_u = 0.0;
    for (int j = 0; j < g.size(); ++j) {
      const double x = g.node(j);
      const double vtt =
          (solitary_velocity(w, x, h) - solitary_velocity(w, x, -h)) / (2 * h);
      err_v = std::max(err_v, std::abs(dv[j] - vtt));
      err_u = std::max(err_u, std::abs(du[j] - s.v[j]));
    }
    CHECK(err_v < 1e-7);
    CHECK(err_u < 1e-14);
  }

  TEST_CASE("operator agrees with rhs and conserves the zero mode") {
    const GridSpec g = make_grid(20.0, 128);
    const HbqParams p{1.3, 0.7, 3, -1};
    const auto u = g.sample([](double x) { return 0.4 * std::exp(-x * x / 8) + 0.05; });
    HbqOperator op(g, p);
    RealField dv(128);
    op.acceleration(u, dv);
    const auto ref = inverse_dft(rhs(State{u, RealField(128, 0.0), 0.0}, g, p).dv_dt);
    CHECK(test::max_diff(dv, ref) < 1e-14);

    std::vector<Complex> half(65);
    op.acceleration_spectrum(u, half);
    CHECK(half[0] == Complex(0.0));
    CHECK(std::abs(mean(dv)) < 1e-16);
  }

  TEST_CASE("operator commutes with grid translations") {
    const GridSpec g = make_grid(15.0, 96);
    const HbqParams p{1, 0.5, 2, +1};
    const auto u = g.sample([](double x) { return 0.8 / std::cosh(0.6 * (x - 2.0)); });
    HbqOperator op(g, p);
    RealField a(96), b(96), shifted(96);
    const int s = 17;
    for (int j = 0; j < 96; ++j) shifted[(j + s) % 96] = u[j];
    op.acceleration(u, a);
    op.acceleration(shifted, b);
    double err = 0.0;
    for (int j = 0; j < 96; ++j) err = std::max(err, std::abs(b[(j + s) % 96] - a[j]));
    CHECK(err < 1e-14);
  }

  TEST_CASE("two-thirds dealiasing only differs on under-resolved fields") {
    const GridSpec g = make_grid(100.0, 512);
    const HbqParams p{1, 1, 2, +1};
    const State s = solitary_initial_state(solitary_params(p), g);
    HbqOperator plain(g, p), filtered(g, p, Dealiasing::two_thirds);
    RealField a(512), b(512);
    plain.acceleration(s.u, a);
    filtered.acceleration(s.u, b);
    CHECK(test::max_diff(a, b) < 1e-15);
  }
}
