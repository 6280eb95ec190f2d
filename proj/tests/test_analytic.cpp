#include "doctest.h"

#include <cmath>
#include <complex>

#include "cqad/analytic.hpp"
#include "cqad/error.hpp"
#include "cqad/reference_device.hpp"

using namespace cqad;

namespace {

// Independent oracle: RK4 on the two single-excitation amplitudes.
double pe_rk4(double t, double g, double gp, double kappa) {
  using C = std::complex<double>;
  const C i(0.0, 1.0);
  const double G = kTwoPi * g, Gq = kTwoPi * gp, Gk = kTwoPi * kappa;
  auto f = [&](C ce, C c1, C& dce, C& dc1) {
    dce = -0.5 * Gq * ce - i * G * c1;
    dc1 = -0.5 * Gk * c1 - i * G * ce;
  };
  const int n = 20000;
  const double h = t / n;
  C ce = 1.0, c1 = 0.0;
  for (int k = 0; k < n; ++k) {
    C a1, b1, a2, b2, a3, b3, a4, b4;
    f(ce, c1, a1, b1);
    f(ce + 0.5 * h * a1, c1 + 0.5 * h * b1, a2, b2);
    f(ce + 0.5 * h * a2, c1 + 0.5 * h * b2, a3, b3);
    f(ce + h * a3, c1 + h * b3, a4, b4);
    ce += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    c1 += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
  }
  return std::norm(ce);
}

}  // namespace

TEST_SUITE("analytic") {

TEST_CASE("pe_exact matches an amplitude integration") {
  struct Case { double g, gp, kappa; };
  const Case cases[] = {{1.67, 0.0137, 0.78}, {0.05, 0.2, 2.5}, {0.5, 0.05, 2.0},
                        {2.3 / 4.0, 0.2, 2.5}, {-0.8, 0.01, 1.25}};
  for (const auto& c : cases) {
    for (double t : {0.1, 0.37, 1.0, 2.5}) {
      CAPTURE(c.g);
      CAPTURE(t);
      CHECK(pe_exact(t, c.g, c.gp, c.kappa) == doctest::Approx(pe_rk4(t, c.g, c.gp, c.kappa)).epsilon(1e-9).scale(1e-9));
    }
  }
  CHECK(pe_exact(0.0, 1.0, 0.1, 1.0) == 1.0);
}

TEST_CASE("equal rates: closed form and exact coincide") {
  for (double t : {0.0, 0.2, 0.9}) {
    const double expected = std::exp(-kTwoPi * 0.5 * t) * std::pow(std::cos(kTwoPi * 1.2 * t), 2);
    CHECK(pe_exact(t, 1.2, 0.5, 0.5) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(pe_paper(t, 1.2, 0.5, 0.5) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("pe_paper formula") {
  const double t = 0.3, g = 1.67, gp = 0.0137, k = 0.78;
  const double f = std::exp(-kTwoPi * t * (gp + k) / 2.0 + ((k - gp) / (4.0 * g)) * std::sin(4.0 * M_PI * g * t));
  CHECK(pe_paper(t, g, gp, k) == doctest::Approx(f * std::pow(std::cos(kTwoPi * g * t), 2)));
  CHECK_THROWS_AS(pe_paper(t, 0.0, gp, k), InvalidArgument);
}

TEST_CASE("vanishing coupling leaves the bare qubit decay") {
  for (double t : {0.1, 1.0, 3.0}) {
    CHECK(pe_exact(t, 1e-6, 0.2, 2.5) == doctest::Approx(std::exp(-kTwoPi * 0.2 * t)).epsilon(1e-8));
  }
}

TEST_CASE("continuity through the exceptional point") {
  const double gp = 0.2, k = 2.5;
  const double gep = exceptional_point_coupling(gp, k);
  CHECK(gep == doctest::Approx(0.575));
  for (double t : {0.2, 1.0, 2.0}) {
    const double at = pe_exact(t, gep, gp, k);
    CHECK(std::isfinite(at));
    CHECK(pe_exact(t, gep * (1 + 1e-7), gp, k) == doctest::Approx(at).epsilon(1e-5));
    CHECK(pe_exact(t, gep * (1 - 1e-7), gp, k) == doctest::Approx(at).epsilon(1e-5));
    CHECK(at == doctest::Approx(pe_rk4(t, gep, gp, k)).epsilon(1e-8));
  }
}

TEST_CASE("oscillations appear only above the exceptional point") {
  auto has_zero_crossing_dip = [](double g, double gp, double k) {
    // A strict interior local minimum of P_e marks an oscillation.
    double prev2 = pe_exact(0.0, g, gp, k), prev = pe_exact(0.001, g, gp, k);
    for (int i = 2; i < 8000; ++i) {
      const double cur = pe_exact(0.001 * i, g, gp, k);
      if (prev < prev2 && prev < cur && prev > 1e-12) return true;
      prev2 = prev;
      prev = cur;
    }
    return false;
  };
  CHECK(has_zero_crossing_dip(1.0, 0.2, 2.5));
  CHECK_FALSE(has_zero_crossing_dip(0.3, 0.2, 2.5));
  CHECK(classify_regime(0.3, 0.2, 2.5).regime == Regime::overdamped_weak);
  CHECK(classify_regime(1.0, 0.2, 2.5).regime == Regime::transition);
  CHECK(classify_regime(25.0, 0.2, 2.5).regime == Regime::strong);
  CHECK(classify_regime(-25.0, 0.2, 2.5).regime == Regime::strong);
  CHECK(classify_regime(0.3, 0.2, 2.5).discriminant == doctest::Approx(0.3 - 0.575));
  CHECK(to_string(Regime::overdamped_weak) == "overdamped-weak");
}

TEST_CASE("dispersive shift sign and poles") {
  const double ec = 171.0;
  for (double delta : {-400.0, -50.0, 20.0, 85.0, 150.0, 250.0, 600.0}) {
    const double chi = chi_dispersive(0.5, delta, ec);
    CAPTURE(delta);
    CHECK((chi > 0.0) == (delta > 0.0 && delta < ec));
    CHECK(chi == doctest::Approx(-0.25 * ec / (delta * (delta - ec))));
  }
  CHECK_THROWS_AS(chi_dispersive(0.5, 0.5, ec), InvalidArgument);
  CHECK_THROWS_AS(chi_dispersive(0.5, ec - 0.2, ec), InvalidArgument);
  CHECK_NOTHROW(chi_dispersive(0.5, 0.5, ec, 0.1));
  CHECK(stark_shift(0.01, 3.0) == doctest::Approx(0.06));
}

TEST_CASE("Purcell rates") {
  const SystemParams p = reference::seven_mode_system(reference::kCouplingMaxMHz);
  double sum = 0.0;
  for (std::size_t i = 0; i < 7; ++i) {
    const double r = reference::kCouplingMaxMHz[i] / (reference::kModeFreqMHz[i] - 4700.0);
    sum += r * r * reference::kModeKappaMHz[i];
  }
  CHECK(purcell_idle(p, 4700.0, 1e-3) == doctest::Approx(sum + 1e-3));

  SystemParams q = reference::seven_mode_system(reference::kCouplingMaxMHz, 4768.5, 12.2e-3);
  double others = 0.0;
  for (std::size_t i = 0; i < 7; ++i) {
    if (i == 5) continue;
    const double r = reference::kCouplingMaxMHz[i] / (reference::kModeFreqMHz[i] - reference::kModeFreqMHz[5]);
    others += r * r * reference::kModeKappaMHz[i];
  }
  CHECK(gamma_prime(q, 6) == doctest::Approx(12.2e-3 + others));
}

TEST_CASE("coupling profile") {
  CHECK(coupling_profile(1, 2.0, 0.0) == doctest::Approx(2.0));
  CHECK(coupling_profile(2, 2.0, 0.0) == doctest::Approx(0.0).scale(1.0));
  CHECK(coupling_profile(3, 2.0, 0.0) == doctest::Approx(-2.0));
  CHECK(coupling_profile(4, 1.0, M_PI / 2) == doctest::Approx(1.0));
}

}
