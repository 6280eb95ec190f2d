#include "cqad/analytic.hpp"

#include <cmath>
#include <string>

#include "cqad/error.hpp"

namespace cqad {

double chi_dispersive(double g, double delta, double ec, double pole_epsilon) {
  if (std::abs(delta) < pole_epsilon) {
    throw InvalidArgument("chi_dispersive: detuning " + std::to_string(delta) +
                          " MHz is within the pole guard of delta = 0");
  }
  if (std::abs(delta - ec) < pole_epsilon) {
    throw InvalidArgument("chi_dispersive: detuning " + std::to_string(delta) +
                          " MHz is within the pole guard of delta = E_c");
  }
  return -g * g * ec / (delta * (delta - ec));
}

double stark_shift(double chi, double nbar) {
  if (nbar < 0.0) throw InvalidArgument("stark_shift: negative mean phonon number");
  return 2.0 * chi * nbar;
}

double purcell_idle(const SystemParams& params, double f_idle, double gamma0) {
  double gamma = gamma0;
  for (const auto& m : params.modes) {
    const double detuning = m.f - f_idle;
    if (detuning == 0.0) {
      throw InvalidArgument("purcell_idle: idle frequency coincides with mode " +
                            std::to_string(m.index));
    }
    const double r = m.g / detuning;
    gamma += r * r * m.kappa;
  }
  return gamma;
}

double gamma_prime(const SystemParams& params, int resonant_index) {
  const ModeParams& res = params.mode(resonant_index);
  double gamma = params.qubit.gamma;
  for (const auto& m : params.modes) {
    if (m.index == resonant_index) continue;
    const double detuning = m.f - res.f;
    if (detuning == 0.0) {
      throw InvalidArgument("gamma_prime: mode " + std::to_string(m.index) +
                            " is degenerate with the resonant mode");
    }
    const double r = m.g / detuning;
    gamma += r * r * m.kappa;
  }
  return gamma;
}

double pe_paper(double t, double g, double gamma_p, double kappa) {
  if (g == 0.0) throw InvalidArgument("pe_paper: g = 0, use the exponential limit");
  if (gamma_p < 0.0 || kappa < 0.0) throw InvalidArgument("pe_paper: negative rate");
  const double c = std::cos(kTwoPi * g * t);
  const double exponent =
      -kTwoPi * t * 0.5 * (gamma_p + kappa) + (kappa - gamma_p) / (4.0 * g) * std::sin(2.0 * kTwoPi * g * t);
  return std::exp(exponent) * c * c;
}

namespace {

// sinh(x)/x, accurate near 0.
double sinhc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 + x * x / 6.0;
  return std::sinh(x) / x;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

double pe_exact(double t, double g, double gamma_p, double kappa) {
  if (gamma_p < 0.0 || kappa < 0.0) throw InvalidArgument("pe_exact: negative rate");
  const double a = 0.5 * kTwoPi * gamma_p;  // amplitude damping of c_e
  const double b = 0.5 * kTwoPi * kappa;    // amplitude damping of c_1
  const double G = kTwoPi * g;
  const double s = 0.5 * (a + b);
  const double d = 0.5 * (b - a);
  // c_e(t) = e^{-st} [cosh(mu t) + d sinh(mu t)/mu],  mu^2 = d^2 - G^2.
  const double mu2 = d * d - G * G;
  double amp;  // e^{-st} c_e(t)
  if (mu2 >= 0.0) {
    const double mu = std::sqrt(mu2);
    if (mu * t > 20.0) {
      // Split into the two decaying exponentials; cosh alone would overflow.
      amp = 0.5 * (1.0 + d / mu) * std::exp((mu - s) * t) + 0.5 * (1.0 - d / mu) * std::exp(-(mu + s) * t);
    } else {
      amp = std::exp(-s * t) * (std::cosh(mu * t) + d * t * sinhc(mu * t));
    }
  } else {
    const double w = std::sqrt(-mu2);
    amp = std::exp(-s * t) * (std::cos(w * t) + d * t * sinc(w * t));
  }
  return amp * amp;
}

double coupling_profile(int m, double g0, double phi) {
  if (m < 1) throw InvalidArgument("coupling_profile: mode number must be >= 1");
  return g0 * std::sin(0.5 * std::numbers::pi * m + phi);
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::overdamped_weak: return "overdamped-weak";
    case Regime::transition: return "transition";
    case Regime::strong: return "strong";
  }
  return "unknown";
}

RegimeLabel classify_regime(double g, double gamma_p, double kappa) {
  if (gamma_p < 0.0 || kappa < 0.0) throw InvalidArgument("classify_regime: negative rate");
  const double ag = std::abs(g);
  RegimeLabel label;
  label.discriminant = ag - exceptional_point_coupling(gamma_p, kappa);
  if (label.discriminant < 0.0) {
    label.regime = Regime::overdamped_weak;
  } else if (ag >= 10.0 * std::max(gamma_p, kappa)) {
    label.regime = Regime::strong;
  } else {
    label.regime = Regime::transition;
  }
  return label;
}

}  // namespace cqad
