#pragma once

// Closed-form results: dispersive shifts, Purcell rates, single-excitation
// resonant evolution, the mode-dependent coupling profile and coupling-regime
// classification. All arguments follow the library unit convention (MHz, us).

#include <string>
#include <string_view>

#include "cqad/model.hpp"

namespace cqad {

/// Default distance (MHz) from either pole of the dispersive shift below
/// which chi_dispersive refuses to evaluate.
inline constexpr double kDefaultPoleEpsilon = 1.0;

/// Dispersive shift chi = -g^2 ec / (delta (delta - ec)) with delta = f01 - f_m.
/// Positive exactly in the straddling window 0 < delta < ec.
double chi_dispersive(double g, double delta, double ec, double pole_epsilon = kDefaultPoleEpsilon);

/// AC Stark shift 2 chi nbar.
double stark_shift(double chi, double nbar);

/// Purcell-limited decay of a qubit parked at f_idle:
///   sum_m (g_m / (f_m - f_idle))^2 kappa_m + gamma0.
double purcell_idle(const SystemParams& params, double f_idle, double gamma0);

/// Qubit decay while resonant with mode `resonant_index`: the intrinsic rate
/// params.qubit.gamma plus the Purcell contribution of every other mode,
/// detuned by f_n - f_m.
double gamma_prime(const SystemParams& params, int resonant_index);

/// Approximate resonant P_e(t):
///   exp[-2 pi t (gp + kappa)/2 + ((kappa - gp)/(4 g)) sin(4 pi g t)] cos^2(2 pi g t).
/// Valid away from the overdamped boundary; g must be non-zero.
double pe_paper(double t, double g, double gamma_p, double kappa);

/// Exact single-excitation P_e(t) for a damped qubit resonantly coupled to a
/// damped mode. Amplitudes obey
///   c_e' = -(Gq/2) c_e - i G c_1,   c_1' = -(Gk/2) c_1 - i G c_e
/// with Gq = 2pi gamma_p, Gk = 2pi kappa, G = 2pi g. Continuous through the
/// exceptional point.
double pe_exact(double t, double g, double gamma_p, double kappa);

/// Sinusoidal mode-number dependence g0 sin(pi m / 2 + phi).
double coupling_profile(int m, double g0, double phi);

enum class Regime { overdamped_weak, transition, strong };

std::string_view to_string(Regime r);

struct RegimeLabel {
  Regime regime = Regime::overdamped_weak;
  double discriminant = 0.0;  ///< |g| - |kappa - gamma_p|/4, MHz
};

/// overdamped-weak below the exceptional point (|g| < |kappa - gp|/4),
/// strong for |g| >= 10 max(gp, kappa), transition otherwise.
RegimeLabel classify_regime(double g, double gamma_p, double kappa);

/// Coupling at which the two eigenvalues of the single-excitation generator
/// coalesce: |kappa - gamma_p| / 4.
inline double exceptional_point_coupling(double gamma_p, double kappa) {
  const double d = kappa - gamma_p;
  return (d < 0 ? -d : d) / 4.0;
}

}  // namespace cqad
