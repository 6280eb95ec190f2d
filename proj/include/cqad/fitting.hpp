#pragma once

// Least-squares parameter extraction: a bounded Levenberg-Marquardt core and
// the domain fits built on it (T1 decays, resonant evolution, coupling
// profile, Purcell sweep).

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqad/model.hpp"

namespace cqad {

struct FitResult {
  std::vector<std::string> param_names;
  std::vector<double> values;
  std::vector<double> std_errors;  ///< from the Jacobian at the optimum
  double residual_rms = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> notes;  ///< diagnostics such as "non-oscillatory"

  double value(std::string_view name) const;
  double std_error(std::string_view name) const;
  bool has_note(std::string_view note) const;
};

struct Bounds {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

struct LeastSquaresOptions {
  int max_iterations = 500;
  double cost_rtol = 1e-10;     ///< stop when the relative cost decrease falls below this
  double gradient_tol = 1e-12;  ///< stop when |J^T r|_inf falls below this
  double initial_lambda = 1e-3;
  double fd_rel_step = 1e-7;    ///< central-difference step relative to |p|
};

/// Model value at time t for parameter vector p.
using ParametricModel = std::function<double(double t, std::span<const double> p)>;

/// Damped Gauss-Newton (Levenberg-Marquardt with Marquardt diagonal scaling)
/// on the sum of squared residuals, parameters clamped to `bounds`.
/// Deterministic. On iteration exhaustion returns the best point with
/// converged = false; throws NumericalError when a parameter has no influence
/// on the residuals (singular Jacobian).
FitResult least_squares(const ParametricModel& model, const TimeSeries& data,
                        std::vector<double> init, std::vector<Bounds> bounds,
                        std::vector<std::string> names = {}, const LeastSquaresOptions& opts = {});

/// P_e = A exp(-t/T1) + B. Parameters "A", "T1" (us), "B".
FitResult fit_exponential(const TimeSeries& data);

enum class ResonantModel {
  exact,  ///< pe_exact (default)
  paper,  ///< the approximate closed form pe_paper
};

/// amplitude * P_e(t; |g|, gamma_p_fixed, kappa) + offset. Parameters "g"
/// (returned as |g|), "kappa", "amplitude", "offset". Adds the note
/// "non-oscillatory" when no spectral peak is found or the fitted coupling
/// lies below the exceptional point.
FitResult fit_resonant(const TimeSeries& data, double gamma_p_fixed,
                       ResonantModel model = ResonantModel::exact);

/// g_m = g0 sin(pi m / 2 + phi) over signed (m, g_m) pairs. Returns "g0" > 0
/// and "phi" in (-pi, pi].
FitResult fit_coupling_profile(std::span<const std::pair<int, double>> couplings);

/// Idle decay versus a coupling scale s:
///   gamma(s) = s^2 sum_m (ghat_m / (f_m - f_idle))^2 kappa_m + gamma0
/// with f_idle = params.qubit.f01 and kappa_m, f_m from params. Linear in
/// (s^2, gamma), solved in closed form. Parameters "gamma0", "slope" and
/// "coupling_scale" (multiplier on ghat that reproduces the slope).
FitResult fit_purcell(std::span<const std::pair<double, double>> points,
                      std::span<const double> profile, const SystemParams& params);

}  // namespace cqad
