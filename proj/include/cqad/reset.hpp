#pragma once

// Qubit reset through a lossy mode: reset-time sweeps versus coupling and the
// Purcell cost of that coupling when the qubit idles detuned from the mode.

#include <optional>
#include <span>
#include <vector>

#include "cqad/engine.hpp"
#include "cqad/model.hpp"

namespace cqad {

enum class ResetDynamics {
  analytic,  ///< closed-form single-excitation P_e (default)
  engine,    ///< master-equation integration of qubit + reset mode
};

struct ResetConfig {
  double gamma = 0.2;    ///< qubit intrinsic decay, MHz
  double kappa_r = 2.5;  ///< reset mode decay, MHz
  double delta_r = 300.0;  ///< idle detuning from the reset mode, MHz
  std::vector<double> ratios = default_ratios();  ///< g_r / kappa_r
  std::vector<double> thresholds = {0.99, 0.999};
  double t_max = 20.0;  ///< us
  double dt = 1e-3;     ///< us
  ResetDynamics dynamics = ResetDynamics::analytic;

  void check() const;
  /// 81 log-spaced ratios over [1e-2, 1e2].
  static std::vector<double> default_ratios();
};

struct ResetSweepRow {
  double ratio = 0.0;
  std::vector<std::optional<double>> reset_times;  ///< us per threshold; empty = not reached
};

/// Smallest sample time t* with pg(t) >= threshold for every sample t >= t*.
std::optional<double> reset_time(const TimeSeries& pg, double threshold);

/// P_g(t) = 1 - P_e(t) of a qubit prepared in |e> and resonant with the reset
/// mode, sampled on [0, t_max] with step dt.
TimeSeries reset_trace(const ResetConfig& cfg, double ratio, EvolveStats* stats = nullptr);

/// One row per ratio, in the order of cfg.ratios.
std::vector<ResetSweepRow> sweep_reset(const ResetConfig& cfg, EvolveStats* stats = nullptr);

struct ResetMinimum {
  double threshold = 0.0;
  std::optional<double> ratio;  ///< empty when no ratio reaches the threshold
  std::optional<double> time;
};

/// Location of the smallest reset time per threshold.
std::vector<ResetMinimum> sweep_minima(const ResetConfig& cfg, std::span<const ResetSweepRow> rows);

/// Purcell rate through the reset mode relative to the intrinsic rate:
/// g_r^2 kappa_r / (delta_r^2 gamma).
double purcell_impact(double g_r, double kappa_r, double delta_r, double gamma);

/// g_r / kappa_r at which purcell_impact equals each level.
std::vector<double> impact_crossings(const ResetConfig& cfg, std::span<const double> levels);

}  // namespace cqad
