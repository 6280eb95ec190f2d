#include "cqad/reset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cqad/analytic.hpp"
#include "cqad/error.hpp"

namespace cqad {

void ResetConfig::check() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidArgument("reset: gamma must be >= 0");
  if (!(kappa_r > 0.0) || !std::isfinite(kappa_r)) throw InvalidArgument("reset: kappa_r must be positive");
  if (!std::isfinite(delta_r)) throw InvalidArgument("reset: delta_r must be finite");
  if (ratios.empty()) throw InvalidArgument("reset: ratios must not be empty");
  for (double r : ratios) {
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("reset: ratios must be positive");
  }
  if (thresholds.empty()) throw InvalidArgument("reset: thresholds must not be empty");
  for (double th : thresholds) {
    if (!(th > 0.0 && th < 1.0)) throw InvalidArgument("reset: thresholds must lie in (0, 1)");
  }
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidArgument("reset: t_max must be positive");
  if (!(dt > 0.0) || dt > t_max) throw InvalidArgument("reset: dt must lie in (0, t_max]");
}

std::vector<double> ResetConfig::default_ratios() {
  std::vector<double> r(81);
  for (int i = 0; i < 81; ++i) r[static_cast<std::size_t>(i)] = std::pow(10.0, -2.0 + 4.0 * i / 80.0);
  return r;
}

std::optional<double> reset_time(const TimeSeries& pg, double threshold) {
  pg.check();
  if (pg.empty()) throw InvalidArgument("reset_time: empty series");
  // Walk back from the end to the last sample below the threshold.
  std::size_t i = pg.size();
  while (i > 0 && pg.values[i - 1] >= threshold) --i;
  if (i == pg.size()) return std::nullopt;
  return pg.times[i];
}

TimeSeries reset_trace(const ResetConfig& cfg, double ratio, EvolveStats* stats) {
  const double g = ratio * cfg.kappa_r;
  const std::vector<double> times = time_grid(cfg.t_max, cfg.dt);
  TimeSeries pg;
  pg.label = "P_g";
  if (cfg.dynamics == ResetDynamics::analytic) {
    pg.times = times;
    pg.values.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      pg.values[i] = 1.0 - pe_exact(times[i], g, cfg.gamma, cfg.kappa_r);
    }
    return pg;
  }
  // Qubit and reset mode only; the frequencies drop out on resonance.
  SystemParams p;
  p.qubit = {5000.0, 200.0, cfg.gamma};
  p.modes = {{1, 5000.0, cfg.kappa_r, g}};
  HilbertSpec spec;
  spec.mode_levels = {3};
  EvolveOptions opts;
  opts.store_states = false;
  TimeSeries pe = simulate_resonant_pe(p, spec, 1, times, opts, stats);
  pg.times = std::move(pe.times);
  pg.values.resize(pe.values.size());
  for (std::size_t i = 0; i < pe.values.size(); ++i) pg.values[i] = 1.0 - pe.values[i];
  return pg;
}

std::vector<ResetSweepRow> sweep_reset(const ResetConfig& cfg, EvolveStats* stats) {
  cfg.check();
  std::vector<ResetSweepRow> rows;
  rows.reserve(cfg.ratios.size());
  for (double ratio : cfg.ratios) {
    EvolveStats local;
    const TimeSeries pg = reset_trace(cfg, ratio, stats ? &local : nullptr);
    if (stats) stats->merge(local);
    ResetSweepRow row;
    row.ratio = ratio;
    for (double th : cfg.thresholds) row.reset_times.push_back(reset_time(pg, th));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ResetMinimum> sweep_minima(const ResetConfig& cfg, std::span<const ResetSweepRow> rows) {
  std::vector<ResetMinimum> out;
  for (std::size_t k = 0; k < cfg.thresholds.size(); ++k) {
    ResetMinimum m;
    m.threshold = cfg.thresholds[k];
    for (const auto& row : rows) {
      if (k >= row.reset_times.size()) throw InvalidArgument("sweep_minima: row/threshold mismatch");
      const auto& t = row.reset_times[k];
      if (t && (!m.time || *t < *m.time)) {
        m.time = t;
        m.ratio = row.ratio;
      }
    }
    out.push_back(m);
  }
  return out;
}

double purcell_impact(double g_r, double kappa_r, double delta_r, double gamma) {
  if (delta_r == 0.0) throw InvalidArgument("purcell_impact: zero detuning");
  if (!(gamma > 0.0)) throw InvalidArgument("purcell_impact: gamma must be positive");
  if (kappa_r < 0.0) throw InvalidArgument("purcell_impact: negative kappa_r");
  return g_r * g_r * kappa_r / (delta_r * delta_r * gamma);
}

std::vector<double> impact_crossings(const ResetConfig& cfg, std::span<const double> levels) {
  if (cfg.delta_r == 0.0) throw InvalidArgument("impact_crossings: zero detuning");
  if (!(cfg.gamma > 0.0)) throw InvalidArgument("impact_crossings: gamma must be positive");
  if (!(cfg.kappa_r > 0.0)) throw InvalidArgument("impact_crossings: kappa_r must be positive");
  std::vector<double> out;
  for (double level : levels) {
    if (!(level > 0.0)) throw InvalidArgument("impact_crossings: levels must be positive");
    out.push_back(std::sqrt(level * cfg.gamma * cfg.delta_r * cfg.delta_r / cfg.kappa_r) / cfg.kappa_r);
  }
  return out;
}

}  // namespace cqad
