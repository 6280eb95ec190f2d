#include "cqad/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>

#include "cqad/analytic.hpp"
#include "cqad/error.hpp"

namespace cqad {

namespace {

std::size_t index_of(const std::vector<std::string>& names, std::string_view name) {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw InvalidArgument("fit result has no parameter '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - names.begin());
}

double clamp_to(double v, const Bounds& b) { return std::min(std::max(v, b.lo), b.hi); }

}  // namespace

double FitResult::value(std::string_view name) const { return values[index_of(param_names, name)]; }

double FitResult::std_error(std::string_view name) const {
  return std_errors[index_of(param_names, name)];
}

bool FitResult::has_note(std::string_view note) const {
  return std::find(notes.begin(), notes.end(), note) != notes.end();
}

FitResult least_squares(const ParametricModel& model, const TimeSeries& data,
                        std::vector<double> init, std::vector<Bounds> bounds,
                        std::vector<std::string> names, const LeastSquaresOptions& opts) {
  data.check();
  const std::size_t np = init.size();
  const std::size_t nd = data.size();
  if (np == 0) throw InvalidArgument("least_squares: no parameters");
  if (nd <= np) throw InvalidArgument("least_squares: need more data points than parameters");
  if (bounds.empty()) bounds.assign(np, Bounds{});
  if (bounds.size() != np) throw InvalidArgument("least_squares: bounds/init size mismatch");
  if (names.empty()) {
    for (std::size_t j = 0; j < np; ++j) names.push_back("p" + std::to_string(j));
  }
  if (names.size() != np) throw InvalidArgument("least_squares: names/init size mismatch");
  for (std::size_t j = 0; j < np; ++j) {
    if (!(init[j] >= bounds[j].lo && init[j] <= bounds[j].hi)) {
      throw InvalidArgument("least_squares: initial value of '" + names[j] + "' outside its bounds");
    }
  }

  const auto n = static_cast<Eigen::Index>(nd);
  const auto m = static_cast<Eigen::Index>(np);

  auto residuals = [&](const std::vector<double>& p, Eigen::VectorXd& r) {
    for (Eigen::Index i = 0; i < n; ++i) {
      r(i) = model(data.times[static_cast<std::size_t>(i)], p) - data.values[static_cast<std::size_t>(i)];
    }
  };
  auto jacobian = [&](std::vector<double> p, Eigen::MatrixXd& jac) {
    Eigen::VectorXd rp(n), rm(n);
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      const double p0 = p[ju];
      const double h = opts.fd_rel_step * std::max(std::abs(p0), 1e-3);
      const double up = std::min(p0 + h, bounds[ju].hi);
      const double dn = std::max(p0 - h, bounds[ju].lo);
      p[ju] = up;
      residuals(p, rp);
      p[ju] = dn;
      residuals(p, rm);
      p[ju] = p0;
      jac.col(j) = (rp - rm) / (up - dn);
    }
  };

  std::vector<double> p = std::move(init);
  Eigen::VectorXd r(n);
  residuals(p, r);
  double cost = 0.5 * r.squaredNorm();
  if (!std::isfinite(cost)) throw NumericalError("least_squares: model is not finite at the initial point");

  Eigen::MatrixXd jac(n, m);
  double lambda = opts.initial_lambda;
  FitResult result;
  result.param_names = names;

  int iter = 0;
  bool converged = false;
  while (iter < opts.max_iterations) {
    jacobian(p, jac);
    for (Eigen::Index j = 0; j < m; ++j) {
      if (jac.col(j).cwiseAbs().maxCoeff() == 0.0) {
        throw NumericalError("least_squares: singular Jacobian (parameter '" +
                             names[static_cast<std::size_t>(j)] + "' has no effect)");
      }
    }
    const Eigen::VectorXd grad = jac.transpose() * r;
    if (grad.cwiseAbs().maxCoeff() < opts.gradient_tol || cost == 0.0) {
      converged = true;
      break;
    }
    ++iter;
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd diag = jtj.diagonal().cwiseMax(1e-300);

    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += lambda * diag;
      const Eigen::VectorXd delta = a.ldlt().solve(-grad);
      std::vector<double> trial(np);
      double step_norm = 0.0;
      double p_norm = 0.0;
      for (std::size_t j = 0; j < np; ++j) {
        trial[j] = clamp_to(p[j] + delta(static_cast<Eigen::Index>(j)), bounds[j]);
        step_norm = std::max(step_norm, std::abs(trial[j] - p[j]));
        p_norm = std::max(p_norm, std::abs(p[j]));
      }
      Eigen::VectorXd r_trial(n);
      residuals(trial, r_trial);
      const double cost_trial = 0.5 * r_trial.squaredNorm();
      if (std::isfinite(cost_trial) && cost_trial < cost) {
        const double rel = (cost - cost_trial) / cost;
        p = std::move(trial);
        r = std::move(r_trial);
        cost = cost_trial;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        if (rel < opts.cost_rtol) converged = true;
      } else {
        lambda *= 4.0;
        // No descent is possible at this resolution: the point is a minimum
        // to working precision.
        if (lambda > 1e16 || step_norm <= 1e-15 * std::max(p_norm, 1e-300)) {
          converged = true;
          break;
        }
      }
    }
    if (converged) break;
  }

  result.values = p;
  result.iterations = iter;
  result.converged = converged;
  result.residual_rms = std::sqrt(2.0 * cost / static_cast<double>(nd));

  jacobian(p, jac);
  const Eigen::MatrixXd jtj = jac.transpose() * jac;
  const double s2 = 2.0 * cost / static_cast<double>(nd - np);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
  result.std_errors.assign(np, std::numeric_limits<double>::infinity());
  if (lu.isInvertible()) {
    const Eigen::MatrixXd cov = lu.inverse() * s2;
    for (std::size_t j = 0; j < np; ++j) {
      const double v = cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j));
      result.std_errors[j] = v >= 0.0 ? std::sqrt(v) : std::numeric_limits<double>::infinity();
    }
  }
  return result;
}

// --- exponential ----------------------------------------------------------

FitResult fit_exponential(const TimeSeries& data) {
  data.check();
  const std::size_t n = data.size();
  if (n < 4) throw InvalidArgument("fit_exponential: need at least 4 points");

  const std::size_t tail = std::max<std::size_t>(1, n / 4);
  const double b0 = std::accumulate(data.values.end() - static_cast<std::ptrdiff_t>(tail),
                                    data.values.end(), 0.0) / static_cast<double>(tail);
  const double a0 = data.values.front() - b0;
  const double scale = std::max({std::abs(b0), std::abs(data.values.front()), 1e-300});
  if (!(a0 > 1e-9 * scale)) throw InvalidArgument("fit_exponential: non-decaying data");

  // Time to fall to B + A/e.
  const double level = b0 + a0 / std::numbers::e;
  double t_cross = -1.0;
  for (std::size_t i = 1; i < n; ++i) {
    if (data.values[i] <= level) {
      const double v0 = data.values[i - 1];
      const double v1 = data.values[i];
      const double frac = v0 == v1 ? 0.0 : (v0 - level) / (v0 - v1);
      t_cross = data.times[i - 1] + frac * (data.times[i] - data.times[i - 1]);
      break;
    }
  }
  const double t0 = data.times.front();
  if (!(t_cross > t0)) throw InvalidArgument("fit_exponential: non-decaying data");
  const double t1_0 = t_cross - t0;

  const ParametricModel model = [](double t, std::span<const double> p) {
    return p[0] * std::exp(-t / p[1]) + p[2];
  };
  const double span = data.times.back() - t0;
  return least_squares(model, data, {a0 * std::exp(t0 / t1_0), t1_0, b0},
                       {Bounds{}, Bounds{1e-9 * span, std::numeric_limits<double>::infinity()}, Bounds{}},
                       {"A", "T1", "B"});
}

// --- resonant evolution ---------------------------------------------------

namespace {

// Candidate oscillation frequencies (MHz): the strongest interior local
// maxima of the power spectrum of data - baseline, strongest first. The decay
// itself only makes a monotone lobe at low frequency. A plain spectrum, not
// one of the first difference: differencing lifts white noise near Nyquist by
// orders of magnitude over a MHz-scale oscillation. Direct DFT, so
// non-uniform grids are fine.
std::vector<double> spectral_peaks(const TimeSeries& data, double baseline, std::size_t max_peaks) {
  const std::size_t n = data.size();
  const double span = data.times.back() - data.times.front();
  const double dt = span / static_cast<double>(n - 1);
  const double f_lo = 0.5 / span;
  const double f_hi = 0.5 / dt;
  const std::size_t grid = std::max<std::size_t>(64, 8 * n);
  std::vector<double> freq(grid), power(grid);
  for (std::size_t k = 0; k < grid; ++k) {
    freq[k] = f_lo + (f_hi - f_lo) * static_cast<double>(k) / static_cast<double>(grid - 1);
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += (data.values[i] - baseline) * std::polar(1.0, -kTwoPi * freq[k] * data.times[i]);
    }
    power[k] = std::norm(acc);
  }
  std::vector<double> sorted = power;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(grid / 2), sorted.end());
  const double floor = 20.0 * sorted[grid / 2];

  std::vector<std::size_t> maxima;
  for (std::size_t k = 1; k + 1 < grid; ++k) {
    if (power[k] > power[k - 1] && power[k] >= power[k + 1] && power[k] > floor) maxima.push_back(k);
  }
  std::sort(maxima.begin(), maxima.end(), [&](std::size_t a, std::size_t b) { return power[a] > power[b]; });
  std::vector<double> out;
  for (std::size_t i = 0; i < maxima.size() && i < max_peaks; ++i) out.push_back(freq[maxima[i]]);
  return out;
}

// Envelope decay rate (rad/us) whose exponential has the same area as the
// data above its tail level, e^{-rt} integrated over the window.
double area_decay_rate(const TimeSeries& data, double baseline) {
  double area = 0.0;
  for (std::size_t i = 1; i < data.size(); ++i) {
    area += 0.5 * (data.values[i] + data.values[i - 1] - 2.0 * baseline) *
            (data.times[i] - data.times[i - 1]);
  }
  const double a0 = data.values.front() - baseline;
  const double span = data.times.back() - data.times.front();
  if (!(area > 0.0) || !(a0 > 0.0)) return 1.0 / span;
  // Solve a0 (1 - e^{-r T}) / r = area for r by bisection on a log scale.
  double lo = 1e-6 / span;
  double hi = 1e6 / span;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    const double val = a0 * (1.0 - std::exp(-mid * span)) / mid;
    (val > area ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

}  // namespace

FitResult fit_resonant(const TimeSeries& data, double gamma_p_fixed, ResonantModel which) {
  data.check();
  if (data.size() < 8) throw InvalidArgument("fit_resonant: need at least 8 points");
  if (gamma_p_fixed < 0.0) throw InvalidArgument("fit_resonant: negative gamma_p");

  const std::size_t n = data.size();
  const std::size_t tail = std::max<std::size_t>(1, n / 8);
  double baseline = 0.0;
  for (std::size_t i = n - tail; i < n; ++i) baseline += data.values[i];
  baseline /= static_cast<double>(tail);
  const double amp0 = data.values.front() - baseline;

  const std::vector<double> peaks = spectral_peaks(data, baseline, 3);
  const bool decays = amp0 > 0.05 * std::max(std::abs(data.values.front()), 1e-300);
  if (peaks.empty() && !decays) {
    throw InvalidArgument("fit_resonant: data shows neither an oscillation nor a decay");
  }

  const double rate = area_decay_rate(data, baseline);  // rad/us
  // P_e oscillates at twice the coupling; the envelope decays at 2pi (gp + kappa)/2.
  const double kappa_osc = std::max(2.0 * rate / kTwoPi - gamma_p_fixed, 1e-3);
  // Overdamped: the slow rate is roughly gp + 4 g^2 / kappa; assume a fast
  // mode and start from a weak coupling.
  const double kappa_od = std::max(10.0 * rate / kTwoPi, 1e-3);
  const double g_od = 0.5 * std::sqrt(std::max(rate / kTwoPi - gamma_p_fixed, 1e-6) * kappa_od);

  const ParametricModel model = [gamma_p_fixed, which](double t, std::span<const double> p) {
    const double g = std::max(std::abs(p[0]), 1e-12);
    const double pe = which == ResonantModel::exact ? pe_exact(t, g, gamma_p_fixed, p[1])
                                                    : pe_paper(t, g, gamma_p_fixed, p[1]);
    return p[2] * pe + p[3];
  };
  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<Bounds> bounds = {{1e-9, inf}, {0.0, inf}, {-inf, inf}, {-inf, inf}};
  const std::vector<std::string> names = {"g", "kappa", "amplitude", "offset"};

  // Deterministic multi-start: every spectral candidate, plus the overdamped
  // seeds; the lowest residual wins.
  std::vector<std::pair<double, double>> starts;
  for (double f : peaks) {
    for (double km : {0.5, 1.0, 2.0}) starts.emplace_back(0.5 * f, kappa_osc * km);
  }
  for (double gm : {0.25, 1.0, 4.0}) {
    for (double km : {0.5, 1.0, 2.0}) starts.emplace_back(g_od * gm, kappa_od * km);
  }

  FitResult best;
  bool have = false;
  for (const auto& [gs, ks] : starts) {
    FitResult r;
    try {
      r = least_squares(model, data, {gs, ks, data.values.front(), 0.0}, bounds, names);
    } catch (const NumericalError&) {
      continue;
    }
    if (!have || r.residual_rms < best.residual_rms) {
      best = std::move(r);
      have = true;
    }
  }
  if (!have) throw NumericalError("fit_resonant: no start point converged");

  best.values[0] = std::abs(best.values[0]);
  const RegimeLabel label = classify_regime(best.values[0], gamma_p_fixed, best.values[1]);
  if (peaks.empty() || label.regime == Regime::overdamped_weak) best.notes.emplace_back("non-oscillatory");
  best.notes.emplace_back(std::string("regime: ") + std::string(to_string(label.regime)));
  return best;
}

// --- coupling profile -----------------------------------------------------

FitResult fit_coupling_profile(std::span<const std::pair<int, double>> couplings) {
  if (couplings.size() < 3) throw InvalidArgument("fit_coupling_profile: need at least 3 points");
  std::vector<std::pair<int, double>> pts(couplings.begin(), couplings.end());
  std::sort(pts.begin(), pts.end());
  TimeSeries data;
  data.label = "coupling profile";
  for (const auto& [m, g] : pts) {
    if (m < 1) throw InvalidArgument("fit_coupling_profile: mode numbers must be >= 1");
    data.times.push_back(m);
    data.values.push_back(g);
  }
  data.check();

  auto basis = [](double m, double phi) { return std::sin(0.5 * std::numbers::pi * m + phi); };

  // Grid over the phase with the amplitude solved in closed form.
  constexpr int kGrid = 72;
  double best_cost = std::numeric_limits<double>::infinity();
  double best_phi = 0.0;
  double best_g0 = 0.0;
  for (int k = 0; k < kGrid; ++k) {
    const double phi = -std::numbers::pi + kTwoPi * (k + 1) / kGrid;
    double sy = 0.0;
    double ss = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double s = basis(data.times[i], phi);
      sy += s * data.values[i];
      ss += s * s;
    }
    if (ss == 0.0) continue;
    const double g0 = sy / ss;
    double cost = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double d = g0 * basis(data.times[i], phi) - data.values[i];
      cost += d * d;
    }
    if (cost < best_cost) {
      best_cost = cost;
      best_phi = phi;
      best_g0 = g0;
    }
  }

  const ParametricModel model = [&basis](double m, std::span<const double> p) {
    return p[0] * basis(m, p[1]);
  };
  FitResult r = least_squares(model, data, {best_g0, best_phi}, {}, {"g0", "phi"});
  double g0 = r.values[0];
  double phi = r.values[1];
  if (g0 < 0.0) {
    g0 = -g0;
    phi += std::numbers::pi;
  }
  phi = std::remainder(phi, kTwoPi);  // [-pi, pi]
  if (phi <= -std::numbers::pi) phi += kTwoPi;
  r.values = {g0, phi};
  return r;
}

// --- Purcell sweep --------------------------------------------------------

FitResult fit_purcell(std::span<const std::pair<double, double>> points,
                      std::span<const double> profile, const SystemParams& params) {
  validate(params);
  if (profile.size() != params.modes.size()) {
    throw InvalidArgument("fit_purcell: profile must give one relative coupling per mode");
  }
  if (points.size() < 2) throw InvalidArgument("fit_purcell: need at least 2 points");

  const double f_idle = params.qubit.f01;
  double sensitivity = 0.0;
  for (std::size_t k = 0; k < params.modes.size(); ++k) {
    const double detuning = params.modes[k].f - f_idle;
    if (detuning == 0.0) throw InvalidArgument("fit_purcell: idle frequency coincides with a mode");
    const double r = profile[k] / detuning;
    sensitivity += r * r * params.modes[k].kappa;
  }

  const auto n = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [s, g] : points) {
    sx += s * s;
    sy += g;
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [s, g] : points) {
    sxx += (s * s - mx) * (s * s - mx);
    sxy += (s * s - mx) * (g - my);
  }
  if (!(sxx > 1e-300)) throw InvalidArgument("fit_purcell: degenerate design (all scales equal)");

  const double slope = sxy / sxx;
  const double gamma0 = my - slope * mx;
  double ssr = 0.0;
  for (const auto& [s, g] : points) {
    const double d = slope * s * s + gamma0 - g;
    ssr += d * d;
  }

  FitResult r;
  r.param_names = {"gamma0", "slope", "coupling_scale"};
  const double scale = slope > 0.0 && sensitivity > 0.0 ? std::sqrt(slope / sensitivity) : 0.0;
  r.values = {gamma0, slope, scale};
  r.residual_rms = std::sqrt(ssr / n);
  r.iterations = 0;
  r.converged = true;
  const double inf = std::numeric_limits<double>::infinity();
  if (points.size() > 2) {
    const double s2 = ssr / (n - 2.0);
    const double se_slope = std::sqrt(s2 / sxx);
    const double se_gamma0 = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
    const double se_scale = scale > 0.0 ? 0.5 * scale * se_slope / slope : inf;
    r.std_errors = {se_gamma0, se_slope, se_scale};
  } else {
    r.std_errors = {inf, inf, inf};
  }
  if (slope <= 0.0) r.notes.emplace_back("non-positive slope");
  return r;
}

}  // namespace cqad
