#include "cqad/tof.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cqad/error.hpp"

namespace cqad {

namespace {

constexpr double kFwhmToSigma = 2.3548200450309493;  // 2 sqrt(2 ln 2)
constexpr double kMinDip = 0.05;

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void TofInput::check() const {
  if (!positive(p_nm)) throw InvalidArgument("tof: p_nm must be positive");
  if (!positive(f_center_mhz)) throw InvalidArgument("tof: f_center_mhz must be positive");
  if (!positive(d1_um)) throw InvalidArgument("tof: d1_um must be positive");
  if (!positive(dt1_ns)) throw InvalidArgument("tof: dt1_ns must be positive");
  if (!positive(dt2_ns)) throw InvalidArgument("tof: dt2_ns must be positive");
  if (dt1_ns >= dt2_ns) throw InvalidArgument("tof: dt1_ns must be smaller than dt2_ns");
}

void EchoModel::check() const {
  if (!positive(L_c)) throw InvalidArgument("echo: L_c must be positive");
  if (!(x_in > 0.0 && x_in < L_c)) throw InvalidArgument("echo: x_in must lie inside (0, L_c)");
  if (!(x_out > 0.0 && x_out < L_c)) throw InvalidArgument("echo: x_out must lie inside (0, L_c)");
  if (!(mirror_reflectivity > 0.0 && mirror_reflectivity <= 1.0)) {
    throw InvalidArgument("echo: mirror_reflectivity must lie in (0, 1]");
  }
  if (!(loss_per_us >= 0.0) || !std::isfinite(loss_per_us)) throw InvalidArgument("echo: loss_per_us must be >= 0");
  if (!positive(v_e)) throw InvalidArgument("echo: v_e must be positive");
  if (!positive(sample_dt)) throw InvalidArgument("echo: sample_dt must be positive");
}

double EchoModel::round_trip_ns() const { return 2.0 * L_c / v_e * 1e3; }
double EchoModel::subecho_delay_ns() const { return 2.0 * (L_c - x_out) / v_e * 1e3; }
double EchoModel::direct_delay_ns() const { return std::abs(x_out - x_in) / v_e * 1e3; }

double effective_duration(double pulse_len_ns, Envelope envelope) {
  return envelope == Envelope::gaussian ? pulse_len_ns / 4.0 : pulse_len_ns;
}

double saw_velocity(double p_nm, double f_center_mhz) {
  if (!positive(p_nm) || !positive(f_center_mhz)) throw InvalidArgument("saw_velocity: inputs must be positive");
  return p_nm * f_center_mhz * 1e-3;
}

TofGeometry geometry_from_timing(const TofInput& input) {
  input.check();
  TofGeometry g;
  g.v_e = saw_velocity(input.p_nm, input.f_center_mhz);
  // um/us * ns * 1e-3 = um
  g.d0 = input.dt1_ns * 1e-3 * g.v_e / 2.0;
  g.L_p = g.d0 - input.d1_um;
  if (!(g.L_p > 0.0)) throw InvalidArgument("tof: non-positive penetration depth (dt1 too small for d1)");
  g.r_s = input.p_nm * 1e-3 / (4.0 * g.L_p);
  g.L_c = input.dt2_ns * 1e-3 * g.v_e / 2.0;
  return g;
}

EchoModel echo_model_for(const TofGeometry& geometry, double x_in, double mirror_reflectivity,
                         double loss_per_us, double sample_dt) {
  EchoModel m;
  m.L_c = geometry.L_c;
  m.x_in = x_in;
  m.x_out = geometry.L_c - geometry.d0;
  m.mirror_reflectivity = mirror_reflectivity;
  m.loss_per_us = loss_per_us;
  m.v_e = geometry.v_e;
  m.sample_dt = sample_dt;
  m.check();
  return m;
}

TimeSeries simulate_echo(const EchoModel& model, double pulse_len_ns, Envelope envelope,
                         double total_time_ns) {
  model.check();
  if (!positive(pulse_len_ns)) throw InvalidArgument("echo: pulse length must be positive");
  if (!positive(total_time_ns)) throw InvalidArgument("echo: total time must be positive");
  if (effective_duration(pulse_len_ns, envelope) >= model.round_trip_ns()) {
    throw InvalidArgument("echo: pulse longer than the cavity round trip 2 L_c / v_e");
  }

  const double sigma = pulse_len_ns / 4.0 / kFwhmToSigma;
  const double centre = pulse_len_ns / 2.0;
  auto shape = [&](double t) {
    if (t < 0.0 || t > pulse_len_ns) return 0.0;
    if (envelope == Envelope::rectangular) return 1.0;
    const double u = (t - centre) / sigma;
    return std::exp(-0.5 * u * u);
  };

  const auto n_samples = static_cast<std::size_t>(std::floor(total_time_ns / model.sample_dt)) + 1;
  TimeSeries out;
  out.label = "amplitude";
  out.times.resize(n_samples);
  out.values.assign(n_samples, 0.0);
  for (std::size_t i = 0; i < n_samples; ++i) out.times[i] = static_cast<double>(i) * model.sample_dt;

  const double ns_per_um = 1e3 / model.v_e;
  const double first = std::exp(-kTwoPi * model.loss_per_us * model.direct_delay_ns() * 1e-3);
  const double cutoff = 1e-4 * first;

  auto add_path = [&](double length_um, int bounces) {
    const double delay = length_um * ns_per_um;
    const double weight = std::pow(model.mirror_reflectivity, bounces) *
                          std::exp(-kTwoPi * model.loss_per_us * delay * 1e-3);
    if (delay > total_time_ns || weight < cutoff) return false;
    const auto lo = static_cast<std::size_t>(std::max(0.0, std::floor(delay / model.sample_dt)));
    for (std::size_t i = lo; i < n_samples; ++i) {
      const double local = out.times[i] - delay;
      if (local > pulse_len_ns) break;
      out.values[i] += weight * shape(local);
    }
    return true;
  };

  // Image sources of x_in in the mirror pair: x_in + 2nL (2|n| bounces) and
  // -x_in + 2nL (|2n-1| bounces).
  for (int k = 0;; ++k) {
    bool any = false;
    for (int n : {k, -k}) {
      any |= add_path(std::abs(model.x_out - model.x_in - 2.0 * n * model.L_c), 2 * std::abs(n));
      if (k == 0) break;
    }
    for (int n : {k + 1, -k}) {
      any |= add_path(std::abs(model.x_out + model.x_in - 2.0 * n * model.L_c), std::abs(2 * n - 1));
    }
    if (!any) break;
  }
  return out;
}

double echo_period(const TimeSeries& trace) {
  trace.check();
  const std::size_t n = trace.size();
  if (n < 8) throw InvalidArgument("echo_period: trace too short");
  const double dt = (trace.times.back() - trace.times.front()) / static_cast<double>(n - 1);
  const double mean = std::accumulate(trace.values.begin(), trace.values.end(), 0.0) / static_cast<double>(n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = trace.values[i] - mean;

  const std::size_t max_lag = n / 2;
  std::vector<double> ac(max_lag);
  for (std::size_t k = 0; k < max_lag; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) s += x[i] * x[i + k];
    ac[k] = s / static_cast<double>(n - k);
  }
  if (!(ac[0] > 0.0)) throw InvalidArgument("echo_period: constant trace");
  for (double& a : ac) a /= ac[0];

  // Skip the zero-lag lobe, then take the first local maximum close to the
  // strongest repetition.
  std::size_t k0 = 1;
  while (k0 < max_lag && ac[k0] >= 0.2) ++k0;
  if (k0 + 2 >= max_lag) throw NumericalError("echo_period: no repetition found");
  const double top = *std::max_element(ac.begin() + static_cast<std::ptrdiff_t>(k0), ac.end());
  for (std::size_t k = k0 + 1; k + 1 < max_lag; ++k) {
    if (ac[k] >= 0.9 * top && ac[k] >= ac[k - 1] && ac[k] >= ac[k + 1]) {
      const double denom = ac[k - 1] - 2.0 * ac[k] + ac[k + 1];
      const double shift = denom != 0.0 ? 0.5 * (ac[k - 1] - ac[k + 1]) / denom : 0.0;
      return (static_cast<double>(k) + shift) * dt;
    }
  }
  throw NumericalError("echo_period: no repetition found");
}

SubechoFeature detect_subecho(const TimeSeries& trace, const EchoModel& model, double pulse_len_ns) {
  trace.check();
  model.check();
  const double tau = model.subecho_delay_ns();
  const double arrival = model.direct_delay_ns() + pulse_len_ns / 2.0;
  const double lo = arrival - tau / 2.0;
  const double hi = arrival + 1.5 * tau;

  std::vector<double> w;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace.times[i] >= lo && trace.times[i] <= hi) w.push_back(trace.values[i]);
  }
  SubechoFeature f;
  std::vector<std::size_t> maxima;
  for (std::size_t i = 1; i + 1 < w.size(); ++i) {
    if (w[i] > w[i - 1] && w[i] >= w[i + 1]) maxima.push_back(i);
  }
  if (maxima.size() < 2) return f;
  const std::size_t a = maxima[0];
  const std::size_t b = maxima[1];
  const double dip = *std::min_element(w.begin() + static_cast<std::ptrdiff_t>(a),
                                       w.begin() + static_cast<std::ptrdiff_t>(b) + 1);
  const double smaller = std::min(w[a], w[b]);
  if (smaller <= 0.0) return f;
  f.dip_fraction = 1.0 - dip / smaller;
  f.present = f.dip_fraction >= kMinDip;
  return f;
}

}  // namespace cqad
