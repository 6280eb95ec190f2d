#pragma once

// Shared domain types.
//
// Unit convention used everywhere in the library: frequencies and rates are
// linear quantities (angular value / 2pi) in MHz, times are in microseconds.
// A population that decays at rate r (MHz) falls as exp(-2 pi r t) with t in
// us. Any formula that needs angular units converts explicitly with
// kTwoPi.

#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "json.hpp"

namespace cqad {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Default cap on the composite Hilbert-space dimension.
inline constexpr std::size_t kDefaultMaxDim = 4096;

struct QubitParams {
  double f01 = 0.0;    ///< |g> -> |e> transition, MHz
  double ec = 0.0;     ///< anharmonicity E_c/h = f01 - f12, MHz
  double gamma = 0.0;  ///< intrinsic population decay rate, MHz (T1 = 1/(2 pi gamma))
};

struct ModeParams {
  int index = 0;       ///< mode number m >= 1
  double f = 0.0;      ///< MHz
  double kappa = 0.0;  ///< energy decay rate, MHz
  double g = 0.0;      ///< signed qubit coupling, MHz
};

struct SystemParams {
  QubitParams qubit;
  std::vector<ModeParams> modes;  ///< ascending by index

  /// Position of the mode with the given index in `modes`; throws
  /// InvalidArgument when absent.
  std::size_t position_of(int mode_index) const;
  const ModeParams& mode(int mode_index) const { return modes[position_of(mode_index)]; }
};

/// Truncation of the composite space. Tensor factor order is fixed: the qubit
/// first, then the modes in the order of SystemParams::modes.
struct HilbertSpec {
  int qubit_levels = 2;
  std::vector<int> mode_levels;
  std::size_t max_dim = kDefaultMaxDim;

  std::size_t total_dim() const;
  /// Local dimension of slot 0 (qubit) or slot k (k-th mode, 1-based).
  int slot_dim(std::size_t slot) const;
  std::size_t slot_count() const { return mode_levels.size() + 1; }

  /// Throws InvalidArgument if a level count is < 2 or the cap is exceeded.
  void check() const;

  static HilbertSpec uniform(int qubit_levels, std::size_t n_modes, int mode_levels);
};

struct TimeSeries {
  std::vector<double> times;   ///< us, strictly ascending
  std::vector<double> values;
  std::string label;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  /// Throws InvalidArgument on length mismatch or non-ascending times.
  void check() const;
};

/// Returns `params` unchanged when every invariant holds; otherwise throws
/// InvalidArgument naming the field path of the first violation, e.g.
/// "modes[2].kappa_mhz: non-positive rate".
SystemParams validate(const SystemParams& params);

/// Evenly spaced grid [0, t_max] with the given step (last point clamped to
/// t_max when the step does not divide it).
std::vector<double> time_grid(double t_max, double dt);

// JSON representation (keys qubit.f01_mhz, qubit.ec_mhz, qubit.gamma_mhz and
// modes[] of {index, f_mhz, kappa_mhz, g_mhz}).
nlohmann::ordered_json to_json(const SystemParams& params);
SystemParams system_params_from_json(const nlohmann::ordered_json& j);
std::string serialize(const SystemParams& params);
SystemParams parse_system_params(const std::string& text);

}  // namespace cqad
