#pragma once

// Measured parameters of the reference seven-mode SAW resonator device.
// Frequencies and rates in MHz (linear), lifetimes in ns.

#include <array>

#include "cqad/model.hpp"

namespace cqad::reference {

inline constexpr std::size_t kModeCount = 7;

inline constexpr std::array<double, kModeCount> kModeFreqMHz = {4441.3, 4485.5, 4524.7, 4557.6,
                                                                 4587.4, 4624.3, 4666.0};
inline constexpr std::array<double, kModeCount> kPhononT1ns = {73.5,  98.8,  58.3, 127.6,
                                                               233.1, 204.2, 105.8};
inline constexpr std::array<double, kModeCount> kModeKappaMHz = {2.17, 1.61, 2.73, 1.25,
                                                                 0.68, 0.78, 1.50};
inline constexpr std::array<double, kModeCount> kModeQ = {2050, 2783, 1657, 3654, 6716, 5933, 3102};

// Qubit at its idle point.
inline constexpr double kIdleF01MHz = 4768.5;
inline constexpr double kEcMHz = 171.0;

// Intrinsic qubit decay (coupler off) when tuned to each mode, MHz.
inline constexpr std::array<double, kModeCount> kIntrinsicGammaMHz = {
    19.6e-3, 21.8e-3, 31.8e-3, 12.4e-3, 12.2e-3, 12.2e-3, 17.6e-3};

// Coupler bias -3.0 (dispersive / AC Stark settings).
inline constexpr std::array<double, kModeCount> kCouplingWeakMHz = {-0.18, -0.21, 0.18, 0.23,
                                                                    -0.18, -0.28, 0.09};
inline constexpr std::array<double, kModeCount> kTotalGammaWeakMHz = {
    19.7e-3, 21.9e-3, 31.9e-3, 12.5e-3, 12.4e-3, 12.3e-3, 17.7e-3};

// Coupler bias 0.75 (maximum coupling).
inline constexpr std::array<double, kModeCount> kCouplingMaxMHz = {0.59,  1.51, -0.75, -1.52,
                                                                   0.82,  1.67, -0.47};
inline constexpr std::array<double, kModeCount> kTotalGammaMaxMHz = {
    22.0e-3, 23.9e-3, 37.3e-3, 15.6e-3, 17.9e-3, 13.7e-3, 19.3e-3};

/// Seven-mode system with the given couplings; the qubit sits at f01 with
/// intrinsic decay `gamma`.
inline SystemParams seven_mode_system(const std::array<double, kModeCount>& couplings,
                                      double f01 = kIdleF01MHz, double gamma = 0.0) {
  SystemParams p;
  p.qubit = {f01, kEcMHz, gamma};
  for (std::size_t i = 0; i < kModeCount; ++i) {
    p.modes.push_back({static_cast<int>(i + 1), kModeFreqMHz[i], kModeKappaMHz[i], couplings[i]});
  }
  return p;
}

}  // namespace cqad::reference
