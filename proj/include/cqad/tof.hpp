#pragma once

// SAW resonator geometry from pulse timings, and an envelope-level echo
// simulator for the delay line between two transducers.

#include "cqad/model.hpp"

namespace cqad {

struct TofInput {
  double p_nm = 0.0;          ///< IDT period
  double f_center_mhz = 0.0;  ///< central mode frequency
  double d1_um = 0.0;         ///< transducer to grating front edge
  double dt1_ns = 0.0;        ///< rise-to-dip interval
  double dt2_ns = 0.0;        ///< echo spacing

  void check() const;
};

struct TofGeometry {
  double v_e = 0.0;   ///< m/s (equivalently um/us)
  double d0 = 0.0;    ///< um
  double L_p = 0.0;   ///< penetration depth, um
  double r_s = 0.0;   ///< single-electrode reflectivity
  double L_c = 0.0;   ///< effective cavity length, um
};

struct EchoModel {
  double L_c = 0.0;                  ///< um, mirror-to-mirror (reflection planes)
  double x_in = 0.0;                 ///< um from the left reflection plane
  double x_out = 0.0;                ///< um from the left reflection plane
  double mirror_reflectivity = 1.0;  ///< amplitude factor per bounce, (0, 1]
  double loss_per_us = 0.0;          ///< amplitude decays as exp(-2pi loss t)
  double v_e = 0.0;                  ///< m/s
  double sample_dt = 1.0;            ///< ns

  void check() const;
  double round_trip_ns() const;  ///< 2 L_c / v_e
  double subecho_delay_ns() const;  ///< 2 (L_c - x_out) / v_e
  double direct_delay_ns() const;   ///< |x_out - x_in| / v_e
};

enum class Envelope { gaussian, rectangular };

/// Envelope duration that must fit inside one round trip: FWHM for a
/// Gaussian (FWHM = pulse_len / 4), the full length for a rectangle.
double effective_duration(double pulse_len_ns, Envelope envelope);

/// v_e = p f (nm * MHz -> m/s).
double saw_velocity(double p_nm, double f_center_mhz);

TofGeometry geometry_from_timing(const TofInput& input);

/// Echo model for the measured geometry: output transducer d0 from the right
/// reflection plane, input transducer x_in from the left one.
EchoModel echo_model_for(const TofGeometry& geometry, double x_in = 1.0,
                         double mirror_reflectivity = 0.98, double loss_per_us = 0.5,
                         double sample_dt = 1.0);

/// Superposition of delayed input envelopes over all bounce paths from x_in
/// to x_out. Times in ns.
TimeSeries simulate_echo(const EchoModel& model, double pulse_len_ns, Envelope envelope,
                         double total_time_ns);

/// Repetition period (ns) of an echo train from its normalised
/// autocorrelation, refined by parabolic interpolation.
double echo_period(const TimeSeries& trace);

struct SubechoFeature {
  bool present = false;
  double dip_fraction = 0.0;  ///< relative depth between the first two maxima
};

/// Looks for two separate maxima in the first arrival cluster (direct pulse
/// and the short right-mirror round trip) with a dip of at least 5 % below
/// the smaller one.
SubechoFeature detect_subecho(const TimeSeries& trace, const EchoModel& model, double pulse_len_ns);

}  // namespace cqad
