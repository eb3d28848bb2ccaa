#pragma once

#include <cmath>

#include "airtdma/errors.hpp"
#include "airtdma/timing.hpp"

namespace airtdma {

// Closed-form link and relay-chain performance model for both MAC variants.

struct LinkParams {
  double payload_bits = defaults::kPayloadBitsProposed;  // L, bits per transmission
  double data_rate_bps = defaults::kDataRateBps;         // R
  double distance_km = defaults::kLineOfSightKm;         // d, between two aircraft
  double propagation_mps = defaults::kPropagationMps;    // v
  double los_limit_km = defaults::kLineOfSightKm;

  void validate() const {
    if (!(payload_bits > 0) || !(data_rate_bps > 0) || !(propagation_mps > 0))
      throw InvalidArgumentError("link parameters must be strictly positive");
    if (!(distance_km >= 0)) throw InvalidArgumentError("link distance must be >= 0");
    if (distance_km > los_limit_km)
      throw InvalidArgumentError("link distance exceeds line-of-sight limit");
  }

  double propagation_s() const { return distance_km * 1000.0 / propagation_mps; }
  double transmission_s() const { return payload_bits / data_rate_bps; }
};

enum class HopRounding {
  Fractional,  // exact quotient d_gs / d_int
  Ceiling,     // physical integer hop count, matches the simulator
};

struct DelayParams {
  double rho = 0.0;                                // per-link packet loss ratio
  double gs_distance_km = defaults::kGsDistanceKm; // d_gs
  double node_interval_km = defaults::kLineOfSightKm;  // d_int
  double frame_seconds = defaults::kFrameSeconds;  // T_f
  double bits_per_slot = defaults::kPayloadBitsProposed;  // T_d
  HopRounding hop_rounding = HopRounding::Fractional;
  // Validation window for the node interval; widen d_int_max_km to explore
  // beyond the 678 km line of sight.
  double d_int_min_km = defaults::kMinIntervalKm;
  double d_int_max_km = defaults::kLineOfSightKm;

  void validate() const {
    if (!(rho >= 0.0 && rho <= 0.1))
      throw InvalidArgumentError("rho outside the modeled range [0, 0.1]");
    if (!(gs_distance_km > 0)) throw InvalidArgumentError("gs distance must be > 0");
    if (!(frame_seconds > 0)) throw InvalidArgumentError("frame duration must be > 0");
    if (!(bits_per_slot > 0)) throw InvalidArgumentError("bits per slot must be > 0");
    if (!(node_interval_km >= d_int_min_km && node_interval_km <= d_int_max_km))
      throw InvalidArgumentError("node interval outside the validated range");
  }
};

// Bits per second over one link: L / (d/v + L/R). Approaches R as d -> 0.
inline double link_throughput(const LinkParams& p) {
  p.validate();
  return p.payload_bits / (p.propagation_s() + p.transmission_s());
}

// Fraction of the channel rate the link actually achieves. The legacy slot
// spends a second propagation-bound dead interval waiting for the in-slot ACK,
// so its denominator carries 2 d/v.
inline double utilization(MacVariant variant, const LinkParams& p) {
  p.validate();
  double tx = p.transmission_s();
  double prop = p.propagation_s() * guard_intervals(variant);
  return tx / (prop + tx);
}

// Expected transmissions per link under geometric loss: 1 / (1 - rho).
inline double expected_transmissions(double rho) {
  if (!std::isfinite(rho) || rho < 0.0) throw InvalidArgumentError("rho must be >= 0");
  if (rho >= 1.0) throw InvalidArgumentError("rho >= 1 diverges");
  return 1.0 / (1.0 - rho);
}

inline double hop_count(double gs_distance_km, double node_interval_km, HopRounding mode) {
  if (!(node_interval_km > 0)) throw InvalidArgumentError("node interval must be > 0");
  if (!(gs_distance_km >= 0)) throw InvalidArgumentError("gs distance must be >= 0");
  double q = gs_distance_km / node_interval_km;
  return mode == HopRounding::Fractional ? q : std::ceil(q);
}

// Expected time for a report to reach the ground station: N * H * T_f.
inline double notification_delay(const DelayParams& p) {
  p.validate();
  return expected_transmissions(p.rho) *
         hop_count(p.gs_distance_km, p.node_interval_km, p.hop_rounding) * p.frame_seconds;
}

// Mean of the delays at the sparsest and densest aircraft spacing.
inline double averaged_notification_delay(double rho, double gs_distance_km, double d_int_min,
                                          double d_int_max, double frame_seconds,
                                          HopRounding mode) {
  if (!(d_int_min > 0) || d_int_min > d_int_max)
    throw InvalidArgumentError("require 0 < d_int_min <= d_int_max");
  DelayParams lo;
  lo.rho = rho;
  lo.gs_distance_km = gs_distance_km;
  lo.node_interval_km = d_int_min;
  lo.frame_seconds = frame_seconds;
  lo.hop_rounding = mode;
  lo.d_int_min_km = std::min(d_int_min, defaults::kMinIntervalKm);
  lo.d_int_max_km = std::max(d_int_max, defaults::kLineOfSightKm);
  DelayParams hi = lo;
  hi.node_interval_km = d_int_max;
  return 0.5 * (notification_delay(lo) + notification_delay(hi));
}

// End-to-end throughput S = T_d * H_avg / d_t with d_t the averaged delay and
// H_avg the mean of the two hop counts. The hop counts cancel algebraically,
// leaving S = T_d / (N * T_f) independent of the distance to the GS.
inline double end_to_end_throughput(const DelayParams& p, double d_int_min, double d_int_max) {
  if (!(d_int_min > 0) || d_int_min > d_int_max)
    throw InvalidArgumentError("require 0 < d_int_min <= d_int_max");
  double h_avg = 0.5 * (hop_count(p.gs_distance_km, d_int_min, p.hop_rounding) +
                        hop_count(p.gs_distance_km, d_int_max, p.hop_rounding));
  double d_t = averaged_notification_delay(p.rho, p.gs_distance_km, d_int_min, d_int_max,
                                           p.frame_seconds, p.hop_rounding);
  return p.bits_per_slot * h_avg / d_t;
}

// The HF voice channel delivers a weather report in one to two minutes; the
// band is plotted as three constant reference lines.
struct HfVoiceBaseline {
  double low_s = 60.0;
  double high_s = 120.0;
  double mid_s = 90.0;
};

inline HfVoiceBaseline hf_voice_baseline() { return HfVoiceBaseline{}; }

}  // namespace airtdma
