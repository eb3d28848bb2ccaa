#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>

#include "airtdma/errors.hpp"

namespace airtdma {

// Durations are integer nanoseconds internally so frame arithmetic is exact
// (256 * 7812500 ns == 2000000000 ns, no floating-point residue).
// Milliseconds appear only at API boundaries.
using Nanoseconds = std::chrono::nanoseconds;

inline Nanoseconds ms_to_ns(double ms) {
  if (!std::isfinite(ms)) throw InvalidArgumentError("duration must be finite");
  return Nanoseconds(std::llround(ms * 1e6));
}

inline double ns_to_ms(Nanoseconds ns) { return static_cast<double>(ns.count()) / 1e6; }
inline double ns_to_s(Nanoseconds ns) { return static_cast<double>(ns.count()) / 1e9; }

enum class MacVariant { Legacy, Proposed };

// Legacy slot: guard | data | guard | ack   (send data and wait for the ACK
// inside the same slot; both guards are dead time).
// Proposed slot: guard | data               (ACK comes back piggybacked in the
// next frame, so only one guard is needed).
inline int guard_intervals(MacVariant v) { return v == MacVariant::Legacy ? 2 : 1; }

inline const char* variant_name(MacVariant v) {
  return v == MacVariant::Legacy ? "legacy" : "proposed";
}

namespace defaults {
inline constexpr double kSlotMs = 7.8125;
inline constexpr int kSlotsPerFrame = 256;
inline constexpr double kGuardMs = 2.3;
inline constexpr int kRandomAccessSlots = 16;
inline constexpr double kLineOfSightKm = 678.0;
inline constexpr double kPropagationMps = 3.0e8;  // free-space propagation
inline constexpr double kFrameSeconds = 2.0;
inline constexpr int kPayloadBitsLegacy = 100;
inline constexpr int kPayloadBitsProposed = 172;
inline constexpr double kDataRateBps = 31500.0;
inline constexpr double kGsDistanceKm = 4900.0;  // Pacific east-west radius
inline constexpr double kMinIntervalKm = 90.0;   // oceanic safety separation
inline constexpr double kAircraftSpeedKmh = 1000.0;
inline constexpr int kReportIntervalFrames = 3;
inline constexpr int kRetryLimit = 8;
}  // namespace defaults

// Timing decomposition of one time slot.
struct SlotLayout {
  MacVariant variant = MacVariant::Proposed;
  Nanoseconds slot_duration{0};
  Nanoseconds guard{0};  // one guard interval; Legacy slots contain two
  Nanoseconds data{0};
  Nanoseconds ack{0};  // always zero for Proposed
  int payload_bits = 0;
};

struct FrameLayout {
  int slots_per_frame = defaults::kSlotsPerFrame;
  Nanoseconds slot_duration = ms_to_ns(defaults::kSlotMs);
  int random_access_slots = defaults::kRandomAccessSlots;

  Nanoseconds frame_duration() const { return slot_duration * slots_per_frame; }
  double frame_seconds() const { return ns_to_s(frame_duration()); }
  int reserved_slots() const { return slots_per_frame - random_access_slots; }
  // Reserved-access region occupies slots [random_access_slots, slots_per_frame).
  int first_reserved_slot() const { return random_access_slots; }
};

inline FrameLayout make_frame_layout(int slots_per_frame = defaults::kSlotsPerFrame,
                                     double slot_ms = defaults::kSlotMs,
                                     int random_access_slots = defaults::kRandomAccessSlots) {
  if (slots_per_frame < 1) throw LayoutError("slots_per_frame must be >= 1");
  Nanoseconds slot = ms_to_ns(slot_ms);
  if (slot.count() <= 0) throw LayoutError("slot duration must be positive");
  if (random_access_slots <= 0 || random_access_slots >= slots_per_frame)
    throw LayoutError("random_access_slots must satisfy 0 < n < slots_per_frame");
  return FrameLayout{slots_per_frame, slot, random_access_slots};
}

// Worst-case one-way propagation delay over max_range, in milliseconds.
// This is what the guard interval has to absorb.
inline double guard_time(double max_range_km, double propagation_mps = defaults::kPropagationMps) {
  if (!std::isfinite(max_range_km) || !std::isfinite(propagation_mps))
    throw InvalidArgumentError("guard_time: inputs must be finite");
  if (max_range_km < 0) throw InvalidArgumentError("guard_time: range must be >= 0");
  if (propagation_mps <= 0) throw InvalidArgumentError("guard_time: propagation speed must be > 0");
  return max_range_km * 1e6 / propagation_mps;  // km -> m, s -> ms
}

// Builds the per-slot timing split for a variant. The data interval is what is
// left of the slot after the variant's guard budget and the ack interval.
// payload_bits comes from the override when given, otherwise floor(data * rate).
// The legacy ack interval defaults to zero width: only the two guards are
// modeled as dead time, the ACK transmission rides inside the data budget
// unless a caller passes an explicit ack_ms.
inline SlotLayout make_slot_layout(MacVariant variant, double slot_ms, double guard_ms,
                                   std::optional<int> payload_override = std::nullopt,
                                   double data_rate_bps = defaults::kDataRateBps,
                                   double ack_ms = 0.0) {
  SlotLayout out;
  out.variant = variant;
  out.slot_duration = ms_to_ns(slot_ms);
  out.guard = ms_to_ns(guard_ms);
  out.ack = variant == MacVariant::Proposed ? Nanoseconds(0) : ms_to_ns(ack_ms);
  if (out.slot_duration.count() <= 0) throw LayoutError("slot duration must be positive");
  if (out.guard.count() <= 0) throw LayoutError("guard must be positive");
  if (out.ack.count() < 0) throw LayoutError("ack interval must be >= 0");

  Nanoseconds budget = out.guard * guard_intervals(variant) + out.ack;
  if (budget >= out.slot_duration)
    throw LayoutError("layout infeasible: guard/ack budget >= slot duration");
  out.data = out.slot_duration - budget;

  if (payload_override) {
    if (*payload_override < 1) throw LayoutError("payload_bits must be >= 1");
    out.payload_bits = *payload_override;
  } else {
    if (data_rate_bps <= 0 || !std::isfinite(data_rate_bps))
      throw LayoutError("data rate must be positive when payload is derived");
    out.payload_bits = static_cast<int>(std::floor(ns_to_s(out.data) * data_rate_bps));
    if (out.payload_bits < 1) throw LayoutError("derived payload is empty; slot too short");
  }
  return out;
}

// Fraction of the slot lost to guard intervals (the dead time).
inline double guard_overhead_fraction(const SlotLayout& layout) {
  return static_cast<double>(guard_intervals(layout.variant) * layout.guard.count()) /
         static_cast<double>(layout.slot_duration.count());
}

}  // namespace airtdma
