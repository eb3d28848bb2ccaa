#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "airtdma/timing.hpp"

using namespace airtdma;

TEST_CASE("guard_time converts range to one-way propagation delay in ms") {
  CHECK(guard_time(0.0, 3e8) == 0.0);
  // 678000 m / 3e8 m/s = 2.26 ms; the deployed guard of 2.3 ms covers it.
  CHECK(guard_time(678.0, 3e8) == Catch::Approx(2.26).margin(1e-12));
  CHECK(guard_time(690.0, 3e8) == Catch::Approx(2.30).margin(1e-12));
}

TEST_CASE("guard_time rejects bad inputs") {
  CHECK_THROWS_AS(guard_time(-1.0, 3e8), InvalidArgumentError);
  CHECK_THROWS_AS(guard_time(100.0, 0.0), InvalidArgumentError);
  CHECK_THROWS_AS(guard_time(std::nan(""), 3e8), InvalidArgumentError);
  CHECK_THROWS_AS(guard_time(100.0, -3e8), InvalidArgumentError);
}

TEST_CASE("guard_time is exactly linear in range") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    double d = static_cast<double>(rng() % 1000000) / 100.0;
    CHECK(guard_time(2.0 * d) == 2.0 * guard_time(d));
  }
}

TEST_CASE("proposed slot layout splits 7.8125 ms into guard and data") {
  SlotLayout s = make_slot_layout(MacVariant::Proposed, 7.8125, 2.3, 172);
  CHECK(s.data == ms_to_ns(5.5125));
  CHECK(s.ack.count() == 0);
  CHECK(s.payload_bits == 172);
  CHECK(s.guard + s.data == s.slot_duration);  // exact in integer ns
}

TEST_CASE("legacy slot layout carries two guards") {
  SlotLayout s = make_slot_layout(MacVariant::Legacy, 7.8125, 2.3, 100);
  CHECK(s.payload_bits == 100);
  CHECK(guard_intervals(s.variant) == 2);
  CHECK((s.guard * 2 + s.data + s.ack) == s.slot_duration);
}

TEST_CASE("infeasible guard budget is rejected") {
  CHECK_THROWS_AS(make_slot_layout(MacVariant::Proposed, 7.8125, 7.9, std::nullopt, 31500.0),
                  LayoutError);
  CHECK_THROWS_AS(make_slot_layout(MacVariant::Legacy, 7.8125, 4.0, 100), LayoutError);
}

TEST_CASE("derived payload uses floor(data * rate)") {
  SlotLayout s = make_slot_layout(MacVariant::Proposed, 7.8125, 2.3, std::nullopt, 31500.0);
  // 5.5125 ms * 31500 bit/s = 173.64 bits
  CHECK(s.payload_bits == 173);
  CHECK_THROWS_AS(make_slot_layout(MacVariant::Proposed, 7.8125, 2.3, std::nullopt, 10.0),
                  LayoutError);  // would floor to zero bits
}

TEST_CASE("guard overhead fractions") {
  SlotLayout legacy = make_slot_layout(MacVariant::Legacy, 7.8125, 2.3, 100);
  SlotLayout proposed = make_slot_layout(MacVariant::Proposed, 7.8125, 2.3, 172);
  // 2 * 2.3 / 7.8125 = 0.5888 (the quoted "59% dead time")
  CHECK(guard_overhead_fraction(legacy) == Catch::Approx(0.5888).margin(1e-9));
  CHECK(guard_overhead_fraction(proposed) == Catch::Approx(0.2944).margin(1e-9));
  SlotLayout zero_guard;
  zero_guard.variant = MacVariant::Proposed;
  zero_guard.slot_duration = ms_to_ns(7.8125);
  zero_guard.guard = Nanoseconds(0);
  zero_guard.data = zero_guard.slot_duration;
  CHECK(guard_overhead_fraction(zero_guard) == 0.0);
}

TEST_CASE("frame of 256 slots at 7.8125 ms lasts exactly two seconds") {
  FrameLayout f = make_frame_layout(256, 7.8125, 16);
  CHECK(f.frame_duration().count() == 2000000000LL);
  CHECK(f.frame_seconds() == 2.0);
  CHECK(f.reserved_slots() == 240);
}

TEST_CASE("frame layout validation") {
  CHECK_THROWS_AS(make_frame_layout(256, 7.8125, 0), LayoutError);
  CHECK_THROWS_AS(make_frame_layout(256, 7.8125, 256), LayoutError);
  CHECK_THROWS_AS(make_frame_layout(0, 7.8125, 1), LayoutError);
}

TEST_CASE("proposed payload never trails legacy for equal slot, guard and rate") {
  for (double slot : {6.0, 7.8125, 10.0, 20.0}) {
    for (double guard : {0.5, 1.0, 2.3}) {
      for (double rate : {9600.0, 31500.0, 64000.0}) {
        if (2 * guard >= slot) continue;
        SlotLayout p = make_slot_layout(MacVariant::Proposed, slot, guard, std::nullopt, rate);
        SlotLayout l = make_slot_layout(MacVariant::Legacy, slot, guard, std::nullopt, rate);
        CHECK(p.payload_bits >= l.payload_bits);
      }
    }
  }
}
