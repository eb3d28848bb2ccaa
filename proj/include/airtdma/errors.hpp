#pragma once

#include <stdexcept>
#include <string>

namespace airtdma {

// Base for everything this library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad numeric input to a pure function (negative range, NaN, rho >= 1, ...).
struct InvalidArgumentError : Error {
  using Error::Error;
};

// Slot/frame layout cannot be constructed (guard budget >= slot, empty payload).
struct LayoutError : Error {
  using Error::Error;
};

// A message field is outside its encodable range; message names the field.
struct EncodeError : Error {
  using Error::Error;
};

// Wrong buffer length or a decoded field violates its invariant.
struct DecodeError : Error {
  using Error::Error;
};

// Payload does not fit the MAC variant, or more aircraft than reservable slots.
struct CapacityError : Error {
  using Error::Error;
};

// Scenario file / configuration rejected during validation.
struct ConfigError : Error {
  using Error::Error;
};

// A node was required to transmit and listen in the same slot, or the
// simulator's own bookkeeping went inconsistent. Never expected in a run.
struct ProtocolViolation : Error {
  using Error::Error;
};

}  // namespace airtdma
