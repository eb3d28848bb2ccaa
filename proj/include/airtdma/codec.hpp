#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "airtdma/bitio.hpp"
#include "airtdma/errors.hpp"
#include "airtdma/timing.hpp"

namespace airtdma {

// Wire formats (all fields unsigned, MSB-first, big-endian bit packing).
//
// Position report, 100 bits:
//   aircraft_id:20 | latitude:24 | longitude:24 | altitude:15 | timestamp:17
//   latitude  is two's-complement fixed point, degrees * 2^23 / 90
//   longitude is two's-complement fixed point, degrees * 2^23 / 180
//   altitude in 10 ft units, timestamp in seconds since midnight UTC
//
// Weather condition extension, 72 bits (9 octets):
//   time:17 | wind_dir:9 | wind_speed:7 | vis_dir:9 | vis_dist:7 |
//   cloud_amount:3 | cloud_height:9 | cloud_type:3 | special:8
//   wind_speed in knots and vis_dist in km saturate at 127; cloud_height is in
//   100 ft units; special is the flag set below, flag bit i at octet bit i.
//
// A proposed-MAC payload is position || weather = 172 bits; legacy carries the
// 100-bit position report only.

struct SpecialWeather {
  enum Flag : std::uint8_t {
    HeavyRain = 1u << 0,
    SevereTurbulence = 1u << 1,
    HighWindsGusts = 1u << 2,
    Hail = 1u << 3,
    Icing = 1u << 4,
    Lightning = 1u << 5,
    SevereDowndrafts = 1u << 6,
    Microburst = 1u << 7,
  };

  std::uint8_t flags = 0;

  bool test(Flag f) const { return flags & f; }
  void set(Flag f) { flags |= f; }

  static const std::array<const char*, 8>& names() {
    static const std::array<const char*, 8> n = {
        "heavy_rain",        "severe_turbulence", "high_winds_gusts", "hail",
        "icing",             "lightning",         "severe_downdrafts", "microburst"};
    return n;
  }

  // "hail,icing" -> flags with bits 3 and 4 set. Empty string -> none.
  static SpecialWeather parse(const std::string& list);
  std::string to_string() const;

  friend bool operator==(const SpecialWeather&, const SpecialWeather&) = default;
};

inline SpecialWeather SpecialWeather::parse(const std::string& list) {
  SpecialWeather out;
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t comma = list.find(',', start);
    std::string token = list.substr(start, comma == std::string::npos ? std::string::npos
                                                                      : comma - start);
    // trim surrounding spaces
    while (!token.empty() && token.front() == ' ') token.erase(token.begin());
    while (!token.empty() && token.back() == ' ') token.pop_back();
    if (!token.empty()) {
      bool found = false;
      for (std::size_t i = 0; i < names().size(); ++i) {
        if (token == names()[i]) {
          out.flags |= static_cast<std::uint8_t>(1u << i);
          found = true;
          break;
        }
      }
      if (!found) throw DecodeError("unknown special weather flag: " + token);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string SpecialWeather::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < names().size(); ++i) {
    if (flags & (1u << i)) {
      if (!out.empty()) out += ',';
      out += names()[i];
    }
  }
  return out;
}

struct WeatherReport {
  std::uint32_t time_s = 0;        // seconds since midnight UTC, < 86400
  std::uint16_t wind_dir_deg = 0;  // 0..359
  std::uint8_t wind_speed_kt = 0;  // saturates at 127 on encode
  std::uint16_t vis_dir_deg = 0;   // 0..359
  std::uint8_t vis_dist_km = 0;    // saturates at 127 on encode
  std::uint8_t cloud_amount = 0;   // 3-bit level code
  std::uint16_t cloud_height = 0;  // 100 ft units, 0..511
  std::uint8_t cloud_type = 0;     // 3-bit opaque code
  SpecialWeather special;

  friend bool operator==(const WeatherReport&, const WeatherReport&) = default;
};

using WeatherOctets = std::array<std::uint8_t, 9>;

inline constexpr int kWeatherBits = 72;
inline constexpr int kPositionBits = 100;
inline constexpr int kProposedPayloadBits = kPositionBits + kWeatherBits;  // 172

inline WeatherOctets encode_weather(const WeatherReport& r) {
  if (r.time_s >= 86400) throw EncodeError("weather field out of range: time");
  if (r.wind_dir_deg >= 360) throw EncodeError("weather field out of range: wind_dir");
  if (r.vis_dir_deg >= 360) throw EncodeError("weather field out of range: vis_dir");
  if (r.cloud_amount > 7) throw EncodeError("weather field out of range: cloud_amount");
  if (r.cloud_height > 511) throw EncodeError("weather field out of range: cloud_height");
  if (r.cloud_type > 7) throw EncodeError("weather field out of range: cloud_type");

  BitWriter w(kWeatherBits);
  w.put(r.time_s, 17);
  w.put(r.wind_dir_deg, 9);
  w.put(std::min<std::uint32_t>(r.wind_speed_kt, 127), 7);
  w.put(r.vis_dir_deg, 9);
  w.put(std::min<std::uint32_t>(r.vis_dist_km, 127), 7);
  w.put(r.cloud_amount, 3);
  w.put(r.cloud_height, 9);
  w.put(r.cloud_type, 3);
  w.put(r.special.flags, 8);

  WeatherOctets out{};
  const auto& bytes = w.finish().bytes();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = bytes[i];
  return out;
}

inline WeatherReport decode_weather(const std::vector<std::uint8_t>& octets) {
  if (octets.size() != 9) throw DecodeError("weather message must be exactly 9 octets");
  Bits bits(kWeatherBits);
  for (int i = 0; i < kWeatherBits; ++i)
    bits.set(i, (octets[i >> 3] >> (7 - (i & 7))) & 1u);
  BitReader rd(bits);
  WeatherReport r;
  r.time_s = static_cast<std::uint32_t>(rd.get(17));
  r.wind_dir_deg = static_cast<std::uint16_t>(rd.get(9));
  r.wind_speed_kt = static_cast<std::uint8_t>(rd.get(7));
  r.vis_dir_deg = static_cast<std::uint16_t>(rd.get(9));
  r.vis_dist_km = static_cast<std::uint8_t>(rd.get(7));
  r.cloud_amount = static_cast<std::uint8_t>(rd.get(3));
  r.cloud_height = static_cast<std::uint16_t>(rd.get(9));
  r.cloud_type = static_cast<std::uint8_t>(rd.get(3));
  r.special.flags = static_cast<std::uint8_t>(rd.get(8));
  if (r.time_s >= 86400) throw DecodeError("decoded weather time >= 86400");
  if (r.wind_dir_deg >= 360) throw DecodeError("decoded wind direction >= 360");
  if (r.vis_dir_deg >= 360) throw DecodeError("decoded visibility direction >= 360");
  return r;
}

inline WeatherReport decode_weather(const WeatherOctets& octets) {
  return decode_weather(std::vector<std::uint8_t>(octets.begin(), octets.end()));
}

inline std::string weather_to_hex(const WeatherOctets& octets) {
  return to_hex(std::vector<std::uint8_t>(octets.begin(), octets.end()));
}

inline WeatherReport weather_from_hex(const std::string& hex) {
  if (hex.size() != 18) throw DecodeError("weather hex must be 18 characters");
  return decode_weather(from_hex(hex));
}

struct PositionReport {
  std::uint32_t aircraft_id = 0;  // 20-bit
  double latitude_deg = 0.0;      // [-90, +90]
  double longitude_deg = 0.0;     // [-180, +180)
  std::uint32_t altitude_ft = 0;  // quantized to 10 ft, max 327670
  std::uint32_t timestamp_s = 0;  // seconds since midnight UTC, < 86400

  friend bool operator==(const PositionReport&, const PositionReport&) = default;
};

namespace detail {

inline constexpr double kLatScale = 8388608.0 / 90.0;   // 2^23 / 90
inline constexpr double kLonScale = 8388608.0 / 180.0;  // 2^23 / 180

// Quantize to the 24-bit grid; +90 / +180-epsilon land on the max code.
inline std::int32_t quantize_angle(double deg, double scale) {
  auto q = std::llround(deg * scale);
  if (q > 8388607) q = 8388607;
  if (q < -8388608) q = -8388608;
  return static_cast<std::int32_t>(q);
}

}  // namespace detail

inline Bits encode_position(const PositionReport& r) {
  if (r.aircraft_id > 0xFFFFF) throw EncodeError("position field out of range: aircraft_id");
  if (!std::isfinite(r.latitude_deg) || r.latitude_deg < -90.0 || r.latitude_deg > 90.0)
    throw EncodeError("position field out of range: latitude");
  if (!std::isfinite(r.longitude_deg) || r.longitude_deg < -180.0 || r.longitude_deg >= 180.0)
    throw EncodeError("position field out of range: longitude");
  if (r.altitude_ft > 327670) throw EncodeError("position field out of range: altitude");
  if (r.timestamp_s >= 86400) throw EncodeError("position field out of range: timestamp");

  std::int32_t lat_q = detail::quantize_angle(r.latitude_deg, detail::kLatScale);
  std::int32_t lon_q = detail::quantize_angle(r.longitude_deg, detail::kLonScale);
  std::uint32_t alt_q = (r.altitude_ft + 5) / 10;  // round to nearest 10 ft
  if (alt_q > 32767) alt_q = 32767;

  BitWriter w(kPositionBits);
  w.put(r.aircraft_id, 20);
  w.put(static_cast<std::uint32_t>(lat_q) & 0xFFFFFF, 24);
  w.put(static_cast<std::uint32_t>(lon_q) & 0xFFFFFF, 24);
  w.put(alt_q, 15);
  w.put(r.timestamp_s, 17);
  return w.finish();
}

inline PositionReport decode_position(const Bits& bits) {
  if (bits.bit_count() != kPositionBits)
    throw DecodeError("position message must be exactly 100 bits");
  BitReader rd(bits);
  PositionReport r;
  r.aircraft_id = static_cast<std::uint32_t>(rd.get(20));
  auto sign_extend24 = [](std::uint32_t v) -> std::int32_t {
    return static_cast<std::int32_t>(v << 8) >> 8;
  };
  r.latitude_deg = sign_extend24(static_cast<std::uint32_t>(rd.get(24))) / detail::kLatScale;
  r.longitude_deg = sign_extend24(static_cast<std::uint32_t>(rd.get(24))) / detail::kLonScale;
  r.altitude_ft = static_cast<std::uint32_t>(rd.get(15)) * 10;
  r.timestamp_s = static_cast<std::uint32_t>(rd.get(17));
  if (r.timestamp_s >= 86400) throw DecodeError("decoded position timestamp >= 86400");
  return r;
}

// Fills one slot's payload. Legacy slots have room for the position report
// only; proposed slots append the 72-bit weather extension (all-zero when the
// aircraft has nothing to report).
inline Bits compose_payload(const PositionReport& pos, const std::optional<WeatherReport>& wx,
                            MacVariant variant) {
  Bits position = encode_position(pos);
  if (variant == MacVariant::Legacy) {
    if (wx) throw CapacityError("legacy payload has no room for the weather extension");
    return position;
  }
  Bits weather(kWeatherBits);
  if (wx) {
    WeatherOctets octets = encode_weather(*wx);
    for (int i = 0; i < kWeatherBits; ++i)
      weather.set(i, (octets[i >> 3] >> (7 - (i & 7))) & 1u);
  }
  return position.concat(weather);
}

inline int payload_bits_for(MacVariant variant) {
  return variant == MacVariant::Proposed ? kProposedPayloadBits : kPositionBits;
}

}  // namespace airtdma
