#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "airtdma/codec.hpp"

using namespace airtdma;

namespace {

WeatherReport random_weather(std::mt19937_64& rng) {
  WeatherReport r;
  r.time_s = static_cast<std::uint32_t>(rng() % 86400);
  r.wind_dir_deg = static_cast<std::uint16_t>(rng() % 360);
  r.wind_speed_kt = static_cast<std::uint8_t>(rng() % 128);
  r.vis_dir_deg = static_cast<std::uint16_t>(rng() % 360);
  r.vis_dist_km = static_cast<std::uint8_t>(rng() % 128);
  r.cloud_amount = static_cast<std::uint8_t>(rng() % 8);
  r.cloud_height = static_cast<std::uint16_t>(rng() % 512);
  r.cloud_type = static_cast<std::uint8_t>(rng() % 8);
  r.special.flags = static_cast<std::uint8_t>(rng() % 256);
  return r;
}

}  // namespace

TEST_CASE("all-zero weather report encodes to nine zero octets") {
  WeatherReport zero;
  CHECK(weather_to_hex(encode_weather(zero)) == "000000000000000000");
  CHECK(decode_weather(encode_weather(zero)) == zero);
}

TEST_CASE("hail and icing land in the final octet as 0x18") {
  WeatherReport r;
  r.special.set(SpecialWeather::Hail);
  r.special.set(SpecialWeather::Icing);
  WeatherOctets octets = encode_weather(r);
  for (int i = 0; i < 8; ++i) CHECK(octets[static_cast<std::size_t>(i)] == 0);
  CHECK(octets[8] == 0x18);
}

// Hand-packed single-field vectors pin every field boundary of the layout:
// time:17 wind_dir:9 wind_speed:7 vis_dir:9 vis_dist:7 cloud_amount:3
// cloud_height:9 cloud_type:3 special:8, MSB first.
TEST_CASE("weather field offsets match the documented wire layout") {
  struct Vector {
    WeatherReport report;
    const char* hex;
  };
  std::vector<Vector> vectors;
  {
    WeatherReport r;
    r.time_s = 1;  // LSB of the 17-bit field sits at bit 16 = octet 2 MSB
    vectors.push_back({r, "000080000000000000"});
  }
  {
    WeatherReport r;
    r.time_s = 86399;  // 0x1517F: 86399>>9=0xA8, (86399>>1)&0xFF=0xBF, LSB=1
    vectors.push_back({r, "a8bf80000000000000"});
  }
  {
    WeatherReport r;
    r.wind_dir_deg = 1;  // bit 25 = octet 3 bit 1
    vectors.push_back({r, "000000400000000000"});
  }
  {
    WeatherReport r;
    r.wind_speed_kt = 1;  // bit 32 = octet 4 MSB
    vectors.push_back({r, "000000008000000000"});
  }
  {
    WeatherReport r;
    r.vis_dir_deg = 1;  // bit 41 = octet 5 bit 1
    vectors.push_back({r, "000000000040000000"});
  }
  {
    WeatherReport r;
    r.vis_dist_km = 1;  // bit 48 = octet 6 MSB
    vectors.push_back({r, "000000000000800000"});
  }
  {
    WeatherReport r;
    r.cloud_amount = 1;  // bit 51 = octet 6 bit 3
    vectors.push_back({r, "000000000000100000"});
  }
  {
    WeatherReport r;
    r.cloud_height = 1;  // bit 60 = octet 7 bit 4
    vectors.push_back({r, "000000000000000800"});
  }
  {
    WeatherReport r;
    r.cloud_type = 1;  // bit 63 = octet 7 LSB
    vectors.push_back({r, "000000000000000100"});
  }
  for (const auto& v : vectors) {
    CHECK(weather_to_hex(encode_weather(v.report)) == v.hex);
    CHECK(weather_from_hex(v.hex) == v.report);
  }
}

TEST_CASE("weather roundtrip identity over ten thousand random reports") {
  std::mt19937_64 rng(20110515);
  for (int i = 0; i < 10000; ++i) {
    WeatherReport r = random_weather(rng);
    CHECK(decode_weather(encode_weather(r)) == r);
  }
}

TEST_CASE("all 256 special weather octets roundtrip and map bit-for-bit") {
  for (int v = 0; v < 256; ++v) {
    WeatherReport r;
    r.special.flags = static_cast<std::uint8_t>(v);
    WeatherOctets octets = encode_weather(r);
    CHECK(octets[8] == v);
    CHECK(decode_weather(octets).special.flags == v);
  }
}

TEST_CASE("wind speed and visibility distance saturate at 127") {
  WeatherReport r;
  r.wind_speed_kt = 200;
  r.vis_dist_km = 255;
  WeatherReport back = decode_weather(encode_weather(r));
  CHECK(back.wind_speed_kt == 127);
  CHECK(back.vis_dist_km == 127);
}

TEST_CASE("weather encode rejects out-of-range fields by name") {
  WeatherReport r;
  r.time_s = 86400;
  CHECK_THROWS_WITH(encode_weather(r), Catch::Matchers::ContainsSubstring("time"));
  r = WeatherReport{};
  r.wind_dir_deg = 360;
  CHECK_THROWS_WITH(encode_weather(r), Catch::Matchers::ContainsSubstring("wind_dir"));
  r = WeatherReport{};
  r.vis_dir_deg = 360;
  CHECK_THROWS_WITH(encode_weather(r), Catch::Matchers::ContainsSubstring("vis_dir"));
  r = WeatherReport{};
  r.cloud_height = 512;
  CHECK_THROWS_WITH(encode_weather(r), Catch::Matchers::ContainsSubstring("cloud_height"));
}

TEST_CASE("weather decode validates length and field ranges") {
  CHECK_THROWS_AS(decode_weather(std::vector<std::uint8_t>(8, 0)), DecodeError);
  CHECK_THROWS_AS(decode_weather(std::vector<std::uint8_t>(10, 0)), DecodeError);
  // time = 90000 = 0x15F90: bytes af c8 00 ...
  WeatherReport probe;
  probe.time_s = 45000;
  auto octets = encode_weather(probe);  // start from a valid message
  std::vector<std::uint8_t> bytes(octets.begin(), octets.end());
  bytes[0] = 0xAF;
  bytes[1] = 0xC8;
  bytes[2] = 0x00;
  CHECK_THROWS_AS(decode_weather(bytes), DecodeError);
}

TEST_CASE("special weather flag list parsing") {
  SpecialWeather s = SpecialWeather::parse("hail,icing");
  CHECK(s.flags == 0x18);
  CHECK(s.to_string() == "hail,icing");
  CHECK(SpecialWeather::parse("").flags == 0);
  CHECK(SpecialWeather::parse("microburst").flags == 0x80);
  CHECK_THROWS_AS(SpecialWeather::parse("drizzle"), DecodeError);
}

TEST_CASE("all-zero position encodes to 100 zero bits") {
  PositionReport zero;
  Bits bits = encode_position(zero);
  CHECK(bits.bit_count() == 100);
  for (std::size_t i = 0; i < 100; ++i) CHECK_FALSE(bits.get(i));
  CHECK(decode_position(bits) == zero);
}

TEST_CASE("position field boundaries") {
  PositionReport r;
  r.aircraft_id = 1;  // LSB at bit 19 -> byte 2 = 0x10
  Bits bits = encode_position(r);
  CHECK(bits.bytes()[2] == 0x10);

  r = PositionReport{};
  r.latitude_deg = -90.0;  // quantizes to -2^23 = 0x800000, sign bit at offset 20
  bits = encode_position(r);
  CHECK(bits.bytes()[2] == 0x08);
  CHECK(decode_position(bits).latitude_deg == -90.0);
}

TEST_CASE("latitude +90 saturates to the top code without overflow") {
  PositionReport r;
  r.latitude_deg = 90.0;
  PositionReport back = decode_position(encode_position(r));
  CHECK(back.latitude_deg <= 90.0);
  CHECK(back.latitude_deg == Catch::Approx(90.0).margin(90.0 / 8388608.0 + 1e-12));
}

TEST_CASE("position roundtrip is exact on the fixed-point grid") {
  std::mt19937_64 rng(774422);
  for (int i = 0; i < 10000; ++i) {
    PositionReport r;
    r.aircraft_id = static_cast<std::uint32_t>(rng() % (1u << 20));
    auto lat_q = static_cast<std::int64_t>(rng() % 16777216) - 8388608;
    auto lon_q = static_cast<std::int64_t>(rng() % 16777216) - 8388608;
    r.latitude_deg = static_cast<double>(lat_q) * (90.0 / 8388608.0);
    r.longitude_deg = static_cast<double>(lon_q) * (180.0 / 8388608.0);
    r.altitude_ft = static_cast<std::uint32_t>(rng() % 32768) * 10;
    r.timestamp_s = static_cast<std::uint32_t>(rng() % 86400);
    CHECK(decode_position(encode_position(r)) == r);
  }
}

TEST_CASE("position roundtrip keeps arbitrary values within quantization error") {
  std::mt19937_64 rng(31337);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  for (int i = 0; i < 2000; ++i) {
    PositionReport r;
    r.aircraft_id = static_cast<std::uint32_t>(rng() % (1u << 20));
    r.latitude_deg = uniform(-90.0, 90.0);
    r.longitude_deg = uniform(-180.0, 179.9999);
    r.altitude_ft = static_cast<std::uint32_t>(rng() % 327671);
    r.timestamp_s = static_cast<std::uint32_t>(rng() % 86400);
    PositionReport back = decode_position(encode_position(r));
    CHECK(back.aircraft_id == r.aircraft_id);
    CHECK(back.timestamp_s == r.timestamp_s);
    CHECK(std::abs(back.latitude_deg - r.latitude_deg) <= 90.0 / 8388608.0);
    CHECK(std::abs(back.longitude_deg - r.longitude_deg) <= 180.0 / 8388608.0);
    CHECK(std::abs(static_cast<double>(back.altitude_ft) - r.altitude_ft) <= 5.0);
  }
}

TEST_CASE("position encode validates ranges") {
  PositionReport r;
  r.aircraft_id = 1u << 20;
  CHECK_THROWS_AS(encode_position(r), EncodeError);
  r = PositionReport{};
  r.latitude_deg = 90.5;
  CHECK_THROWS_AS(encode_position(r), EncodeError);
  r = PositionReport{};
  r.longitude_deg = 180.0;
  CHECK_THROWS_AS(encode_position(r), EncodeError);
  r = PositionReport{};
  r.timestamp_s = 86400;
  CHECK_THROWS_AS(encode_position(r), EncodeError);
}

TEST_CASE("payload composition fills the variant capacity exactly") {
  PositionReport pos;
  pos.aircraft_id = 7;
  WeatherReport wx;
  wx.wind_speed_kt = 40;

  Bits proposed = compose_payload(pos, wx, MacVariant::Proposed);
  Bits legacy = compose_payload(pos, std::nullopt, MacVariant::Legacy);
  CHECK(proposed.bit_count() == 172);
  CHECK(legacy.bit_count() == 100);
  CHECK(static_cast<double>(proposed.bit_count()) / static_cast<double>(legacy.bit_count()) ==
        1.72);

  // Weather omitted under the proposed MAC pads with a zero extension.
  Bits padded = compose_payload(pos, std::nullopt, MacVariant::Proposed);
  CHECK(padded.bit_count() == 172);
  for (std::size_t i = 100; i < 172; ++i) CHECK_FALSE(padded.get(i));

  CHECK_THROWS_AS(compose_payload(pos, wx, MacVariant::Legacy), CapacityError);
}

TEST_CASE("hex helpers reject malformed input") {
  CHECK_THROWS_AS(weather_from_hex("00"), DecodeError);
  CHECK_THROWS_AS(weather_from_hex("zz0000000000000000"), DecodeError);
  CHECK(from_hex("a1b2") == std::vector<std::uint8_t>{0xA1, 0xB2});
  CHECK(to_hex({0xDE, 0xAD}) == "dead");
}
