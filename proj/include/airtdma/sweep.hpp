#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "airtdma/analytics.hpp"
#include "airtdma/errors.hpp"
#include "airtdma/version.hpp"

namespace airtdma {

// Analytical parameter sweeps, emitted as tidy CSV: one row per axis sample
// per series. Numbers are rendered with fixed 6-significant-digit formatting
// so identical inputs give byte-identical files.

enum class SweepQuantity {
  Utilization,                    // vs link distance, one series per variant
  NotificationDelayVsGsDistance,  // vs d_gs, one series per rho (+ HF band)
  NotificationDelayVsInterval,    // vs d_int at fixed d_gs (+ HF band)
  EndToEndThroughput,             // vs d_gs, variant x rho series
};

inline const char* to_string(SweepQuantity q) {
  switch (q) {
    case SweepQuantity::Utilization: return "utilization";
    case SweepQuantity::NotificationDelayVsGsDistance: return "delay-vs-gs";
    case SweepQuantity::NotificationDelayVsInterval: return "delay-vs-interval";
    default: return "throughput";
  }
}

inline SweepQuantity sweep_quantity_from_string(const std::string& s) {
  if (s == "utilization") return SweepQuantity::Utilization;
  if (s == "delay-vs-gs") return SweepQuantity::NotificationDelayVsGsDistance;
  if (s == "delay-vs-interval") return SweepQuantity::NotificationDelayVsInterval;
  if (s == "throughput") return SweepQuantity::EndToEndThroughput;
  throw ConfigError("unknown sweep quantity: " + s);
}

struct SweepSpec {
  SweepQuantity quantity = SweepQuantity::Utilization;
  double axis_min = 1.0;
  double axis_max = defaults::kLineOfSightKm;
  double axis_step = 1.0;
  std::vector<double> rho_values = {0.0, 0.1};
  std::vector<MacVariant> variants = {MacVariant::Proposed, MacVariant::Legacy};
  double frame_seconds = defaults::kFrameSeconds;
  double propagation_mps = defaults::kPropagationMps;
  double data_rate_bps = defaults::kDataRateBps;
  int payload_bits_proposed = defaults::kPayloadBitsProposed;
  int payload_bits_legacy = defaults::kPayloadBitsLegacy;
  double gs_distance_km = defaults::kGsDistanceKm;   // fixed d_gs (interval sweep)
  double d_int_min_km = defaults::kMinIntervalKm;    // spacing band (gs sweeps)
  double d_int_max_km = defaults::kLineOfSightKm;
  HopRounding hop_rounding = HopRounding::Fractional;
  bool include_hf_baseline = true;

  void validate() const {
    if (!(axis_min < axis_max)) throw ConfigError("sweep requires axis_min < axis_max");
    if (!(axis_step > 0)) throw ConfigError("sweep requires axis_step > 0");
    if (rho_values.empty()) throw ConfigError("sweep requires at least one rho");
    if (variants.empty()) throw ConfigError("sweep requires at least one variant");
    for (double r : rho_values)
      if (r < 0.0 || r > 0.1) throw ConfigError("sweep rho outside [0, 0.1]");
  }

  std::vector<double> axis_samples() const {
    std::vector<double> xs;
    for (double x = axis_min; x <= axis_max + 1e-9; x += axis_step) xs.push_back(x);
    return xs;
  }

  nlohmann::json to_json() const;
};

struct ResultTable {
  std::vector<std::string> columns;
  struct Row {
    double axis = 0.0;
    std::string series;
    double value = 0.0;
  };
  std::vector<Row> rows;
  std::vector<std::string> provenance;  // rendered as leading '#' comment lines
};

// %.6g: up to six significant digits, deterministic for a given libc.
inline std::string format_sig(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return std::string(buf);
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string payload_label(double rho) { return "rho=" + format_sig(rho); }

inline nlohmann::json SweepSpec::to_json() const {
  nlohmann::json j;
  j["quantity"] = to_string(quantity);
  j["axis_min"] = axis_min;
  j["axis_max"] = axis_max;
  j["axis_step"] = axis_step;
  j["rho_values"] = rho_values;
  std::vector<std::string> vs;
  for (auto v : variants) vs.push_back(variant_name(v));
  j["variants"] = vs;
  j["frame_seconds"] = frame_seconds;
  j["propagation_mps"] = propagation_mps;
  j["data_rate_bps"] = data_rate_bps;
  j["payload_bits_proposed"] = payload_bits_proposed;
  j["payload_bits_legacy"] = payload_bits_legacy;
  j["gs_distance_km"] = gs_distance_km;
  j["d_int_min_km"] = d_int_min_km;
  j["d_int_max_km"] = d_int_max_km;
  j["hop_rounding"] = hop_rounding == HopRounding::Fractional ? "fractional" : "ceiling";
  j["include_hf_baseline"] = include_hf_baseline;
  return j;
}

inline std::vector<std::string> provenance_lines(const nlohmann::json& config,
                                                 const std::string& kind) {
  std::string dump = config.dump();
  std::vector<std::string> out;
  out.push_back("# airtdma " + std::string(kVersion) + " " + kind);
  out.push_back("# config_fnv1a=" + to_hex_u64(fnv1a(dump)));
  out.push_back("# config=" + dump);
  return out;
}

inline ResultTable sweep(const SweepSpec& spec) {
  spec.validate();
  ResultTable table;
  auto xs = spec.axis_samples();

  auto payload_for = [&](MacVariant v) {
    return v == MacVariant::Proposed ? spec.payload_bits_proposed : spec.payload_bits_legacy;
  };
  auto delay_params = [&](double rho, double d_gs, double d_int, MacVariant v) {
    DelayParams p;
    p.rho = rho;
    p.gs_distance_km = d_gs;
    p.node_interval_km = d_int;
    p.frame_seconds = spec.frame_seconds;
    p.bits_per_slot = payload_for(v);
    p.hop_rounding = spec.hop_rounding;
    p.d_int_min_km = std::min(spec.d_int_min_km, d_int);
    p.d_int_max_km = std::max(spec.d_int_max_km, d_int);
    return p;
  };
  const HfVoiceBaseline hf = hf_voice_baseline();

  switch (spec.quantity) {
    case SweepQuantity::Utilization:
      table.columns = {"distance_km", "series", "utilization"};
      for (double x : xs) {
        for (MacVariant v : spec.variants) {
          LinkParams p;
          p.payload_bits = payload_for(v);
          p.data_rate_bps = spec.data_rate_bps;
          p.distance_km = x;
          p.propagation_mps = spec.propagation_mps;
          p.los_limit_km = std::max(defaults::kLineOfSightKm, spec.axis_max);
          table.rows.push_back({x, variant_name(v), utilization(v, p)});
        }
      }
      break;
    case SweepQuantity::NotificationDelayVsGsDistance:
      table.columns = {"gs_distance_km", "series", "delay_s"};
      for (double x : xs) {
        for (double rho : spec.rho_values) {
          double d = averaged_notification_delay(rho, x, spec.d_int_min_km, spec.d_int_max_km,
                                                 spec.frame_seconds, spec.hop_rounding);
          table.rows.push_back({x, payload_label(rho), d});
        }
        if (spec.include_hf_baseline) {
          table.rows.push_back({x, "hf_high", hf.high_s});
          table.rows.push_back({x, "hf_low", hf.low_s});
          table.rows.push_back({x, "hf_mid", hf.mid_s});
        }
      }
      break;
    case SweepQuantity::NotificationDelayVsInterval:
      table.columns = {"interval_km", "series", "delay_s"};
      for (double x : xs) {
        for (double rho : spec.rho_values) {
          DelayParams p = delay_params(rho, spec.gs_distance_km, x, MacVariant::Proposed);
          table.rows.push_back({x, payload_label(rho), notification_delay(p)});
        }
        if (spec.include_hf_baseline) {
          table.rows.push_back({x, "hf_high", hf.high_s});
          table.rows.push_back({x, "hf_low", hf.low_s});
          table.rows.push_back({x, "hf_mid", hf.mid_s});
        }
      }
      break;
    case SweepQuantity::EndToEndThroughput:
      table.columns = {"gs_distance_km", "series", "throughput_bps"};
      for (double x : xs) {
        for (MacVariant v : spec.variants) {
          for (double rho : spec.rho_values) {
            DelayParams p = delay_params(rho, x, spec.d_int_min_km, v);
            double s = end_to_end_throughput(p, spec.d_int_min_km, spec.d_int_max_km);
            table.rows.push_back(
                {x, std::string(variant_name(v)) + "_" + payload_label(rho), s});
          }
        }
      }
      break;
  }

  // Deterministic ordering: axis ascending, then series label.
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const ResultTable::Row& a, const ResultTable::Row& b) {
                     if (a.axis != b.axis) return a.axis < b.axis;
                     return a.series < b.series;
                   });
  table.provenance = provenance_lines(spec.to_json(), "sweep");
  return table;
}

inline std::string render_csv(const ResultTable& table) {
  std::string out;
  for (const auto& line : table.provenance) out += line + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    out += format_sig(row.axis);
    out += ',';
    out += row.series;
    out += ',';
    out += format_sig(row.value);
    out += '\n';
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << content;
}

}  // namespace airtdma
