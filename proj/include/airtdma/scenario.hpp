#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "airtdma/errors.hpp"
#include "airtdma/sim.hpp"

namespace airtdma {

// Scenario files are JSON objects; every key is optional and unknown keys are
// rejected so typos fail loudly. See the README for the schema.

inline MacVariant variant_from_string(const std::string& s) {
  if (s == "proposed") return MacVariant::Proposed;
  if (s == "legacy") return MacVariant::Legacy;
  throw ConfigError("variant must be \"proposed\" or \"legacy\", got \"" + s + "\"");
}

inline TrafficMode traffic_mode_from_string(const std::string& s) {
  if (s == "all") return TrafficMode::All;
  if (s == "farthest_only") return TrafficMode::FarthestOnly;
  throw ConfigError("traffic_mode must be \"all\" or \"farthest_only\", got \"" + s + "\"");
}

inline ScenarioConfig scenario_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "variant",          "slots_per_frame",        "slot_ms",
      "guard_ms",         "random_access_slots",    "chain_length_km",
      "node_interval_km", "los_limit_km",           "rho",
      "report_interval_frames", "reports_per_node", "sim_frames",
      "rng_seed",         "aircraft_speed_kmh",     "weather_enabled",
      "retry_limit",      "traffic_mode",           "forced_losses",
      "forced_nacks"};
  if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ConfigError("unknown scenario key: " + it.key());

  ScenarioConfig cfg;
  try {
    int slots = j.value("slots_per_frame", defaults::kSlotsPerFrame);
    double slot_ms = j.value("slot_ms", defaults::kSlotMs);
    int ra = j.value("random_access_slots", defaults::kRandomAccessSlots);
    cfg.frame = make_frame_layout(slots, slot_ms, ra);
    if (j.contains("variant")) cfg.variant = variant_from_string(j.at("variant"));
    cfg.guard_ms = j.value("guard_ms", defaults::kGuardMs);
    cfg.chain_length_km = j.value("chain_length_km", defaults::kGsDistanceKm);
    cfg.node_interval_km = j.value("node_interval_km", defaults::kLineOfSightKm);
    cfg.los_limit_km = j.value("los_limit_km", defaults::kLineOfSightKm);
    cfg.rho = j.value("rho", 0.0);
    cfg.report_interval_frames =
        j.value("report_interval_frames", defaults::kReportIntervalFrames);
    cfg.reports_per_node = j.value("reports_per_node", 0L);
    cfg.sim_frames = j.value("sim_frames", 200L);
    cfg.rng_seed = j.value("rng_seed", std::uint64_t{1});
    cfg.aircraft_speed_kmh = j.value("aircraft_speed_kmh", defaults::kAircraftSpeedKmh);
    cfg.weather_enabled = j.value("weather_enabled", true);
    cfg.retry_limit = j.value("retry_limit", defaults::kRetryLimit);
    if (j.contains("traffic_mode"))
      cfg.traffic_mode = traffic_mode_from_string(j.at("traffic_mode"));
    auto parse_events = [](const nlohmann::json& arr, const char* what) {
      std::vector<ForcedEvent> out;
      for (const auto& e : arr) {
        if (!e.is_array() || e.size() != 2)
          throw ConfigError(std::string(what) + " entries must be [frame, listener] pairs");
        out.push_back(ForcedEvent{e.at(0).get<long>(), e.at(1).get<int>()});
      }
      return out;
    };
    if (j.contains("forced_losses"))
      cfg.forced_losses = parse_events(j.at("forced_losses"), "forced_losses");
    if (j.contains("forced_nacks"))
      cfg.forced_nacks = parse_events(j.at("forced_nacks"), "forced_nacks");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed scenario value: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

inline nlohmann::json scenario_to_json(const ScenarioConfig& cfg) {
  nlohmann::json j;
  j["variant"] = variant_name(cfg.variant);
  j["slots_per_frame"] = cfg.frame.slots_per_frame;
  j["slot_ms"] = ns_to_ms(cfg.frame.slot_duration);
  j["guard_ms"] = cfg.guard_ms;
  j["random_access_slots"] = cfg.frame.random_access_slots;
  j["chain_length_km"] = cfg.chain_length_km;
  j["node_interval_km"] = cfg.node_interval_km;
  j["los_limit_km"] = cfg.los_limit_km;
  j["rho"] = cfg.rho;
  j["report_interval_frames"] = cfg.report_interval_frames;
  j["reports_per_node"] = cfg.reports_per_node;
  j["sim_frames"] = cfg.sim_frames;
  j["rng_seed"] = cfg.rng_seed;
  j["aircraft_speed_kmh"] = cfg.aircraft_speed_kmh;
  j["weather_enabled"] = cfg.weather_enabled;
  j["retry_limit"] = cfg.retry_limit;
  j["traffic_mode"] = cfg.traffic_mode == TrafficMode::All ? "all" : "farthest_only";
  if (!cfg.forced_losses.empty()) {
    auto& arr = j["forced_losses"] = nlohmann::json::array();
    for (const auto& e : cfg.forced_losses) arr.push_back({e.frame, e.listener});
  }
  if (!cfg.forced_nacks.empty()) {
    auto& arr = j["forced_nacks"] = nlohmann::json::array();
    for (const auto& e : cfg.forced_nacks) arr.push_back({e.frame, e.listener});
  }
  return j;
}

inline ScenarioConfig parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("scenario parse error in " + path + ": " + e.what());
  }
  return scenario_from_json(j);
}

inline std::string serialize_scenario(const ScenarioConfig& cfg) {
  return scenario_to_json(cfg).dump(2) + "\n";
}

}  // namespace airtdma
