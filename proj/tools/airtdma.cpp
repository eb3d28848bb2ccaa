// airtdma: analytical sweeps, protocol simulation runs, scenario validation,
// and the weather message codec, all from one binary.
//
// Exit codes: 0 success, 2 configuration/input error, 3 runtime or protocol
// violation.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "airtdma/analytics.hpp"
#include "airtdma/codec.hpp"
#include "airtdma/compare.hpp"
#include "airtdma/scenario.hpp"
#include "airtdma/sim.hpp"
#include "airtdma/sweep.hpp"
#include "airtdma/version.hpp"

using namespace airtdma;

namespace {

HopRounding hop_rounding_from_string(const std::string& s) {
  if (s == "fractional") return HopRounding::Fractional;
  if (s == "ceiling") return HopRounding::Ceiling;
  throw ConfigError("--hop-rounding must be fractional or ceiling");
}

std::string trace_csv(const std::vector<TraceEvent>& events,
                      const nlohmann::json& provenance_cfg) {
  std::string out;
  for (const auto& line : provenance_lines(provenance_cfg, "trace")) out += line + "\n";
  out += "frame,slot,sender,receiver,kind,outcome\n";
  for (const auto& e : events) {
    out += std::to_string(e.frame) + ',' + std::to_string(e.slot) + ',' +
           std::to_string(e.sender) + ',' + std::to_string(e.receiver) + ',' +
           to_string(e.kind) + ',' + to_string(e.outcome) + '\n';
  }
  return out;
}

std::string metrics_csv(const RunMetrics& m, const nlohmann::json& provenance_cfg) {
  std::string out;
  for (const auto& line : provenance_lines(provenance_cfg, "simulate")) out += line + "\n";
  out += "origin,seq,created_frame,delivered_frame,e2e_frames,e2e_seconds,hops,last_hop_attempts\n";
  for (const auto& d : m.delivered) {
    const Packet& p = d.packet;
    long delivered_frame = p.hop_trace.empty() ? -1 : p.hop_trace.back().frame;
    int last_attempts = p.hop_trace.empty() ? 0 : p.hop_trace.back().attempt;
    out += std::to_string(p.origin_id) + ',' + std::to_string(p.sequence) + ',' +
           std::to_string(p.created_frame) + ',' + std::to_string(delivered_frame) + ',' +
           std::to_string(d.end_to_end_frames) + ',' + format_sig(d.end_to_end_seconds) + ',' +
           std::to_string(p.hop_trace.size()) + ',' + std::to_string(last_attempts) + '\n';
  }
  return out;
}

void print_summary(const ScenarioConfig& cfg, const RunMetrics& m, std::ostream& os) {
  os << "variant:              " << variant_name(cfg.variant) << "\n"
     << "nodes:                " << cfg.aircraft_count() + 1 << " (GS + "
     << cfg.aircraft_count() << " aircraft)\n"
     << "frames simulated:     " << m.frames_simulated << "\n"
     << "reservation done at:  frame " << m.reservation_complete_frame << "\n"
     << "first report frame:   " << m.first_report_frame << "\n"
     << "generated:            " << m.generated << "\n"
     << "delivered:            " << m.delivered.size() << "\n"
     << "undelivered:          " << m.undelivered_count << " (dropped " << m.dropped_count
     << ")\n"
     << "hops completed:       " << m.hops_completed << "\n"
     << "mean attempts/hop:    " << format_sig(m.mean_attempts) << "\n"
     << "mean delay:           " << format_sig(m.mean_delay_s) << " s\n"
     << "gs goodput:           " << format_sig(m.gs_goodput_bits_per_s) << " bit/s\n"
     << "data airtime share:   " << format_sig(m.measured_utilization) << "\n"
     << "slot conflicts:       " << m.slot_conflicts << "\n"
     << "reused slots:         " << m.reused_slots << "\n"
     << "tdd violations:       " << m.tdd_violations << "\n";
}

void run_compare(const ScenarioConfig& cfg, const std::string& out_path) {
  CompareReport rep = compare(cfg);

  std::ostringstream table;
  table << "metric,analytical,simulated,abs_delta,rel_delta\n";
  table << "mean_delay_s," << format_sig(rep.analytic_delay_s) << ','
        << format_sig(rep.simulated_delay_s) << ',' << format_sig(rep.delay_abs_delta()) << ','
        << format_sig(rep.delay_rel_delta()) << '\n';
  table << "end_to_end_throughput_bps," << format_sig(rep.analytic_throughput_bps) << ','
        << format_sig(rep.simulated_throughput_bps) << ','
        << format_sig(rep.throughput_abs_delta()) << ','
        << format_sig(rep.throughput_rel_delta()) << '\n';
  if (rep.lossy) {
    table << "# note: rho > 0; each failed attempt costs an ACK-wait frame plus a "
             "retransmit frame, so simulated delay is expected to exceed the N*H*T_f "
             "model by a factor approaching "
          << format_sig(rep.expected_delay_factor) << " (more under relay queueing)\n";
  }
  std::string text = table.str();
  std::cout << text;
  if (!out_path.empty()) {
    std::string csv;
    for (const auto& line : provenance_lines(scenario_to_json(cfg), "compare"))
      csv += line + "\n";
    csv += text;
    write_file(out_path, csv);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Airborne TDMA relay MAC: analysis, simulation and codecs"};
  app.set_version_flag("--version", std::string("airtdma ") + kVersion);
  app.require_subcommand(1);

  // ---- analyze ----
  auto* analyze = app.add_subcommand("analyze", "Analytical sweeps as CSV");
  std::string quantity = "utilization";
  analyze->add_option("--quantity", quantity,
                      "utilization | delay-vs-gs | delay-vs-interval | throughput");
  std::optional<double> axis_min, axis_max, axis_step;
  analyze->add_option("--min", axis_min, "Axis lower bound");
  analyze->add_option("--max", axis_max, "Axis upper bound");
  analyze->add_option("--step", axis_step, "Axis step");
  std::vector<double> rhos;
  analyze->add_option("--rho", rhos, "Loss ratios (default 0 0.1)");
  std::string hop_rounding = "fractional";
  analyze->add_option("--hop-rounding", hop_rounding, "fractional | ceiling");
  double data_rate = defaults::kDataRateBps;
  analyze->add_option("--data-rate", data_rate, "Channel rate, bit/s");
  double d_gs = defaults::kGsDistanceKm;
  analyze->add_option("--d-gs", d_gs, "Fixed GS distance for the interval sweep, km");
  double d_int_min = defaults::kMinIntervalKm, d_int_max = defaults::kLineOfSightKm;
  analyze->add_option("--d-int-min", d_int_min, "Densest aircraft spacing, km");
  analyze->add_option("--d-int-max", d_int_max, "Sparsest aircraft spacing, km");
  bool no_hf = false;
  analyze->add_flag("--no-hf", no_hf, "Omit the HF voice baseline series");
  std::string analyze_out;
  analyze->add_option("--out", analyze_out, "Output CSV path (default stdout)");

  // ---- simulate ----
  auto* simulate = app.add_subcommand("simulate", "Run the relay protocol simulator");
  std::string sim_scenario;
  simulate->add_option("scenario", sim_scenario, "Scenario JSON path")->required();
  std::string sim_out, sim_trace;
  simulate->add_option("--out", sim_out, "Per-packet metrics CSV path");
  simulate->add_option("--trace", sim_trace, "Per-transmission event trace CSV path");
  std::optional<std::uint64_t> seed_override;
  simulate->add_option("--seed", seed_override, "Override the scenario RNG seed");
  std::optional<long> frames_override;
  simulate->add_option("--frames", frames_override, "Override the simulated frame count");

  // ---- compare ----
  auto* compare = app.add_subcommand("compare", "Analytical model vs simulation");
  std::string cmp_scenario;
  compare->add_option("scenario", cmp_scenario, "Scenario JSON path")->required();
  std::string cmp_out;
  compare->add_option("--out", cmp_out, "Also write the table as CSV");
  std::optional<std::uint64_t> cmp_seed;
  compare->add_option("--seed", cmp_seed, "Override the scenario RNG seed");
  std::optional<long> cmp_frames;
  compare->add_option("--frames", cmp_frames, "Override the simulated frame count");

  // ---- validate ----
  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  std::string val_scenario;
  validate->add_option("scenario", val_scenario, "Scenario JSON path")->required();

  // ---- weather ----
  auto* weather = app.add_subcommand("weather", "Weather message codec");
  weather->require_subcommand(1);
  auto* wenc = weather->add_subcommand("encode", "Fields -> 18-char hex message");
  std::uint32_t w_time = 0;
  std::uint32_t w_wind_dir = 0, w_wind_speed = 0, w_vis_dir = 0, w_vis_dist = 0;
  std::uint32_t w_cloud_amount = 0, w_cloud_height = 0, w_cloud_type = 0;
  std::string w_special;
  wenc->add_option("--time", w_time, "Seconds since midnight UTC");
  wenc->add_option("--wind-dir", w_wind_dir, "Wind direction, degrees");
  wenc->add_option("--wind-speed", w_wind_speed, "Wind speed, knots");
  wenc->add_option("--vis-dir", w_vis_dir, "Visibility direction, degrees");
  wenc->add_option("--vis-dist", w_vis_dist, "Visibility distance, km");
  wenc->add_option("--cloud-amount", w_cloud_amount, "Cloud amount code, 0-7");
  wenc->add_option("--cloud-height", w_cloud_height, "Cloud base, 100 ft units");
  wenc->add_option("--cloud-type", w_cloud_type, "Cloud type code, 0-7");
  wenc->add_option("--special", w_special, "Comma list: heavy_rain,hail,icing,...");
  auto* wdec = weather->add_subcommand("decode", "18-char hex message -> fields");
  std::string w_hex;
  wdec->add_option("hex", w_hex, "Encoded message, 18 hex chars")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analyze) {
      SweepSpec spec;
      spec.quantity = sweep_quantity_from_string(quantity);
      switch (spec.quantity) {
        case SweepQuantity::Utilization:
          spec.axis_min = 1;
          spec.axis_max = defaults::kLineOfSightKm;
          spec.axis_step = 1;
          break;
        case SweepQuantity::NotificationDelayVsGsDistance:
        case SweepQuantity::EndToEndThroughput:
          spec.axis_min = 500;
          spec.axis_max = defaults::kGsDistanceKm;
          spec.axis_step = 100;
          break;
        case SweepQuantity::NotificationDelayVsInterval:
          spec.axis_min = defaults::kMinIntervalKm;
          spec.axis_max = defaults::kLineOfSightKm;
          spec.axis_step = 10;
          break;
      }
      if (axis_min) spec.axis_min = *axis_min;
      if (axis_max) spec.axis_max = *axis_max;
      if (axis_step) spec.axis_step = *axis_step;
      if (!rhos.empty()) spec.rho_values = rhos;
      spec.hop_rounding = hop_rounding_from_string(hop_rounding);
      spec.data_rate_bps = data_rate;
      spec.gs_distance_km = d_gs;
      spec.d_int_min_km = d_int_min;
      spec.d_int_max_km = d_int_max;
      spec.include_hf_baseline = !no_hf;
      std::string csv = render_csv(sweep(spec));
      if (analyze_out.empty())
        std::cout << csv;
      else
        write_file(analyze_out, csv);
    } else if (*simulate) {
      ScenarioConfig cfg = parse_scenario(sim_scenario);
      if (seed_override) cfg.rng_seed = *seed_override;
      if (frames_override) cfg.sim_frames = *frames_override;
      cfg.validate();
      std::vector<TraceEvent> events;
      TraceSink sink;
      if (!sim_trace.empty())
        sink = [&events](const TraceEvent& e) { events.push_back(e); };
      RunMetrics m = run(cfg, sink);
      print_summary(cfg, m, std::cout);
      if (!sim_out.empty()) write_file(sim_out, metrics_csv(m, scenario_to_json(cfg)));
      if (!sim_trace.empty()) write_file(sim_trace, trace_csv(events, scenario_to_json(cfg)));
    } else if (*compare) {
      ScenarioConfig cfg = parse_scenario(cmp_scenario);
      if (cmp_seed) cfg.rng_seed = *cmp_seed;
      if (cmp_frames) cfg.sim_frames = *cmp_frames;
      cfg.validate();
      run_compare(cfg, cmp_out);
    } else if (*validate) {
      ScenarioConfig cfg = parse_scenario(val_scenario);
      std::cout << "OK: " << val_scenario << " (" << variant_name(cfg.variant) << ", "
                << cfg.aircraft_count() << " aircraft, " << cfg.sim_frames << " frames)\n";
    } else if (*weather) {
      if (*wenc) {
        WeatherReport r;
        r.time_s = w_time;
        r.wind_dir_deg = static_cast<std::uint16_t>(w_wind_dir);
        r.wind_speed_kt =
            static_cast<std::uint8_t>(std::min<std::uint32_t>(w_wind_speed, 255));
        r.vis_dir_deg = static_cast<std::uint16_t>(w_vis_dir);
        r.vis_dist_km = static_cast<std::uint8_t>(std::min<std::uint32_t>(w_vis_dist, 255));
        r.cloud_amount = static_cast<std::uint8_t>(w_cloud_amount);
        r.cloud_height = static_cast<std::uint16_t>(w_cloud_height);
        r.cloud_type = static_cast<std::uint8_t>(w_cloud_type);
        r.special = SpecialWeather::parse(w_special);
        std::cout << weather_to_hex(encode_weather(r)) << "\n";
      } else {
        WeatherReport r = weather_from_hex(w_hex);
        std::cout << "time=" << r.time_s << "\n"
                  << "wind_dir=" << r.wind_dir_deg << "\n"
                  << "wind_speed=" << static_cast<int>(r.wind_speed_kt) << "\n"
                  << "vis_dir=" << r.vis_dir_deg << "\n"
                  << "vis_dist=" << static_cast<int>(r.vis_dist_km) << "\n"
                  << "cloud_amount=" << static_cast<int>(r.cloud_amount) << "\n"
                  << "cloud_height=" << r.cloud_height << "\n"
                  << "cloud_type=" << static_cast<int>(r.cloud_type) << "\n"
                  << "special=" << r.special.to_string() << "\n";
      }
    }
  } catch (const ProtocolViolation& e) {
    std::cerr << "protocol violation: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
