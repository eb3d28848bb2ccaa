#pragma once

#include <string>

#include "airtdma/analytics.hpp"
#include "airtdma/sim.hpp"

namespace airtdma {

// Cross-validation of the closed-form delay/throughput model against a
// simulator run of the same scenario.
//
// Delay: the model predicts N * H * T_f per packet, with H the packet's own
// integer hop count. The simulator charges two frames per failed attempt
// (ACK-wait frame + retransmit frame) plus any queueing, so for rho > 0 the
// simulated mean exceeds the model by a factor approaching
// (1 + 2 rho / (1 - rho)) / (1 / (1 - rho)) = 1 + rho on an unloaded chain,
// and more when relay queues build up.
//
// Throughput: the closed form S = T_d * H / d_t evaluated with simulated
// means, against the same expression with the model delay (which reduces to
// T_d / (N * T_f)). At rho = 0 the two are identical.
struct CompareReport {
  double analytic_delay_s = 0.0;
  double simulated_delay_s = 0.0;
  double analytic_throughput_bps = 0.0;
  double simulated_throughput_bps = 0.0;
  double mean_hops = 0.0;
  long delivered = 0;
  bool lossy = false;
  double expected_delay_factor = 1.0;  // 1 + rho
  RunMetrics metrics;

  double delay_abs_delta() const { return simulated_delay_s - analytic_delay_s; }
  double delay_rel_delta() const {
    return analytic_delay_s != 0.0 ? delay_abs_delta() / analytic_delay_s : 0.0;
  }
  double throughput_abs_delta() const {
    return simulated_throughput_bps - analytic_throughput_bps;
  }
  double throughput_rel_delta() const {
    return analytic_throughput_bps != 0.0 ? throughput_abs_delta() / analytic_throughput_bps
                                          : 0.0;
  }
};

inline CompareReport compare(const ScenarioConfig& cfg) {
  CompareReport rep;
  rep.metrics = run(cfg);
  rep.delivered = static_cast<long>(rep.metrics.delivered.size());
  rep.lossy = cfg.rho > 0.0;
  rep.expected_delay_factor = 1.0 + cfg.rho;
  if (rep.delivered == 0) return rep;

  double n_expected = expected_transmissions(cfg.rho);
  double hops_sum = 0.0, analytic_sum = 0.0, sim_sum = 0.0;
  for (const auto& d : rep.metrics.delivered) {
    double hops = static_cast<double>(d.packet.hop_trace.size());
    hops_sum += hops;
    analytic_sum += n_expected * hops * cfg.frame.frame_seconds();
    sim_sum += d.end_to_end_seconds;
  }
  double n = static_cast<double>(rep.delivered);
  rep.mean_hops = hops_sum / n;
  rep.analytic_delay_s = analytic_sum / n;
  rep.simulated_delay_s = sim_sum / n;
  double bits = cfg.payload_bits();
  rep.analytic_throughput_bps = bits * rep.mean_hops / rep.analytic_delay_s;
  rep.simulated_throughput_bps = bits * rep.mean_hops / rep.simulated_delay_s;
  return rep;
}

}  // namespace airtdma
