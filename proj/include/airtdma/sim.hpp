#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "airtdma/analytics.hpp"
#include "airtdma/codec.hpp"
#include "airtdma/errors.hpp"
#include "airtdma/timing.hpp"

namespace airtdma {

// Deterministic slot-stepped simulator of the relay protocol over a linear
// aircraft chain ending at a ground station (node 0).
//
// Protocol rules implemented (proposed variant):
//  - every transmission of a packet uses the slot its origin reserved, at
//    every hop ("same slot index, next frame");
//  - a node that transmitted in (frame, slot) listens in (frame+1, slot) for
//    the acknowledgment piggybacked on the next hop's relay; the ground
//    station, having nothing to relay, answers with a bare zero-payload ACK;
//  - missing ACK (or an explicit NACK) triggers a retransmission one frame
//    after the listening frame, up to retry_limit attempts per hop;
//  - a radio never transmits and listens in the same slot (TDD); per-slot
//    FIFO queues serialize competing transmissions, and whatever a node sends
//    in (frame+1, slot) carries the ACK verdict for what it heard in
//    (frame, slot).
// The legacy variant instead resolves the ACK inside the transmission slot,
// so a failed attempt is retried in the very next frame.

enum class TrafficMode {
  All,           // every aircraft generates reports (the normal network)
  FarthestOnly,  // only the chain-end aircraft generates (measurement runs)
};

struct ForcedEvent {
  long frame = 0;
  int listener = 0;  // node whose receptions are affected during that frame
};

struct ScenarioConfig {
  MacVariant variant = MacVariant::Proposed;
  FrameLayout frame = make_frame_layout();
  double guard_ms = defaults::kGuardMs;
  double chain_length_km = defaults::kGsDistanceKm;
  double node_interval_km = defaults::kLineOfSightKm;
  double los_limit_km = defaults::kLineOfSightKm;
  double rho = 0.0;
  int report_interval_frames = defaults::kReportIntervalFrames;
  long reports_per_node = 0;  // 0 = keep generating until the horizon
  long sim_frames = 200;
  std::uint64_t rng_seed = 1;
  double aircraft_speed_kmh = defaults::kAircraftSpeedKmh;  // metadata only
  bool weather_enabled = true;
  int retry_limit = defaults::kRetryLimit;
  TrafficMode traffic_mode = TrafficMode::All;
  std::vector<ForcedEvent> forced_losses;  // receptions that fail regardless of rho
  std::vector<ForcedEvent> forced_nacks;   // receptions turned into explicit NACKs

  int aircraft_count() const {
    return static_cast<int>(std::ceil(chain_length_km / node_interval_km));
  }
  int payload_bits() const { return payload_bits_for(variant); }
  SlotLayout slot_layout() const {
    return make_slot_layout(variant, ns_to_ms(frame.slot_duration), guard_ms, payload_bits());
  }

  void validate() const {
    if (chain_length_km <= 0) throw ConfigError("chain_length_km must be > 0");
    if (node_interval_km <= 0) throw ConfigError("node_interval_km must be > 0");
    if (node_interval_km > los_limit_km)
      throw ConfigError("node_interval_km exceeds the line-of-sight limit");
    if (rho < 0.0 || rho > 1.0) throw ConfigError("rho must be within [0, 1]");
    if (report_interval_frames < 1) throw ConfigError("report_interval_frames must be >= 1");
    if (sim_frames < 1) throw ConfigError("sim_frames must be >= 1");
    if (reports_per_node < 0) throw ConfigError("reports_per_node must be >= 0");
    if (retry_limit < 1) throw ConfigError("retry_limit must be >= 1");
    if (frame.random_access_slots <= 0 ||
        frame.random_access_slots >= frame.slots_per_frame)
      throw ConfigError("random_access_slots must satisfy 0 < n < slots_per_frame");
    slot_layout();  // throws LayoutError if the timing split is infeasible
  }
};

struct HopRecord {
  int node = 0;  // receiving node
  long frame = 0;
  int slot = 0;
  int attempt = 0;  // sender attempts needed for this hop
};

struct Packet {
  int origin_id = 0;
  long sequence = 0;
  Bits payload;
  long created_frame = 0;
  std::vector<HopRecord> hop_trace;
};

enum class AckVerdict { Ack, Nack };

struct PiggybackAck {
  long acked_sequence = 0;
  AckVerdict verdict = AckVerdict::Ack;
};

// Stop-and-wait ARQ for one slot index at one node. The queue head is the
// packet currently being worked; fresh packets line up behind it.
struct ArqChannel {
  enum class State { Idle, WaitAck, RetxDue };
  State state = State::Idle;
  long event_frame = -1;  // WaitAck: frame to listen in; RetxDue: frame to resend
  int attempts = 0;       // transmissions of the head packet on this hop
  std::deque<Packet> queue;
};

struct AckDuty {
  long frame = 0;         // frame in which the verdict must go out
  long sequence = 0;
  AckVerdict verdict = AckVerdict::Ack;
};

struct AircraftNode {
  int node_id = 0;  // 0 = ground station
  double position_km = 0.0;
  std::optional<int> reserved_slot;
  long reserved_on_frame = -1;
  std::map<int, ArqChannel> channels;      // slot -> ARQ state (own + relayed)
  std::map<int, AckDuty> ack_due;          // slot -> verdict owed next frame
  std::map<int, long> last_accepted_seq;   // slot -> dedupe watermark
  long reports_generated = 0;

  bool is_ground_station() const { return node_id == 0; }
};

enum class TxKind { Data, Relay, Ack };
enum class RxOutcome { Delivered, Lost, Deaf };

struct TraceEvent {
  long frame = 0;
  int slot = 0;
  int sender = 0;
  int receiver = 0;
  TxKind kind = TxKind::Data;
  RxOutcome outcome = RxOutcome::Delivered;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

using TraceSink = std::function<void(const TraceEvent&)>;

inline const char* to_string(TxKind k) {
  switch (k) {
    case TxKind::Data: return "data";
    case TxKind::Relay: return "relay";
    default: return "ack";
  }
}

inline const char* to_string(RxOutcome o) {
  switch (o) {
    case RxOutcome::Delivered: return "delivered";
    case RxOutcome::Lost: return "lost";
    default: return "deaf";
  }
}

struct DeliveredRecord {
  Packet packet;
  long end_to_end_frames = 0;
  double end_to_end_seconds = 0.0;
};

struct RunMetrics {
  std::vector<DeliveredRecord> delivered;
  long generated = 0;
  long dropped_count = 0;       // retry limit exhausted while still undelivered
  long undelivered_count = 0;   // dropped + in flight at the horizon
  std::vector<long> attempts_histogram;  // index = attempts per completed hop
  long hops_completed = 0;
  double mean_attempts = 0.0;
  double mean_delay_s = 0.0;
  double gs_goodput_bits_per_s = 0.0;
  double measured_utilization = 0.0;  // data airtime / elapsed airtime
  long slot_conflicts = 0;      // receptions broken by a transmitting receiver
  long reused_slots = 0;        // slots carrying 2+ concurrent transmissions
  long tdd_violations = 0;
  long reservation_complete_frame = 0;
  long first_report_frame = 0;
  long frames_simulated = 0;
};

namespace detail {

// Portable deterministic helpers; uniformity bias is negligible for the small
// bounds used here and identical output matters more across toolchains.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

inline double canonical(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

class SimState {
 public:
  explicit SimState(ScenarioConfig config) : cfg(std::move(config)), rng(cfg.rng_seed) {
    cfg.validate();
    int aircraft = cfg.aircraft_count();
    nodes.reserve(static_cast<std::size_t>(aircraft) + 1);
    for (int id = 0; id <= aircraft; ++id) {
      AircraftNode n;
      n.node_id = id;
      n.position_km = id * cfg.node_interval_km;
      nodes.push_back(std::move(n));
    }
    slot_layout = cfg.slot_layout();
    attempts_hist_.assign(static_cast<std::size_t>(cfg.retry_limit) + 1, 0);
  }

  ScenarioConfig cfg;
  std::vector<AircraftNode> nodes;
  std::mt19937_64 rng;
  SlotLayout slot_layout;
  TraceSink trace;

  long current_frame = 1;
  bool reservations_done = false;
  long first_report_frame = -1;

  // Runs the join procedure: one listening frame, then each unreserved
  // aircraft claims a uniformly random free slot in the reserved region each
  // frame; same-slot claimants collide and retry.
  void reserve_slots() {
    int claimants = static_cast<int>(nodes.size()) - 1;
    if (claimants > cfg.frame.reserved_slots())
      throw CapacityError("more aircraft than reservable slots");
    if (reservations_done) return;

    std::vector<int> free_slots;
    for (int s = cfg.frame.first_reserved_slot(); s < cfg.frame.slots_per_frame; ++s)
      free_slots.push_back(s);

    ++current_frame;  // frame 1: every joining aircraft only listens
    while (true) {
      std::map<int, std::vector<int>> picks;  // slot -> claimant node ids
      for (auto& n : nodes) {
        if (n.node_id == 0 || n.reserved_slot) continue;
        std::size_t i = static_cast<std::size_t>(detail::bounded(rng, free_slots.size()));
        picks[free_slots[i]].push_back(n.node_id);
      }
      if (picks.empty()) break;
      for (auto& [slot, ids] : picks) {
        if (ids.size() != 1) continue;  // collision: all involved retry next frame
        AircraftNode& n = nodes[static_cast<std::size_t>(ids.front())];
        n.reserved_slot = slot;
        n.reserved_on_frame = current_frame;
        free_slots.erase(std::find(free_slots.begin(), free_slots.end(), slot));
      }
      bool all_done = true;
      for (auto& n : nodes)
        if (n.node_id != 0 && !n.reserved_slot) all_done = false;
      if (all_done) break;
      ++current_frame;
      if (current_frame > 10000)
        throw ProtocolViolation("slot reservation did not converge");
    }

    reservations_done = true;
    reservation_complete_frame_ = current_frame;
    ++current_frame;
    first_report_frame = current_frame;
  }

  // Advances the simulation through one (frame, slot) tick. Frames and slots
  // must be visited in order; the frame's transmission plan is built when its
  // first slot is stepped.
  void step_slot(long frame, int slot) {
    if (!reservations_done) throw ProtocolViolation("step_slot before reservations completed");
    if (frame != current_frame) throw ProtocolViolation("frames must be stepped in order");
    prepare_frame(frame);
    process_slot(frame, slot);
    if (slot == cfg.frame.slots_per_frame - 1) end_frame();
  }

  void run_to_horizon() {
    reserve_slots();
    while (current_frame <= cfg.sim_frames) {
      long frame = current_frame;
      for (int slot = 0; slot < cfg.frame.slots_per_frame; ++slot) step_slot(frame, slot);
    }
  }

  enum class Mode { Transmit, Listen, Idle };

  // Planned radio mode for the currently prepared frame (test introspection).
  Mode mode_of(int node_id, int slot) const {
    auto it = plan_.find(slot);
    if (it == plan_.end()) return Mode::Idle;
    for (const auto& tx : it->second.txs)
      if (tx.sender == node_id) return Mode::Transmit;
    for (int w : it->second.waiters)
      if (w == node_id) return Mode::Listen;
    return Mode::Idle;
  }

  void prepare_frame(long frame) {
    if (planned_frame_ == frame) return;
    if (planned_frame_ >= 0 && next_slot_ != cfg.frame.slots_per_frame)
      throw ProtocolViolation("previous frame not fully stepped");
    generate_reports(frame);
    build_plan(frame);
    planned_frame_ = frame;
    next_slot_ = 0;
  }

  RunMetrics finalize() const {
    RunMetrics m;
    m.delivered = delivered_;
    m.generated = generated_;
    m.dropped_count = dropped_;
    m.undelivered_count = dropped_ + static_cast<long>(in_flight_.size());
    m.attempts_histogram = attempts_hist_;
    m.hops_completed = hops_completed_;
    long attempts_sum = 0;
    for (std::size_t a = 0; a < attempts_hist_.size(); ++a)
      attempts_sum += attempts_hist_[a] * static_cast<long>(a);
    m.mean_attempts = hops_completed_ ? static_cast<double>(attempts_sum) / hops_completed_ : 0.0;
    double delay_sum = 0;
    long bits = 0;
    for (const auto& d : delivered_) {
      delay_sum += d.end_to_end_seconds;
      bits += static_cast<long>(d.packet.payload.bit_count());
    }
    m.mean_delay_s = delivered_.empty() ? 0.0 : delay_sum / static_cast<double>(delivered_.size());
    long data_frames = cfg.sim_frames - first_report_frame + 1;
    double window_s = data_frames > 0 ? data_frames * cfg.frame.frame_seconds() : 0.0;
    m.gs_goodput_bits_per_s = window_s > 0 ? bits / window_s : 0.0;
    double airtime_s = data_tx_count_ * ns_to_s(slot_layout.data);
    m.measured_utilization = window_s > 0 ? airtime_s / window_s : 0.0;
    m.slot_conflicts = slot_conflicts_;
    m.reused_slots = reused_slots_;
    m.tdd_violations = tdd_violations_;
    m.reservation_complete_frame = reservation_complete_frame_;
    m.first_report_frame = first_report_frame;
    m.frames_simulated = std::min(current_frame - 1, cfg.sim_frames);
    return m;
  }

 private:
  struct PlannedTx {
    int sender = 0;
    TxKind kind = TxKind::Ack;
    std::optional<PiggybackAck> ack;
    bool retransmission = false;
  };
  struct SlotPlan {
    std::vector<PlannedTx> txs;   // ascending sender id
    std::vector<int> waiters;     // nodes that must listen for an ACK
  };

  void generate_reports(long frame) {
    if (frame < first_report_frame) return;
    if ((frame - first_report_frame) % cfg.report_interval_frames != 0) return;
    for (auto& n : nodes) {
      if (n.node_id == 0) continue;
      if (cfg.traffic_mode == TrafficMode::FarthestOnly &&
          n.node_id != static_cast<int>(nodes.size()) - 1)
        continue;
      if (cfg.reports_per_node > 0 && n.reports_generated >= cfg.reports_per_node) continue;
      Packet p;
      p.origin_id = n.node_id;
      p.sequence = n.reports_generated;
      p.created_frame = frame;
      p.payload = synthesize_payload(n, frame, p.sequence);
      in_flight_.insert({p.origin_id, p.sequence});
      n.channels[*n.reserved_slot].queue.push_back(std::move(p));
      ++n.reports_generated;
      ++generated_;
    }
  }

  Bits synthesize_payload(const AircraftNode& n, long frame, long seq) const {
    PositionReport pos;
    pos.aircraft_id = static_cast<std::uint32_t>(n.node_id);
    pos.latitude_deg = 0.0;
    pos.longitude_deg =
        std::min(179.0, std::max(-179.0, n.position_km / 111.0 - 90.0));
    pos.altitude_ft = 35000;
    pos.timestamp_s = static_cast<std::uint32_t>(
        (frame * static_cast<long>(cfg.frame.frame_seconds())) % 86400);
    std::optional<WeatherReport> wx;
    if (cfg.variant == MacVariant::Proposed && cfg.weather_enabled) {
      WeatherReport w;
      w.time_s = pos.timestamp_s;
      w.wind_dir_deg = static_cast<std::uint16_t>((n.node_id * 37 + seq * 11) % 360);
      w.wind_speed_kt = static_cast<std::uint8_t>((n.node_id + seq * 7) % 128);
      w.vis_dir_deg = static_cast<std::uint16_t>((n.node_id * 53 + seq * 29) % 360);
      w.vis_dist_km = static_cast<std::uint8_t>((n.node_id + seq) % 128);
      w.cloud_amount = static_cast<std::uint8_t>(seq % 8);
      w.cloud_height = static_cast<std::uint16_t>((seq * 13) % 512);
      w.cloud_type = static_cast<std::uint8_t>(n.node_id % 8);
      w.special.flags = static_cast<std::uint8_t>((n.node_id + seq) % 256);
      wx = w;
    }
    return compose_payload(pos, wx, cfg.variant);
  }

  void build_plan(long frame) {
    plan_.clear();
    for (auto& n : nodes) {
      for (auto& [slot, ch] : n.channels) {
        switch (ch.state) {
          case ArqChannel::State::WaitAck:
            if (ch.event_frame == frame) plan_[slot].waiters.push_back(n.node_id);
            break;
          case ArqChannel::State::RetxDue:
            if (ch.event_frame != frame)
              throw ProtocolViolation("retransmission scheduled outside its frame");
            plan_[slot].txs.push_back(
                {n.node_id, tx_kind_for(n, ch), std::nullopt, true});
            break;
          case ArqChannel::State::Idle:
            if (!ch.queue.empty())
              plan_[slot].txs.push_back(
                  {n.node_id, tx_kind_for(n, ch), std::nullopt, false});
            break;
        }
      }
      // Attach owed ACK verdicts; a node with nothing to send answers with a
      // bare zero-payload ACK (the ground station's normal behavior).
      for (auto it = n.ack_due.begin(); it != n.ack_due.end();) {
        if (it->second.frame != frame) {
          if (it->second.frame < frame)
            throw ProtocolViolation("stale acknowledgment duty");
          ++it;
          continue;
        }
        PiggybackAck ack{it->second.sequence, it->second.verdict};
        auto& slot_plan = plan_[it->first];
        bool attached = false;
        for (auto& tx : slot_plan.txs) {
          if (tx.sender == n.node_id) {
            tx.ack = ack;
            attached = true;
            break;
          }
        }
        if (!attached) slot_plan.txs.push_back({n.node_id, TxKind::Ack, ack, false});
        it = n.ack_due.erase(it);
      }
    }
    for (auto& [slot, sp] : plan_)
      std::sort(sp.txs.begin(), sp.txs.end(),
                [](const PlannedTx& a, const PlannedTx& b) { return a.sender < b.sender; });
  }

  TxKind tx_kind_for(const AircraftNode& n, const ArqChannel& ch) const {
    return ch.queue.front().origin_id == n.node_id ? TxKind::Data : TxKind::Relay;
  }

  bool reception_fails(long frame, int listener) {
    for (const auto& f : cfg.forced_losses)
      if (f.frame == frame && f.listener == listener) return true;
    if (cfg.rho <= 0.0) return false;
    return detail::canonical(rng) < cfg.rho;
  }

  bool reception_nacked(long frame, int listener) const {
    for (const auto& f : cfg.forced_nacks)
      if (f.frame == frame && f.listener == listener) return true;
    return false;
  }

  void process_slot(long frame, int slot) {
    if (slot != next_slot_) throw ProtocolViolation("slots must be stepped in order");
    ++next_slot_;
    auto it = plan_.find(slot);
    if (it == plan_.end()) return;
    SlotPlan& sp = it->second;

    // TDD: nobody may both transmit and be required to listen.
    for (int w : sp.waiters) {
      for (const auto& tx : sp.txs) {
        if (tx.sender == w) {
          ++tdd_violations_;
          throw ProtocolViolation("node required to transmit and listen in one slot");
        }
      }
    }
    if (sp.txs.size() > 1) ++reused_slots_;

    std::set<int> transmitters;
    for (const auto& tx : sp.txs) transmitters.insert(tx.sender);
    std::map<int, AckVerdict> ack_seen;  // waiting node -> verdict heard

    for (const auto& tx : sp.txs) {
      AircraftNode& sender = nodes[static_cast<std::size_t>(tx.sender)];
      if (tx.kind != TxKind::Ack) {
        ++data_tx_count_;
        ArqChannel& ch = sender.channels[slot];
        ch.attempts = tx.retransmission ? ch.attempts + 1 : 1;
        int receiver = tx.sender - 1;
        RxOutcome outcome;
        if (transmitters.count(receiver)) {
          outcome = RxOutcome::Deaf;
          ++slot_conflicts_;
        } else if (reception_nacked(frame, receiver)) {
          outcome = RxOutcome::Lost;
          if (cfg.variant == MacVariant::Proposed)
            nodes[static_cast<std::size_t>(receiver)].ack_due[slot] =
                AckDuty{frame + 1, ch.queue.front().sequence, AckVerdict::Nack};
        } else if (reception_fails(frame, receiver)) {
          outcome = RxOutcome::Lost;
        } else {
          outcome = RxOutcome::Delivered;
          receive_data(receiver, slot, frame, ch.queue.front(), ch.attempts);
        }
        if (trace) trace(TraceEvent{frame, slot, tx.sender, receiver, tx.kind, outcome});

        if (cfg.variant == MacVariant::Legacy) {
          // In-slot ACK: the handshake settles before the slot ends.
          bool acked = outcome == RxOutcome::Delivered && !reception_fails(frame, tx.sender);
          settle_arq(sender, slot, frame, acked ? std::optional<AckVerdict>{AckVerdict::Ack}
                                                : std::nullopt,
                     /*retx_delay_frames=*/1);
        } else {
          ch.state = ArqChannel::State::WaitAck;
          ch.event_frame = frame + 1;
        }
      }
      if (tx.ack) {
        int audience = tx.sender + 1;  // the ACK addresses the previous hop
        if (audience >= static_cast<int>(nodes.size()))
          throw ProtocolViolation("acknowledgment owed to a nonexistent node");
        RxOutcome outcome;
        if (transmitters.count(audience)) {
          outcome = RxOutcome::Deaf;
          ++slot_conflicts_;
        } else if (reception_fails(frame, audience)) {
          outcome = RxOutcome::Lost;
        } else {
          outcome = RxOutcome::Delivered;
          AircraftNode& aud = nodes[static_cast<std::size_t>(audience)];
          auto ch_it = aud.channels.find(slot);
          if (ch_it != aud.channels.end() && ch_it->second.state == ArqChannel::State::WaitAck &&
              ch_it->second.event_frame == frame && !ch_it->second.queue.empty() &&
              ch_it->second.queue.front().sequence == tx.ack->acked_sequence) {
            ack_seen[audience] = tx.ack->verdict;
          }
        }
        if (tx.kind == TxKind::Ack && trace)
          trace(TraceEvent{frame, slot, tx.sender, audience, TxKind::Ack, outcome});
      }
    }

    // Waiting nodes settle their ARQ state: heard ACK, heard NACK, or silence.
    for (int w : sp.waiters) {
      AircraftNode& n = nodes[static_cast<std::size_t>(w)];
      auto found = ack_seen.find(w);
      std::optional<AckVerdict> verdict;
      if (found != ack_seen.end()) verdict = found->second;
      settle_arq(n, slot, frame, verdict, /*retx_delay_frames=*/1);
    }
  }

  void settle_arq(AircraftNode& n, int slot, long frame, std::optional<AckVerdict> verdict,
                  long retx_delay_frames) {
    ArqChannel& ch = n.channels[slot];
    if (verdict && *verdict == AckVerdict::Ack) {
      ch.queue.pop_front();
      ch.state = ArqChannel::State::Idle;
      ch.attempts = 0;
      ch.event_frame = -1;
      return;
    }
    if (ch.attempts >= cfg.retry_limit) {
      drop_packet(n, slot);
      ch.state = ArqChannel::State::Idle;
      ch.attempts = 0;
      ch.event_frame = -1;
      return;
    }
    ch.state = ArqChannel::State::RetxDue;
    ch.event_frame = frame + retx_delay_frames;
  }

  void drop_packet(AircraftNode& n, int slot) {
    Packet& p = n.channels[slot].queue.front();
    // The copy one hop downstream may already be travelling on; only count a
    // packet as lost if no later node accepted it.
    bool alive_downstream = false;
    if (n.node_id > 0) {
      const AircraftNode& down = nodes[static_cast<std::size_t>(n.node_id) - 1];
      auto seen = down.last_accepted_seq.find(slot);
      if (seen != down.last_accepted_seq.end() && seen->second >= p.sequence)
        alive_downstream = true;
    }
    if (!alive_downstream) {
      auto key = std::make_pair(p.origin_id, p.sequence);
      if (in_flight_.erase(key)) ++dropped_;
    }
    n.channels[slot].queue.pop_front();
  }

  void receive_data(int receiver, int slot, long frame, const Packet& packet, int attempt) {
    AircraftNode& r = nodes[static_cast<std::size_t>(receiver)];
    auto watermark = r.last_accepted_seq.find(slot);
    bool duplicate =
        watermark != r.last_accepted_seq.end() && packet.sequence <= watermark->second;
    if (cfg.variant == MacVariant::Proposed)
      r.ack_due[slot] = AckDuty{frame + 1, packet.sequence, AckVerdict::Ack};
    if (duplicate) return;
    r.last_accepted_seq[slot] = packet.sequence;

    // Attempts per hop are counted at first acceptance: the number of
    // transmissions the data needed to get across, which is what the
    // geometric loss model describes. Retries caused by lost ACKs show up as
    // duplicates and airtime, not here.
    if (static_cast<std::size_t>(attempt) < attempts_hist_.size())
      ++attempts_hist_[static_cast<std::size_t>(attempt)];
    ++hops_completed_;

    Packet copy = packet;
    copy.hop_trace.push_back(HopRecord{receiver, frame, slot, attempt});
    if (r.is_ground_station()) {
      auto key = std::make_pair(copy.origin_id, copy.sequence);
      if (in_flight_.erase(key)) {
        DeliveredRecord rec;
        rec.end_to_end_frames = frame - copy.created_frame + 1;
        rec.end_to_end_seconds = rec.end_to_end_frames * cfg.frame.frame_seconds();
        rec.packet = std::move(copy);
        delivered_.push_back(std::move(rec));
      }
      return;
    }
    r.channels[slot].queue.push_back(std::move(copy));
  }

  void end_frame() {
    verify_conservation();
    planned_frame_ = -1;
    ++current_frame;
  }

  // Every logically in-flight packet must sit in some node's queue.
  void verify_conservation() const {
    if (in_flight_.empty()) return;
    std::set<std::pair<int, long>> queued;
    for (const auto& n : nodes)
      for (const auto& [slot, ch] : n.channels)
        for (const auto& p : ch.queue) queued.insert({p.origin_id, p.sequence});
    for (const auto& key : in_flight_)
      if (!queued.count(key))
        throw ProtocolViolation("packet accounting lost an in-flight packet");
  }

  std::map<int, SlotPlan> plan_;
  long planned_frame_ = -1;
  int next_slot_ = 0;

  std::vector<DeliveredRecord> delivered_;
  std::set<std::pair<int, long>> in_flight_;
  long generated_ = 0;
  long dropped_ = 0;
  std::vector<long> attempts_hist_;
  long hops_completed_ = 0;
  long data_tx_count_ = 0;
  long slot_conflicts_ = 0;
  long reused_slots_ = 0;
  long tdd_violations_ = 0;
  long reservation_complete_frame_ = 0;
};

inline SimState build_scenario(const ScenarioConfig& cfg) { return SimState(cfg); }

inline void reserve_slots(SimState& state) { state.reserve_slots(); }

inline void step_slot(SimState& state, long frame, int slot) { state.step_slot(frame, slot); }

inline RunMetrics run(const ScenarioConfig& cfg, TraceSink trace = nullptr) {
  SimState state = build_scenario(cfg);
  state.trace = std::move(trace);
  state.run_to_horizon();
  return state.finalize();
}

}  // namespace airtdma
