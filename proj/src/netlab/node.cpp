#include "twtt/netlab/node.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "twtt/netlab/wire.hpp"
#include "twtt/random.hpp"
#include "twtt/units.hpp"

namespace twtt::netlab {

std::string_view to_string(Role r) { return r == Role::kLocal ? "local" : "remote"; }

Role parse_role(std::string_view s) {
  if (s == "local") return Role::kLocal;
  if (s == "remote") return Role::kRemote;
  throw std::invalid_argument("unknown role '" + std::string(s) +
                              "' (expected local or remote)");
}

namespace {

using Clock = std::chrono::steady_clock;

// Datagrams keyed by (type, epoch); only the first copy of each is kept.
class Inbox {
 public:
  Inbox(UdpSocket& socket, NodeStats& stats) : socket_(socket), stats_(stats) {}

  void poll(std::chrono::milliseconds timeout, std::int64_t current_epoch) {
    auto r = socket_.receive(timeout);
    while (r) {
      accept(*r, current_epoch);
      r = socket_.receive(std::chrono::milliseconds(0));
    }
  }

  std::optional<std::int64_t> take(MsgType type, std::int64_t epoch) {
    auto it = pending_.find({type, epoch});
    if (it == pending_.end()) return std::nullopt;
    const auto v = it->second;
    pending_.erase(it);
    return v;
  }

  // Stale PPS retransmissions from the peer, drained by the caller.
  std::vector<std::int64_t> stale_pps;

 private:
  void accept(const Received& r, std::int64_t current_epoch) {
    PpsMessage msg;
    try {
      msg = decode(r.bytes);
    } catch (const DecodeError&) {
      ++stats_.malformed;
      return;
    }
    ++stats_.received;
    const auto epoch = static_cast<std::int64_t>(msg.epoch_index);
    if (epoch < current_epoch) {
      ++stats_.stale;
      if (msg.msg_type == MsgType::kPps) stale_pps.push_back(epoch);
      return;
    }
    pending_.try_emplace({msg.msg_type, epoch}, msg.payload_ps);
  }

  UdpSocket& socket_;
  NodeStats& stats_;
  std::map<std::pair<MsgType, std::int64_t>, std::int64_t> pending_;
};

void send(UdpSocket& socket, const Endpoint& to, NodeStats& stats, MsgType type,
          NodeId node, std::int64_t epoch, std::int64_t payload) {
  const Datagram d =
      encode({type, node, static_cast<std::uint32_t>(epoch), payload});
  socket.send_to(d, to);
  ++stats.sent;
}

NodeResult run_remote(const NodeConfig& cfg, UdpSocket& socket, const Endpoint& proxy) {
  const ScenarioConfig& sc = cfg.scenario;
  NodeResult result;
  Inbox inbox(socket, result.stats);
  std::map<std::int64_t, std::int64_t> reports;  // epoch -> arrival stamp [ps]

  for (std::int64_t n = 0; n < sc.duration_epochs; ++n) {
    send(socket, proxy, result.stats, MsgType::kPps, NodeId::kRemote, n, 0);

    const auto deadline = Clock::now() + cfg.epoch_timeout;
    auto next_retry = Clock::now() + cfg.retry_interval;
    std::optional<std::int64_t> arrival;
    while (!arrival) {
      const auto now = Clock::now();
      if (now >= deadline) break;
      if (now >= next_retry) {
        send(socket, proxy, result.stats, MsgType::kPps, NodeId::kRemote, n, 0);
        next_retry = now + cfg.retry_interval;
      }
      const auto wait = std::min(deadline, next_retry) - now;
      inbox.poll(std::chrono::ceil<std::chrono::milliseconds>(wait), n);
      // The local node repeats its PPS when our REPORT went missing.
      for (const auto epoch : inbox.stale_pps) {
        if (auto it = reports.find(epoch); it != reports.end()) {
          send(socket, proxy, result.stats, MsgType::kReport, NodeId::kRemote, epoch,
               it->second);
        }
      }
      inbox.stale_pps.clear();
      arrival = inbox.take(MsgType::kPps, n);
    }
    if (!arrival) {
      ++result.stats.missing_epochs;
      continue;
    }
    reports[n] = *arrival;
    if (reports.size() > 16) reports.erase(reports.begin());
    send(socket, proxy, result.stats, MsgType::kReport, NodeId::kRemote, n, *arrival);
  }
  return result;
}

NodeResult run_local(const NodeConfig& cfg, UdpSocket& socket, const Endpoint& proxy) {
  const ScenarioConfig& sc = cfg.scenario;
  NodeResult result;
  Inbox inbox(socket, result.stats);
  RandomStream clock_rng = RandomStream::derive(sc.seed, StreamId::kClock);
  RandomStream channel_rng = RandomStream::derive(sc.seed, StreamId::kChannel);
  ChannelWalk walk;
  ClockState clock = init_clock(sc.initial_theta, sc.initial_gamma, sc.tau);
  Corrector corrector(sc.strategy, sc.detector, sc.tau);
  const std::int64_t base_ab = seconds_to_ps(sc.channel.prop_delay_ab);
  const std::int64_t base_ba = seconds_to_ps(sc.channel.prop_delay_ba);
  result.trace.reserve(static_cast<std::size_t>(sc.duration_epochs));

  for (std::int64_t n = 0; n < sc.duration_epochs; ++n) {
    const ChannelNoise noise = draw_channel_noise(sc.channel, channel_rng, &walk);
    const std::int64_t stamp = seconds_to_ps(clock.theta);
    send(socket, proxy, result.stats, MsgType::kPps, NodeId::kLocal, n, stamp);

    const auto deadline = Clock::now() + cfg.epoch_timeout;
    auto next_retry = Clock::now() + cfg.retry_interval;
    std::optional<std::int64_t> arrival;
    std::optional<std::int64_t> report;
    while (!(arrival && report)) {
      const auto now = Clock::now();
      if (now >= deadline) break;
      if (now >= next_retry) {
        send(socket, proxy, result.stats, MsgType::kPps, NodeId::kLocal, n, stamp);
        next_retry = now + cfg.retry_interval;
      }
      const auto wait = std::min(deadline, next_retry) - now;
      inbox.poll(std::chrono::ceil<std::chrono::milliseconds>(wait), n);
      inbox.stale_pps.clear();
      if (!arrival) arrival = inbox.take(MsgType::kPps, n);
      if (!report) report = inbox.take(MsgType::kReport, n);
    }

    std::optional<double> theta_m;
    if (arrival && report) {
      // Whatever the stamps carry beyond the nominal transit is fiber delay
      // injected in flight.
      const double extra_ab = ps_to_seconds(*arrival - base_ab);
      const double extra_ba = ps_to_seconds(*report - stamp - base_ba);
      const double delta_t_a =
          clock.theta + sc.channel.prop_delay_ba + extra_ba + noise.trans_ba + noise.tic_a;
      const double delta_t_b =
          -clock.theta + sc.channel.prop_delay_ab + extra_ab + noise.trans_ab + noise.tic_b;
      theta_m = measured_offset(delta_t_a, delta_t_b);
    } else {
      ++result.stats.missing_epochs;
    }
    const CorrectionDecision d = corrector.step(theta_m);
    clock = step_clock(clock, sc.clock_noise, d.u_theta, clock_rng);
    result.trace.push_back(
        make_record(n, sc.tau, clock.theta, theta_m.value_or(0.0), d, 0.0));
  }
  return result;
}

}  // namespace

NodeResult run_node(const NodeConfig& config, UdpSocket& socket, const Endpoint& proxy) {
  validate(config.scenario);
  if (config.scenario.duration_epochs > static_cast<std::int64_t>(UINT32_MAX)) {
    throw std::invalid_argument("netlab: duration exceeds the 32-bit epoch field");
  }
  return config.role == Role::kLocal ? run_local(config, socket, proxy)
                                     : run_remote(config, socket, proxy);
}

}  // namespace twtt::netlab
