#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "twtt/channel.hpp"
#include "twtt/netlab/udp.hpp"
#include "twtt/random.hpp"
#include "twtt/trace_io.hpp"

namespace twtt::netlab {

struct ProxyPolicy {
  Direction direction = Direction::kBToA;  // default for schedule rows
  AttackSchedule schedule = NoAttack{};
  double base_delay = 50e-6;  // symmetric transit [s]
};

struct ProxyOptions {
  std::uint64_t seed = 1;  // attack draws use the scenario's attack sub-stream
  std::chrono::milliseconds startup_timeout{10000};
  std::chrono::milliseconds idle_timeout{2000};
  // Also sleep for the transit delay before forwarding. Demonstration only;
  // sub-nanosecond delays cannot be realized this way.
  bool real_sleep = false;
};

struct ProxyStats {
  std::int64_t forwarded_ab = 0;
  std::int64_t forwarded_ba = 0;
  std::int64_t malformed = 0;
  std::int64_t unroutable = 0;
  std::vector<GroundTruthEntry> ground_truth;  // sorted by epoch
};

// Adversary in the fiber. Datagrams from node A arrive on `side_a` and are
// forwarded to node B from `side_b`, and vice versa. PPS payloads gain the
// base transit delay plus any scheduled attack delay for their direction;
// REPORTs pass unchanged. Each direction is serviced by its own thread, so
// per-direction order is preserved.
class Proxy {
 public:
  Proxy(ProxyPolicy policy, ProxyOptions options, UdpSocket side_a, UdpSocket side_b,
        Endpoint node_a, Endpoint node_b);

  // Blocks until stop(), the start-up timeout with no traffic, or the idle
  // timeout after traffic has been seen.
  ProxyStats run();
  void stop() { stop_.store(true); }

 private:
  void pump(UdpSocket& in, UdpSocket& out, const Endpoint& to, Direction dir,
            std::int64_t& forwarded);
  std::optional<AttackEvent> attack_at(std::int64_t epoch);
  void log_injection(const AttackEvent& ev);

  ProxyPolicy policy_;
  ProxyOptions options_;
  UdpSocket side_a_;
  UdpSocket side_b_;
  Endpoint node_a_;
  Endpoint node_b_;

  std::atomic<bool> stop_{false};
  std::atomic<std::int64_t> last_activity_ms_{-1};
  std::chrono::steady_clock::time_point started_;

  std::mutex mu_;  // guards everything below
  RandomStream attack_rng_;
  std::vector<std::optional<AttackEvent>> attacks_;  // drawn in epoch order
  std::set<std::pair<std::int64_t, Direction>> logged_;
  ProxyStats stats_;
};

}  // namespace twtt::netlab
