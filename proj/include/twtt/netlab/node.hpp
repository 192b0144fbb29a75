#pragma once

#include <chrono>
#include <cstdint>
#include <string_view>
#include <vector>

#include "twtt/harness.hpp"
#include "twtt/netlab/udp.hpp"

namespace twtt::netlab {

enum class Role { kRemote, kLocal };

std::string_view to_string(Role r);
Role parse_role(std::string_view s);

// A node runs the scenario's clock, noise and strategy settings. The attack
// schedule belongs to the proxy and is ignored here; the propagation delays
// must equal the proxy's base delay.
struct NodeConfig {
  Role role = Role::kLocal;
  ScenarioConfig scenario;
  // Give up on an epoch's missing datagrams after this long.
  std::chrono::milliseconds epoch_timeout{1000};
  // Resend our own PPS while waiting, so start-up order does not matter.
  std::chrono::milliseconds retry_interval{50};
};

struct NodeStats {
  std::int64_t sent = 0;
  std::int64_t received = 0;
  std::int64_t malformed = 0;
  std::int64_t stale = 0;  // datagrams for epochs already closed
  std::int64_t missing_epochs = 0;
};

struct NodeResult {
  // Local node only: one record per epoch. attack_true_delay is unknown to
  // the node and left at 0; the proxy's ground-truth log carries it.
  std::vector<TraceRecord> trace;
  NodeStats stats;
};

// Runs scenario.duration_epochs exchanges through the proxy at `proxy`.
//
// PPS payloads are the sender's simulated emission offset in whole
// picoseconds; the proxy adds transit and attack delay to them, and the
// remote node returns the stamp it received in its REPORT. The local node
// turns both arrival stamps back into delays and adds the TIC and
// transmission noise of both sides, replaying the scenario's channel-noise
// stream, so its readings are computed exactly as the in-process harness
// computes them.
NodeResult run_node(const NodeConfig& config, UdpSocket& socket,
                    const Endpoint& proxy);

}  // namespace twtt::netlab
