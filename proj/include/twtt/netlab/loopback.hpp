#pragma once

#include <chrono>
#include <vector>

#include "twtt/harness.hpp"
#include "twtt/netlab/node.hpp"
#include "twtt/netlab/proxy.hpp"
#include "twtt/trace_io.hpp"

namespace twtt::netlab {

struct LoopbackResult {
  std::vector<TraceRecord> trace;  // local node
  NodeStats local_stats;
  NodeStats remote_stats;
  ProxyStats proxy_stats;
};

// Runs proxy, remote and local node on 127.0.0.1 ephemeral ports, one thread
// each. The proxy takes its schedule, seed and propagation delay from the
// scenario; the returned trace carries the proxy's injected delays in
// attack_true_delay.
LoopbackResult run_loopback(const ScenarioConfig& scenario,
                            std::chrono::milliseconds epoch_timeout = std::chrono::milliseconds(1000));

}  // namespace twtt::netlab
