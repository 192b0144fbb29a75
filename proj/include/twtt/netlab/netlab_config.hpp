#pragma once

#include <string>

#include <json.hpp>

#include "twtt/netlab/node.hpp"
#include "twtt/netlab/proxy.hpp"
#include "twtt/netlab/udp.hpp"

namespace twtt::netlab {

// {"role": "local", "bind": "127.0.0.1:9102", "proxy": "127.0.0.1:9002",
//  "timeout_ms": 1000, "retry_ms": 50,
//  "preset": "sim-noattack", "scenario": {...}}
// "scenario" overlays "preset" (or the defaults) as in the sim command.
struct NodeSetup {
  NodeConfig node;
  Endpoint bind;
  Endpoint proxy;
};

NodeSetup node_setup_from_json(const nlohmann::json& doc);

// {"listen_a": ..., "listen_b": ..., "node_a": ..., "node_b": ...,
//  "seed": 7, "base_delay": 50000000, "direction": "B_to_A",
//  "schedule": {...}, "idle_timeout_ms": 2000, "startup_timeout_ms": 10000,
//  "real_sleep": false}
struct ProxySetup {
  ProxyPolicy policy;
  ProxyOptions options;
  Endpoint listen_a;
  Endpoint listen_b;
  Endpoint node_a;
  Endpoint node_b;
};

ProxySetup proxy_setup_from_json(const nlohmann::json& doc);

}  // namespace twtt::netlab
