#include "twtt/netlab/loopback.hpp"

#include <exception>
#include <future>
#include <stdexcept>

namespace twtt::netlab {

LoopbackResult run_loopback(const ScenarioConfig& scenario,
                            std::chrono::milliseconds epoch_timeout) {
  validate(scenario);
  if (scenario.channel.prop_delay_ab != scenario.channel.prop_delay_ba) {
    throw std::invalid_argument("netlab: the proxy models a symmetric base delay");
  }
  const Endpoint any{"127.0.0.1", 0};
  auto side_a = UdpSocket::bind(any);
  auto side_b = UdpSocket::bind(any);
  auto sock_a = UdpSocket::bind(any);
  auto sock_b = UdpSocket::bind(any);
  const Endpoint proxy_a = side_a.local_endpoint();
  const Endpoint proxy_b = side_b.local_endpoint();

  ProxyPolicy policy;
  policy.schedule = scenario.schedule;
  policy.base_delay = scenario.channel.prop_delay_ab;
  ProxyOptions options;
  options.seed = scenario.seed;
  options.idle_timeout = epoch_timeout * 2;
  Proxy proxy(policy, options, std::move(side_a), std::move(side_b),
              sock_a.local_endpoint(), sock_b.local_endpoint());

  NodeConfig remote{Role::kRemote, scenario, epoch_timeout};
  NodeConfig local{Role::kLocal, scenario, epoch_timeout};

  auto proxy_done = std::async(std::launch::async, [&] { return proxy.run(); });
  auto remote_done =
      std::async(std::launch::async, [&] { return run_node(remote, sock_a, proxy_a); });
  LoopbackResult out;
  std::exception_ptr failure;
  try {
    auto local_result = run_node(local, sock_b, proxy_b);
    out.trace = std::move(local_result.trace);
    out.local_stats = local_result.stats;
  } catch (...) {
    failure = std::current_exception();
  }
  try {
    out.remote_stats = remote_done.get().stats;
  } catch (...) {
    if (!failure) failure = std::current_exception();
  }
  proxy.stop();
  try {
    out.proxy_stats = proxy_done.get();
  } catch (...) {
    if (!failure) failure = std::current_exception();
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& g : out.proxy_stats.ground_truth) {
    if (g.epoch_index >= 0 && g.epoch_index < static_cast<std::int64_t>(out.trace.size())) {
      out.trace[static_cast<std::size_t>(g.epoch_index)].attack_true_delay = g.delay;
    }
  }
  return out;
}

}  // namespace twtt::netlab
