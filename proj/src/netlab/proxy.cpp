#include "twtt/netlab/proxy.hpp"

#include <algorithm>
#include <exception>
#include <system_error>
#include <thread>

#include "twtt/netlab/wire.hpp"
#include "twtt/units.hpp"

namespace twtt::netlab {

namespace {
// Attack draws are sequential, so a far-future epoch would force drawing
// every epoch before it.
constexpr std::int64_t kMaxEpochLead = 1'000'000;
}  // namespace

Proxy::Proxy(ProxyPolicy policy, ProxyOptions options, UdpSocket side_a,
             UdpSocket side_b, Endpoint node_a, Endpoint node_b)
    : policy_(std::move(policy)),
      options_(options),
      side_a_(std::move(side_a)),
      side_b_(std::move(side_b)),
      node_a_(std::move(node_a)),
      node_b_(std::move(node_b)),
      attack_rng_(RandomStream::derive(options.seed, StreamId::kAttack)) {
  validate(policy_.schedule);
  if (!(policy_.base_delay >= 0.0)) {
    throw std::invalid_argument("proxy: base_delay must be >= 0");
  }
}

std::optional<AttackEvent> Proxy::attack_at(std::int64_t epoch) {
  // Caller holds mu_.
  while (static_cast<std::int64_t>(attacks_.size()) <= epoch) {
    const auto n = static_cast<std::int64_t>(attacks_.size());
    attacks_.push_back(draw_attack(policy_.schedule, n, attack_rng_));
  }
  return attacks_[static_cast<std::size_t>(epoch)];
}

void Proxy::log_injection(const AttackEvent& ev) {
  // Caller holds mu_. Retransmissions of the same pulse are logged once.
  if (logged_.insert({ev.epoch_index, ev.direction}).second) {
    stats_.ground_truth.push_back({ev.epoch_index, ev.delay, ev.direction});
  }
}

void Proxy::pump(UdpSocket& in, UdpSocket& out, const Endpoint& to, Direction dir,
                 std::int64_t& forwarded) {
  using namespace std::chrono;
  while (!stop_.load()) {
    const auto now_ms =
        duration_cast<milliseconds>(steady_clock::now() - started_).count();
    const auto last = last_activity_ms_.load();
    if (last < 0 ? now_ms > options_.startup_timeout.count()
                 : now_ms - last > options_.idle_timeout.count()) {
      return;
    }
    auto r = in.receive(milliseconds(20));
    if (!r) continue;
    last_activity_ms_.store(
        duration_cast<milliseconds>(steady_clock::now() - started_).count());

    PpsMessage msg;
    try {
      msg = decode(r->bytes);
    } catch (const DecodeError&) {
      std::lock_guard lock(mu_);
      ++stats_.malformed;
      continue;
    }

    double transit = 0.0;
    if (msg.msg_type == MsgType::kPps) {
      const auto epoch = static_cast<std::int64_t>(msg.epoch_index);
      std::optional<AttackEvent> ev;
      {
        std::lock_guard lock(mu_);
        if (epoch > static_cast<std::int64_t>(attacks_.size()) + kMaxEpochLead) {
          ++stats_.unroutable;
          continue;
        }
        ev = attack_at(epoch);
        if (ev && ev->direction == dir && ev->delay > 0.0) {
          log_injection(*ev);
        } else {
          ev.reset();
        }
      }
      transit = policy_.base_delay + (ev ? ev->delay : 0.0);
      msg.payload_ps += seconds_to_ps(policy_.base_delay) + (ev ? seconds_to_ps(ev->delay) : 0);
    }
    if (options_.real_sleep && transit > 0.0) {
      std::this_thread::sleep_for(duration<double>(transit));
    }
    try {
      out.send_to(encode(msg), to);
    } catch (const std::system_error&) {
      std::lock_guard lock(mu_);
      ++stats_.unroutable;
      continue;
    }
    std::lock_guard lock(mu_);
    ++forwarded;
  }
}

ProxyStats Proxy::run() {
  started_ = std::chrono::steady_clock::now();
  std::int64_t forwarded_ab = 0;
  std::int64_t forwarded_ba = 0;
  std::exception_ptr ab_error;
  std::thread ab([&] {
    try {
      pump(side_a_, side_b_, node_b_, Direction::kAToB, forwarded_ab);
    } catch (...) {
      ab_error = std::current_exception();
      stop();
    }
  });
  try {
    pump(side_b_, side_a_, node_a_, Direction::kBToA, forwarded_ba);
  } catch (...) {
    stop();
    ab.join();
    throw;
  }
  ab.join();
  if (ab_error) std::rethrow_exception(ab_error);

  std::lock_guard lock(mu_);
  ProxyStats out = stats_;
  out.forwarded_ab = forwarded_ab;
  out.forwarded_ba = forwarded_ba;
  std::sort(out.ground_truth.begin(), out.ground_truth.end(),
            [](const auto& a, const auto& b) { return a.epoch_index < b.epoch_index; });
  return out;
}

}  // namespace twtt::netlab
