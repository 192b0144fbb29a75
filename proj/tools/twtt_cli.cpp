// twtt: run two-way time transfer scenarios, score them, and drive the
// netlab adversary testbed. All delays on the command line are integer
// picoseconds.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "twtt/config.hpp"
#include "twtt/harness.hpp"
#include "twtt/metrics.hpp"
#include "twtt/netlab/netlab_config.hpp"
#include "twtt/netlab/node.hpp"
#include "twtt/netlab/proxy.hpp"
#include "twtt/trace_io.hpp"
#include "twtt/units.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Writes to `path`, or stdout when path is empty or "-".
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(out);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<std::int64_t> parse_factors(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || v < 1) {
      throw CLI::ValidationError("--taus", "'" + item + "' is not a positive integer");
    }
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("--taus", "empty list");
  return out;
}

std::string ratio(const std::optional<double>& r) {
  return r ? twtt::format_real(*r) : "/";
}

struct SimArgs {
  std::string config;
  std::string preset;
  std::string out;
  std::uint64_t seed = 0;
  std::int64_t duration = 0;
  std::string strategy;
};

int run_sim(const SimArgs& a, const CLI::App& cmd) {
  twtt::ScenarioConfig cfg =
      a.preset.empty() ? twtt::preset("sim-noattack") : twtt::preset(a.preset);
  if (!a.config.empty()) cfg = twtt::scenario_from_json(twtt::load_json_file(a.config), cfg);
  if (cmd.count("--seed") > 0) cfg.seed = a.seed;
  if (cmd.count("--duration") > 0) cfg.duration_epochs = a.duration;
  if (!a.strategy.empty()) cfg.strategy = twtt::parse_strategy(a.strategy);
  const auto trace = twtt::run_scenario(cfg);
  emit(a.out, [&](std::ostream& os) { twtt::write_trace(os, trace); });
  return 0;
}

struct MetricsArgs {
  std::string in;
  std::string metric = "tdev";
  std::string taus = "1,10,100";
  std::string out;
  bool precision_recall = false;
  std::string truth;
};

int run_metrics(const MetricsArgs& a) {
  const auto trace = twtt::read_trace(a.in);
  if (a.precision_recall) {
    std::vector<bool> actual(trace.size(), false);
    std::vector<bool> detected(trace.size(), false);
    for (std::size_t i = 0; i < trace.size(); ++i) {
      detected[i] = trace[i].attack_detected;
      if (a.truth.empty()) actual[i] = trace[i].attack_true_delay > 0.0;
    }
    if (!a.truth.empty()) {
      for (const auto& e : twtt::read_ground_truth(twtt::read_csv(a.truth))) {
        if (e.epoch_index < 0 || e.epoch_index >= static_cast<std::int64_t>(trace.size())) {
          throw std::runtime_error("ground-truth epoch " + std::to_string(e.epoch_index) +
                                   " lies outside the trace");
        }
        actual[static_cast<std::size_t>(e.epoch_index)] = e.delay > 0.0;
      }
    }
    const auto t = twtt::precision_recall(actual, detected);
    emit(a.out, [&](std::ostream& os) {
      os << "true_positives,false_positives,false_negatives,true_negatives,precision,recall\n"
         << t.true_positives << ',' << t.false_positives << ',' << t.false_negatives << ','
         << t.true_negatives << ',' << ratio(t.precision) << ',' << ratio(t.recall) << '\n';
    });
    return 0;
  }

  if (trace.empty()) throw std::runtime_error("trace '" + a.in + "' has no records");
  twtt::TimeErrorSeries series;
  series.tau0 = trace.size() > 1 ? trace[1].time_s - trace[0].time_s : 1.0;
  for (const auto& r : trace) series.samples.push_back(r.theta_true);
  const auto factors = parse_factors(a.taus);
  const auto curve = twtt::stability_curve(series, twtt::parse_metric(a.metric), factors);
  emit(a.out, [&](std::ostream& os) { twtt::write_curve(os, curve); });
  return 0;
}

struct DetectArgs {
  std::string in;
  std::string out;
  std::int64_t threshold_ps = 100;
  double weight = 0.1;
  int warmup = 2;
  std::int64_t tau_ps = 1'000'000'000'000;
  std::string strategy = "detect";
  bool use_gamma_e = false;
};

int run_detect(const DetectArgs& a) {
  const auto measurements = twtt::read_measurements(twtt::read_csv(a.in));
  twtt::DetectorConfig cfg;
  cfg.threshold = twtt::ps_to_seconds(a.threshold_ps);
  cfg.weight = a.weight;
  cfg.warmup_epochs = a.warmup;
  cfg.predict_with_gamma_e = a.use_gamma_e;
  twtt::Corrector corrector(twtt::parse_strategy(a.strategy), cfg,
                            twtt::ps_to_seconds(a.tau_ps));
  std::vector<twtt::DecisionRow> rows;
  rows.reserve(measurements.size());
  for (const auto& m : measurements) {
    rows.push_back({m.epoch_index, m.theta_m, corrector.step(m.theta_m)});
  }
  emit(a.out, [&](std::ostream& os) { twtt::write_decisions(os, rows); });
  return 0;
}

struct NodeArgs {
  std::string config;
  std::string role;
  std::string out;
};

int run_netlab_node(const NodeArgs& a) {
  auto setup = twtt::netlab::node_setup_from_json(twtt::load_json_file(a.config));
  if (!a.role.empty()) setup.node.role = twtt::netlab::parse_role(a.role);
  auto socket = twtt::netlab::UdpSocket::bind(setup.bind);
  const auto result = twtt::netlab::run_node(setup.node, socket, setup.proxy);
  if (setup.node.role == twtt::netlab::Role::kLocal) {
    emit(a.out, [&](std::ostream& os) { twtt::write_trace(os, result.trace); });
  }
  const auto& s = result.stats;
  std::cerr << "netlab-node " << twtt::netlab::to_string(setup.node.role) << ": sent "
            << s.sent << ", received " << s.received << ", malformed " << s.malformed
            << ", stale " << s.stale << ", missing epochs " << s.missing_epochs << '\n';
  return 0;
}

struct ProxyArgs {
  std::string policy;
  std::string truth_out;
};

int run_netlab_proxy(const ProxyArgs& a) {
  auto setup = twtt::netlab::proxy_setup_from_json(twtt::load_json_file(a.policy));
  twtt::netlab::Proxy proxy(setup.policy, setup.options,
                            twtt::netlab::UdpSocket::bind(setup.listen_a),
                            twtt::netlab::UdpSocket::bind(setup.listen_b), setup.node_a,
                            setup.node_b);
  const auto stats = proxy.run();
  emit(a.truth_out, [&](std::ostream& os) { twtt::write_ground_truth(os, stats.ground_truth); });
  std::cerr << "netlab-proxy: forwarded A->B " << stats.forwarded_ab << ", B->A "
            << stats.forwarded_ba << ", malformed " << stats.malformed << ", unroutable "
            << stats.unroutable << ", attacks " << stats.ground_truth.size() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-way fiber time transfer simulator and asymmetric-delay attack detector.\n"
               "Times on the command line and in files are integer picoseconds."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "twtt 0.1.0");

  SimArgs sim;
  auto* sim_cmd = app.add_subcommand("sim", "Run a closed-loop scenario and write its trace CSV");
  sim_cmd->add_option("--config", sim.config,
                      "Scenario JSON (times in ps, gammas in ps/s); overlays --preset");
  sim_cmd->add_option("--preset", sim.preset, "Base preset (see `twtt presets`)");
  sim_cmd->add_option("--out", sim.out, "Trace CSV path, '-' for stdout")->required();
  sim_cmd->add_option("--seed", sim.seed, "Override the scenario seed");
  sim_cmd->add_option("--duration", sim.duration, "Override duration in epochs")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--strategy", sim.strategy, "direct or detect")
      ->check(CLI::IsMember({"direct", "detect"}));

  MetricsArgs met;
  auto* met_cmd = app.add_subcommand(
      "metrics", "TDEV/MTIE curves of theta_true, or precision/recall of the verdicts");
  met_cmd->add_option("--in", met.in, "Trace CSV")->required()->check(CLI::ExistingFile);
  auto* metric_opt = met_cmd->add_option("--metric", met.metric, "tdev or mtie")
                         ->check(CLI::IsMember({"tdev", "mtie"}));
  auto* taus_opt = met_cmd->add_option(
      "--taus", met.taus, "Comma-separated averaging factors n (tau = n * epoch length)");
  met_cmd->add_option("--out", met.out, "Output CSV (tau_s,value_s in seconds); default stdout");
  auto* pr_flag = met_cmd->add_flag("--precision-recall", met.precision_recall,
                                    "Score attack_detected against the true attack epochs");
  met_cmd
      ->add_option("--truth", met.truth,
                   "Ground-truth CSV (epoch,delay_ps,direction); default: the trace's "
                   "attack_true_delay column")
      ->check(CLI::ExistingFile)
      ->needs(pr_flag);
  pr_flag->excludes(metric_opt)->excludes(taus_opt);

  DetectArgs det;
  auto* det_cmd = app.add_subcommand(
      "detect", "Run a correction strategy offline over measured offsets");
  det_cmd
      ->add_option("--in", det.in,
                   "CSV with epoch_index and theta_m, or delta_t_a and delta_t_b (ps)")
      ->required()
      ->check(CLI::ExistingFile);
  det_cmd->add_option("--out", det.out, "Decisions CSV (ps); default stdout");
  auto* thr_opt = det_cmd->add_option("--threshold-ps", det.threshold_ps,
                                      "Attack-index threshold in ps")
                      ->check(CLI::PositiveNumber);
  auto* w_opt = det_cmd->add_option("--w", det.weight, "Skew blend weight in [0,1]")
                    ->check(CLI::Range(0.0, 1.0));
  auto* warm_opt = det_cmd->add_option("--warmup", det.warmup, "Warm-up epochs (>= 2)")
                       ->check(CLI::Range(2, 1 << 30));
  det_cmd->add_option("--tau-ps", det.tau_ps, "Synchronization interval in ps")
      ->check(CLI::PositiveNumber);
  auto* gamma_e_flag = det_cmd->add_flag(
      "--use-gamma-e", det.use_gamma_e, "Predict with the step skew estimate gamma_E");
  auto* strat_opt = det_cmd->add_option("--strategy", det.strategy, "direct or detect")
                        ->check(CLI::IsMember({"direct", "detect"}));
  (void)strat_opt;

  NodeArgs node;
  auto* node_cmd = app.add_subcommand("netlab-node", "Run one netlab endpoint over UDP");
  node_cmd->add_option("--config", node.config, "Node JSON (role, bind, proxy, scenario)")
      ->required();
  node_cmd->add_option("--role", node.role, "Override the role: local or remote")
      ->check(CLI::IsMember({"local", "remote"}));
  node_cmd->add_option("--out", node.out, "Trace CSV for the local node; default stdout");

  ProxyArgs proxy;
  auto* proxy_cmd = app.add_subcommand("netlab-proxy", "Run the adversary proxy");
  proxy_cmd->add_option("--policy", proxy.policy,
                        "Proxy JSON (endpoints, base_delay ps, schedule, seed)")
      ->required();
  proxy_cmd->add_option("--truth-out", proxy.truth_out,
                        "Ground-truth CSV (epoch,delay_ps,direction); default stdout");

  bool show_json = false;
  std::string show_name;
  auto* presets_cmd = app.add_subcommand("presets", "List scenario presets");
  presets_cmd->add_option("--show", show_name, "Print one preset as scenario JSON");
  (void)show_json;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  // Direct correction has no detector parameters to set.
  if (det.strategy == "direct" &&
      (thr_opt->count() + w_opt->count() + warm_opt->count() + gamma_e_flag->count()) > 0) {
    std::cerr << "detect: detector options conflict with --strategy direct\n";
    return kExitUsage;
  }

  try {
    if (*sim_cmd) return run_sim(sim, *sim_cmd);
    if (*met_cmd) return run_metrics(met);
    if (*det_cmd) return run_detect(det);
    if (*node_cmd) return run_netlab_node(node);
    if (*proxy_cmd) return run_netlab_proxy(proxy);
    if (*presets_cmd) {
      if (!show_name.empty()) {
        std::cout << twtt::scenario_to_json(twtt::preset(show_name)).dump(2) << '\n';
      } else {
        for (const auto& name : twtt::preset_names()) std::cout << name << '\n';
      }
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
