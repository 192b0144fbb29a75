#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "twtt/config.hpp"
#include "twtt/detector.hpp"
#include "twtt/harness.hpp"
#include "twtt/metrics.hpp"
#include "twtt/netlab/loopback.hpp"
#include "twtt/netlab/wire.hpp"
#include "twtt/trace_io.hpp"

namespace py = pybind11;
using namespace twtt;

namespace {

// Scenarios cross the boundary as JSON text in the config-file schema.
ScenarioConfig scenario_from(const std::string& text) {
  return scenario_from_json(nlohmann::json::parse(text), ScenarioConfig{});
}

py::dict columns(const std::vector<TraceRecord>& trace) {
  std::vector<std::int64_t> epoch;
  std::vector<double> time_s, theta_true, theta_m, u_theta, offset_f, i_attack, gamma_best,
      gamma_e, attack_true_delay;
  std::vector<bool> detected, missing;
  for (const auto& r : trace) {
    epoch.push_back(r.epoch_index);
    time_s.push_back(r.time_s);
    theta_true.push_back(r.theta_true);
    theta_m.push_back(r.theta_m);
    u_theta.push_back(r.u_theta);
    offset_f.push_back(r.offset_f);
    i_attack.push_back(r.i_attack);
    gamma_best.push_back(r.gamma_best);
    gamma_e.push_back(r.gamma_e);
    attack_true_delay.push_back(r.attack_true_delay);
    detected.push_back(r.attack_detected);
    missing.push_back(r.measurement_missing);
  }
  py::dict d;
  d["epoch_index"] = epoch;
  d["time_s"] = time_s;
  d["theta_true"] = theta_true;
  d["theta_m"] = theta_m;
  d["u_theta"] = u_theta;
  d["offset_f"] = offset_f;
  d["i_attack"] = i_attack;
  d["gamma_best"] = gamma_best;
  d["gamma_e"] = gamma_e;
  d["attack_true_delay"] = attack_true_delay;
  d["attack_detected"] = detected;
  d["measurement_missing"] = missing;
  return d;
}

TimeErrorSeries series(std::vector<double> samples, double tau0) {
  return TimeErrorSeries{std::move(samples), tau0};
}

py::dict tally_dict(const DetectionTally& t) {
  py::dict d;
  d["true_positives"] = t.true_positives;
  d["false_positives"] = t.false_positives;
  d["false_negatives"] = t.false_negatives;
  d["true_negatives"] = t.true_negatives;
  d["precision"] = t.precision;
  d["recall"] = t.recall;
  return d;
}

py::dict correct(const std::vector<std::optional<double>>& theta_m, double tau,
                 const std::string& strategy, double threshold, double weight,
                 int warmup_epochs, bool predict_with_gamma_e) {
  DetectorConfig cfg{threshold, weight, warmup_epochs, predict_with_gamma_e};
  Corrector c(parse_strategy(strategy), cfg, tau);
  std::vector<double> u, offset_f, i_attack, gamma_best, gamma_e;
  std::vector<std::optional<double>> gamma_m;
  std::vector<bool> detected, missing;
  for (const auto& m : theta_m) {
    const auto d = c.step(m);
    u.push_back(d.u_theta);
    offset_f.push_back(d.offset_f);
    i_attack.push_back(d.i_attack);
    gamma_m.push_back(d.gamma_m);
    gamma_e.push_back(d.gamma_e);
    gamma_best.push_back(d.gamma_best);
    detected.push_back(d.attack_detected);
    missing.push_back(d.measurement_missing);
  }
  py::dict out;
  out["u_theta"] = u;
  out["offset_f"] = offset_f;
  out["i_attack"] = i_attack;
  out["gamma_m"] = gamma_m;
  out["gamma_e"] = gamma_e;
  out["gamma_best"] = gamma_best;
  out["attack_detected"] = detected;
  out["measurement_missing"] = missing;
  return out;
}

}  // namespace

PYBIND11_MODULE(_twtt, m) {
  m.doc() = "Two-way fiber time transfer simulator and delay attack detector";

  py::register_exception<netlab::DecodeError>(m, "DecodeError", PyExc_ValueError);

  m.def("preset_names", &preset_names);
  m.def(
      "preset_json", [](const std::string& name) { return scenario_to_json(preset(name)).dump(); },
      py::arg("name"));
  m.def(
      "normalize_scenario",
      [](const std::string& text) { return scenario_to_json(scenario_from(text)).dump(); },
      py::arg("scenario_json"));
  m.def(
      "run_scenario",
      [](const std::string& text) {
        std::vector<TraceRecord> trace;
        const ScenarioConfig c = scenario_from(text);
        {
          py::gil_scoped_release release;
          trace = run_scenario(c);
        }
        return columns(trace);
      },
      py::arg("scenario_json"));
  m.def(
      "run_loopback",
      [](const std::string& text) {
        netlab::LoopbackResult r;
        const ScenarioConfig c = scenario_from(text);
        {
          py::gil_scoped_release release;
          r = netlab::run_loopback(c);
        }
        return columns(r.trace);
      },
      py::arg("scenario_json"));
  m.def(
      "trace_csv",
      [](const std::string& text) {
        std::ostringstream out;
        write_trace(out, run_scenario(scenario_from(text)));
        return out.str();
      },
      py::arg("scenario_json"));

  m.def(
      "tdev", [](std::vector<double> x, std::int64_t n, double tau0) {
        return tdev(series(std::move(x), tau0), n);
      },
      py::arg("samples"), py::arg("n"), py::arg("tau0") = 1.0);
  m.def(
      "mtie", [](std::vector<double> x, std::int64_t n, double tau0) {
        return mtie(series(std::move(x), tau0), n);
      },
      py::arg("samples"), py::arg("n"), py::arg("tau0") = 1.0);
  m.def(
      "stability_curve",
      [](std::vector<double> x, const std::string& metric, std::vector<std::int64_t> factors,
         double tau0) {
        const auto curve = stability_curve(series(std::move(x), tau0), parse_metric(metric), factors);
        std::vector<std::pair<double, double>> out;
        for (const auto& p : curve.points) out.emplace_back(p.tau, p.value);
        return out;
      },
      py::arg("samples"), py::arg("metric"), py::arg("factors"), py::arg("tau0") = 1.0);
  m.def(
      "precision_recall",
      [](const std::vector<bool>& actual, const std::vector<bool>& predicted) {
        return tally_dict(precision_recall(actual, predicted));
      },
      py::arg("actual"), py::arg("predicted"));

  m.def("correct", &correct, py::arg("theta_m"), py::arg("tau") = 1.0,
        py::arg("strategy") = "detect", py::arg("threshold") = DetectorConfig{}.threshold,
        py::arg("weight") = DetectorConfig{}.weight,
        py::arg("warmup_epochs") = DetectorConfig{}.warmup_epochs,
        py::arg("predict_with_gamma_e") = false);

  m.def(
      "encode",
      [](const std::string& type, const std::string& node, std::uint32_t epoch,
         std::int64_t payload) {
        netlab::PpsMessage msg;
        if (type == "pps") {
          msg.msg_type = netlab::MsgType::kPps;
        } else if (type == "report") {
          msg.msg_type = netlab::MsgType::kReport;
        } else {
          throw py::value_error("msg_type must be 'pps' or 'report'");
        }
        if (node == "remote") {
          msg.node_id = netlab::NodeId::kRemote;
        } else if (node == "local") {
          msg.node_id = netlab::NodeId::kLocal;
        } else {
          throw py::value_error("node must be 'remote' or 'local'");
        }
        msg.epoch_index = epoch;
        msg.payload_ps = payload;
        const auto d = netlab::encode(msg);
        return py::bytes(reinterpret_cast<const char*>(d.data()), d.size());
      },
      py::arg("msg_type"), py::arg("node"), py::arg("epoch_index"), py::arg("payload_ps"));
  m.def(
      "decode",
      [](const py::bytes& data) {
        const std::string s = data;
        const auto msg = netlab::decode(
            std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
        py::dict d;
        d["msg_type"] = msg.msg_type == netlab::MsgType::kPps ? "pps" : "report";
        d["node"] = msg.node_id == netlab::NodeId::kLocal ? "local" : "remote";
        d["epoch_index"] = msg.epoch_index;
        d["payload_ps"] = msg.payload_ps;
        return d;
      },
      py::arg("data"));
}
