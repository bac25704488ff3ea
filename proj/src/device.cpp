// Copyright 2026 The daqsim authors
// SPDX-License-Identifier: Apache-2.0

#include "daqsim/device.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace daqsim {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw device_error("unknown key '" + path + it.key() + "'");
    }
  }
}

double require_number(const json& obj, const std::string& key,
                      const std::string& path) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    throw device_error("missing or non-numeric field '" + path + key + "'");
  }
  return obj[key].get<double>();
}

}  // namespace

void DeviceModel::validate() const {
  if (qubits.empty()) throw device_error("qubits: empty");
  std::set<int> ids;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const auto& q = qubits[i];
    const std::string path = "qubits[" + std::to_string(i) + "].";
    if (!ids.insert(q.id).second) throw device_error(path + "id: duplicate");
    if (q.id < 0 || q.id >= n_qubits()) {
      throw device_error(path + "id: must be a dense index in [0, n)");
    }
    if (q.t1_us <= 0.0) throw device_error(path + "t1_us: must be > 0");
    if (q.t2_us <= 0.0) throw device_error(path + "t2_us: must be > 0");
    if (q.t2_us > 2.0 * q.t1_us + 1e-12) {
      throw device_error(path + "t2_us: violates t2 <= 2*t1");
    }
  }
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < couplings.size(); ++i) {
    const auto& c = couplings[i];
    const std::string path = "couplings[" + std::to_string(i) + "].";
    if (c.a == c.b) throw device_error(path + "a: self-loop");
    if (!ids.count(c.a) || !ids.count(c.b)) {
      throw device_error(path + "a/b: unknown qubit id");
    }
    if (c.j_khz <= 0.0) throw device_error(path + "j_khz: must be > 0");
    auto key = std::minmax(c.a, c.b);
    if (!seen.insert(key).second) {
      throw device_error(path + "a/b: duplicate coupling pair");
    }
  }
  if (gates.single_ns <= 0.0) throw device_error("gates.single_ns: must be > 0");
  if (gates.identity_ns <= 0.0) {
    throw device_error("gates.identity_ns: must be > 0");
  }
  if (gates.cnot_ns <= 0.0) throw device_error("gates.cnot_ns: must be > 0");
  if (gates.cnot_error < 0.0 || gates.cnot_error > 1.0) {
    throw device_error("gates.cnot_error: must be in [0,1]");
  }
  if (gates.readout_error < 0.0 || gates.readout_error > 1.0) {
    throw device_error("gates.readout_error: must be in [0,1]");
  }
}

double DeviceModel::j_khz(int a, int b) const {
  for (const auto& c : couplings) {
    if ((c.a == a && c.b == b) || (c.a == b && c.b == a)) return c.j_khz;
  }
  return 0.0;
}

bool DeviceModel::coupled(int a, int b) const { return j_khz(a, b) > 0.0; }

std::vector<int> DeviceModel::neighbors(int q) const {
  std::vector<int> out;
  for (const auto& c : couplings) {
    if (c.a == q) out.push_back(c.b);
    if (c.b == q) out.push_back(c.a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const QubitSpec& DeviceModel::qubit(int id) const {
  for (const auto& q : qubits) {
    if (q.id == id) return q;
  }
  throw device_error("qubit id " + std::to_string(id) + " not in device");
}

DeviceModel load_device(const json& doc) {
  if (!doc.is_object()) throw device_error("device document must be an object");
  reject_unknown_keys(doc, {"name", "qubits", "couplings", "gates"}, "");
  DeviceModel dev;
  if (!doc.contains("name") || !doc["name"].is_string()) {
    throw device_error("missing or non-string field 'name'");
  }
  dev.name = doc["name"].get<std::string>();
  if (!doc.contains("qubits") || !doc["qubits"].is_array()) {
    throw device_error("missing or non-array field 'qubits'");
  }
  for (std::size_t i = 0; i < doc["qubits"].size(); ++i) {
    const auto& jq = doc["qubits"][i];
    const std::string path = "qubits[" + std::to_string(i) + "].";
    reject_unknown_keys(jq, {"id", "t1_us", "t2_us"}, path);
    QubitSpec q;
    q.id = static_cast<int>(require_number(jq, "id", path));
    q.t1_us = require_number(jq, "t1_us", path);
    q.t2_us = require_number(jq, "t2_us", path);
    dev.qubits.push_back(q);
  }
  if (!doc.contains("couplings") || !doc["couplings"].is_array()) {
    throw device_error("missing or non-array field 'couplings'");
  }
  for (std::size_t i = 0; i < doc["couplings"].size(); ++i) {
    const auto& jc = doc["couplings"][i];
    const std::string path = "couplings[" + std::to_string(i) + "].";
    reject_unknown_keys(jc, {"a", "b", "j_khz"}, path);
    Coupling c;
    c.a = static_cast<int>(require_number(jc, "a", path));
    c.b = static_cast<int>(require_number(jc, "b", path));
    c.j_khz = require_number(jc, "j_khz", path);
    dev.couplings.push_back(c);
  }
  if (!doc.contains("gates") || !doc["gates"].is_object()) {
    throw device_error("missing or non-object field 'gates'");
  }
  const auto& jg = doc["gates"];
  reject_unknown_keys(
      jg, {"single_ns", "identity_ns", "cnot_ns", "cnot_error", "readout_error"},
      "gates.");
  dev.gates.single_ns = require_number(jg, "single_ns", "gates.");
  dev.gates.identity_ns = require_number(jg, "identity_ns", "gates.");
  dev.gates.cnot_ns = require_number(jg, "cnot_ns", "gates.");
  dev.gates.cnot_error = require_number(jg, "cnot_error", "gates.");
  dev.gates.readout_error =
      jg.contains("readout_error") ? jg["readout_error"].get<double>() : 0.0;
  dev.validate();
  return dev;
}

DeviceModel load_device_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw device_error("cannot open device file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw device_error("device file parse error: " + std::string(e.what()));
  }
  return load_device(doc);
}

json device_to_json(const DeviceModel& dev) {
  json doc;
  doc["name"] = dev.name;
  doc["qubits"] = json::array();
  for (const auto& q : dev.qubits) {
    doc["qubits"].push_back({{"id", q.id}, {"t1_us", q.t1_us}, {"t2_us", q.t2_us}});
  }
  doc["couplings"] = json::array();
  for (const auto& c : dev.couplings) {
    doc["couplings"].push_back({{"a", c.a}, {"b", c.b}, {"j_khz", c.j_khz}});
  }
  doc["gates"] = {{"single_ns", dev.gates.single_ns},
                  {"identity_ns", dev.gates.identity_ns},
                  {"cnot_ns", dev.gates.cnot_ns},
                  {"cnot_error", dev.gates.cnot_error},
                  {"readout_error", dev.gates.readout_error}};
  return doc;
}

namespace {

DeviceModel make_device(std::string name, int n, double t1_us, double t2_us,
                        std::vector<Coupling> couplings) {
  DeviceModel dev;
  dev.name = std::move(name);
  for (int i = 0; i < n; ++i) dev.qubits.push_back({i, t1_us, t2_us});
  dev.couplings = std::move(couplings);
  dev.gates = {50.0, 100.0, 300.0, 0.02, 0.0};
  dev.validate();
  return dev;
}

}  // namespace

DeviceModel device_preset(const std::string& name) {
  if (name == "qx2-like") {
    // 5-qubit star-plus-edge topology; uniform couplings chosen so the mean
    // Ising times come out at 4.3 / 3.8.
    return make_device("qx2-like", 5, 71.7, 63.3,
                       {{0, 1, 60.0},
                        {0, 2, 60.0},
                        {1, 2, 60.0},
                        {2, 3, 60.0},
                        {2, 4, 60.0},
                        {3, 4, 60.0}});
  }
  if (name == "qx14-like") {
    // 14-qubit two-row ladder; uniform couplings give mean Ising times
    // 2.6 / 3.6.
    return make_device("qx14-like", 14, 52.0, 72.0,
                       {{0, 1, 50.0},
                        {1, 2, 50.0},
                        {2, 3, 50.0},
                        {3, 4, 50.0},
                        {4, 5, 50.0},
                        {5, 6, 50.0},
                        {7, 8, 50.0},
                        {8, 9, 50.0},
                        {9, 10, 50.0},
                        {10, 11, 50.0},
                        {11, 12, 50.0},
                        {12, 13, 50.0},
                        {1, 13, 50.0},
                        {2, 12, 50.0},
                        {3, 11, 50.0},
                        {4, 10, 50.0},
                        {5, 9, 50.0},
                        {6, 8, 50.0}});
  }
  if (name == "qx4-like") {
    // 5-qubit topology with a boundary qubit Q0 coupled to two neighbors.
    // Couplings here are deliberately non-uniform (J01 = 3*J02) so the
    // Bell-environment trace-distance experiment has distinct oscillation
    // periods for the Phi and Psi environments.
    return make_device("qx4-like", 5, 50.0, 50.0,
                       {{0, 1, 75.0},
                        {0, 2, 25.0},
                        {1, 2, 55.0},
                        {2, 3, 60.0},
                        {2, 4, 50.0},
                        {3, 4, 65.0}});
  }
  throw device_error("unknown device preset: " + name);
}

bool is_device_preset(const std::string& name) {
  const auto names = device_preset_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<std::string> device_preset_names() {
  return {"qx2-like", "qx14-like", "qx4-like"};
}

std::pair<double, double> mean_ising_times(const DeviceModel& dev) {
  if (dev.couplings.empty()) {
    throw device_error("mean_ising_times: device has no couplings");
  }
  double jbar = 0.0;
  for (const auto& c : dev.couplings) jbar += c.j_khz;
  jbar /= static_cast<double>(dev.couplings.size());
  double t1 = 0.0, t2 = 0.0;
  for (const auto& q : dev.qubits) {
    t1 += q.t1_us;
    t2 += q.t2_us;
  }
  t1 /= static_cast<double>(dev.qubits.size());
  t2 /= static_cast<double>(dev.qubits.size());
  return {jbar * t1 * 1e-3, jbar * t2 * 1e-3};
}

OptimalCoupling optimal_coupling(double t_1q_s, double t_coh_s) {
  if (t_1q_s <= 0.0 || t_coh_s <= 0.0) {
    throw device_error("optimal_coupling: durations must be > 0");
  }
  OptimalCoupling oc;
  oc.j_opt_khz = 1.0 / std::sqrt(t_1q_s * t_coh_s) * 1e-3;
  oc.min_error = std::sqrt(t_1q_s / t_coh_s);
  return oc;
}

IdleBlock idle_block_length(double t_phys_s, double t_identity_s) {
  if (t_phys_s < 0.0) throw device_error("idle_block_length: t_phys < 0");
  if (t_identity_s <= 0.0) {
    throw device_error("idle_block_length: t_identity must be > 0");
  }
  IdleBlock ib;
  ib.m = static_cast<int>(std::lround(t_phys_s / t_identity_s));
  ib.residual_s = t_phys_s - ib.m * t_identity_s;
  return ib;
}

}  // namespace daqsim
