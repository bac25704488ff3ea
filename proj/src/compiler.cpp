// Copyright 2026 The daqsim authors
// SPDX-License-Identifier: Apache-2.0

#include "daqsim/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include "daqsim/noise.hpp"

namespace daqsim {

namespace {

constexpr double kPi = std::numbers::pi;

/// x mod m reduced into [0, m).
double mod_pos(double x, double m) {
  double r = std::fmod(x, m);
  if (r < 0.0) r += m;
  // Collapse values within rounding noise of the period.
  if (m - r < 1e-15 * m) r = 0.0;
  return r;
}

struct LayerGate {
  int q;
  Mat2 u;
  GateTag tag;
  double angle;
};

/// Emits a parallel layer of single-qubit gates; the layer duration is
/// carried by the last gate so total time counts the layer once.
void emit_layer(Schedule& s, const std::vector<LayerGate>& gates,
                double layer_dur_s) {
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const double dur = (i + 1 == gates.size()) ? layer_dur_s : 0.0;
    s.moments.push_back(
        Moment::gate1q(gates[i].q, gates[i].u, dur, gates[i].tag,
                       gates[i].angle));
  }
}

void emit_trotter_1q_layers(Schedule& s, const SpinModel& model, double dt,
                            double t_single_s) {
  // The circuit structure is fixed: every layer and every entangler is
  // emitted even when its angle is zero, so the noisy cost of a step does
  // not depend on the evolution time (as it would not on hardware).
  std::vector<LayerGate> rx;
  for (int j = 0; j < model.n_spins; ++j) {
    const double angle = -2.0 * model.h[j] * dt;
    rx.push_back({j, gate_rx(angle), GateTag::RX, angle});
  }
  emit_layer(s, rx, t_single_s);
  if (model.has_disorder()) {
    std::vector<LayerGate> rz;
    for (int j = 0; j < model.n_spins; ++j) {
      const double angle = 2.0 * model.eps[j] * dt;
      rz.push_back({j, gate_rz(angle), GateTag::RZ, angle});
    }
    emit_layer(s, rz, t_single_s);
  }
}

double coupling_between(const DeviceModel& device, int a, int b) {
  return khz_to_rad_per_s(device.j_khz(a, b));
}

/// Echoed idle realizing exp(-i theta Z_i Z_j) up to global phase on local
/// qubits (i, j) with local spectator k. The engine's idle applies
/// exp(+i J tau Z Z), so tau satisfies J tau = -theta (mod pi).
void emit_echo_zz(Schedule& s, const DeviceModel& device, int li, int lj,
                  int lk, double theta, double max_idle_s) {
  const double reduced = mod_pos(-theta, kPi);
  if (reduced == 0.0) return;
  const double j_pair =
      coupling_between(device, s.device_id(li), s.device_id(lj));
  if (j_pair <= 0.0) {
    throw compile_error("echo_zz_isolation: pair is not coupled");
  }
  const double tau = reduced / j_pair;
  if (tau > max_idle_s) {
    std::cerr << "daqsim: warning: echo idle " << tau * 1e6
              << " us exceeds the configured maximum " << max_idle_s * 1e6
              << " us\n";
  }
  const double t_single_s = ns_to_s(device.gates.single_ns);
  s.moments.push_back(Moment::idle(tau / 2.0));
  s.moments.push_back(Moment::gate1q(lk, gate_x(), t_single_s, GateTag::X, 0));
  s.moments.push_back(Moment::idle(tau / 2.0));
  s.moments.push_back(Moment::gate1q(lk, gate_x(), t_single_s, GateTag::X, 0));
}

/// Controlled phase diag(1,1,1,e^{i lambda}) up to global phase, realized
/// with an echoed idle plus single-qubit phase compensation.
void emit_cphase_da(Schedule& s, const DeviceModel& device, int lc, int lt,
                    double lambda) {
  const int lk = 3 - lc - lt;  // the remaining local qubit of the triple
  emit_echo_zz(s, device, lc, lt, lk, -lambda / 4.0, 200e-6);
  const double t_single_s = ns_to_s(device.gates.single_ns);
  emit_layer(s,
             {{lc, gate_rz(lambda / 2.0), GateTag::RZ, lambda / 2.0},
              {lt, gate_rz(lambda / 2.0), GateTag::RZ, lambda / 2.0}},
             t_single_s);
}

void emit_cphase_digital(Schedule& s, int c, int t, double lambda,
                         double t_single_s, double t_cnot_s) {
  s.moments.push_back(Moment::cnot(c, t, t_cnot_s));
  s.moments.push_back(Moment::gate1q(t, gate_rz(-lambda / 2.0), t_single_s,
                                     GateTag::RZ, -lambda / 2.0));
  s.moments.push_back(Moment::cnot(c, t, t_cnot_s));
  emit_layer(s,
             {{c, gate_rz(lambda / 2.0), GateTag::RZ, lambda / 2.0},
              {t, gate_rz(lambda / 2.0), GateTag::RZ, lambda / 2.0}},
             t_single_s);
}

}  // namespace

Moment Moment::gate1q(int q, const Mat2& u, double dur_s, GateTag tag,
                      double angle) {
  Moment m;
  m.kind = Kind::Gate1Q;
  m.q0 = q;
  m.u = u;
  m.duration_s = dur_s;
  m.tag = tag;
  m.angle = angle;
  return m;
}

Moment Moment::cnot(int c, int t, double dur_s) {
  Moment m;
  m.kind = Kind::Cnot;
  m.q0 = c;
  m.q1 = t;
  m.duration_s = dur_s;
  return m;
}

Moment Moment::idle(double dur_s) {
  Moment m;
  m.kind = Kind::Idle;
  m.duration_s = dur_s;
  return m;
}

Moment Moment::measure() {
  Moment m;
  m.kind = Kind::Measure;
  return m;
}

double Schedule::total_phys_time_s() const {
  double t = 0.0;
  for (const auto& m : moments) t += m.duration_s;
  return t;
}

void validate_schedule(const Schedule& s) {
  if (s.n_qubits < 1) throw compile_error("schedule: n_qubits must be >= 1");
  if (!s.device_ids.empty() &&
      static_cast<int>(s.device_ids.size()) != s.n_qubits) {
    throw compile_error("schedule: device_ids length mismatch");
  }
  bool measured = false;
  for (const auto& m : s.moments) {
    if (measured) throw compile_error("schedule: moment after measure");
    if (m.duration_s < 0.0) throw compile_error("schedule: negative duration");
    switch (m.kind) {
      case Moment::Kind::Gate1Q:
        if (m.q0 < 0 || m.q0 >= s.n_qubits) {
          throw compile_error("schedule: gate qubit out of range");
        }
        break;
      case Moment::Kind::Cnot:
        if (m.q0 < 0 || m.q0 >= s.n_qubits || m.q1 < 0 ||
            m.q1 >= s.n_qubits || m.q0 == m.q1) {
          throw compile_error("schedule: bad cnot indices");
        }
        break;
      case Moment::Kind::Idle:
        break;
      case Moment::Kind::Measure:
        measured = true;
        break;
    }
  }
}

Schedule trotterize_digital(const SpinModel& model, double t, int n_tr,
                            const DeviceModel* device) {
  if (n_tr < 1) throw compile_error("trotterize: n_tr must be >= 1");
  model.validate();
  Schedule s;
  s.n_qubits = model.n_spins;
  s.device_ids = model.device_qubits;
  const double t_single_s = device ? ns_to_s(device->gates.single_ns) : 0.0;
  const double t_cnot_s = device ? ns_to_s(device->gates.cnot_ns) : 0.0;
  const double dt = t / n_tr;
  for (int step = 0; step < n_tr; ++step) {
    emit_trotter_1q_layers(s, model, dt, t_single_s);
    for (const auto& e : model.edges) {
      const double angle = -2.0 * e.j_coupling * dt;
      s.moments.push_back(Moment::cnot(e.i, e.j, t_cnot_s));
      s.moments.push_back(Moment::gate1q(e.j, gate_rz(angle), t_single_s,
                                         GateTag::RZ, angle));
      s.moments.push_back(Moment::cnot(e.i, e.j, t_cnot_s));
    }
  }
  s.moments.push_back(Moment::measure());
  validate_schedule(s);
  return s;
}

Schedule trotterize_da(const SpinModel& model, const DeviceModel& device,
                       double t, int n_tr) {
  if (n_tr < 1) throw compile_error("trotterize: n_tr must be >= 1");
  model.validate();
  if (!model.device_derived) {
    throw compile_error(
        "trotterize_da: model must be device-derived (global time map)");
  }
  Schedule s;
  s.n_qubits = model.n_spins;
  s.device_ids = model.device_qubits;
  const double t_single_s = ns_to_s(device.gates.single_ns);
  const double dt = t / n_tr;
  const double idle_s = model.time_map.to_phys(t) / n_tr;
  for (int step = 0; step < n_tr; ++step) {
    emit_trotter_1q_layers(s, model, dt, t_single_s);
    if (idle_s > 0.0) s.moments.push_back(Moment::idle(idle_s));
  }
  s.moments.push_back(Moment::measure());
  validate_schedule(s);
  return s;
}

Schedule trotterize_digital_symmetric(const SpinModel& model, double t,
                                      int n_tr, const DeviceModel* device) {
  if (n_tr < 1) throw compile_error("trotterize: n_tr must be >= 1");
  model.validate();
  Schedule s;
  s.n_qubits = model.n_spins;
  s.device_ids = model.device_qubits;
  const double t_single_s = device ? ns_to_s(device->gates.single_ns) : 0.0;
  const double t_cnot_s = device ? ns_to_s(device->gates.cnot_ns) : 0.0;
  const double dt = t / n_tr;
  auto emit_half_fields = [&](double frac) {
    std::vector<LayerGate> rx;
    for (int j = 0; j < model.n_spins; ++j) {
      const double angle = -2.0 * model.h[j] * dt * frac;
      rx.push_back({j, gate_rx(angle), GateTag::RX, angle});
    }
    emit_layer(s, rx, t_single_s);
  };
  for (int step = 0; step < n_tr; ++step) {
    emit_half_fields(0.5);
    for (const auto& e : model.edges) {
      const double angle = -2.0 * e.j_coupling * dt;
      s.moments.push_back(Moment::cnot(e.i, e.j, t_cnot_s));
      s.moments.push_back(Moment::gate1q(e.j, gate_rz(angle), t_single_s,
                                         GateTag::RZ, angle));
      s.moments.push_back(Moment::cnot(e.i, e.j, t_cnot_s));
    }
    emit_half_fields(0.5);
  }
  s.moments.push_back(Moment::measure());
  validate_schedule(s);
  return s;
}

SpinModel spectator_closure(const SpinModel& model, const DeviceModel& device,
                            const std::set<int>& active) {
  if (active.empty()) {
    throw compile_error("spectator_closure: empty active set");
  }
  if (!model.device_derived) {
    throw compile_error("spectator_closure: model must be device-derived");
  }
  for (int q : active) {
    if (q < 0 || q >= device.n_qubits()) {
      throw compile_error("spectator_closure: active qubit not in device");
    }
  }
  std::set<int> closure = active;
  for (int q : active) {
    for (int nb : device.neighbors(q)) closure.insert(nb);
  }
  std::vector<int> ids(closure.begin(), closure.end());
  auto local = [&](int dev_id) {
    return static_cast<int>(
        std::lower_bound(ids.begin(), ids.end(), dev_id) - ids.begin());
  };
  // Map device ids back to the source model's spin indices.
  auto model_spin = [&](int dev_id) -> int {
    if (model.device_qubits.empty()) return dev_id;
    for (int j = 0; j < model.n_spins; ++j) {
      if (model.device_qubits[j] == dev_id) return j;
    }
    return -1;
  };

  SpinModel out;
  out.n_spins = static_cast<int>(ids.size());
  out.device_qubits = ids;
  out.device_derived = true;
  out.time_map = model.time_map;
  out.h.assign(out.n_spins, 0.0);
  out.eps.assign(out.n_spins, 0.0);
  for (int dev_id : ids) {
    if (!active.count(dev_id)) continue;
    const int src = model_spin(dev_id);
    if (src < 0) {
      throw compile_error("spectator_closure: active qubit not in model");
    }
    out.h[local(dev_id)] = model.h[src];
    out.eps[local(dev_id)] = model.eps[src];
  }
  for (const auto& c : device.couplings) {
    if (!closure.count(c.a) || !closure.count(c.b)) continue;
    const int li = std::min(local(c.a), local(c.b));
    const int lj = std::max(local(c.a), local(c.b));
    out.edges.push_back(
        {li, lj, model.time_map.scale * khz_to_rad_per_s(c.j_khz)});
  }
  std::sort(out.edges.begin(), out.edges.end(),
            [](const auto& a, const auto& b) {
              return std::pair(a.i, a.j) < std::pair(b.i, b.j);
            });
  out.validate();
  return out;
}

Schedule echo_zz_isolation(const DeviceModel& device, std::pair<int, int> pair,
                           int spectator, double theta, double max_idle_s) {
  if (!device.coupled(spectator, pair.first) &&
      !device.coupled(spectator, pair.second)) {
    throw compile_error(
        "echo_zz_isolation: spectator is not coupled to the pair");
  }
  Schedule s;
  s.n_qubits = 3;
  s.device_ids = {pair.first, pair.second, spectator};
  emit_echo_zz(s, device, 0, 1, 2, theta, max_idle_s);
  validate_schedule(s);
  return s;
}

Schedule qft_digital(int n_qubits, const DeviceModel* device) {
  if (n_qubits < 1) throw compile_error("qft: n_qubits must be >= 1");
  Schedule s;
  s.n_qubits = n_qubits;
  const double t_single_s = device ? ns_to_s(device->gates.single_ns) : 0.0;
  const double t_cnot_s = device ? ns_to_s(device->gates.cnot_ns) : 0.0;
  for (int i = n_qubits - 1; i >= 0; --i) {
    s.moments.push_back(
        Moment::gate1q(i, gate_h(), t_single_s, GateTag::H, 0));
    for (int m = i - 1; m >= 0; --m) {
      const double lambda = 2.0 * kPi / std::pow(2.0, i - m + 1);
      emit_cphase_digital(s, m, i, lambda, t_single_s, t_cnot_s);
    }
  }
  for (int q = 0; q < n_qubits / 2; ++q) {
    const int p = n_qubits - 1 - q;
    s.moments.push_back(Moment::cnot(q, p, t_cnot_s));
    s.moments.push_back(Moment::cnot(p, q, t_cnot_s));
    s.moments.push_back(Moment::cnot(q, p, t_cnot_s));
  }
  s.moments.push_back(Moment::measure());
  validate_schedule(s);
  return s;
}

Schedule qft_da(const DeviceModel& device, const std::array<int, 3>& qubits) {
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      if (!device.coupled(qubits[a], qubits[b])) {
        throw compile_error("qft_da: the qubit triple must be mutually coupled");
      }
    }
  }
  Schedule s;
  s.n_qubits = 3;
  s.device_ids = {qubits[0], qubits[1], qubits[2]};
  const double t_single_s = ns_to_s(device.gates.single_ns);
  auto emit_h = [&](int q) {
    s.moments.push_back(Moment::gate1q(q, gate_h(), t_single_s, GateTag::H, 0));
  };
  for (int i = 2; i >= 0; --i) {
    emit_h(i);
    for (int m = i - 1; m >= 0; --m) {
      const double lambda = 2.0 * kPi / std::pow(2.0, i - m + 1);
      emit_cphase_da(s, device, m, i, lambda);
    }
  }
  // Final qubit reversal: swap(0, 2) as three echoed CNOTs.
  auto emit_cnot_da = [&](int c, int t) {
    emit_h(t);
    emit_cphase_da(s, device, c, t, kPi);
    emit_h(t);
  };
  emit_cnot_da(0, 2);
  emit_cnot_da(2, 0);
  emit_cnot_da(0, 2);
  s.moments.push_back(Moment::measure());
  validate_schedule(s);
  return s;
}

void apply_schedule_noiseless(StateVector& psi, const Schedule& s,
                              const DeviceModel* device,
                              bool crosstalk_during_gates) {
  validate_schedule(s);
  if (psi.num_qubits() != s.n_qubits) {
    throw compile_error("apply_schedule_noiseless: qubit count mismatch");
  }
  // Per-unit-time crosstalk terms, computed once and scaled per moment.
  std::vector<ZZTerm> base;
  bool base_ready = false;
  auto crosstalk = [&](double d) {
    if (d <= 0.0) return;
    if (!device) {
      throw compile_error(
          "apply_schedule_noiseless: device required for timed crosstalk");
    }
    if (!base_ready) {
      std::vector<int> ids = s.device_ids;
      if (ids.empty()) {
        ids.resize(static_cast<std::size_t>(s.n_qubits));
        for (int q = 0; q < s.n_qubits; ++q) ids[q] = q;
      }
      base = crosstalk_phase_for(*device, ids, 1.0);
      base_ready = true;
    }
    std::vector<ZZTerm> terms = base;
    for (auto& t : terms) t.theta *= d;
    psi.apply_zz_phase(terms);
  };
  for (const auto& m : s.moments) {
    switch (m.kind) {
      case Moment::Kind::Gate1Q:
        psi.apply_1q_unchecked(m.q0, m.u);
        if (crosstalk_during_gates) crosstalk(m.duration_s);
        break;
      case Moment::Kind::Cnot:
        psi.apply_cnot(m.q0, m.q1);
        if (crosstalk_during_gates) crosstalk(m.duration_s);
        break;
      case Moment::Kind::Idle:
        crosstalk(m.duration_s);
        break;
      case Moment::Kind::Measure:
        break;
    }
  }
}

Eigen::MatrixXcd schedule_unitary(const Schedule& s, const DeviceModel* device,
                                  bool crosstalk_during_gates) {
  if (s.n_qubits > 10) {
    throw compile_error("schedule_unitary: limited to 10 qubits");
  }
  const std::size_t dim = std::size_t{1} << s.n_qubits;
  Eigen::MatrixXcd u(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    StateVector psi = StateVector::basis(s.n_qubits, col);
    apply_schedule_noiseless(psi, s, device, crosstalk_during_gates);
    for (std::size_t row = 0; row < dim; ++row) u(row, col) = psi[row];
  }
  return u;
}

std::string serialize_schedule(const Schedule& s) {
  std::ostringstream out;
  out.precision(12);
  for (const auto& m : s.moments) {
    const double dur_ns = m.duration_s * 1e9;
    switch (m.kind) {
      case Moment::Kind::Gate1Q:
        switch (m.tag) {
          case GateTag::RX:
            out << "RX " << m.q0 << ' ' << m.angle << ' ' << dur_ns << '\n';
            break;
          case GateTag::RZ:
            out << "RZ " << m.q0 << ' ' << m.angle << ' ' << dur_ns << '\n';
            break;
          case GateTag::H:
            out << "H " << m.q0 << ' ' << dur_ns << '\n';
            break;
          case GateTag::X:
            out << "X " << m.q0 << ' ' << dur_ns << '\n';
            break;
          case GateTag::Generic:
            out << "U " << m.q0;
            for (const auto& c : m.u) {
              out << ' ' << c.real() << ' ' << c.imag();
            }
            out << ' ' << dur_ns << '\n';
            break;
        }
        break;
      case Moment::Kind::Cnot:
        out << "CNOT " << m.q0 << ' ' << m.q1 << ' ' << dur_ns << '\n';
        break;
      case Moment::Kind::Idle:
        out << "IDLE " << dur_ns << '\n';
        break;
      case Moment::Kind::Measure:
        out << "MEASURE\n";
        break;
    }
  }
  return out.str();
}

}  // namespace daqsim
