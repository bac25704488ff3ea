// Copyright 2026 The daqsim authors
// SPDX-License-Identifier: Apache-2.0

#include "daqsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace daqsim {

double TimeMap::to_phys(double t) const {
  if (t < 0.0) throw model_error("map_time: negative time");
  return scale * t;
}

double TimeMap::from_phys(double t_phys) const {
  if (t_phys < 0.0) throw model_error("map_time: negative time");
  return t_phys / scale;
}

double SpinModel::coupling(int i, int j) const {
  for (const auto& e : edges) {
    if ((e.i == i && e.j == j) || (e.i == j && e.j == i)) return e.j_coupling;
  }
  return 0.0;
}

double SpinModel::mean_coupling() const {
  if (edges.empty()) return 0.0;
  double s = 0.0;
  for (const auto& e : edges) s += e.j_coupling;
  return s / static_cast<double>(edges.size());
}

bool SpinModel::has_disorder() const {
  return std::any_of(eps.begin(), eps.end(),
                     [](double e) { return e != 0.0; });
}

std::vector<PauliTerm> SpinModel::pauli_terms() const {
  std::vector<PauliTerm> terms;
  for (int j = 0; j < n_spins; ++j) {
    if (h[j] != 0.0) {
      terms.push_back({PauliTerm::Kind::X, j, -1, -h[j]});
    }
    if (eps[j] != 0.0) {
      terms.push_back({PauliTerm::Kind::Z, j, -1, eps[j]});
    }
  }
  for (const auto& e : edges) {
    terms.push_back({PauliTerm::Kind::ZZ, e.i, e.j, -e.j_coupling});
  }
  return terms;
}

void SpinModel::validate() const {
  if (n_spins < 1) throw model_error("model: n_spins must be >= 1");
  if (static_cast<int>(h.size()) != n_spins ||
      static_cast<int>(eps.size()) != n_spins) {
    throw model_error("model: h/eps length mismatch");
  }
  for (const auto& e : edges) {
    if (e.i < 0 || e.j < 0 || e.i >= n_spins || e.j >= n_spins || e.i == e.j) {
      throw model_error("model: invalid edge");
    }
  }
  if (!device_qubits.empty() &&
      static_cast<int>(device_qubits.size()) != n_spins) {
    throw model_error("model: device_qubits length mismatch");
  }
  if (time_map.scale <= 0.0) throw model_error("model: time scale must be > 0");
}

SpinModel build_tfim(const DeviceModel& device, const FieldRule& rule,
                     const std::optional<DisorderSpec>& disorder,
                     double scale) {
  device.validate();
  if (scale <= 0.0) throw model_error("build_tfim: scale must be > 0");
  SpinModel m;
  m.n_spins = device.n_qubits();
  m.device_derived = true;
  m.time_map.scale = scale;
  m.device_qubits.resize(m.n_spins);
  for (int i = 0; i < m.n_spins; ++i) m.device_qubits[i] = i;
  for (const auto& c : device.couplings) {
    const int i = std::min(c.a, c.b);
    const int j = std::max(c.a, c.b);
    m.edges.push_back({i, j, scale * khz_to_rad_per_s(c.j_khz)});
  }
  std::sort(m.edges.begin(), m.edges.end(), [](const auto& a, const auto& b) {
    return std::pair(a.i, a.j) < std::pair(b.i, b.j);
  });

  m.h.assign(m.n_spins, 0.0);
  m.eps.assign(m.n_spins, 0.0);
  switch (rule.kind) {
    case FieldRule::Kind::UniformTwoJBar: {
      const double hval = 2.0 * m.mean_coupling();
      std::fill(m.h.begin(), m.h.end(), hval);
      break;
    }
    case FieldRule::Kind::PerPairTwoJ: {
      if (m.edges.size() != 1) {
        throw model_error(
            "build_tfim: per-pair-2J rule requires exactly one coupling");
      }
      const double hval = 2.0 * m.edges[0].j_coupling;
      m.h[m.edges[0].i] = hval;
      m.h[m.edges[0].j] = hval;
      break;
    }
    case FieldRule::Kind::Explicit: {
      if (static_cast<int>(rule.values.size()) != m.n_spins) {
        throw model_error("build_tfim: explicit field array length mismatch");
      }
      m.h = rule.values;
      break;
    }
  }

  if (disorder) {
    std::mt19937_64 rng(disorder->seed);
    const double bound = disorder->amplitude_factor / 2.0 * m.mean_coupling();
    m.eps = sample_disorder(bound, m.n_spins, rng);
  }
  m.validate();
  return m;
}

std::vector<double> sample_disorder(double j_bar, int n_spins,
                                    std::mt19937_64& rng) {
  if (j_bar <= 0.0) throw model_error("sample_disorder: j_bar must be > 0");
  std::vector<double> eps(static_cast<std::size_t>(n_spins));
  for (auto& e : eps) e = (2.0 * uniform01(rng) - 1.0) * 2.0 * j_bar;
  return eps;
}

}  // namespace daqsim
