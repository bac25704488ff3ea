// Copyright 2026 The daqsim authors
// SPDX-License-Identifier: Apache-2.0

#include "daqsim/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

namespace daqsim {

namespace {

std::uint64_t total_count(const Counts& counts) {
  std::uint64_t n = 0;
  for (const auto& [k, c] : counts) n += c;
  return n;
}

void check_distribution(const std::vector<double>& p, const char* name) {
  double s = 0.0;
  for (double v : p) {
    if (v < -1e-12) throw metrics_error(std::string(name) + ": negative entry");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-9) {
    throw metrics_error(std::string(name) + ": does not sum to 1");
  }
}

}  // namespace

void ObservableSeries::validate() const {
  const auto n = values.size();
  if (t_phys_us.size() != n || t_mapped.size() != n || stderrs.size() != n) {
    throw metrics_error("series: field length mismatch");
  }
  for (double s : stderrs) {
    if (s < 0.0) throw metrics_error("series: negative stderr");
  }
}

std::pair<double, double> mean_excitation(const Counts& counts, int n_qubits,
                                          bool per_spin) {
  const std::uint64_t n = total_count(counts);
  if (n == 0) throw metrics_error("mean_excitation: empty sample");
  const double norm = per_spin ? 1.0 / n_qubits : 1.0;
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& [idx, c] : counts) {
    const double v = norm * static_cast<double>(std::popcount(idx));
    sum += c * v;
    sum_sq += c * v * v;
  }
  const double mean = sum / static_cast<double>(n);
  double se = 0.0;
  if (n > 1) {
    const double var =
        std::max(0.0, (sum_sq - n * mean * mean) / static_cast<double>(n - 1));
    se = std::sqrt(var / static_cast<double>(n));
  }
  return {mean, se};
}

std::vector<double> magnetization_pattern(const Counts& counts, int n_qubits) {
  const std::uint64_t n = total_count(counts);
  if (n == 0) throw metrics_error("magnetization_pattern: empty sample");
  std::vector<double> m(n_qubits, 0.0);
  for (const auto& [idx, c] : counts) {
    for (int q = 0; q < n_qubits; ++q) {
      if (idx & (std::uint64_t{1} << q)) m[q] += static_cast<double>(c);
    }
  }
  for (auto& v : m) v = 2.0 * v / static_cast<double>(n) - 1.0;
  return m;
}

double half_difference(const std::vector<double>& m, const std::set<int>& up,
                       const std::set<int>& down) {
  if (up.empty() || down.empty()) {
    throw metrics_error("half_difference: empty spin set");
  }
  for (int q : up) {
    if (down.count(q)) throw metrics_error("half_difference: overlapping sets");
  }
  auto mean_over = [&](const std::set<int>& s) {
    double acc = 0.0;
    for (int q : s) {
      if (q < 0 || q >= static_cast<int>(m.size())) {
        throw metrics_error("half_difference: spin index out of range");
      }
      acc += m[q];
    }
    return acc / static_cast<double>(s.size());
  };
  return mean_over(up) - mean_over(down);
}

std::vector<double> l1_metric(const std::vector<double>& a,
                              const std::vector<double>& b) {
  if (a.size() != b.size()) throw metrics_error("l1_metric: grid mismatch");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::abs(a[i] - b[i]);
  return out;
}

std::vector<cplx> fourier_components(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 2) throw metrics_error("fourier_components: need >= 2 points");
  const double vmax = *std::max_element(values.begin(), values.end());
  if (vmax == 0.0) throw metrics_error("fourier_components: all-zero series");
  std::vector<cplx> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t m = 0; m < n; ++m) {
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(k) *
                           static_cast<double>(m) / static_cast<double>(n);
      out[k] += (values[m] / vmax) * std::polar(1.0, phase);
    }
  }
  return out;
}

double trace_distance_classical(const std::vector<double>& p,
                                const std::vector<double>& q) {
  if (p.size() != q.size()) {
    throw metrics_error("trace_distance_classical: support size mismatch");
  }
  check_distribution(p, "trace_distance_classical(p)");
  check_distribution(q, "trace_distance_classical(q)");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
  return 0.5 * d;
}

double bhattacharyya(const std::vector<double>& p,
                     const std::vector<double>& q) {
  if (p.size() != q.size()) {
    throw metrics_error("bhattacharyya: support size mismatch");
  }
  check_distribution(p, "bhattacharyya(p)");
  check_distribution(q, "bhattacharyya(q)");
  double overlap = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    overlap += std::sqrt(std::max(0.0, p[i]) * std::max(0.0, q[i]));
  }
  if (overlap <= 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(overlap);
}

namespace {

void check_density(const Eigen::Matrix2cd& rho, const char* name) {
  if ((rho - rho.adjoint()).norm() > 1e-8) {
    throw metrics_error(std::string(name) + ": not Hermitian");
  }
  if (std::abs(rho.trace().real() - 1.0) > 1e-8 ||
      std::abs(rho.trace().imag()) > 1e-8) {
    throw metrics_error(std::string(name) + ": trace != 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-8) {
    throw metrics_error(std::string(name) + ": negative eigenvalue");
  }
}

}  // namespace

double trace_distance_quantum(const Eigen::Matrix2cd& rho1,
                              const Eigen::Matrix2cd& rho2) {
  check_density(rho1, "rho1");
  check_density(rho2, "rho2");
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(rho1 - rho2);
  return 0.5 * svd.singularValues().sum();
}

double distinguish_probability(const Eigen::Matrix2cd& rho1,
                               const Eigen::Matrix2cd& rho2) {
  return 0.5 * (1.0 + trace_distance_quantum(rho1, rho2));
}

double analytic_bell_trace_distance(double j01, double j02, double t_s,
                                    BellState bell) {
  if (j01 < 0.0 || j02 < 0.0) {
    throw metrics_error("analytic_bell_trace_distance: negative coupling");
  }
  const bool phi = bell == BellState::PhiPlus || bell == BellState::PhiMinus;
  const double j_eff = phi ? j01 + j02 : j01 - j02;
  return std::abs(std::cos(2.0 * j_eff * t_s));
}

double general_b_coefficient(const std::array<cplx, 4>& env, double tau01,
                             double tau02) {
  double norm = 0.0;
  for (const auto& a : env) norm += std::norm(a);
  if (std::abs(norm - 1.0) > 1e-9) {
    throw metrics_error("general_b_coefficient: environment not normalized");
  }
  // Global phase dropped; exponent signs flip under conjugation, so |B| is
  // convention-independent.
  const cplx b = 0.5 * (std::norm(env[0]) *
                            std::polar(1.0, -2.0 * (tau01 + tau02)) +
                        std::norm(env[1]) *
                            std::polar(1.0, -2.0 * (tau01 - tau02)) +
                        std::norm(env[2]) *
                            std::polar(1.0, 2.0 * (tau01 - tau02)) +
                        std::norm(env[3]) *
                            std::polar(1.0, 2.0 * (tau01 + tau02)));
  return std::abs(b);
}

}  // namespace daqsim
