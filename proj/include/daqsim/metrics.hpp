// Copyright 2026 The daqsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "daqsim/statevector.hpp"

namespace daqsim {

/// One observable over a time grid, with both clocks attached.
struct ObservableSeries {
  std::string label;
  std::vector<double> t_phys_us;
  std::vector<double> t_mapped;   // dimensionless Ising time
  std::vector<double> values;
  std::vector<double> stderrs;

  void validate() const;
};

struct metrics_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Measurement sample as outcome counts keyed by basis index.
using Counts = std::map<std::uint64_t, std::uint64_t>;

/// Mean excitation number over the sample and its standard error (sample
/// standard deviation of the per-shot value divided by sqrt(N)). The default
/// normalizes by the qubit count (per-spin excitation); per_spin = false
/// gives the raw summed excitation.
std::pair<double, double> mean_excitation(const Counts& counts, int n_qubits,
                                          bool per_spin = true);

/// Per-qubit magnetization m_j = 2 <n_j> - 1.
std::vector<double> magnetization_pattern(const Counts& counts, int n_qubits);

/// Mean magnetization of the up set minus mean magnetization of the down set.
double half_difference(const std::vector<double>& m, const std::set<int>& up,
                       const std::set<int>& down);

/// Pointwise |a - b| on matched grids.
std::vector<double> l1_metric(const std::vector<double>& a,
                              const std::vector<double>& b);

/// Normalizes the series by its maximum, then takes the plain DFT over the
/// (uniform-grid) sample index. Throws on an all-zero series.
std::vector<cplx> fourier_components(const std::vector<double>& values);

/// 1/2 sum |p - q|. Inputs must each sum to 1 within 1e-9.
double trace_distance_classical(const std::vector<double>& p,
                                const std::vector<double>& q);

/// -ln sum sqrt(p q); +infinity on disjoint supports.
double bhattacharyya(const std::vector<double>& p,
                     const std::vector<double>& q);

/// 1/2 sum of singular values of rho1 - rho2.
double trace_distance_quantum(const Eigen::Matrix2cd& rho1,
                              const Eigen::Matrix2cd& rho2);

/// (1 + D) / 2: the optimal single-shot discrimination probability.
double distinguish_probability(const Eigen::Matrix2cd& rho1,
                               const Eigen::Matrix2cd& rho2);

enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

/// Trace distance of the (|+>,|->) target pair after time t under always-on
/// coupling to a two-qubit Bell environment: |cos(2 (j01 +- j02) t)|, plus
/// sign for Phi states, minus for Psi states. Couplings in rad/s, t in s.
double analytic_bell_trace_distance(double j01, double j02, double t_s,
                                    BellState bell);

/// |B| for a general normalized environment amplitude vector (a, b, c, d)
/// over {|00>, |01>, |10>, |11>} with accumulated phases tau_ij = J_ij * t.
/// The target-pair trace distance is D = 2 |B|.
double general_b_coefficient(const std::array<cplx, 4>& env, double tau01,
                             double tau02);

}  // namespace daqsim
