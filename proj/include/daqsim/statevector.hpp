// Copyright 2026 The daqsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace daqsim {

using cplx = std::complex<double>;

/// 2x2 single-qubit matrix, row-major: {u00, u01, u10, u11}.
using Mat2 = std::array<cplx, 4>;

/// One diagonal ZZ rotation term. The amplitude of basis state |k> is
/// multiplied by exp(-i * theta * z_i * z_j), z = +1 for bit 0, -1 for bit 1.
struct ZZTerm {
  int i;
  int j;
  double theta;
};

/// Dense complex amplitude vector over 2^n computational basis states.
/// Qubit 0 is the least significant bit of the basis index.
class StateVector {
 public:
  static constexpr int kMaxQubits = 24;

  /// |0...0> on n qubits.
  explicit StateVector(int n_qubits);

  /// Basis state |basis_index>.
  static StateVector basis(int n_qubits, std::uint64_t basis_index);

  int num_qubits() const { return n_qubits_; }
  std::size_t size() const { return amps_.size(); }

  cplx& operator[](std::size_t k) { return amps_[k]; }
  const cplx& operator[](std::size_t k) const { return amps_[k]; }
  std::span<cplx> amplitudes() { return amps_; }
  std::span<const cplx> amplitudes() const { return amps_; }

  /// Applies a single-qubit unitary. Throws if u is not unitary within 1e-10.
  void apply_1q(int qubit, const Mat2& u);

  /// Same, without the unitarity check (engine-internal hot path).
  void apply_1q_unchecked(int qubit, const Mat2& u);

  void apply_cnot(int control, int target);

  void apply_zz_phase(std::span<const ZZTerm> terms);

  /// Projects qubit onto |0> after a relaxation jump: amplitudes with the
  /// qubit excited are moved to the corresponding ground configuration.
  /// Does not renormalize.
  void apply_lowering(int qubit);

  void apply_pauli_z(int qubit);
  void apply_pauli_x(int qubit);
  void apply_pauli_y(int qubit);

  double norm_sq() const;
  void renormalize();

  /// Population of |1> on one qubit.
  double excited_population(int qubit) const;

  /// Reduced 2x2 density matrix of a single qubit.
  Eigen::Matrix2cd partial_trace_single(int qubit) const;

  /// One basis-index sample from |a_k|^2.
  std::uint64_t sample_index(std::mt19937_64& rng) const;

  /// n_runs i.i.d. samples, deterministic per rng state.
  std::vector<std::uint64_t> sample_bitstrings(int n_runs,
                                               std::mt19937_64& rng) const;

 private:
  int n_qubits_;
  std::vector<cplx> amps_;
};

/// Uniform double in [0,1) from the top 53 bits of an mt19937_64 draw.
/// Used everywhere instead of std::uniform_real_distribution so sampled
/// streams are identical across standard library implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool is_unitary_2x2(const Mat2& u, double tol = 1e-10);

// Common single-qubit gates.
Mat2 gate_rx(double theta);
Mat2 gate_rz(double theta);
Mat2 gate_ry(double theta);
Mat2 gate_x();
Mat2 gate_h();
Mat2 gate_identity();
Mat2 mat2_mul(const Mat2& a, const Mat2& b);

/// One Pauli term of a Hamiltonian: coeff * P(q0) [* P(q1) for ZZ].
struct PauliTerm {
  enum class Kind { X, Z, ZZ };
  Kind kind;
  int q0;
  int q1;  // used by ZZ only
  double coeff;
};

/// Dense e^{-iHt} via eigendecomposition, n_qubits <= 10.
Eigen::MatrixXcd exact_propagator(int n_qubits,
                                  std::span<const PauliTerm> terms, double t);

/// Dense Hermitian matrix of a Pauli term list.
Eigen::MatrixXcd build_hamiltonian(int n_qubits,
                                   std::span<const PauliTerm> terms);

/// Frobenius distance between operators, minimized over a global phase and
/// normalized by sqrt(dim). Zero iff U = e^{i phi} V.
double operator_distance(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v);

/// Vector 2-norm distance between states up to global phase.
double state_distance(const StateVector& a, const StateVector& b);

std::string to_bitstring(std::uint64_t index, int n_qubits);

}  // namespace daqsim
