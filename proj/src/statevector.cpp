// Copyright 2026 The daqsim authors
// SPDX-License-Identifier: Apache-2.0

#include "daqsim/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace daqsim {

namespace {

void check_qubit(int qubit, int n_qubits) {
  if (qubit < 0 || qubit >= n_qubits) {
    throw std::out_of_range("qubit index " + std::to_string(qubit) +
                            " out of range for " + std::to_string(n_qubits) +
                            " qubits");
  }
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("n_qubits must be in [1, " +
                                std::to_string(kMaxQubits) + "]");
  }
  amps_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
  amps_[0] = 1.0;
}

StateVector StateVector::basis(int n_qubits, std::uint64_t basis_index) {
  StateVector s(n_qubits);
  if (basis_index >= s.size()) {
    throw std::out_of_range("basis_index out of range");
  }
  s.amps_[0] = 0.0;
  s.amps_[basis_index] = 1.0;
  return s;
}

void StateVector::apply_1q(int qubit, const Mat2& u) {
  if (!is_unitary_2x2(u)) {
    throw std::invalid_argument("apply_1q: matrix is not unitary");
  }
  check_qubit(qubit, n_qubits_);
  apply_1q_unchecked(qubit, u);
}

void StateVector::apply_1q_unchecked(int qubit, const Mat2& u) {
  const std::size_t bit = std::size_t{1} << qubit;
  const cplx u00 = u[0], u01 = u[1], u10 = u[2], u11 = u[3];
  cplx* a = amps_.data();
  const std::size_t n = amps_.size();
  // Iterate over blocks of 2*bit, pairing k and k|bit.
  for (std::size_t base = 0; base < n; base += 2 * bit) {
    for (std::size_t k = base; k < base + bit; ++k) {
      const cplx a0 = a[k];
      const cplx a1 = a[k + bit];
      a[k] = u00 * a0 + u01 * a1;
      a[k + bit] = u10 * a0 + u11 * a1;
    }
  }
}

void StateVector::apply_cnot(int control, int target) {
  check_qubit(control, n_qubits_);
  check_qubit(target, n_qubits_);
  if (control == target) {
    throw std::invalid_argument("apply_cnot: control equals target");
  }
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  cplx* a = amps_.data();
  const std::size_t n = amps_.size();
  for (std::size_t k = 0; k < n; ++k) {
    if ((k & cbit) && !(k & tbit)) {
      std::swap(a[k], a[k | tbit]);
    }
  }
}

void StateVector::apply_zz_phase(std::span<const ZZTerm> terms) {
  for (const auto& t : terms) {
    check_qubit(t.i, n_qubits_);
    check_qubit(t.j, n_qubits_);
    if (t.i == t.j) {
      throw std::invalid_argument("apply_zz_phase: duplicate qubit in term");
    }
  }
  cplx* a = amps_.data();
  const std::size_t n = amps_.size();
  for (const auto& t : terms) {
    const std::size_t bi = std::size_t{1} << t.i;
    const std::size_t bj = std::size_t{1} << t.j;
    // exp(-i theta) on even parity (z_i z_j = +1), exp(+i theta) on odd.
    const cplx even = std::polar(1.0, -t.theta);
    const cplx odd = std::conj(even);
    for (std::size_t k = 0; k < n; ++k) {
      const bool parity = ((k & bi) != 0) != ((k & bj) != 0);
      a[k] *= parity ? odd : even;
    }
  }
}

void StateVector::apply_lowering(int qubit) {
  check_qubit(qubit, n_qubits_);
  const std::size_t bit = std::size_t{1} << qubit;
  cplx* a = amps_.data();
  const std::size_t n = amps_.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (k & bit) {
      a[k & ~bit] = a[k];
      a[k] = 0.0;
    }
  }
}

void StateVector::apply_pauli_z(int qubit) {
  check_qubit(qubit, n_qubits_);
  const std::size_t bit = std::size_t{1} << qubit;
  for (std::size_t k = 0; k < amps_.size(); ++k) {
    if (k & bit) amps_[k] = -amps_[k];
  }
}

void StateVector::apply_pauli_x(int qubit) {
  check_qubit(qubit, n_qubits_);
  const std::size_t bit = std::size_t{1} << qubit;
  for (std::size_t k = 0; k < amps_.size(); ++k) {
    if (!(k & bit)) std::swap(amps_[k], amps_[k | bit]);
  }
}

void StateVector::apply_pauli_y(int qubit) {
  check_qubit(qubit, n_qubits_);
  const std::size_t bit = std::size_t{1} << qubit;
  const cplx im{0.0, 1.0};
  for (std::size_t k = 0; k < amps_.size(); ++k) {
    if (!(k & bit)) {
      const cplx a0 = amps_[k];
      const cplx a1 = amps_[k | bit];
      amps_[k] = -im * a1;
      amps_[k | bit] = im * a0;
    }
  }
}

double StateVector::norm_sq() const {
  double s = 0.0;
  for (const cplx& a : amps_) s += std::norm(a);
  return s;
}

void StateVector::renormalize() {
  const double n2 = norm_sq();
  if (n2 <= 0.0) {
    throw std::runtime_error("renormalize: zero state");
  }
  const double inv = 1.0 / std::sqrt(n2);
  for (cplx& a : amps_) a *= inv;
}

double StateVector::excited_population(int qubit) const {
  check_qubit(qubit, n_qubits_);
  const std::size_t bit = std::size_t{1} << qubit;
  double p = 0.0;
  for (std::size_t k = 0; k < amps_.size(); ++k) {
    if (k & bit) p += std::norm(amps_[k]);
  }
  return p;
}

Eigen::Matrix2cd StateVector::partial_trace_single(int qubit) const {
  check_qubit(qubit, n_qubits_);
  const std::size_t bit = std::size_t{1} << qubit;
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  for (std::size_t k = 0; k < amps_.size(); ++k) {
    if (k & bit) continue;
    const cplx a0 = amps_[k];
    const cplx a1 = amps_[k | bit];
    rho(0, 0) += a0 * std::conj(a0);
    rho(0, 1) += a0 * std::conj(a1);
    rho(1, 0) += a1 * std::conj(a0);
    rho(1, 1) += a1 * std::conj(a1);
  }
  return rho;
}

std::uint64_t StateVector::sample_index(std::mt19937_64& rng) const {
  const double u = uniform01(rng) * norm_sq();
  double acc = 0.0;
  for (std::size_t k = 0; k < amps_.size(); ++k) {
    acc += std::norm(amps_[k]);
    if (u < acc) return k;
  }
  return amps_.size() - 1;
}

std::vector<std::uint64_t> StateVector::sample_bitstrings(
    int n_runs, std::mt19937_64& rng) const {
  if (n_runs < 1) {
    throw std::invalid_argument("sample_bitstrings: n_runs must be >= 1");
  }
  // Prefix sums once, then binary search per draw.
  std::vector<double> cdf(amps_.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < amps_.size(); ++k) {
    acc += std::norm(amps_[k]);
    cdf[k] = acc;
  }
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(n_runs));
  for (int r = 0; r < n_runs; ++r) {
    const double u = uniform01(rng) * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    out.push_back(static_cast<std::uint64_t>(
        std::min<std::ptrdiff_t>(it - cdf.begin(),
                                 static_cast<std::ptrdiff_t>(cdf.size()) - 1)));
  }
  return out;
}

bool is_unitary_2x2(const Mat2& u, double tol) {
  // U U^dag = I
  const cplx r00 = u[0] * std::conj(u[0]) + u[1] * std::conj(u[1]);
  const cplx r01 = u[0] * std::conj(u[2]) + u[1] * std::conj(u[3]);
  const cplx r11 = u[2] * std::conj(u[2]) + u[3] * std::conj(u[3]);
  return std::abs(r00 - 1.0) <= tol && std::abs(r11 - 1.0) <= tol &&
         std::abs(r01) <= tol;
}

Mat2 gate_rx(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return {cplx{c, 0}, cplx{0, -s}, cplx{0, -s}, cplx{c, 0}};
}

Mat2 gate_ry(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return {cplx{c, 0}, cplx{-s, 0}, cplx{s, 0}, cplx{c, 0}};
}

Mat2 gate_rz(double theta) {
  return {std::polar(1.0, -theta / 2.0), cplx{0, 0}, cplx{0, 0},
          std::polar(1.0, theta / 2.0)};
}

Mat2 gate_x() { return {cplx{0, 0}, cplx{1, 0}, cplx{1, 0}, cplx{0, 0}}; }

Mat2 gate_h() {
  const double s = 1.0 / std::sqrt(2.0);
  return {cplx{s, 0}, cplx{s, 0}, cplx{s, 0}, cplx{-s, 0}};
}

Mat2 gate_identity() {
  return {cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{1, 0}};
}

Mat2 mat2_mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Eigen::MatrixXcd build_hamiltonian(int n_qubits,
                                   std::span<const PauliTerm> terms) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  auto zval = [](std::size_t k, int q) {
    return (k >> q) & 1 ? -1.0 : 1.0;
  };
  for (const auto& t : terms) {
    switch (t.kind) {
      case PauliTerm::Kind::X:
        for (std::size_t k = 0; k < dim; ++k) {
          h(k ^ (std::size_t{1} << t.q0), k) += t.coeff;
        }
        break;
      case PauliTerm::Kind::Z:
        for (std::size_t k = 0; k < dim; ++k) {
          h(k, k) += t.coeff * zval(k, t.q0);
        }
        break;
      case PauliTerm::Kind::ZZ:
        for (std::size_t k = 0; k < dim; ++k) {
          h(k, k) += t.coeff * zval(k, t.q0) * zval(k, t.q1);
        }
        break;
    }
  }
  return h;
}

Eigen::MatrixXcd exact_propagator(int n_qubits,
                                  std::span<const PauliTerm> terms, double t) {
  if (n_qubits < 1 || n_qubits > 10) {
    throw std::invalid_argument(
        "exact_propagator: dense representation limited to 10 qubits");
  }
  const Eigen::MatrixXcd h = build_hamiltonian(n_qubits, terms);
  // TFIM Hamiltonians are real symmetric in the computational basis.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const auto& evals = es.eigenvalues();
  const auto& evecs = es.eigenvectors();
  Eigen::VectorXcd phases(evals.size());
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    phases(i) = std::polar(1.0, -evals(i) * t);
  }
  Eigen::MatrixXcd u = evecs * phases.asDiagonal() * evecs.adjoint();
  const double dev =
      (u * u.adjoint() - Eigen::MatrixXcd::Identity(u.rows(), u.cols()))
          .cwiseAbs()
          .maxCoeff();
  if (dev > 1e-10) {
    throw std::runtime_error("exact_propagator: unitarity deviation too large");
  }
  return u;
}

double operator_distance(const Eigen::MatrixXcd& u,
                         const Eigen::MatrixXcd& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw std::invalid_argument("operator_distance: shape mismatch");
  }
  const cplx tr = (u.adjoint() * v).trace();
  const cplx phase =
      std::abs(tr) > 0.0 ? tr / std::abs(tr) : cplx{1.0, 0.0};
  return (u * phase - v).norm() / std::sqrt(static_cast<double>(u.rows()));
}

double state_distance(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("state_distance: size mismatch");
  }
  cplx ov{0.0, 0.0};
  for (std::size_t k = 0; k < a.size(); ++k) ov += std::conj(b[k]) * a[k];
  const cplx phase =
      std::abs(ov) > 0.0 ? ov / std::abs(ov) : cplx{1.0, 0.0};
  double d2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    d2 += std::norm(a[k] - phase * b[k]);
  }
  return std::sqrt(d2);
}

std::string to_bitstring(std::uint64_t index, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), '0');
  for (int q = 0; q < n_qubits; ++q) {
    // Qubit 0 is the rightmost character.
    if ((index >> q) & 1) s[static_cast<std::size_t>(n_qubits - 1 - q)] = '1';
  }
  return s;
}

}  // namespace daqsim
