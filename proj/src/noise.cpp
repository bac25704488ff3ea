// Copyright 2026 The daqsim authors
// SPDX-License-Identifier: Apache-2.0

#include "daqsim/noise.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace daqsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Pure-dephasing time from T1/T2: 1/T_phi = 1/T2 - 1/(2 T1).
double t_phi_from(double t1_s, double t2_s) {
  const double rate = 1.0 / t2_s - 0.5 / t1_s;
  if (rate <= 1e-30) return kInf;
  return 1.0 / rate;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

void apply_pauli(StateVector& psi, int q, int code) {
  switch (code) {
    case 1: psi.apply_pauli_x(q); break;
    case 2: psi.apply_pauli_y(q); break;
    case 3: psi.apply_pauli_z(q); break;
    default: break;
  }
}

/// Shared per-schedule precomputation plus the per-trajectory propagator.
/// Instances are immutable after construction and safe to share across
/// worker threads; all mutable state lives in the caller's StateVector/rng.
class TrajectoryEngine {
 public:
  TrajectoryEngine(const Schedule& schedule, const DeviceModel& device,
                   const NoiseModel& noise)
      : schedule_(schedule), device_(device), noise_(noise) {
    validate_schedule(schedule);
    noise.validate();
    n_ = schedule.n_qubits;
    if (n_ > 20) throw noise_error("trajectory engine limited to 20 qubits");
    dim_ = std::size_t{1} << n_;

    ids_.resize(n_);
    for (int q = 0; q < n_; ++q) ids_[q] = schedule.device_id(q);
    t1_.resize(n_);
    tphi_.resize(n_);
    for (int q = 0; q < n_; ++q) {
      const auto& spec = device.qubit(ids_[q]);
      t1_[q] = noise.enable_t1 ? us_to_s(spec.t1_us) : kInf;
      tphi_[q] = noise.enable_t2
                     ? t_phi_from(us_to_s(spec.t1_us), us_to_s(spec.t2_us))
                     : kInf;
    }
    uniform_t1_ = true;
    for (int q = 1; q < n_; ++q) {
      if (t1_[q] != t1_[0]) uniform_t1_ = false;
    }
    damping_ = noise.enable_t1 && t1_[0] < kInf;

    // Per-basis-state crosstalk phase rate (rad/s) and excitation count.
    const auto terms =
        crosstalk_phase_for(device, ids_, 1.0, noise.crosstalk_scale);
    phase_rate_.assign(dim_, 0.0);
    for (const auto& t : terms) {
      const std::uint64_t mi = std::uint64_t{1} << t.i;
      const std::uint64_t mj = std::uint64_t{1} << t.j;
      for (std::size_t x = 0; x < dim_; ++x) {
        const bool odd = ((x & mi) != 0) != ((x & mj) != 0);
        phase_rate_[x] += odd ? -t.theta : t.theta;
      }
    }
    has_crosstalk_ = !terms.empty();
    popcnt_.resize(dim_);
    for (std::size_t x = 0; x < dim_; ++x) {
      popcnt_[x] = static_cast<std::uint8_t>(std::popcount(x));
    }
    cnot_depol_ = noise.effective_cnot_depol(device);
    readout_flip_ = noise.effective_readout_flip(device);

    // The crosstalk+decay diagonal for a full moment duration is the same in
    // every trajectory's no-jump branch, so precompute it per duration.
    if (has_crosstalk_) {
      const double decay_rate =
          (damping_ && uniform_t1_) ? 0.5 / t1_[0] : 0.0;
      for (const auto& m : schedule.moments) {
        const bool ct = m.kind == Moment::Kind::Idle
                            ? true
                            : noise.crosstalk_during_gates;
        if (!ct || m.duration_s <= 0.0) continue;
        auto [it, fresh] = diag_cache_.try_emplace(m.duration_s);
        if (!fresh) continue;
        auto& diag = it->second;
        diag.resize(dim_);
        for (std::size_t x = 0; x < dim_; ++x) {
          diag[x] = std::polar(
              std::exp(-popcnt_[x] * decay_rate * m.duration_s),
              -phase_rate_[x] * m.duration_s);
        }
      }
    }
  }

  int n_qubits() const { return n_; }

  void run_one(StateVector& psi, std::mt19937_64& rng) const {
    for (const auto& m : schedule_.moments) {
      switch (m.kind) {
        case Moment::Kind::Gate1Q:
          psi.apply_1q_unchecked(m.q0, m.u);
          interval(psi, rng, m.duration_s, noise_.crosstalk_during_gates);
          break;
        case Moment::Kind::Cnot:
          psi.apply_cnot(m.q0, m.q1);
          if (cnot_depol_ > 0.0 && uniform01(rng) < cnot_depol_) {
            const int idx =
                std::min(14, static_cast<int>(uniform01(rng) * 15.0)) + 1;
            apply_pauli(psi, m.q0, idx / 4);
            apply_pauli(psi, m.q1, idx % 4);
          }
          interval(psi, rng, m.duration_s, noise_.crosstalk_during_gates);
          break;
        case Moment::Kind::Idle:
          interval(psi, rng, m.duration_s, true);
          break;
        case Moment::Kind::Measure:
          return;
      }
    }
  }

  std::uint64_t measure(StateVector& psi, std::mt19937_64& rng) const {
    std::uint64_t idx = psi.sample_index(rng);
    if (readout_flip_ > 0.0) {
      for (int q = 0; q < n_; ++q) {
        if (uniform01(rng) < readout_flip_) idx ^= std::uint64_t{1} << q;
      }
    }
    return idx;
  }

 private:
  /// Continuous evolution over duration d: crosstalk phase (if enabled for
  /// this moment kind), amplitude-damping jumps, then dephasing z-flips.
  void interval(StateVector& psi, std::mt19937_64& rng, double d,
                bool with_crosstalk) const {
    if (d <= 0.0) return;
    const bool ct = with_crosstalk && has_crosstalk_;
    if (damping_ && uniform_t1_) {
      evolve_waiting_time(psi, rng, d, ct);
    } else if (damping_) {
      evolve_chunked(psi, rng, d, ct);
    } else if (ct) {
      apply_diagonal(psi, d, 0.0, true);
    }
    if (noise_.enable_t2) apply_dephasing(psi, rng, d);
  }

  /// amp_x *= [exp(-i phase_rate_x tau) if with_phase] * e^{-popcount_x r tau}
  void apply_diagonal(StateVector& psi, double tau, double decay_rate,
                      bool with_phase) const {
    auto amps = psi.amplitudes();
    if (with_phase) {
      const auto it = diag_cache_.find(tau);
      if (it != diag_cache_.end() &&
          decay_rate == ((damping_ && uniform_t1_) ? 0.5 / t1_[0] : 0.0)) {
        const auto& diag = it->second;
        for (std::size_t x = 0; x < dim_; ++x) amps[x] *= diag[x];
        return;
      }
    }
    std::array<double, 21> decay;
    for (int m = 0; m <= n_; ++m) decay[m] = std::exp(-m * decay_rate * tau);
    if (with_phase) {
      for (std::size_t x = 0; x < dim_; ++x) {
        amps[x] *= std::polar(decay[popcnt_[x]], -phase_rate_[x] * tau);
      }
    } else if (decay_rate != 0.0) {
      for (std::size_t x = 0; x < dim_; ++x) {
        amps[x] *= decay[popcnt_[x]];
      }
    }
  }

  /// Exact unravelling for uniform T1: the no-jump generator is diagonal and
  /// commutes with the crosstalk phase, so jump times are sampled from the
  /// closed-form survival norm grouped by excitation number.
  void evolve_waiting_time(StateVector& psi, std::mt19937_64& rng, double d,
                           bool ct) const {
    const double t1 = t1_[0];
    double remaining = d;
    while (remaining > 0.0) {
      std::array<double, 21> s{};
      const auto amps = psi.amplitudes();
      for (std::size_t x = 0; x < dim_; ++x) {
        s[popcnt_[x]] += std::norm(amps[x]);
      }
      const double total = std::accumulate(s.begin(), s.end(), 0.0);
      auto survival = [&](double tau) {
        double v = 0.0;
        for (int m = 0; m <= n_; ++m) v += s[m] * std::exp(-m * tau / t1);
        return v / total;
      };
      const double u = uniform01(rng);
      if (survival(remaining) >= u) {
        apply_diagonal(psi, remaining, 0.5 / t1, ct);
        psi.renormalize();
        break;
      }
      // Bisection on the monotone survival norm for the jump time.
      double lo = 0.0, hi = remaining;
      for (int it = 0; it < 64; ++it) {
        const double mid = 0.5 * (lo + hi);
        (survival(mid) >= u ? lo : hi) = mid;
      }
      const double tau = 0.5 * (lo + hi);
      apply_diagonal(psi, tau, 0.5 / t1, ct);
      // Jump qubit chosen proportionally to its excited population.
      std::array<double, 20> w{};
      {
        const auto a = psi.amplitudes();
        for (std::size_t x = 0; x < dim_; ++x) {
          const double p = std::norm(a[x]);
          std::uint64_t bits = x;
          while (bits) {
            w[std::countr_zero(bits)] += p;
            bits &= bits - 1;
          }
        }
      }
      double wsum = 0.0;
      for (int q = 0; q < n_; ++q) wsum += w[q];
      int jq = n_ - 1;
      if (wsum > 0.0) {
        double acc = 0.0;
        const double pick = uniform01(rng) * wsum;
        for (int q = 0; q < n_; ++q) {
          acc += w[q];
          if (pick < acc) {
            jq = q;
            break;
          }
        }
      }
      psi.apply_lowering(jq);
      psi.renormalize();
      remaining -= tau;
    }
  }

  /// Trotterized fallback for non-uniform T1: crosstalk and per-qubit
  /// two-outcome damping alternate on dt_noise chunks.
  void evolve_chunked(StateVector& psi, std::mt19937_64& rng, double d,
                      bool ct) const {
    const double dt_max = ns_to_s(noise_.dt_noise_ns);
    const int n_chunks = std::max(1, static_cast<int>(std::ceil(d / dt_max)));
    const double dt = d / n_chunks;
    for (int c = 0; c < n_chunks; ++c) {
      if (ct) apply_diagonal(psi, dt, 0.0, true);
      for (int q = 0; q < n_; ++q) {
        if (t1_[q] >= kInf) continue;
        const double gamma = 1.0 - std::exp(-dt / t1_[q]);
        const double p_jump = gamma * psi.excited_population(q);
        if (uniform01(rng) < p_jump) {
          psi.apply_lowering(q);
        } else {
          const double k = std::sqrt(1.0 - gamma);
          psi.apply_1q_unchecked(q, Mat2{1.0, 0.0, 0.0, k});
        }
        psi.renormalize();
      }
    }
  }

  void apply_dephasing(StateVector& psi, std::mt19937_64& rng,
                       double d) const {
    std::uint64_t mask = 0;
    for (int q = 0; q < n_; ++q) {
      if (tphi_[q] >= kInf) continue;
      const double p = 0.5 * (1.0 - std::exp(-d / tphi_[q]));
      if (uniform01(rng) < p) mask |= std::uint64_t{1} << q;
    }
    if (!mask) return;
    auto amps = psi.amplitudes();
    for (std::size_t x = 0; x < dim_; ++x) {
      if (std::popcount(x & mask) & 1) amps[x] = -amps[x];
    }
  }

  const Schedule& schedule_;
  const DeviceModel& device_;
  const NoiseModel& noise_;
  int n_ = 0;
  std::size_t dim_ = 0;
  std::vector<int> ids_;
  std::vector<double> t1_, tphi_;
  std::vector<double> phase_rate_;
  std::vector<std::uint8_t> popcnt_;
  bool uniform_t1_ = true;
  bool damping_ = false;
  bool has_crosstalk_ = false;
  double cnot_depol_ = 0.0;
  double readout_flip_ = 0.0;
  std::map<double, std::vector<cplx>> diag_cache_;
};

}  // namespace

NoiseModel NoiseModel::noiseless() {
  NoiseModel nm;
  nm.enable_t1 = false;
  nm.enable_t2 = false;
  nm.cnot_depol = 0.0;
  nm.crosstalk_during_gates = false;
  nm.readout_flip = 0.0;
  return nm;
}

double NoiseModel::effective_cnot_depol(const DeviceModel& dev) const {
  return cnot_depol < 0.0 ? dev.gates.cnot_error : cnot_depol;
}

double NoiseModel::effective_readout_flip(const DeviceModel& dev) const {
  return readout_flip < 0.0 ? dev.gates.readout_error : readout_flip;
}

void NoiseModel::validate() const {
  if (cnot_depol > 1.0) throw noise_error("cnot_depol must be <= 1");
  if (readout_flip > 1.0) throw noise_error("readout_flip must be <= 1");
  if (dt_noise_ns <= 0.0) throw noise_error("dt_noise_ns must be > 0");
  if (crosstalk_scale < 0.0) throw noise_error("crosstalk_scale must be >= 0");
}

std::vector<double> RunResult::probabilities() const {
  const std::size_t dim = std::size_t{1} << n_qubits;
  std::vector<double> p(dim, 0.0);
  for (const auto& [idx, c] : counts) {
    p[idx] += static_cast<double>(c) / static_cast<double>(n_runs);
  }
  return p;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(master_seed ^ splitmix64(index + 1));
}

std::vector<ZZTerm> crosstalk_phase_for(const DeviceModel& device,
                                        const std::vector<int>& device_ids,
                                        double d_s, double scale) {
  if (d_s < 0.0) throw noise_error("crosstalk_phase_for: negative duration");
  std::vector<ZZTerm> terms;
  const int n = static_cast<int>(device_ids.size());
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double j = device.j_khz(device_ids[a], device_ids[b]);
      if (j <= 0.0) continue;
      terms.push_back({a, b, -khz_to_rad_per_s(j) * d_s * scale});
    }
  }
  return terms;
}

void apply_decoherence_interval(StateVector& psi, int qubit, double d_s,
                                double t1_s, double t2_s,
                                std::mt19937_64& rng) {
  if (d_s < 0.0) throw noise_error("decoherence interval: negative duration");
  if (t1_s <= 0.0 || t2_s <= 0.0) {
    throw noise_error("decoherence interval: coherence times must be > 0");
  }
  if (t2_s > 2.0 * t1_s * (1.0 + 1e-12)) {
    throw noise_error("decoherence interval: t2 > 2*t1 is unphysical");
  }
  if (d_s == 0.0) return;
  if (t1_s < kInf) {
    const double gamma = 1.0 - std::exp(-d_s / t1_s);
    const double p_jump = gamma * psi.excited_population(qubit);
    if (uniform01(rng) < p_jump) {
      psi.apply_lowering(qubit);
    } else {
      psi.apply_1q_unchecked(qubit, Mat2{1.0, 0.0, 0.0,
                                         std::sqrt(1.0 - gamma)});
    }
    psi.renormalize();
  }
  const double tphi = t_phi_from(t1_s, t2_s);
  if (tphi < kInf) {
    const double p = 0.5 * (1.0 - std::exp(-d_s / tphi));
    if (uniform01(rng) < p) psi.apply_pauli_z(qubit);
  }
}

StateVector propagate_one(const Schedule& schedule, const DeviceModel& device,
                          const NoiseModel& noise, std::uint64_t seed,
                          const StateVector* initial) {
  TrajectoryEngine engine(schedule, device, noise);
  StateVector psi = initial ? *initial : StateVector(schedule.n_qubits);
  if (psi.num_qubits() != schedule.n_qubits) {
    throw noise_error("propagate_one: initial state size mismatch");
  }
  std::mt19937_64 rng(seed);
  engine.run_one(psi, rng);
  return psi;
}

RunResult run_trajectories(const Schedule& schedule, const DeviceModel& device,
                           const NoiseModel& noise, std::uint64_t n_runs,
                           std::uint64_t master_seed,
                           const StateVector* initial, int n_threads) {
  if (n_runs < 1) throw noise_error("run_trajectories: n_runs must be >= 1");
  if (initial && initial->num_qubits() != schedule.n_qubits) {
    throw noise_error("run_trajectories: initial state size mismatch");
  }
  TrajectoryEngine engine(schedule, device, noise);

  auto run_range = [&](std::uint64_t lo, std::uint64_t hi,
                       std::map<std::uint64_t, std::uint64_t>& counts) {
    for (std::uint64_t r = lo; r < hi; ++r) {
      StateVector psi = initial ? *initial : StateVector(schedule.n_qubits);
      std::mt19937_64 rng(derive_seed(master_seed, r));
      engine.run_one(psi, rng);
      ++counts[engine.measure(psi, rng)];
    }
  };

  RunResult result;
  result.n_qubits = schedule.n_qubits;
  result.n_runs = n_runs;
  result.master_seed = master_seed;
  const int workers =
      std::max(1, std::min<int>(n_threads, static_cast<int>(n_runs)));
  if (workers == 1) {
    run_range(0, n_runs, result.counts);
  } else {
    std::vector<std::map<std::uint64_t, std::uint64_t>> parts(workers);
    std::vector<std::thread> pool;
    const std::uint64_t per = (n_runs + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::uint64_t lo = std::min<std::uint64_t>(w * per, n_runs);
      const std::uint64_t hi = std::min<std::uint64_t>(lo + per, n_runs);
      pool.emplace_back(run_range, lo, hi, std::ref(parts[w]));
    }
    for (auto& t : pool) t.join();
    for (const auto& p : parts) {
      for (const auto& [k, v] : p) result.counts[k] += v;
    }
  }
  return result;
}

}  // namespace daqsim
