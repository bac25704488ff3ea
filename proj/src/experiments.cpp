// Copyright 2026 The daqsim authors
// SPDX-License-Identifier: Apache-2.0

#include "daqsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "daqsim/compiler.hpp"

namespace daqsim {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<double> make_grid(double tmax_s, int points) {
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    grid[i] = points == 1 ? 0.0 : tmax_s * i / (points - 1);
  }
  return grid;
}

bool want_backend(const ExperimentConfig& cfg, const std::string& b) {
  return cfg.backend == "all" || cfg.backend == b;
}

/// Stable per-(stream, point) seed so a series is reproducible regardless of
/// which other series run.
std::uint64_t point_seed(const ExperimentConfig& cfg, std::uint64_t stream,
                         std::uint64_t point) {
  return derive_seed(cfg.seed, stream * 1000003ull + point);
}

double mean_excited(const StateVector& psi, const std::vector<int>& qubits) {
  double acc = 0.0;
  for (int q : qubits) acc += psi.excited_population(q);
  return acc / static_cast<double>(qubits.size());
}

/// Local indices of the given device qubits inside a closure model.
std::vector<int> locals_of(const SpinModel& model,
                           const std::vector<int>& device_ids) {
  std::vector<int> out;
  for (int id : device_ids) {
    const auto it = std::find(model.device_qubits.begin(),
                              model.device_qubits.end(), id);
    if (it == model.device_qubits.end()) {
      throw experiment_error("device qubit missing from model");
    }
    out.push_back(static_cast<int>(it - model.device_qubits.begin()));
  }
  return out;
}

struct SweepSeries {
  std::string backend;
  std::vector<double> values;
  std::vector<double> stderrs;
};

/// The three-series (theory / da / digital) mean-excitation sweep shared by
/// the two-spin and cluster recipes. `active` lists the local qubits whose
/// excitation is averaged (all model qubits for the cluster runs).
void emit_excitation_sweep(CsvTable& table, const ExperimentConfig& cfg,
                           const DeviceModel& device, const SpinModel& model,
                           const std::vector<int>& active, int n_tr,
                           const std::vector<double>& grid, double j_ref) {
  const bool per_spin = !cfg.raw_sum;
  const double spin_factor =
      per_spin ? 1.0 : static_cast<double>(active.size());
  auto emit = [&](const std::string& backend, double t, double v, double se,
                  std::uint64_t seed) {
    table.rows.push_back({cfg.recipe, backend, t * 1e6, j_ref * t,
                          "mean_excitation", -1, v, se, seed});
  };

  if (want_backend(cfg, "theory")) {
    for (double t : grid) {
      StateVector psi(model.n_spins);
      const auto s = trotterize_digital(model, t, n_tr, nullptr);
      apply_schedule_noiseless(psi, s, nullptr, false);
      emit("theory", t, spin_factor * mean_excited(psi, active), 0.0,
           cfg.seed);
    }
  }
  if (cfg.continuum && model.n_spins <= 10) {
    const auto terms = model.pauli_terms();
    for (double t : grid) {
      const auto u = exact_propagator(model.n_spins, terms, t);
      StateVector psi(model.n_spins);
      const Eigen::VectorXcd col = u.col(0);
      for (std::size_t k = 0; k < psi.size(); ++k) psi[k] = col(k);
      emit("continuum", t, spin_factor * mean_excited(psi, active), 0.0,
           cfg.seed);
    }
  }
  struct Noisy {
    const char* name;
    std::uint64_t stream;
  };
  for (const Noisy nb : {Noisy{"da", 2}, Noisy{"digital", 1}}) {
    if (!want_backend(cfg, nb.name)) continue;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double t = grid[i];
      const Schedule s =
          std::string(nb.name) == "da"
              ? trotterize_da(model, device, t, n_tr)
              : trotterize_digital(model, t, n_tr, &device);
      const std::uint64_t seed = point_seed(cfg, nb.stream, i);
      const RunResult rr = run_trajectories(s, device, cfg.noise, cfg.shots,
                                            seed, nullptr, cfg.n_threads);
      const Counts marg = marginal_counts(rr.counts, active);
      const auto [v, se] =
          mean_excitation(marg, static_cast<int>(active.size()), per_spin);
      emit(nb.name, t, v, se, seed);
    }
  }
}

StateVector bell_env_state(const cplx& t0, const cplx& t1,
                           const std::array<cplx, 4>& env) {
  // Local order: 0 = target, 1 and 2 = environment. env is indexed by
  // (q1, q2) bit pairs as {00, 01, 10, 11}.
  StateVector psi(3);
  for (std::size_t x = 0; x < 8; ++x) {
    const int tb = x & 1;
    const int e = ((x >> 1) & 1) | ((x >> 2) & 1) << 1;
    psi[x] = (tb ? t1 : t0) * env[e];
  }
  return psi;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (points < 1) throw experiment_error("config: points must be >= 1");
  if (shots < 1) throw experiment_error("config: shots must be >= 1");
  if (n_trotter != -1 && n_trotter < 1) {
    throw experiment_error("config: n_trotter must be >= 1");
  }
  if (tmax_us != -1.0 && tmax_us <= 0.0) {
    throw experiment_error("config: tmax_us must be > 0");
  }
  if (n_threads < 1) throw experiment_error("config: n_threads must be >= 1");
  if (disorder_realizations < 1) {
    throw experiment_error("config: disorder_realizations must be >= 1");
  }
  if (disorder_factor <= 0.0) {
    throw experiment_error("config: disorder_factor must be > 0");
  }
  static const std::set<std::string> backends = {"all", "digital", "da",
                                                 "theory"};
  if (!backends.count(backend)) {
    throw experiment_error("config: unknown backend '" + backend + "'");
  }
  noise.validate();
}

std::string CsvTable::to_string() const {
  std::ostringstream out;
  out << "recipe,backend,t_phys_us,t_mapped,observable,qubit,value,stderr,"
         "seed\n";
  for (const auto& r : rows) {
    out << r.recipe << ',' << r.backend << ',' << fmt_double(r.t_phys_us)
        << ',' << fmt_double(r.t_mapped) << ',' << r.observable << ',';
    if (r.qubit >= 0) out << r.qubit;
    out << ',' << fmt_double(r.value) << ',' << fmt_double(r.stderr_v) << ','
        << r.seed << '\n';
  }
  return out.str();
}

void CsvTable::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw experiment_error("cannot open output file: " + path);
  out << to_string();
}

CsvTable CsvTable::parse(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw experiment_error("csv: empty input");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        f.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (f.size() != 9) throw experiment_error("csv: bad field count");
    CsvRow r;
    r.recipe = f[0];
    r.backend = f[1];
    r.t_phys_us = std::stod(f[2]);
    r.t_mapped = std::stod(f[3]);
    r.observable = f[4];
    r.qubit = f[5].empty() ? -1 : std::stoi(f[5]);
    r.value = std::stod(f[6]);
    r.stderr_v = std::stod(f[7]);
    r.seed = std::stoull(f[8]);
    table.rows.push_back(std::move(r));
  }
  return table;
}

CsvTable CsvTable::read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw experiment_error("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::vector<double> CsvTable::series_values(
    const std::string& backend, const std::string& observable) const {
  std::vector<double> out;
  for (const auto& r : rows) {
    if (r.backend == backend && r.observable == observable) {
      out.push_back(r.value);
    }
  }
  return out;
}

DeviceModel resolve_device(const std::string& spec) {
  if (is_device_preset(spec)) return device_preset(spec);
  return load_device_file(spec);
}

Counts marginal_counts(const Counts& counts, const std::vector<int>& qubits) {
  Counts out;
  for (const auto& [idx, c] : counts) {
    std::uint64_t m = 0;
    for (std::size_t k = 0; k < qubits.size(); ++k) {
      if (idx & (std::uint64_t{1} << qubits[k])) m |= std::uint64_t{1} << k;
    }
    out[m] += c;
  }
  return out;
}

CsvTable run_two_spin(const ExperimentConfig& cfg) {
  cfg.validate();
  const DeviceModel device = resolve_device(cfg.device_spec);
  if (!device.coupled(0, 1)) {
    throw experiment_error("two-spin recipe requires a Q0-Q1 coupling");
  }
  const double j01 = khz_to_rad_per_s(device.j_khz(0, 1));
  std::vector<double> h(device.n_qubits(), 0.0);
  h[0] = h[1] = 2.0 * j01;
  const SpinModel base =
      build_tfim(device, FieldRule::explicit_fields(std::move(h)));
  const SpinModel model = spectator_closure(base, device, {0, 1});
  const std::vector<int> active = locals_of(model, {0, 1});
  const int n_tr = cfg.n_trotter > 0 ? cfg.n_trotter : 6;
  const double tmax_s =
      cfg.tmax_us > 0.0 ? us_to_s(cfg.tmax_us) : 2.5 / j01;
  CsvTable table;
  emit_excitation_sweep(table, cfg, device, model, active, n_tr,
                        make_grid(tmax_s, cfg.points), j01);
  return table;
}

CsvTable run_cluster(const ExperimentConfig& cfg) {
  cfg.validate();
  const DeviceModel device = resolve_device(cfg.device_spec);
  const SpinModel model = build_tfim(device, FieldRule::uniform_2jbar());
  const double jbar = model.mean_coupling();
  std::vector<int> active(model.n_spins);
  for (int q = 0; q < model.n_spins; ++q) active[q] = q;
  const int n_tr =
      cfg.n_trotter > 0 ? cfg.n_trotter : (model.n_spins >= 10 ? 3 : 6);
  const double tmax_s =
      cfg.tmax_us > 0.0 ? us_to_s(cfg.tmax_us) : 2.5 / jbar;
  CsvTable table;
  emit_excitation_sweep(table, cfg, device, model, active, n_tr,
                        make_grid(tmax_s, cfg.points), jbar);
  return table;
}

CsvTable run_disorder(const ExperimentConfig& cfg) {
  cfg.validate();
  const DeviceModel device = resolve_device(cfg.device_spec);
  const int n = device.n_qubits();
  std::string pattern = cfg.pattern;
  if (pattern.empty()) {
    // Default domain wall: the lower half of the register starts excited.
    pattern.assign(n, '0');
    for (int q = 0; q < n / 2; ++q) pattern[n - 1 - q] = '1';
  }
  if (static_cast<int>(pattern.size()) != n) {
    throw experiment_error("disorder recipe: pattern length mismatch");
  }
  std::uint64_t init = 0;
  std::set<int> up, down;
  for (int q = 0; q < n; ++q) {
    const char c = pattern[n - 1 - q];  // qubit 0 is the rightmost character
    if (c == '1') {
      init |= std::uint64_t{1} << q;
      up.insert(q);
    } else if (c == '0') {
      down.insert(q);
    } else {
      throw experiment_error("disorder recipe: pattern must be 0/1");
    }
  }
  if (up.empty() || down.empty()) {
    throw experiment_error("disorder recipe: pattern must mix 0s and 1s");
  }

  const std::string backend = cfg.backend == "digital" ? "digital" : "da";
  const int n_tr = cfg.n_trotter > 0 ? cfg.n_trotter : 6;
  const SpinModel clean = build_tfim(device, FieldRule::uniform_2jbar());
  const double jbar = clean.mean_coupling();
  const double tmax_s =
      cfg.tmax_us > 0.0 ? us_to_s(cfg.tmax_us) : 2.5 / jbar;
  const auto grid = make_grid(tmax_s, cfg.points);
  const StateVector initial = StateVector::basis(n, init);

  CsvTable table;
  auto run_one_model = [&](const SpinModel& model, std::uint64_t stream,
                           std::size_t point) {
    const Schedule s = backend == "da"
                           ? trotterize_da(model, device, grid[point], n_tr)
                           : trotterize_digital(model, grid[point], n_tr,
                                                &device);
    const RunResult rr =
        run_trajectories(s, device, cfg.noise, cfg.shots,
                         point_seed(cfg, stream, point), &initial,
                         cfg.n_threads);
    return magnetization_pattern(rr.counts, n);
  };

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t_us = grid[i] * 1e6;
    const double t_map = jbar * grid[i];
    {
      const auto m = run_one_model(clean, 10, i);
      for (int q = 0; q < n; ++q) {
        table.rows.push_back({cfg.recipe, backend, t_us, t_map, "m_clean", q,
                              m[q], 0.0, cfg.seed});
      }
      table.rows.push_back({cfg.recipe, backend, t_us, t_map,
                            "half_difference_clean", -1,
                            half_difference(m, up, down), 0.0, cfg.seed});
    }
    if (!cfg.disorder) continue;
    std::vector<double> m_avg(n, 0.0);
    std::vector<double> hd(cfg.disorder_realizations);
    for (int r = 0; r < cfg.disorder_realizations; ++r) {
      DisorderSpec ds;
      ds.amplitude_factor = cfg.disorder_factor;
      ds.seed = derive_seed(cfg.seed, 5000 + r);
      const SpinModel dis =
          build_tfim(device, FieldRule::uniform_2jbar(), ds);
      const auto m = run_one_model(dis, 20 + r, i);
      for (int q = 0; q < n; ++q) m_avg[q] += m[q];
      hd[r] = half_difference(m, up, down);
    }
    const double nr = static_cast<double>(cfg.disorder_realizations);
    for (int q = 0; q < n; ++q) {
      table.rows.push_back({cfg.recipe, backend, t_us, t_map, "m_disordered",
                            q, m_avg[q] / nr, 0.0, cfg.seed});
    }
    double mean = 0.0;
    for (double v : hd) mean += v;
    mean /= nr;
    double var = 0.0;
    for (double v : hd) var += (v - mean) * (v - mean);
    const double se =
        cfg.disorder_realizations > 1 ? std::sqrt(var / (nr * (nr - 1))) : 0.0;
    table.rows.push_back({cfg.recipe, backend, t_us, t_map,
                          "half_difference_disordered", -1, mean, se,
                          cfg.seed});
  }
  return table;
}

CsvTable run_qft(const ExperimentConfig& cfg) {
  cfg.validate();
  const DeviceModel device = resolve_device(cfg.device_spec);
  const std::array<int, 3> triple = {0, 1, 2};
  const Schedule s_da = qft_da(device, triple);
  Schedule s_dig = qft_digital(3, &device);
  s_dig.device_ids = {0, 1, 2};
  const Eigen::MatrixXcd ideal_u = schedule_unitary(s_dig, &device, false);

  CsvTable table;
  auto label = [](std::uint64_t input, const std::string& what) {
    return "in" + to_bitstring(input, 3) + ":" + what;
  };
  for (std::uint64_t input = 0; input < 8; ++input) {
    std::vector<double> ideal(8);
    for (int k = 0; k < 8; ++k) ideal[k] = std::norm(ideal_u(k, input));
    for (int k = 0; k < 8; ++k) {
      table.rows.push_back({cfg.recipe, "ideal", 0.0, 0.0,
                            label(input, "p" + to_bitstring(k, 3)), -1,
                            ideal[k], 0.0, cfg.seed});
    }
    const StateVector initial = StateVector::basis(3, input);
    struct Cand {
      const char* name;
      const Schedule* s;
      std::uint64_t stream;
    };
    for (const Cand c : {Cand{"da", &s_da, 40}, Cand{"digital", &s_dig, 41}}) {
      if (!want_backend(cfg, c.name)) continue;
      const std::uint64_t seed = point_seed(cfg, c.stream, input);
      const RunResult rr = run_trajectories(*c.s, device, cfg.noise,
                                            cfg.shots, seed, &initial,
                                            cfg.n_threads);
      const auto p = rr.probabilities();
      const double t_us = c.s->total_phys_time_s() * 1e6;
      for (int k = 0; k < 8; ++k) {
        table.rows.push_back({cfg.recipe, c.name, t_us, 0.0,
                              label(input, "p" + to_bitstring(k, 3)), -1,
                              p[k], 0.0, seed});
      }
      table.rows.push_back({cfg.recipe, c.name, t_us, 0.0,
                            label(input, "trace_distance"), -1,
                            trace_distance_classical(p, ideal), 0.0, seed});
      table.rows.push_back({cfg.recipe, c.name, t_us, 0.0,
                            label(input, "bhattacharyya"), -1,
                            bhattacharyya(p, ideal), 0.0, seed});
    }
  }
  return table;
}

CsvTable run_nonmarkov(const ExperimentConfig& cfg) {
  cfg.validate();
  const DeviceModel device = resolve_device(cfg.device_spec);
  if (!device.coupled(0, 1) || !device.coupled(0, 2)) {
    throw experiment_error(
        "nonmarkov recipe requires target qubit 0 coupled to qubits 1 and 2");
  }
  const double j01 = khz_to_rad_per_s(device.j_khz(0, 1));
  const double j02 = khz_to_rad_per_s(device.j_khz(0, 2));
  const double tmax_s = cfg.tmax_us > 0.0 ? us_to_s(cfg.tmax_us) : 10e-6;
  const auto grid = make_grid(tmax_s, cfg.points);
  const std::vector<int> ids = {0, 1, 2};

  const double r2 = 1.0 / std::sqrt(2.0);
  struct Env {
    const char* name;
    BellState bell;
    std::array<cplx, 4> amps;
  };
  const std::vector<Env> envs = {
      {"phi+", BellState::PhiPlus, {r2, 0.0, 0.0, r2}},
      {"phi-", BellState::PhiMinus, {r2, 0.0, 0.0, -r2}},
      {"psi+", BellState::PsiPlus, {0.0, r2, r2, 0.0}},
      {"psi-", BellState::PsiMinus, {0.0, r2, -r2, 0.0}},
  };

  CsvTable table;
  auto reduced = [&](const StateVector& init, double t) {
    StateVector psi = init;
    const auto terms = crosstalk_phase_for(device, ids, t);
    psi.apply_zz_phase(terms);
    return psi.partial_trace_single(0);
  };

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    const double t_us = t * 1e6;
    for (const auto& env : envs) {
      const auto rho_p = reduced(bell_env_state(r2, r2, env.amps), t);
      const auto rho_m = reduced(bell_env_state(r2, -r2, env.amps), t);
      table.rows.push_back({cfg.recipe, "sim", t_us, 0.0,
                            std::string("D_") + env.name, -1,
                            trace_distance_quantum(rho_p, rho_m), 0.0,
                            cfg.seed});
      table.rows.push_back({cfg.recipe, "analytic", t_us, 0.0,
                            std::string("D_") + env.name, -1,
                            analytic_bell_trace_distance(j01, j02, t,
                                                         env.bell),
                            0.0, cfg.seed});
    }
    {
      const auto rho_0 = reduced(bell_env_state(1.0, 0.0, envs[0].amps), t);
      const auto rho_1 = reduced(bell_env_state(0.0, 1.0, envs[0].amps), t);
      table.rows.push_back({cfg.recipe, "sim", t_us, 0.0, "D_null", -1,
                            trace_distance_quantum(rho_0, rho_1), 0.0,
                            cfg.seed});
    }
    if (cfg.nonmarkov_noisy) {
      Schedule s;
      s.n_qubits = 3;
      s.device_ids = ids;
      if (t > 0.0) s.moments.push_back(Moment::idle(t));
      s.moments.push_back(Moment::measure());
      for (const auto& env : envs) {
        Eigen::Matrix2cd rho_p = Eigen::Matrix2cd::Zero();
        Eigen::Matrix2cd rho_m = Eigen::Matrix2cd::Zero();
        const StateVector ip = bell_env_state(r2, r2, env.amps);
        const StateVector im = bell_env_state(r2, -r2, env.amps);
        for (std::uint64_t r = 0; r < cfg.shots; ++r) {
          const std::uint64_t seed =
              derive_seed(point_seed(cfg, 60, i), r);
          rho_p += propagate_one(s, device, cfg.noise, seed, &ip)
                       .partial_trace_single(0);
          rho_m += propagate_one(s, device, cfg.noise, derive_seed(seed, 1),
                                 &im)
                       .partial_trace_single(0);
        }
        rho_p /= static_cast<double>(cfg.shots);
        rho_m /= static_cast<double>(cfg.shots);
        table.rows.push_back({cfg.recipe, "noisy", t_us, 0.0,
                              std::string("D_") + env.name, -1,
                              trace_distance_quantum(rho_p, rho_m), 0.0,
                              cfg.seed});
      }
    }
  }
  return table;
}

CsvTable run_optimal_coupling(const ExperimentConfig& cfg) {
  cfg.validate();
  const double t_1q_s = 50e-9;
  CsvTable table;
  for (double t_coh_us = 50.0; t_coh_us <= 100.0 + 1e-9; t_coh_us += 10.0) {
    const double t_coh_s = us_to_s(t_coh_us);
    const OptimalCoupling oc = optimal_coupling(t_1q_s, t_coh_s);
    const double budget = khz_to_rad_per_s(oc.j_opt_khz) * t_coh_s;
    table.rows.push_back({cfg.recipe, "analytic", t_coh_us, 0.0, "j_opt_khz",
                          -1, oc.j_opt_khz, 0.0, cfg.seed});
    table.rows.push_back({cfg.recipe, "analytic", t_coh_us, 0.0, "min_error",
                          -1, oc.min_error, 0.0, cfg.seed});
    table.rows.push_back({cfg.recipe, "analytic", t_coh_us, 0.0,
                          "step_budget", -1, budget, 0.0, cfg.seed});
  }
  // Where the modeled chips sit relative to the optimum (60 kHz scale).
  const DeviceModel device = resolve_device(cfg.device_spec);
  double jbar = 0.0;
  for (const auto& c : device.couplings) jbar += c.j_khz;
  jbar /= static_cast<double>(device.couplings.size());
  const OptimalCoupling ref = optimal_coupling(t_1q_s, us_to_s(100.0));
  table.rows.push_back({cfg.recipe, "analytic", 100.0, 0.0,
                        "device_j_over_j_opt", -1, jbar / ref.j_opt_khz, 0.0,
                        cfg.seed});
  return table;
}

CsvTable run_recipe(const ExperimentConfig& cfg) {
  if (cfg.recipe == "two-spin") return run_two_spin(cfg);
  if (cfg.recipe == "cluster") return run_cluster(cfg);
  if (cfg.recipe == "disorder") return run_disorder(cfg);
  if (cfg.recipe == "qft") return run_qft(cfg);
  if (cfg.recipe == "nonmarkov") return run_nonmarkov(cfg);
  if (cfg.recipe == "optimal-coupling") return run_optimal_coupling(cfg);
  throw experiment_error("unknown recipe: " + cfg.recipe);
}

std::vector<std::string> recipe_names() {
  return {"two-spin", "cluster",   "disorder",
          "qft",      "nonmarkov", "optimal-coupling"};
}

}  // namespace daqsim
