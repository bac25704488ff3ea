// Copyright 2026 The daqsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "daqsim/device.hpp"
#include "daqsim/metrics.hpp"
#include "daqsim/model.hpp"
#include "daqsim/noise.hpp"

namespace daqsim {

struct experiment_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Full parameterization of one recipe run. Negative / empty fields mean
/// "recipe default".
struct ExperimentConfig {
  std::string recipe;
  std::string device_spec = "qx14-like";  // preset name or JSON file path
  std::string backend = "all";            // digital | da | theory | all
  int n_trotter = -1;
  double tmax_us = -1.0;
  int points = 25;
  std::uint64_t shots = 8192;
  std::uint64_t seed = 1;
  std::string out_path;
  bool continuum = false;
  bool raw_sum = false;      // emit the unnormalized excitation sum
  int n_threads = 1;

  NoiseModel noise;

  bool disorder = true;      // disorder recipe: include disordered series
  double disorder_factor = 2.0;
  int disorder_realizations = 10;
  std::string pattern;       // initial bitstring, qubit 0 rightmost

  bool nonmarkov_noisy = false;  // add decoherent series to the nonmarkov run

  void validate() const;
};

/// One CSV record. qubit < 0 renders as an empty field.
struct CsvRow {
  std::string recipe;
  std::string backend;
  double t_phys_us = 0.0;
  double t_mapped = 0.0;
  std::string observable;
  int qubit = -1;
  double value = 0.0;
  double stderr_v = 0.0;
  std::uint64_t seed = 0;
};

struct CsvTable {
  std::vector<CsvRow> rows;

  std::string to_string() const;
  void write_file(const std::string& path) const;
  static CsvTable parse(const std::string& text);
  static CsvTable read_file(const std::string& path);

  /// Values of one (backend, observable) series in row order.
  std::vector<double> series_values(const std::string& backend,
                                    const std::string& observable) const;
};

DeviceModel resolve_device(const std::string& spec);

/// Restriction of a count table to a subset of qubits (marginal outcomes).
Counts marginal_counts(const Counts& counts, const std::vector<int>& qubits);

CsvTable run_two_spin(const ExperimentConfig& cfg);
CsvTable run_cluster(const ExperimentConfig& cfg);
CsvTable run_disorder(const ExperimentConfig& cfg);
CsvTable run_qft(const ExperimentConfig& cfg);
CsvTable run_nonmarkov(const ExperimentConfig& cfg);
CsvTable run_optimal_coupling(const ExperimentConfig& cfg);

/// Dispatch by cfg.recipe.
CsvTable run_recipe(const ExperimentConfig& cfg);

std::vector<std::string> recipe_names();

}  // namespace daqsim
