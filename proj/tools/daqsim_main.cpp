// Copyright 2026 The daqsim authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line entry point: runs one experiment recipe and emits CSV.

#include <iostream>

#include <CLI11.hpp>

#include "daqsim/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"daqsim: digital vs digital-analog spin-simulation workbench"};
  app.require_subcommand(1);

  daqsim::ExperimentConfig cfg;
  double cnot_depol = -1.0;
  double readout_flip = -1.0;
  double noise_scale = 1.0;
  bool no_t1 = false, no_t2 = false, no_ct_gates = false, noiseless = false;
  bool no_disorder = false;

  std::vector<CLI::App*> subs;
  for (const auto& name : daqsim::recipe_names()) {
    subs.push_back(app.add_subcommand(name));
  }
  for (auto* sub : subs) {
    sub->add_option("--device", cfg.device_spec,
                    "Device preset name or JSON file");
    sub->add_option("--backend", cfg.backend,
                    "digital | da | theory | all");
    sub->add_option("--trotter", cfg.n_trotter, "Trotter step count");
    sub->add_option("--tmax-us", cfg.tmax_us, "Grid endpoint, microseconds");
    sub->add_option("--points", cfg.points, "Time-grid point count");
    sub->add_option("--shots", cfg.shots, "Trajectories per grid point");
    sub->add_option("--seed", cfg.seed, "Master seed");
    sub->add_option("--out", cfg.out_path, "Output CSV path");
    sub->add_option("--threads", cfg.n_threads, "Worker thread count");
    sub->add_flag("--continuum", cfg.continuum,
                  "Add the dense-oracle series (n <= 10)");
    sub->add_flag("--raw-sum", cfg.raw_sum,
                  "Emit the summed excitation instead of the per-spin mean");
    sub->add_option("--pattern", cfg.pattern,
                    "Initial bitstring, qubit 0 rightmost (disorder recipe)");
    sub->add_option("--realizations", cfg.disorder_realizations,
                    "Disorder realization count");
    sub->add_option("--disorder-factor", cfg.disorder_factor,
                    "Disorder amplitude in units of the mean coupling");
    sub->add_flag("--no-disorder", no_disorder,
                  "Skip the disordered series");
    sub->add_flag("--nonmarkov-noisy", cfg.nonmarkov_noisy,
                  "Add a decoherent trace-distance series");
    sub->add_option("--cnot-depol", cnot_depol,
                    "Two-qubit depolarizing probability (default: device)");
    sub->add_option("--readout-flip", readout_flip,
                    "Readout bit-flip probability (default: device)");
    sub->add_option("--noise-scale", noise_scale,
                    "Global crosstalk scale factor");
    sub->add_flag("--no-t1", no_t1, "Disable amplitude damping");
    sub->add_flag("--no-t2", no_t2, "Disable dephasing");
    sub->add_flag("--no-crosstalk-during-gates", no_ct_gates,
                  "Suspend crosstalk accumulation during gate moments");
    sub->add_flag("--noiseless", noiseless, "Disable every noise channel");
  }

  CLI11_PARSE(app, argc, argv);

  cfg.recipe = app.get_subcommands().front()->get_name();
  if (noiseless) cfg.noise = daqsim::NoiseModel::noiseless();
  cfg.noise.enable_t1 = cfg.noise.enable_t1 && !no_t1;
  cfg.noise.enable_t2 = cfg.noise.enable_t2 && !no_t2;
  if (no_ct_gates) cfg.noise.crosstalk_during_gates = false;
  if (cnot_depol >= 0.0) cfg.noise.cnot_depol = cnot_depol;
  if (readout_flip >= 0.0) cfg.noise.readout_flip = readout_flip;
  cfg.noise.crosstalk_scale = noise_scale;
  if (no_disorder) cfg.disorder = false;

  try {
    const daqsim::CsvTable table = daqsim::run_recipe(cfg);
    if (cfg.out_path.empty()) {
      std::cout << table.to_string();
    } else {
      table.write_file(cfg.out_path);
    }
  } catch (const daqsim::device_error& e) {
    std::cerr << "device error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
