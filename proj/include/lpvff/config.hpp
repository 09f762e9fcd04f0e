#pragma once

#include <cstdint>
#include <string>

#include "lpvff/evaluation.hpp"
#include "lpvff/kernel.hpp"
#include "lpvff/plant.hpp"

namespace lpvff {

struct TrajectoryConfig {
  double y_start = 0.15;  ///< [m]
  double y_end = 0.85;    ///< [m]
  double duration = 0.5;  ///< [s]
  double dt = 1e-4;       ///< [s]
  double t_total = 0.7;   ///< [s]
};

struct KernelConfig {
  std::size_t centers = 25;
  double lambda = 1e-12;
  bool lambda_grid = false;
  KernelSpec theta1 = KernelSpec::squared_exponential(1e-6, 100.0);
  KernelSpec theta2 =
      KernelSpec::squared_exponential(1e-17, 0.15) + KernelSpec::periodic(1e-17, 1.0, 5.0);
};

struct RunConfig {
  PlantParams plant;
  ControllerParams controller;
  TrajectoryConfig trajectory;
  KernelConfig kernels;
  int iterations = 5;
  double noise_std = 0.0;  ///< [m]
  std::string output_dir = "out";
  std::uint64_t seed = 1;

  /// Cross-section checks (trajectory inside the rho domain and so on).
  /// Throws InvalidArgument naming the offending key.
  void validate() const;
};

/// Parses the INI-style config. Every key is optional (defaults apply) but
/// unknown sections and keys, duplicates and malformed values are errors.
/// Throws ParseError carrying the line of the offending entry.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");

/// Throws ParseError(path, 0, ...) when the file cannot be read.
RunConfig load_config(const std::string& path);

/// Complete config with every key spelled out; parse_config(dump_config(c))
/// reproduces c exactly.
std::string dump_config(const RunConfig& cfg);

Trajectory make_trajectory(const RunConfig& cfg);
LearnConfig make_learn_config(const RunConfig& cfg);
IdentificationConfig make_identification_config(const RunConfig& cfg);

}  // namespace lpvff
