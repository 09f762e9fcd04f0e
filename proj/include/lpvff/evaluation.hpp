#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpvff/learning.hpp"
#include "lpvff/plant.hpp"
#include "lpvff/trajectory.hpp"

namespace lpvff {

/// PD feedback on the carriage tracking error, u_fb = kp e + kd e_dot,
/// with e = r0 - y and e_dot = r1 - y_dot. Torque units.
struct ControllerParams {
  double kp = 50.0;  ///< [N m / m]
  double kd = 0.1;   ///< [N m s / m]

  void validate() const;
};

struct TrackingTraces {
  std::vector<double> t;
  std::vector<double> r0;
  std::vector<double> y;  ///< true carriage position
  std::vector<double> e;  ///< r0 - y
  std::vector<double> u_ff;
  std::vector<double> u_fb;
};

struct TrackingResult {
  double e_max = 0.0;
  /// sqrt(sum e^2 * dt), a discretized L2 norm.
  double e_2norm = 0.0;
  TrackingTraces traces;
  /// Carriage position as seen by the controller (with measurement noise).
  std::vector<double> y_measured;
};

struct MeasurementNoise {
  double stddev = 0.0;  ///< [m], added to the position fed back
  std::uint64_t seed = 1;
};

/// Error metrics of a trace set.
std::pair<double, double> tracking_metrics(std::span<const double> e, double dt);

/// Closed-loop run with a precomputed feedforward signal.
///
/// One RK4 step per sample. The feedback part of the input is held over
/// the step; the feedforward, which is known in advance, is interpolated
/// linearly between samples. The plant starts at rest at r0[0].
/// Throws InstabilityError if |e| exceeds 10x the stroke, DomainError when
/// the carriage leaves the stiffness domain.
TrackingResult run_closed_loop(const Trajectory& traj, std::span<const double> u_ff,
                               const ControllerParams& ctrl, const PlantParams& plant,
                               const MeasurementNoise& noise = {});

/// Same, with u_ff synthesized from `model` on the reference schedule, or
/// feedback only when model is null.
TrackingResult run_closed_loop(const Trajectory& traj, const FFModel* model,
                               const ControllerParams& ctrl, const PlantParams& plant,
                               const MeasurementNoise& noise = {});

/// Packs a closed-loop run into the form the learner consumes.
ExperimentLog to_experiment_log(const Trajectory& traj, const TrackingResult& run,
                                const PlantParams& plant);

struct TableRow {
  std::string name;
  double e_max_ratio;
  double e_2_ratio;
};

/// Normalizes both results by the baseline; the first row is exactly (1, 1).
/// Throws MismatchError when the runs differ in horizon or sampling.
std::vector<TableRow> compare_table(const TrackingResult& baseline,
                                    const TrackingResult& developed);

struct Figure3Row {
  double rho;
  double theta2_learned;
  double theta2_true;
};

/// Learned and true snap parameter on n_grid points spanning the domain with
/// 5% of the span clipped at each end.
std::vector<Figure3Row> figure3_data(const FFModel& model, const PlantParams& plant,
                                     std::size_t n_grid);

/// Experiment -> learn -> re-run loop.
struct IdentificationConfig {
  LearnConfig learn;
  int iterations = 5;
  MeasurementNoise noise;
};

struct IdentificationResult {
  FFModel model;
  std::vector<LearnReport> reports;  ///< one per iteration
  ExperimentLog last_log;
};

/// First experiment uses feedback only; each further iteration re-runs with
/// the feedforward learned from the previous log and re-fits.
IdentificationResult identify_feedforward(const Trajectory& traj, const ControllerParams& ctrl,
                                          const PlantParams& plant,
                                          const IdentificationConfig& cfg);

/// Default kernel configuration for the position-dependent model.
LearnConfig default_learn_config(const PlantParams& plant, std::size_t centers = 25,
                                 double lambda = 1e-12);

/// Position-independent mass + snap model: one center, constant kernels
/// with the variances of `developed`, same lambda and domain.
LearnConfig baseline_learn_config(const LearnConfig& developed);

}  // namespace lpvff
