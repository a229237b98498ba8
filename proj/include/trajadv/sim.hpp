#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "trajadv/advancement.hpp"
#include "trajadv/controller.hpp"
#include "trajadv/dynamics.hpp"
#include "trajadv/trajectory.hpp"
#include "trajadv/wrench.hpp"

namespace trajadv {

enum class ControllerVariant { Classical, Exploiting };
enum class Integrator { Rk4, SemiImplicitEuler };

// Scaling of the six preset test wrenches onto a concrete model.
struct SweepSettings {
  double start = 9.625;       // s; pulse midpoint at psi = 10 where the path moves along +x
  double duration = 0.75;     // s
  double force_scale = 1.0;   // multiplies the preset force/torque vectors
  double noise_std = 0.0;
};

struct ScenarioConfig {
  RobotModel model;
  RobotState initial;            // empty vectors mean all zeros
  ReferenceTrajectory trajectory;
  bool base_pose_from_initial = true;  // anchor the path at the initial tracked-link pose
  Gains gains = Gains::diagonal(25.0, 10.0);
  TaskSelection task_rows = TaskSelection::only({kX});
  PseudoInverseOptions pinv;
  double posture_damping = 0.0;  // kd of the null-space joint damping torque
  AdvancementConfig advancement;
  ControllerVariant controller_variant = ControllerVariant::Exploiting;
  std::vector<WrenchEvent> wrench_events;
  SweepSettings sweep;
  double duration = 20.0;
  double dt = 1e-3;
  std::uint64_t seed = 0;
  Integrator integrator = Integrator::Rk4;

  // Throws ConfigError.
  void validate() const;
  std::size_t step_count() const;
};

struct LogRecord {
  double t = 0.0;
  double psi = 0.0;
  double psidot = 1.0;
  double psiddot = 0.0;
  Vector6d x = Vector6d::Zero();
  Vector6d x_d = Vector6d::Zero();
  Vector6d xdot = Vector6d::Zero();
  Vector6d xdot_d = Vector6d::Zero();
  Vector6d tracking_err = Vector6d::Zero();  // x - x_d
  Eigen::VectorXd tau;
  Wrench f_ext;
  double alpha = 0.0;
  double V = 0.0;
  std::optional<WrenchClass> wrench_class;
  // Normalized update-rule stability residual of the psidot that produced
  // this record; <= 0 when the condition holds, 0 when not applicable.
  double sdot_residual = 0.0;
};

// Deterministic fixed-step closed loop: one record per step including t = 0
// and t = duration. Errors from any module are rethrown with the step index.
std::vector<LogRecord> run(const ScenarioConfig& config);

// Integrates one step with torque and wrench held constant.
RobotState integrate_step(const RobotModel& model, const RobotState& state,
                          const Eigen::VectorXd& tau, const Wrench& f_ext, double dt,
                          Integrator integrator);

struct RunSummary {
  double delta_psi = 0.0;  // psi(end) - duration
  double peak_psidot = 1.0;
  double rms_tracking_err = 0.0;  // over the active task rows
  double peak_alpha = 0.0;
};

RunSummary summarize(const ScenarioConfig& config, const std::vector<LogRecord>& log);

struct SweepCase {
  std::string label;
  WrenchEvent event;
};

struct SweepOutcome {
  std::string label;
  WrenchEvent event;
  RunSummary summary;
  std::vector<LogRecord> log;
};

// One run per case, each replacing the base scenario's wrench events. Runs
// are independent and may execute concurrently; output order follows input.
std::vector<SweepOutcome> sweep(const ScenarioConfig& base, const std::vector<SweepCase>& cases);

// Named wrench-event presets. "table1": the six test wrenches (a)-(f) scaled
// by settings.force_scale, one raised-cosine pulse each. Throws ConfigError
// for an unknown name.
std::vector<SweepCase> preset_cases(const std::string& name, const SweepSettings& settings);
const std::vector<std::string>& preset_names();

}  // namespace trajadv
