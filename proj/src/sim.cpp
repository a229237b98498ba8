#include "trajadv/sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include <fmt/core.h>

#include "trajadv/errors.hpp"

namespace trajadv {

namespace {

void check_axis_active(const ReferenceTrajectory& traj, const TaskSelection& rows) {
  if (traj.kind == TrajectoryKind::Composite) {
    for (const auto& c : traj.components) check_axis_active(c, rows);
    return;
  }
  if (traj.kind != TrajectoryKind::Sinusoid1D) return;
  for (int r = 0; r < 6; ++r) {
    if (traj.axis[r] != 0.0 && !rows.active(r)) {
      throw ConfigError(fmt::format("trajectory moves along task row '{}' which is not active",
                                    kTaskRowSuffix[r]));
    }
  }
}

[[noreturn]] void rethrow_at_step(std::size_t step) {
  try {
    throw;
  } catch (const DegenerateModelError& e) {
    throw DegenerateModelError(fmt::format("step {}: {}", step, e.what()));
  } catch (const InputError& e) {
    throw InputError(fmt::format("step {}: {}", step, e.what()));
  } catch (const DomainError& e) {
    throw DomainError(fmt::format("step {}: {}", step, e.what()));
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("step {}: {}", step, e.what()));
  }
}

struct StateDerivative {
  Eigen::VectorXd qdot;
  Eigen::VectorXd nudot;
};

StateDerivative derivative(const RobotModel& model, const RobotState& s, const Eigen::VectorXd& tau,
                           const Wrench& f) {
  return {s.nu, forward_dynamics(model, s, tau, f)};
}

RobotState offset(const RobotState& s, const StateDerivative& d, double h) {
  return {s.q + h * d.qdot, s.nu + h * d.nudot};
}

}  // namespace

std::size_t ScenarioConfig::step_count() const {
  return static_cast<std::size_t>(std::llround(duration / dt));
}

void ScenarioConfig::validate() const {
  model.validate();
  const auto n = static_cast<Eigen::Index>(model.dof());
  if ((initial.q.size() != 0 && initial.q.size() != n) ||
      (initial.nu.size() != 0 && initial.nu.size() != n)) {
    throw ConfigError(fmt::format("initial state must have {} entries per vector", n));
  }
  if (!initial.q.allFinite() || !initial.nu.allFinite()) {
    throw ConfigError("initial state must be finite");
  }
  trajectory.validate();
  gains.validate();
  if (task_rows.count() == 0) throw ConfigError("at least one task row must be active");
  check_axis_active(trajectory, task_rows);
  if (!(pinv.relative_cutoff > 0.0) || !(pinv.damping >= 0.0)) {
    throw ConfigError("pseudo-inverse cutoff must be > 0 and damping >= 0");
  }
  if (!(posture_damping >= 0.0) || !std::isfinite(posture_damping)) {
    throw ConfigError("posture_damping must be >= 0");
  }
  advancement.validate();
  for (const auto& e : wrench_events) e.validate();
  if (!(duration > 0.0) || !std::isfinite(duration)) throw ConfigError("duration must be > 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be > 0");
  if (dt > duration) throw ConfigError("dt must not exceed duration");
  const double steps = duration / dt;
  if (std::abs(steps - std::round(steps)) > 1e-6 * std::max(1.0, steps)) {
    throw ConfigError(fmt::format("duration {} is not a whole number of steps of {}", duration, dt));
  }
  if (!(sweep.duration > 0.0) || !(sweep.start >= 0.0) || !std::isfinite(sweep.force_scale) ||
      !(sweep.noise_std >= 0.0)) {
    throw ConfigError("invalid sweep settings");
  }
}

RobotState integrate_step(const RobotModel& model, const RobotState& state,
                          const Eigen::VectorXd& tau, const Wrench& f_ext, double dt,
                          Integrator integrator) {
  if (integrator == Integrator::SemiImplicitEuler) {
    const Eigen::VectorXd nudot = forward_dynamics(model, state, tau, f_ext);
    RobotState next;
    next.nu = state.nu + dt * nudot;
    next.q = state.q + dt * next.nu;
    return next;
  }
  const StateDerivative k1 = derivative(model, state, tau, f_ext);
  const StateDerivative k2 = derivative(model, offset(state, k1, 0.5 * dt), tau, f_ext);
  const StateDerivative k3 = derivative(model, offset(state, k2, 0.5 * dt), tau, f_ext);
  const StateDerivative k4 = derivative(model, offset(state, k3, dt), tau, f_ext);
  RobotState next;
  next.q = state.q + (dt / 6.0) * (k1.qdot + 2.0 * k2.qdot + 2.0 * k3.qdot + k4.qdot);
  next.nu = state.nu + (dt / 6.0) * (k1.nudot + 2.0 * k2.nudot + 2.0 * k3.nudot + k4.nudot);
  return next;
}

std::vector<LogRecord> run(const ScenarioConfig& cfg) {
  cfg.validate();
  const RobotModel& model = cfg.model;
  const AdvancementConfig& adv_cfg = cfg.advancement;
  const auto n = static_cast<Eigen::Index>(model.dof());

  RobotState state = RobotState::zero(model);
  if (cfg.initial.q.size() != 0) state.q = cfg.initial.q;
  if (cfg.initial.nu.size() != 0) state.nu = cfg.initial.nu;

  ReferenceTrajectory traj = cfg.trajectory;
  if (cfg.base_pose_from_initial) traj.base_pose = forward_kinematics(model, state).as_vector();

  const Matrix6d S = cfg.task_rows.selector();
  const CounterRng rng(cfg.seed);
  const std::size_t steps = cfg.step_count();

  AdvancementState adv;
  Vector6d integral = Vector6d::Zero();
  double pending_residual = 0.0;

  std::vector<LogRecord> log;
  log.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    try {
      const double t = static_cast<double>(k) * cfg.dt;
      Wrench f;
      for (std::size_t i = 0; i < cfg.wrench_events.size(); ++i) {
        f += evaluate_event(cfg.wrench_events[i], t, rng, k, i);
      }

      const DynamicsQuantities dyn = compute_dynamics(model, state);
      const TaskJacobian jac = task_jacobian(model, state);
      const Vector6d xdot = jac.J * state.nu;
      const TrajectorySample s = sample(traj, adv.psi);
      const ReferenceKinematics ref = reference_kinematics(
          s, adv.psidot, adv_cfg.psiddot_feedforward ? adv.psiddot : 0.0);

      const TaskError err{S * (xdot - ref.xdot_d), integral};
      const ControlMatrices cm = control_matrices(dyn, jac, state, cfg.task_rows, cfg.pinv);
      const Decomposition dec = decompose_interaction(cm, f, S * ref.xdot_d);
      const Vector6d xddot_star = cfg.controller_variant == ControllerVariant::Exploiting
                                      ? exploiting_desired_acceleration(ref.xddot_d, err, cfg.gains, dec)
                                      : desired_acceleration(ref.xddot_d, err, cfg.gains);
      const Eigen::VectorXd tau0 = cfg.posture_damping > 0.0
                                       ? posture_damping(state, cfg.posture_damping)
                                       : Eigen::VectorXd();
      const Eigen::VectorXd tau = control_torques(cm, xddot_star, f, tau0);

      LogRecord rec;
      rec.t = t;
      rec.psi = adv.psi;
      rec.psidot = adv.psidot;
      rec.psiddot = adv.psiddot;
      rec.x = forward_kinematics(model, state).as_vector();
      rec.x_d = s.x_d;
      rec.xdot = xdot;
      rec.xdot_d = ref.xdot_d;
      rec.tracking_err = rec.x - rec.x_d;
      rec.tau = tau;
      rec.f_ext = f;
      rec.alpha = dec.alpha;
      rec.V = lyapunov_value(err, cfg.gains);
      if (f.as_vector().squaredNorm() > 0.0 && ref.xdot_d.norm() >= kVelocitySingularity) {
        rec.wrench_class = classify(f, ref.xdot_d);
      }
      rec.sdot_residual = pending_residual;
      log.push_back(std::move(rec));
      if (k == steps) break;

      const RobotState next = integrate_step(model, state, tau, f, cfg.dt, cfg.integrator);
      const Vector6d xdot_next = task_jacobian(model, next).J * next.nu;

      // The update sees the velocity produced by the torque just applied
      // (one step of delay) and the path tangent at the predicted psi.
      const TrajectorySample predicted = sample(traj, adv.psi + adv.psidot * cfg.dt);
      double psidot_new = 1.0;
      switch (adv_cfg.law) {
        case AdvancementLaw::Frozen:
          psidot_new = 1.0;
          break;
        case AdvancementLaw::Proposition1:
          psidot_new = psidot_update(xdot_next, predicted.dpsi_x_d, adv_cfg);
          break;
        case AdvancementLaw::Appendix:
          psidot_new = psidot_update_appendix(xdot_next, predicted.dpsi_x_d,
                                              cm.Omega * f.as_vector(), adv_cfg);
          break;
      }

      pending_residual = 0.0;
      if (adv_cfg.law == AdvancementLaw::Proposition1 && dec.alpha > 0.0 &&
          psidot_new < adv_cfg.psidot_upper) {
        const double r = sdot_condition_residual(xdot_next, predicted.dpsi_x_d, psidot_new,
                                                 adv_cfg.epsilon_reg);
        const double scale =
            std::max({std::abs(xdot_next.dot(predicted.dpsi_x_d) * psidot_new),
                      (predicted.dpsi_x_d.squaredNorm() + adv_cfg.epsilon_reg) * psidot_new * psidot_new,
                      1e-300});
        pending_residual = r / scale;
      }

      adv = advance(adv, psidot_new, cfg.dt, adv_cfg);
      const TrajectorySample after = sample(traj, adv.psi);
      const Vector6d err_next = S * (xdot_next - after.dpsi_x_d * adv.psidot);
      integral += 0.5 * cfg.dt * (err.vel_err + err_next);
      state = next;
      if (!state.q.allFinite() || !state.nu.allFinite() || state.q.size() != n) {
        throw InputError("integration produced a non-finite state");
      }
    } catch (const Error&) {
      rethrow_at_step(k);
    }
  }
  return log;
}

RunSummary summarize(const ScenarioConfig& config, const std::vector<LogRecord>& log) {
  RunSummary out;
  if (log.empty()) return out;
  const Matrix6d S = config.task_rows.selector();
  out.delta_psi = log.back().psi - config.duration;
  double sq = 0.0;
  out.peak_alpha = log.front().alpha;
  out.peak_psidot = log.front().psidot;
  for (const auto& r : log) {
    out.peak_psidot = std::max(out.peak_psidot, r.psidot);
    out.peak_alpha = std::max(out.peak_alpha, r.alpha);
    sq += (S * r.tracking_err).squaredNorm();
  }
  out.rms_tracking_err = std::sqrt(sq / static_cast<double>(log.size()));
  return out;
}

std::vector<SweepOutcome> sweep(const ScenarioConfig& base, const std::vector<SweepCase>& cases) {
  auto one = [&base](const SweepCase& c) {
    ScenarioConfig cfg = base;
    cfg.wrench_events = {c.event};
    SweepOutcome out{c.label, c.event, {}, run(cfg)};
    out.summary = summarize(cfg, out.log);
    return out;
  };

  std::vector<SweepOutcome> outcomes;
  outcomes.reserve(cases.size());
  if (std::thread::hardware_concurrency() > 1 && cases.size() > 1) {
    std::vector<std::future<SweepOutcome>> futures;
    futures.reserve(cases.size());
    for (const auto& c : cases) futures.push_back(std::async(std::launch::async, one, std::cref(c)));
    for (auto& f : futures) outcomes.push_back(f.get());
  } else {
    for (const auto& c : cases) outcomes.push_back(one(c));
  }
  return outcomes;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"table1"};
  return names;
}

std::vector<SweepCase> preset_cases(const std::string& name, const SweepSettings& settings) {
  if (name != "table1") throw ConfigError(fmt::format("unknown wrench preset '{}'", name));
  std::vector<SweepCase> cases;
  for (const auto& row : table1_wrenches()) {
    WrenchEvent e;
    e.start = settings.start;
    e.duration = settings.duration;
    e.peak = settings.force_scale * row.wrench;
    e.profile = PulseProfile::Smooth;
    e.noise_std = settings.noise_std;
    cases.push_back({row.label, e});
  }
  return cases;
}

}  // namespace trajadv
