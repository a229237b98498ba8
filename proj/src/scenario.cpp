#include "trajadv/scenario.hpp"

#include <fmt/core.h>

#include "trajadv/errors.hpp"
#include "yaml_reader.hpp"

namespace trajadv {

namespace {

using detail::YamlReader;

void set_path(YAML::Node node, const std::vector<std::string>& keys, std::size_t i,
              const YAML::Node& value, const std::string& text) {
  const std::string& key = keys[i];
  const bool last = i + 1 == keys.size();
  if (node.IsSequence()) {
    std::size_t index = 0;
    try {
      index = std::stoul(key);
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("--set {}: '{}' is not a list index", text, key));
    }
    if (index >= node.size()) {
      throw ConfigError(fmt::format("--set {}: index {} out of range", text, index));
    }
    if (last) {
      node[index] = value;
    } else {
      set_path(node[index], keys, i + 1, value, text);
    }
    return;
  }
  if (node.IsDefined() && !node.IsMap() && !node.IsNull()) {
    throw ConfigError(fmt::format("--set {}: cannot descend into a scalar at '{}'", text, key));
  }
  if (last) {
    node[key] = value;
  } else {
    set_path(node[key], keys, i + 1, value, text);
  }
}

void apply_override(YAML::Node& root, const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError(fmt::format("--set expects key=value, got '{}'", text));
  }
  const std::string path = text.substr(0, eq);
  YAML::Node value;
  try {
    value = YAML::Load(text.substr(eq + 1));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(fmt::format("--set {}: {}", text, e.msg));
  }
  std::vector<std::string> keys;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    keys.push_back(path.substr(start, dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  for (const auto& k : keys) {
    if (k.empty()) throw ConfigError(fmt::format("--set {}: empty key segment", text));
  }
  set_path(root, keys, 0, value, text);
}

Matrix6d decode_gain(const YAML::Node& node, const YamlReader& rd, const std::string& what) {
  if (node.IsScalar()) return rd.number(node, what) * Matrix6d::Identity();
  rd.expect_sequence(node, what);
  if (node.size() == 6 && node[0].IsScalar()) {
    return rd.vector(node, what, 6).asDiagonal();
  }
  if (node.size() != 6) rd.fail(node, fmt::format("{} must be a scalar, 6 diagonal entries or 6x6", what));
  Matrix6d K;
  for (std::size_t r = 0; r < 6; ++r) {
    K.row(static_cast<Eigen::Index>(r)) = rd.vector(node[r], fmt::format("{}[{}]", what, r), 6).transpose();
  }
  return K;
}

ReferenceTrajectory decode_trajectory(const YAML::Node& node, const YamlReader& rd,
                                      bool& base_from_initial, bool top_level) {
  rd.check_keys(node, {"kind", "base_pose", "axis", "amplitude", "frequency", "ramp", "components"},
                "trajectory");
  ReferenceTrajectory t;
  const std::string kind = node["kind"] ? rd.string(node["kind"], "trajectory.kind") : "sinusoid-1d";
  if (kind == "sinusoid-1d") {
    t.kind = TrajectoryKind::Sinusoid1D;
  } else if (kind == "constant-pose") {
    t.kind = TrajectoryKind::ConstantPose;
  } else if (kind == "composite") {
    t.kind = TrajectoryKind::Composite;
  } else {
    rd.fail(node["kind"], fmt::format("unknown trajectory kind '{}'", kind));
  }

  if (const YAML::Node b = node["base_pose"]) {
    if (b.IsScalar() && b.Scalar() == "auto") {
      if (!top_level) rd.fail(b, "base_pose: auto is only allowed on the top-level trajectory");
      base_from_initial = true;
    } else {
      t.base_pose = rd.vector(b, "trajectory.base_pose", 6);
      if (top_level) base_from_initial = false;
    }
  }
  if (const YAML::Node a = node["axis"]) {
    if (a.IsScalar()) {
      const int row = detail::task_row_index(a.Scalar());
      if (row < 0) rd.fail(a, fmt::format("unknown axis '{}'", a.Scalar()));
      t.axis = Vector6d::Unit(row);
    } else {
      t.axis = rd.vector(a, "trajectory.axis", 6);
    }
  }
  if (node["amplitude"]) t.amplitude = rd.number(node["amplitude"], "trajectory.amplitude");
  if (node["frequency"]) t.frequency = rd.number(node["frequency"], "trajectory.frequency");
  if (const YAML::Node r = node["ramp"]) {
    std::string ramp_kind;
    if (r.IsScalar()) {
      ramp_kind = r.Scalar();
    } else {
      rd.check_keys(r, {"kind", "duration"}, "trajectory.ramp");
      ramp_kind = r["kind"] ? rd.string(r["kind"], "trajectory.ramp.kind") : "min-jerk";
      if (r["duration"]) t.ramp_duration = rd.number(r["duration"], "trajectory.ramp.duration");
    }
    if (ramp_kind == "none") {
      t.ramp = RampKind::None;
    } else if (ramp_kind == "min-jerk") {
      t.ramp = RampKind::MinJerk;
    } else {
      rd.fail(r, fmt::format("ramp must be 'none' or 'min-jerk', got '{}'", ramp_kind));
    }
  }
  if (const YAML::Node comps = node["components"]) {
    rd.expect_sequence(comps, "trajectory.components");
    for (const auto& c : comps) {
      bool ignored = false;
      t.components.push_back(decode_trajectory(c, rd, ignored, false));
    }
  }
  return t;
}

WrenchEvent decode_event(const YAML::Node& node, const YamlReader& rd, const std::string& what) {
  rd.check_keys(node, {"start", "duration", "force", "torque", "profile", "noise_std"}, what);
  WrenchEvent e;
  if (!node["start"]) rd.fail(node, what + " needs 'start'");
  e.start = rd.number(node["start"], what + ".start");
  if (node["duration"]) e.duration = rd.number(node["duration"], what + ".duration");
  if (node["force"]) e.peak.force = rd.vector(node["force"], what + ".force", 3);
  if (node["torque"]) e.peak.torque = rd.vector(node["torque"], what + ".torque", 3);
  if (node["noise_std"]) e.noise_std = rd.number(node["noise_std"], what + ".noise_std");
  if (const YAML::Node p = node["profile"]) {
    const std::string s = rd.string(p, what + ".profile");
    if (s == "smooth") {
      e.profile = PulseProfile::Smooth;
    } else if (s == "step") {
      e.profile = PulseProfile::Step;
    } else {
      rd.fail(p, fmt::format("profile must be 'smooth' or 'step', got '{}'", s));
    }
  }
  try {
    e.validate();
  } catch (const ConfigError& err) {
    rd.fail(node, err.what());
  }
  return e;
}

ScenarioConfig decode_scenario(const YAML::Node& root, const std::filesystem::path& base_dir,
                               const YamlReader& rd) {
  rd.check_keys(root, {"schema_version", "description", "model", "initial_state", "trajectory",
                       "controller", "advancement", "wrench_events", "sweep", "duration", "dt",
                       "seed", "integrator"},
                "scenario");
  const YAML::Node version = root["schema_version"];
  if (!version) rd.fail(root, "scenario needs schema_version");
  if (rd.integer(version, "schema_version") != kSchemaVersion) {
    rd.fail(version, fmt::format("unsupported schema_version (expected {})", kSchemaVersion));
  }

  ScenarioConfig cfg;

  const YAML::Node model = root["model"];
  if (!model) rd.fail(root, "scenario needs a 'model'");
  if (model.IsScalar()) {
    try {
      cfg.model = models::by_name(model.Scalar());
    } catch (const ConfigError& e) {
      rd.fail(model, e.what());
    }
  } else if (model.IsMap() && model["file"]) {
    rd.check_keys(model, {"file"}, "model");
    std::filesystem::path p = rd.string(model["file"], "model.file");
    if (p.is_relative()) p = base_dir / p;
    cfg.model = load_model(p);
  } else {
    cfg.model = detail::decode_model(model, rd, false);
  }

  if (const YAML::Node init = root["initial_state"]) {
    rd.check_keys(init, {"q", "nu"}, "initial_state");
    const auto n = static_cast<Eigen::Index>(cfg.model.dof());
    if (init["q"]) cfg.initial.q = rd.vector(init["q"], "initial_state.q", n);
    if (init["nu"]) cfg.initial.nu = rd.vector(init["nu"], "initial_state.nu", n);
  }

  if (const YAML::Node traj = root["trajectory"]) {
    cfg.trajectory = decode_trajectory(traj, rd, cfg.base_pose_from_initial, true);
  }

  if (const YAML::Node c = root["controller"]) {
    rd.check_keys(c, {"variant", "gains", "task_rows", "pinv_cutoff", "pinv_damping", "posture_damping"},
                  "controller");
    if (const YAML::Node v = c["variant"]) {
      const std::string s = rd.string(v, "controller.variant");
      if (s == "classical") {
        cfg.controller_variant = ControllerVariant::Classical;
      } else if (s == "exploiting") {
        cfg.controller_variant = ControllerVariant::Exploiting;
      } else {
        rd.fail(v, fmt::format("controller.variant must be 'classical' or 'exploiting', got '{}'", s));
      }
    }
    if (const YAML::Node g = c["gains"]) {
      rd.check_keys(g, {"kp", "kd"}, "controller.gains");
      if (g["kp"]) cfg.gains.K_P = decode_gain(g["kp"], rd, "controller.gains.kp");
      if (g["kd"]) cfg.gains.K_D = decode_gain(g["kd"], rd, "controller.gains.kd");
      try {
        cfg.gains.validate();
      } catch (const ConfigError& e) {
        rd.fail(g, e.what());
      }
    }
    if (const YAML::Node rows = c["task_rows"]) {
      rd.expect_sequence(rows, "controller.task_rows");
      cfg.task_rows.rows.fill(false);
      for (const auto& r : rows) {
        const int idx = detail::task_row_index(rd.string(r, "task row"));
        if (idx < 0) rd.fail(r, fmt::format("unknown task row '{}'", r.Scalar()));
        cfg.task_rows.rows[static_cast<std::size_t>(idx)] = true;
      }
    }
    if (c["pinv_cutoff"]) cfg.pinv.relative_cutoff = rd.number(c["pinv_cutoff"], "controller.pinv_cutoff");
    if (c["pinv_damping"]) cfg.pinv.damping = rd.number(c["pinv_damping"], "controller.pinv_damping");
    if (c["posture_damping"]) {
      cfg.posture_damping = rd.number(c["posture_damping"], "controller.posture_damping");
    }
  }

  if (const YAML::Node a = root["advancement"]) {
    rd.check_keys(a, {"law", "psidot_upper", "epsilon_reg", "lowpass_cutoff_hz", "psiddot_feedforward"},
                  "advancement");
    if (const YAML::Node law = a["law"]) {
      const std::string s = rd.string(law, "advancement.law");
      if (s == "proposition1") {
        cfg.advancement.law = AdvancementLaw::Proposition1;
      } else if (s == "appendix") {
        cfg.advancement.law = AdvancementLaw::Appendix;
      } else if (s == "frozen") {
        cfg.advancement.law = AdvancementLaw::Frozen;
      } else {
        rd.fail(law, fmt::format("advancement.law must be proposition1, appendix or frozen, got '{}'", s));
      }
    }
    if (a["psidot_upper"]) cfg.advancement.psidot_upper = rd.number(a["psidot_upper"], "advancement.psidot_upper");
    if (a["epsilon_reg"]) cfg.advancement.epsilon_reg = rd.number(a["epsilon_reg"], "advancement.epsilon_reg");
    if (a["lowpass_cutoff_hz"]) {
      cfg.advancement.lowpass_cutoff_hz = rd.number(a["lowpass_cutoff_hz"], "advancement.lowpass_cutoff_hz");
    }
    if (a["psiddot_feedforward"]) {
      cfg.advancement.psiddot_feedforward = rd.boolean(a["psiddot_feedforward"], "advancement.psiddot_feedforward");
    }
    try {
      cfg.advancement.validate();
    } catch (const ConfigError& e) {
      rd.fail(a, e.what());
    }
  }

  if (const YAML::Node events = root["wrench_events"]) {
    if (!events.IsNull()) {
      rd.expect_sequence(events, "wrench_events");
      for (std::size_t i = 0; i < events.size(); ++i) {
        cfg.wrench_events.push_back(decode_event(events[i], rd, fmt::format("wrench_events[{}]", i)));
      }
    }
  }

  if (const YAML::Node s = root["sweep"]) {
    rd.check_keys(s, {"start", "duration", "force_scale", "noise_std"}, "sweep");
    if (s["start"]) cfg.sweep.start = rd.number(s["start"], "sweep.start");
    if (s["duration"]) cfg.sweep.duration = rd.number(s["duration"], "sweep.duration");
    if (s["force_scale"]) cfg.sweep.force_scale = rd.number(s["force_scale"], "sweep.force_scale");
    if (s["noise_std"]) cfg.sweep.noise_std = rd.number(s["noise_std"], "sweep.noise_std");
  }

  if (root["duration"]) cfg.duration = rd.number(root["duration"], "duration");
  if (root["dt"]) cfg.dt = rd.number(root["dt"], "dt");
  if (const YAML::Node seed = root["seed"]) {
    const long long v = rd.integer(seed, "seed");
    if (v < 0) rd.fail(seed, "seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(v);
  }
  if (const YAML::Node integ = root["integrator"]) {
    const std::string s = rd.string(integ, "integrator");
    if (s == "rk4") {
      cfg.integrator = Integrator::Rk4;
    } else if (s == "semi-implicit-euler") {
      cfg.integrator = Integrator::SemiImplicitEuler;
    } else {
      rd.fail(integ, fmt::format("integrator must be 'rk4' or 'semi-implicit-euler', got '{}'", s));
    }
  }

  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    rd.fail(root, e.what());
  }
  return cfg;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& yaml_text, const std::filesystem::path& base_dir,
                              const std::vector<std::string>& overrides,
                              const std::string& source_name) {
  const YamlReader rd(source_name);
  YAML::Node root = detail::parse_yaml(yaml_text, rd);
  if (!root.IsMap()) rd.fail(root, "scenario must be a mapping");
  for (const auto& o : overrides) apply_override(root, o);
  return decode_scenario(root, base_dir, rd);
}

ScenarioConfig load_scenario(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides) {
  return parse_scenario(detail::read_file(path), path.parent_path(), overrides, path.string());
}

}  // namespace trajadv
