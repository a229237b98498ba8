#include <gtest/gtest.h>

#include <filesystem>

#include "trajadv/errors.hpp"
#include "trajadv/scenario.hpp"

using namespace trajadv;

namespace {

const std::filesystem::path kRoot = TRAJADV_SOURCE_DIR;

const char* kMinimal = R"(schema_version: 1
model: slider
duration: 1
)";

std::string error_of(const std::string& text, const std::vector<std::string>& overrides = {}) {
  try {
    parse_scenario(text, kRoot / "configs", overrides, "test.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ScenarioFile, MinimalDefaults) {
  const auto c = parse_scenario(kMinimal, kRoot);
  EXPECT_EQ(c.model.name, "slider");
  EXPECT_EQ(c.duration, 1.0);
  EXPECT_EQ(c.dt, 1e-3);
  EXPECT_EQ(c.advancement.psidot_upper, 10.0);
  EXPECT_EQ(c.advancement.epsilon_reg, 1e-8);
  EXPECT_TRUE(c.task_rows.active(kX));
  EXPECT_EQ(c.task_rows.count(), 1);
}

TEST(ScenarioFile, ShippedConfigsLoad) {
  for (const auto& entry : std::filesystem::directory_iterator(kRoot / "configs")) {
    if (entry.path().extension() != ".yaml") continue;
    EXPECT_NO_THROW(load_scenario(entry.path())) << entry.path();
  }
  for (const auto& entry : std::filesystem::directory_iterator(kRoot / "models")) {
    const RobotModel file = load_model(entry.path());
    const RobotModel builtin = models::by_name(file.name);
    ASSERT_EQ(file.links.size(), builtin.links.size());
    for (std::size_t i = 0; i < file.links.size(); ++i) {
      EXPECT_EQ(file.links[i].mass, builtin.links[i].mass);
      EXPECT_EQ(file.links[i].length, builtin.links[i].length);
      EXPECT_EQ(file.links[i].com_offset, builtin.links[i].com_offset);
      EXPECT_EQ(file.links[i].inertia, builtin.links[i].inertia);
      EXPECT_EQ(file.joints[i].kind, builtin.joints[i].kind);
    }
    EXPECT_EQ(file.tracked_link, builtin.tracked_link);
    EXPECT_NEAR(file.base_angle, builtin.base_angle, 1e-15);
  }
}

TEST(ScenarioFile, FullSchema) {
  const auto c = parse_scenario(R"(schema_version: 1
model:
  name: inline
  links:
    - {joint: revolute, length: 0.5, mass: 1, com_offset: 0.25, inertia: 0.01}
    - {joint: prismatic, axis_angle: 0.0, length: 0.2, mass: 0.5, com_offset: 0.1, inertia: 0}
initial_state: {q: [0.3, 0.0], nu: [0, 0]}
trajectory:
  kind: composite
  base_pose: [0.1, 0, 0.2, 0, 0, 0]
  components:
    - {kind: sinusoid-1d, axis: x, amplitude: 0.02, frequency: 0.2, ramp: {kind: min-jerk, duration: 1}}
    - {kind: sinusoid-1d, axis: [0, 0, 1, 0, 0, 0], amplitude: 0.01}
controller:
  variant: classical
  gains:
    kp: [1, 2, 3, 4, 5, 6]
    kd: [[10,0,0,0,0,0],[0,10,0,0,0,0],[0,0,10,0,0,0],[0,0,0,10,0,0],[0,0,0,0,10,0],[0,0,0,0,0,10]]
  task_rows: [x, z]
  pinv_cutoff: 1.0e-6
  pinv_damping: 0.001
  posture_damping: 0.5
advancement: {law: appendix, psidot_upper: 4, epsilon_reg: 1.0e-6, lowpass_cutoff_hz: 5, psiddot_feedforward: true}
wrench_events:
  - {start: 0.5, duration: 0.2, force: [1, 0, 0], torque: [0, 0.1, 0], profile: step, noise_std: 0.01}
sweep: {start: 1, duration: 0.5, force_scale: 0.1, noise_std: 0}
duration: 2
dt: 0.002
seed: 5
integrator: semi-implicit-euler
)",
                                kRoot);
  EXPECT_EQ(c.model.links.size(), 2u);
  EXPECT_EQ(c.model.joints[1].kind, JointKind::Prismatic);
  EXPECT_EQ(c.trajectory.kind, TrajectoryKind::Composite);
  EXPECT_FALSE(c.base_pose_from_initial);
  EXPECT_EQ(c.trajectory.components[0].ramp, RampKind::MinJerk);
  EXPECT_EQ(c.trajectory.components[0].ramp_duration, 1.0);
  EXPECT_EQ(c.controller_variant, ControllerVariant::Classical);
  EXPECT_EQ(c.gains.K_P(4, 4), 5.0);
  EXPECT_EQ(c.gains.K_D(2, 2), 10.0);
  EXPECT_TRUE(c.task_rows.active(kZ));
  EXPECT_FALSE(c.task_rows.active(kY));
  EXPECT_EQ(c.pinv.damping, 0.001);
  EXPECT_EQ(c.advancement.law, AdvancementLaw::Appendix);
  EXPECT_TRUE(c.advancement.psiddot_feedforward);
  ASSERT_EQ(c.wrench_events.size(), 1u);
  EXPECT_EQ(c.wrench_events[0].profile, PulseProfile::Step);
  EXPECT_EQ(c.wrench_events[0].peak.torque.y(), 0.1);
  EXPECT_EQ(c.sweep.force_scale, 0.1);
  EXPECT_EQ(c.seed, 5u);
  EXPECT_EQ(c.integrator, Integrator::SemiImplicitEuler);
}

TEST(ScenarioFile, UnknownKeyIsLineAnchored) {
  const std::string msg = error_of("schema_version: 1\nmodel: slider\ncontroller:\n  gainz: {kp: 1}\n");
  EXPECT_NE(msg.find("test.yaml:4:"), std::string::npos) << msg;
  EXPECT_NE(msg.find("gainz"), std::string::npos) << msg;
}

TEST(ScenarioFile, Rejections) {
  EXPECT_NE(error_of("model: slider\n").find("schema_version"), std::string::npos);
  EXPECT_NE(error_of("schema_version: 2\nmodel: slider\n").find("schema_version"), std::string::npos);
  EXPECT_NE(error_of("schema_version: 1\nmodel: tank\n").find("tank"), std::string::npos);
  EXPECT_NE(error_of("schema_version: 1\nmodel: slider\ndt: fast\n").find("test.yaml:3:"), std::string::npos);
  EXPECT_NE(error_of("schema_version: 1\nmodel: slider\nduration: [1\n").find("test.yaml:"), std::string::npos);
  EXPECT_NE(error_of("schema_version: 1\nmodel: slider\nadvancement: {law: fast}\n").find("law"),
            std::string::npos);
  EXPECT_FALSE(error_of("schema_version: 1\nmodel: slider\ncontroller: {gains: {kp: -1}}\n").empty());
  EXPECT_FALSE(error_of("schema_version: 1\nmodel: {name: x, base_dof: 6, links: [{length: 1, mass: 1, "
                        "com_offset: 0.5}]}\n")
                   .empty());
  EXPECT_FALSE(error_of("schema_version: 1\nmodel: slider\ninitial_state: {q: [0, 0]}\n").empty());
  EXPECT_FALSE(error_of("schema_version: 1\nmodel: {file: missing.yaml}\n").empty());
}

TEST(ScenarioFile, Overrides) {
  auto c = parse_scenario(kMinimal, kRoot, {"advancement.law=frozen", "trajectory.amplitude=0.02"});
  EXPECT_EQ(c.advancement.law, AdvancementLaw::Frozen);
  EXPECT_EQ(c.trajectory.amplitude, 0.02);
  c = parse_scenario(kMinimal, kRoot, {"controller.gains.kp=[1, 1, 1, 1, 1, 1]", "duration=2"});
  EXPECT_EQ(c.duration, 2.0);
  EXPECT_EQ(c.gains.K_P(0, 0), 1.0);
  c = parse_scenario("schema_version: 1\nmodel: planar_arm2\ninitial_state: {q: [0.1, 0.2]}\n", kRoot,
                     {"initial_state.q.1=0.9"});
  EXPECT_EQ(c.initial.q[1], 0.9);
  EXPECT_FALSE(error_of(kMinimal, {"nokey"}).empty());
  EXPECT_FALSE(error_of(kMinimal, {"controller.bogus=1"}).empty());
  EXPECT_FALSE(error_of(kMinimal, {"duration.x=1"}).empty());
}

TEST(ModelFile, LineAnchoredErrors) {
  try {
    parse_model("schema_version: 1\nname: m\nlinks:\n  - {length: 1, mass: one, com_offset: 0.5}\n", "m.yaml");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("m.yaml:4:"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_model("schema_version: 1\nname: m\nlinks: []\n"), ConfigError);
  EXPECT_THROW(load_model(kRoot / "models" / "none.yaml"), ConfigError);
}
