#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "trajadv/types.hpp"

namespace trajadv {

// Interaction wrench at the tracked link. Origin at the link frame, axes
// aligned with the inertial frame.
struct Wrench {
  Eigen::Vector3d force = Eigen::Vector3d::Zero();
  Eigen::Vector3d torque = Eigen::Vector3d::Zero();

  Vector6d as_vector() const;
  static Wrench from_vector(const Vector6d& v);
  bool is_finite() const;

  Wrench& operator+=(const Wrench& other);
  friend Wrench operator*(double s, const Wrench& w);
};

enum class WrenchClass { Assistive, Agnostic };

std::string_view to_string(WrenchClass c);

enum class PulseProfile { Smooth, Step };

struct WrenchEvent {
  double start = 0.0;      // s
  double duration = 0.75;  // s
  Wrench peak;
  PulseProfile profile = PulseProfile::Smooth;
  double noise_std = 0.0;  // N (and N·m), per axis, while active

  void validate() const;
};

// Stateless counter-based generator: every draw is a pure function of
// (seed, counter, stream), so runs and sweeps reproduce bit-exactly no matter
// how they are scheduled.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t counter, std::uint64_t stream) const;
  // Uniform on (0, 1).
  double uniform(std::uint64_t counter, std::uint64_t stream) const;
  // Standard normal via Box-Muller on two uniforms of adjacent streams.
  double normal(std::uint64_t counter, std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

inline constexpr double kClassifyTolerance = 1e-9;

// Assistive iff the projection of the wrench on the desired direction
// exceeds +tolerance. The direction is normalized; a zero direction throws
// DomainError.
WrenchClass classify(const Wrench& w, const Vector6d& desired_direction,
                     double tolerance = kClassifyTolerance);

// Envelope in [0, 1]; zero outside [start, start + duration].
double pulse_scale(const WrenchEvent& e, double t);

// Wrench produced by one event at time t. Noise (if any) for sample
// `sample_index` is drawn from `rng` on stream `stream`.
Wrench evaluate_event(const WrenchEvent& e, double t, const CounterRng& rng,
                      std::uint64_t sample_index, std::uint64_t stream);

struct PresetWrench {
  std::string label;
  Wrench wrench;
  WrenchClass expected_class;  // with the desired direction +x
};

// The six test wrenches (a)-(f): three assistive, three agnostic for motion
// along +x.
const std::vector<PresetWrench>& table1_wrenches();

}  // namespace trajadv
