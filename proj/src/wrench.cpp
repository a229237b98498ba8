#include "trajadv/wrench.hpp"

#include <cmath>
#include <numbers>

#include <fmt/core.h>

#include "trajadv/errors.hpp"

namespace trajadv {

Vector6d Wrench::as_vector() const {
  Vector6d v;
  v << force, torque;
  return v;
}

Wrench Wrench::from_vector(const Vector6d& v) { return {v.head<3>(), v.tail<3>()}; }

bool Wrench::is_finite() const { return force.allFinite() && torque.allFinite(); }

Wrench& Wrench::operator+=(const Wrench& other) {
  force += other.force;
  torque += other.torque;
  return *this;
}

Wrench operator*(double s, const Wrench& w) { return {s * w.force, s * w.torque}; }

std::string_view to_string(WrenchClass c) {
  return c == WrenchClass::Assistive ? "Assistive" : "Agnostic";
}

void WrenchEvent::validate() const {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ConfigError(fmt::format("wrench event duration must be > 0, got {}", duration));
  }
  if (!(start >= 0.0) || !std::isfinite(start)) {
    throw ConfigError(fmt::format("wrench event start must be >= 0, got {}", start));
  }
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
    throw ConfigError("wrench event noise_std must be >= 0");
  }
  if (!peak.is_finite()) throw ConfigError("wrench event peak must be finite");
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t counter, std::uint64_t stream) const {
  return mix64(mix64(seed_ ^ mix64(stream)) + counter);
}

double CounterRng::uniform(std::uint64_t counter, std::uint64_t stream) const {
  // 53 random mantissa bits, shifted off zero.
  return (static_cast<double>(bits(counter, stream) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t counter, std::uint64_t stream) const {
  const double u1 = uniform(counter, 2 * stream);
  const double u2 = uniform(counter, 2 * stream + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

WrenchClass classify(const Wrench& w, const Vector6d& desired_direction, double tolerance) {
  const double norm = desired_direction.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DomainError("desired direction must be a non-zero finite vector");
  }
  if (!w.is_finite()) throw InputError("wrench contains non-finite entries");
  const double projection = w.as_vector().dot(desired_direction / norm);
  return projection > tolerance ? WrenchClass::Assistive : WrenchClass::Agnostic;
}

double pulse_scale(const WrenchEvent& e, double t) {
  if (t < e.start || t > e.start + e.duration) return 0.0;
  if (e.profile == PulseProfile::Step) return 1.0;
  return 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * (t - e.start) / e.duration));
}

Wrench evaluate_event(const WrenchEvent& e, double t, const CounterRng& rng,
                      std::uint64_t sample_index, std::uint64_t stream) {
  if (t < e.start || t > e.start + e.duration) return {};
  Wrench w = pulse_scale(e, t) * e.peak;
  if (e.noise_std > 0.0) {
    Vector6d noise;
    for (int axis = 0; axis < 6; ++axis) {
      noise[axis] = e.noise_std * rng.normal(sample_index, 6 * stream + static_cast<std::uint64_t>(axis));
    }
    w += Wrench::from_vector(noise);
  }
  return w;
}

const std::vector<PresetWrench>& table1_wrenches() {
  static const std::vector<PresetWrench> rows = [] {
    auto force = [](double fx, double fy, double fz) {
      return Wrench{Eigen::Vector3d(fx, fy, fz), Eigen::Vector3d::Zero()};
    };
    return std::vector<PresetWrench>{
        {"a", force(10, 0, 0), WrenchClass::Assistive},
        {"b", force(5, 10, 0), WrenchClass::Assistive},
        {"c", force(5, 0, 10), WrenchClass::Assistive},
        {"d", force(-10, 0, 0), WrenchClass::Agnostic},
        {"e", force(0, -10, 0), WrenchClass::Agnostic},
        {"f", force(0, 0, 10), WrenchClass::Agnostic},
    };
  }();
  return rows;
}

}  // namespace trajadv
