#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>

#include <Eigen/Core>
#include <yaml-cpp/yaml.h>

#include "trajadv/types.hpp"

namespace trajadv {
struct RobotModel;
}

namespace trajadv::detail {

// Typed access to a YAML tree with line-anchored ConfigErrors.
class YamlReader {
 public:
  explicit YamlReader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& message) const;
  [[noreturn]] void fail(const YAML::Mark& at, const std::string& message) const;

  void expect_map(const YAML::Node& node, const std::string& what) const;
  void expect_sequence(const YAML::Node& node, const std::string& what) const;
  // Rejects keys outside `allowed`.
  void check_keys(const YAML::Node& map, std::initializer_list<const char*> allowed,
                  const std::string& what) const;

  double number(const YAML::Node& node, const std::string& what) const;
  long long integer(const YAML::Node& node, const std::string& what) const;
  bool boolean(const YAML::Node& node, const std::string& what) const;
  std::string string(const YAML::Node& node, const std::string& what) const;
  Eigen::VectorXd vector(const YAML::Node& node, const std::string& what,
                         Eigen::Index expected_size = -1) const;

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

RobotModel decode_model(const YAML::Node& node, const YamlReader& rd, bool top_level);
std::string read_file(const std::filesystem::path& path);
YAML::Node parse_yaml(const std::string& text, const YamlReader& rd);

// Row name ("x", "y", "z", "rx", "ry", "rz") to index, or -1.
int task_row_index(const std::string& name);

}  // namespace trajadv::detail
