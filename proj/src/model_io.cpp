#include <fstream>
#include <set>
#include <sstream>

#include <fmt/core.h>

#include "trajadv/errors.hpp"
#include "trajadv/scenario.hpp"
#include "yaml_reader.hpp"

namespace trajadv {

namespace detail {

void YamlReader::fail(const YAML::Mark& at, const std::string& message) const {
  if (at.is_null()) throw ConfigError(fmt::format("{}: {}", source_, message));
  throw ConfigError(fmt::format("{}:{}:{}: {}", source_, at.line + 1, at.column + 1, message));
}

void YamlReader::fail(const YAML::Node& at, const std::string& message) const {
  fail(at.IsDefined() ? at.Mark() : YAML::Mark::null_mark(), message);
}

void YamlReader::expect_map(const YAML::Node& node, const std::string& what) const {
  if (!node.IsMap()) fail(node, fmt::format("{} must be a mapping", what));
}

void YamlReader::expect_sequence(const YAML::Node& node, const std::string& what) const {
  if (!node.IsSequence()) fail(node, fmt::format("{} must be a list", what));
}

void YamlReader::check_keys(const YAML::Node& map, std::initializer_list<const char*> allowed,
                            const std::string& what) const {
  expect_map(map, what);
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    if (!ok.contains(key)) fail(kv.first, fmt::format("unknown key '{}' in {}", key, what));
  }
}

double YamlReader::number(const YAML::Node& node, const std::string& what) const {
  if (!node.IsDefined() || node.IsNull()) fail(node, fmt::format("missing value for {}", what));
  if (!node.IsScalar()) fail(node, fmt::format("{} must be a number", what));
  try {
    return node.as<double>();
  } catch (const YAML::Exception&) {
    fail(node, fmt::format("{} must be a number, got '{}'", what, node.Scalar()));
  }
}

long long YamlReader::integer(const YAML::Node& node, const std::string& what) const {
  if (!node.IsScalar()) fail(node, fmt::format("{} must be an integer", what));
  try {
    return node.as<long long>();
  } catch (const YAML::Exception&) {
    fail(node, fmt::format("{} must be an integer, got '{}'", what, node.Scalar()));
  }
}

bool YamlReader::boolean(const YAML::Node& node, const std::string& what) const {
  if (!node.IsScalar()) fail(node, fmt::format("{} must be true or false", what));
  try {
    return node.as<bool>();
  } catch (const YAML::Exception&) {
    fail(node, fmt::format("{} must be true or false, got '{}'", what, node.Scalar()));
  }
}

std::string YamlReader::string(const YAML::Node& node, const std::string& what) const {
  if (!node.IsScalar()) fail(node, fmt::format("{} must be a string", what));
  return node.Scalar();
}

Eigen::VectorXd YamlReader::vector(const YAML::Node& node, const std::string& what,
                                   Eigen::Index expected_size) const {
  expect_sequence(node, what);
  const auto n = static_cast<Eigen::Index>(node.size());
  if (expected_size >= 0 && n != expected_size) {
    fail(node, fmt::format("{} must have {} entries, got {}", what, expected_size, n));
  }
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v[i] = number(node[static_cast<std::size_t>(i)], fmt::format("{}[{}]", what, i));
  }
  return v;
}

int task_row_index(const std::string& name) {
  for (int i = 0; i < 6; ++i) {
    if (name == kTaskRowSuffix[i]) return i;
  }
  return -1;
}

RobotModel decode_model(const YAML::Node& node, const YamlReader& rd, bool top_level) {
  if (top_level) {
    rd.check_keys(node, {"schema_version", "name", "gravity_g", "base_dof", "base_position",
                         "base_angle", "tracked_link", "links"},
                  "model");
    const YAML::Node version = node["schema_version"];
    if (!version) rd.fail(node, "model file needs schema_version");
    if (rd.integer(version, "schema_version") != kSchemaVersion) {
      rd.fail(version, fmt::format("unsupported schema_version (expected {})", kSchemaVersion));
    }
  } else {
    rd.check_keys(node, {"name", "gravity_g", "base_dof", "base_position", "base_angle",
                         "tracked_link", "links"},
                  "model");
  }

  RobotModel m;
  if (node["name"]) m.name = rd.string(node["name"], "name");
  if (node["gravity_g"]) m.gravity_g = rd.number(node["gravity_g"], "gravity_g");
  if (node["base_dof"]) m.base_dof = static_cast<int>(rd.integer(node["base_dof"], "base_dof"));
  if (node["base_position"]) m.base_position = rd.vector(node["base_position"], "base_position", 3);
  if (node["base_angle"]) m.base_angle = rd.number(node["base_angle"], "base_angle");

  const YAML::Node links = node["links"];
  if (!links) rd.fail(node, "model needs a 'links' list");
  rd.expect_sequence(links, "links");
  for (std::size_t i = 0; i < links.size(); ++i) {
    const YAML::Node l = links[i];
    const std::string what = fmt::format("links[{}]", i);
    rd.check_keys(l, {"joint", "axis_angle", "length", "mass", "com_offset", "inertia"}, what);
    JointSpec j;
    const std::string kind = l["joint"] ? rd.string(l["joint"], what + ".joint") : "revolute";
    if (kind == "revolute") {
      j.kind = JointKind::Revolute;
      if (l["axis_angle"]) rd.fail(l["axis_angle"], "axis_angle only applies to prismatic joints");
    } else if (kind == "prismatic") {
      j.kind = JointKind::Prismatic;
      if (l["axis_angle"]) j.axis_angle = rd.number(l["axis_angle"], what + ".axis_angle");
    } else {
      rd.fail(l["joint"], fmt::format("joint must be 'revolute' or 'prismatic', got '{}'", kind));
    }
    LinkSpec spec;
    for (auto [key, field] : {std::pair{"length", &spec.length}, std::pair{"mass", &spec.mass},
                              std::pair{"com_offset", &spec.com_offset},
                              std::pair{"inertia", &spec.inertia}}) {
      if (!l[key]) rd.fail(l, fmt::format("{} needs '{}'", what, key));
      *field = rd.number(l[key], fmt::format("{}.{}", what, key));
    }
    m.joints.push_back(j);
    m.links.push_back(spec);
  }
  m.tracked_link = links.size() > 0 ? links.size() - 1 : 0;
  if (node["tracked_link"]) {
    const long long t = rd.integer(node["tracked_link"], "tracked_link");
    if (t < 0) rd.fail(node["tracked_link"], "tracked_link must be >= 0");
    m.tracked_link = static_cast<std::size_t>(t);
  }
  try {
    m.validate();
  } catch (const ConfigError& e) {
    rd.fail(node, e.what());
  }
  return m;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("{}: cannot open file", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

YAML::Node parse_yaml(const std::string& text, const YamlReader& rd) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    rd.fail(e.mark, e.msg);
  }
}

}  // namespace detail

RobotModel parse_model(const std::string& yaml_text, const std::string& source_name) {
  const detail::YamlReader rd(source_name);
  return detail::decode_model(detail::parse_yaml(yaml_text, rd), rd, true);
}

RobotModel load_model(const std::filesystem::path& path) {
  return parse_model(detail::read_file(path), path.string());
}

}  // namespace trajadv
