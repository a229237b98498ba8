#include "trajadv/telemetry.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <fmt/core.h>

#include "trajadv/errors.hpp"

namespace trajadv {

namespace {

void append_vec6(std::vector<std::string>& cols, const std::string& stem) {
  for (const char* s : kTaskRowSuffix) cols.push_back(stem + "_" + s);
}

void put_vec(std::string& line, const Vector6d& v) {
  for (int i = 0; i < 6; ++i) {
    line += ',';
    line += format_number(v[i]);
  }
}

}  // namespace

std::vector<std::string> csv_header(std::size_t dof) {
  std::vector<std::string> cols = {"t", "psi", "psidot", "psiddot"};
  append_vec6(cols, "x");
  append_vec6(cols, "x_d");
  append_vec6(cols, "xdot");
  append_vec6(cols, "xdot_d");
  append_vec6(cols, "tracking_err");
  for (std::size_t i = 0; i < dof; ++i) cols.push_back(fmt::format("tau_{}", i));
  append_vec6(cols, "f_ext");
  cols.insert(cols.end(), {"alpha", "V", "wrench_class", "sdot_residual"});
  return cols;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0
  return fmt::format("{:.9g}", v);
}

void write_csv(std::ostream& out, const std::vector<LogRecord>& log) {
  const std::size_t dof = log.empty() ? 0 : static_cast<std::size_t>(log.front().tau.size());
  const auto cols = csv_header(dof);
  std::string line;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) line += ',';
    line += cols[i];
  }
  out << line << '\n';
  for (const auto& r : log) {
    line = format_number(r.t);
    for (double v : {r.psi, r.psidot, r.psiddot}) {
      line += ',';
      line += format_number(v);
    }
    put_vec(line, r.x);
    put_vec(line, r.x_d);
    put_vec(line, r.xdot);
    put_vec(line, r.xdot_d);
    put_vec(line, r.tracking_err);
    for (Eigen::Index i = 0; i < r.tau.size(); ++i) {
      line += ',';
      line += format_number(r.tau[i]);
    }
    put_vec(line, r.f_ext.as_vector());
    line += ',';
    line += format_number(r.alpha);
    line += ',';
    line += format_number(r.V);
    line += ',';
    if (r.wrench_class) line += to_string(*r.wrench_class);
    line += ',';
    line += format_number(r.sdot_residual);
    out << line << '\n';
  }
}

void write_csv_file(const std::filesystem::path& path, const std::vector<LogRecord>& log) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError(fmt::format("cannot write '{}'", path.string()));
  write_csv(f, log);
  if (!f) throw InputError(fmt::format("write to '{}' failed", path.string()));
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "label,force_x,force_y,force_z,torque_x,torque_y,torque_z,delta_psi,peak_psidot,"
         "rms_tracking_err,peak_alpha\n";
  for (const auto& r : rows) {
    std::string line = r.label;
    const Vector6d w = r.event.peak.as_vector();
    for (int i = 0; i < 6; ++i) {
      line += ',';
      line += format_number(w[i]);
    }
    for (double v : {r.summary.delta_psi, r.summary.peak_psidot, r.summary.rms_tracking_err,
                     r.summary.peak_alpha}) {
      line += ',';
      line += format_number(v);
    }
    out << line << '\n';
  }
}

int CsvTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<double> CsvTable::column(const std::string& name) const {
  const int idx = column_index(name);
  if (idx < 0) throw InputError(fmt::format("column '{}' not found", name));
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[static_cast<std::size_t>(idx)]);
  return out;
}

CsvTable parse_csv(std::istream& in, const std::string& source) {
  CsvTable table;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  auto strip_cr = [](std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  };

  while (std::getline(in, line)) {
    strip_cr(line);
    if (!line.empty()) break;
  }
  if (line.empty()) throw InputError(fmt::format("{}: empty CSV", source));
  table.columns = split(line);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != table.columns.size()) {
      throw InputError(fmt::format("{}:{}: expected {} cells, got {}", source, line_no,
                                   table.columns.size(), cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      row.push_back(!c.empty() && end && *end == '\0' ? v : std::numeric_limits<double>::quiet_NaN());
    }
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw InputError(fmt::format("{}: CSV has no data rows", source));
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError(fmt::format("cannot open '{}'", path.string()));
  return parse_csv(f, path.string());
}

}  // namespace trajadv
