#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "trajadv/sim.hpp"

namespace trajadv {

// Column names for a log of a model with `dof` joints.
std::vector<std::string> csv_header(std::size_t dof);

// Nine significant digits, "nan"/"inf" spelled out.
std::string format_number(double v);

void write_csv(std::ostream& out, const std::vector<LogRecord>& log);
// Throws InputError if the file cannot be written.
void write_csv_file(const std::filesystem::path& path, const std::vector<LogRecord>& log);

struct SummaryRow {
  std::string label;
  WrenchEvent event;
  RunSummary summary;
};
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

// Numeric table. Non-numeric cells (the wrench_class column) read as NaN.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  // Index of `name`, or -1.
  int column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

// Throws InputError for a missing file, an empty file or a row whose width
// does not match the header.
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(std::istream& in, const std::string& source);

}  // namespace trajadv
