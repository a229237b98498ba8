#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "trajadv/types.hpp"
#include "trajadv/wrench.hpp"

namespace trajadv {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;  // bad config, bad input file, bad flags

int cmd_simulate(const std::filesystem::path& config_path, const std::filesystem::path& out_csv,
                 const std::vector<std::string>& overrides, std::ostream& out, std::ostream& err);

// Writes <label>.csv per case and summary.csv into out_dir (created if needed).
int cmd_sweep(const std::filesystem::path& config_path, const std::string& preset,
              const std::filesystem::path& out_dir, const std::vector<std::string>& overrides,
              std::ostream& out, std::ostream& err);

int cmd_classify(const Wrench& w, const Vector6d& direction, bool color, std::ostream& out,
                 std::ostream& err);

// Plots `columns` against t.
int cmd_plot(const std::filesystem::path& csv_path, const std::vector<std::string>& columns,
             const std::filesystem::path& out_svg, std::ostream& out, std::ostream& err);

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace trajadv
