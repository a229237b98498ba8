#include "trajadv/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <system_error>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <unistd.h>

#include "trajadv/errors.hpp"
#include "trajadv/scenario.hpp"
#include "trajadv/sim.hpp"
#include "trajadv/svg_plot.hpp"
#include "trajadv/telemetry.hpp"

namespace trajadv {

namespace {

int report(std::ostream& err, int code, const std::string& what) {
  err << "error: " << what << '\n';
  return code;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError(fmt::format("cannot write '{}'", path.string()));
  f << text;
  if (!f) throw InputError(fmt::format("write to '{}' failed", path.string()));
}

}  // namespace

int cmd_simulate(const std::filesystem::path& config_path, const std::filesystem::path& out_csv,
                 const std::vector<std::string>& overrides, std::ostream& out, std::ostream& err) {
  ScenarioConfig cfg;
  try {
    cfg = load_scenario(config_path, overrides);
  } catch (const ConfigError& e) {
    return report(err, kExitUsage, e.what());
  }
  try {
    const auto log = run(cfg);
    if (!out_csv.empty()) write_csv_file(out_csv, log);
    const RunSummary s = summarize(cfg, log);
    out << fmt::format("steps        {}\n", log.size());
    out << fmt::format("delta_psi    {}\n", format_number(s.delta_psi));
    out << fmt::format("rms_err      {}\n", format_number(s.rms_tracking_err));
    out << fmt::format("peak_psidot  {}\n", format_number(s.peak_psidot));
  } catch (const std::exception& e) {
    return report(err, kExitRuntime, e.what());
  }
  return kExitOk;
}

int cmd_sweep(const std::filesystem::path& config_path, const std::string& preset,
              const std::filesystem::path& out_dir, const std::vector<std::string>& overrides,
              std::ostream& out, std::ostream& err) {
  ScenarioConfig cfg;
  std::vector<SweepCase> cases;
  try {
    cfg = load_scenario(config_path, overrides);
    cases = preset_cases(preset, cfg.sweep);
  } catch (const ConfigError& e) {
    return report(err, kExitUsage, e.what());
  }
  try {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw InputError(fmt::format("cannot create '{}': {}", out_dir.string(), ec.message()));

    const auto outcomes = sweep(cfg, cases);
    std::vector<SummaryRow> rows;
    for (const auto& o : outcomes) {
      write_csv_file(out_dir / (o.label + ".csv"), o.log);
      rows.push_back({o.label, o.event, o.summary});
    }
    std::ofstream f(out_dir / "summary.csv", std::ios::binary);
    if (!f) throw InputError("cannot write summary.csv");
    write_summary_csv(f, rows);

    out << fmt::format("{:<6}{:>17}{:>17}{:>17}{:>17}\n", "case", "delta_psi", "peak_psidot", "rms_err",
                       "peak_alpha");
    for (const auto& r : rows) {
      out << fmt::format("{:<6}{:>17}{:>17}{:>17}{:>17}\n", r.label, format_number(r.summary.delta_psi),
                         format_number(r.summary.peak_psidot), format_number(r.summary.rms_tracking_err),
                         format_number(r.summary.peak_alpha));
    }
  } catch (const std::exception& e) {
    return report(err, kExitRuntime, e.what());
  }
  return kExitOk;
}

int cmd_classify(const Wrench& w, const Vector6d& direction, bool color, std::ostream& out,
                 std::ostream& err) {
  try {
    if (!w.is_finite() || !direction.allFinite()) throw InputError("wrench and direction must be finite");
    const WrenchClass c = classify(w, direction);
    const std::string name(to_string(c));
    if (color) {
      const char* code = c == WrenchClass::Assistive ? "32" : "33";
      out << "\x1b[" << code << 'm' << name << "\x1b[0m\n";
    } else {
      out << name << '\n';
    }
  } catch (const Error& e) {
    return report(err, kExitUsage, e.what());
  }
  return kExitOk;
}

int cmd_plot(const std::filesystem::path& csv_path, const std::vector<std::string>& columns,
             const std::filesystem::path& out_svg, std::ostream& out, std::ostream& err) {
  std::string svg;
  try {
    if (columns.empty()) throw InputError("no columns requested");
    const CsvTable table = read_csv(csv_path);
    std::vector<PlotSeries> series;
    for (const auto& c : columns) {
      if (table.column_index(c) < 0) {
        throw InputError(fmt::format("{}: column '{}' not found", csv_path.string(), c));
      }
      series.push_back({c, table.column(c)});
    }
    if (table.column_index("t") < 0) throw InputError(fmt::format("{}: no 't' column", csv_path.string()));
    PlotOptions opts;
    opts.title = csv_path.filename().string();
    svg = render_svg(table.column("t"), series, opts);
  } catch (const Error& e) {
    return report(err, kExitUsage, e.what());
  }
  try {
    write_text(out_svg, svg);
    out << fmt::format("wrote {}\n", out_svg.string());
  } catch (const std::exception& e) {
    return report(err, kExitRuntime, e.what());
  }
  return kExitOk;
}

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trajectory advancement simulator for task-space control under interaction wrenches"};
  app.require_subcommand(1);

  std::string config;
  std::string out_path;
  std::vector<std::string> overrides;
  std::string preset = "table1";
  std::vector<std::string> columns;
  std::string csv_in;
  std::vector<double> force = {0, 0, 0};
  std::vector<double> torque = {0, 0, 0};
  std::vector<double> direction = {1, 0, 0, 0, 0, 0};

  auto* sim = app.add_subcommand("simulate", "run one scenario and write its CSV log");
  sim->add_option("--config", config, "scenario YAML")->required();
  sim->add_option("--out", out_path, "output CSV");
  sim->add_option("--set", overrides, "override a config value, key.path=value")->take_all()->expected(1);

  auto* swp = app.add_subcommand("sweep", "run a wrench preset against a scenario");
  swp->add_option("--config", config, "scenario YAML")->required();
  swp->add_option("--preset", preset, "wrench preset")->capture_default_str();
  swp->add_option("--out", out_path, "output directory")->required();
  swp->add_option("--set", overrides, "override a config value, key.path=value")->take_all()->expected(1);

  auto* cls = app.add_subcommand("classify", "classify a wrench against a direction of motion");
  cls->add_option("--force", force, "fx,fy,fz")->delimiter(',')->expected(3);
  cls->add_option("--torque", torque, "tx,ty,tz")->delimiter(',')->expected(3);
  cls->add_option("--direction", direction, "6-vector direction of motion (default +x)")
      ->delimiter(',')
      ->expected(6);

  auto* plt = app.add_subcommand("plot", "plot CSV columns against t as SVG");
  plt->add_option("csv", csv_in, "input CSV")->required();
  plt->add_option("--columns", columns, "comma-separated column names")->delimiter(',')->required();
  plt->add_option("--out", out_path, "output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (*sim) return cmd_simulate(config, out_path, overrides, out, err);
  if (*swp) return cmd_sweep(config, preset, out_path, overrides, out, err);
  if (*cls) {
    Wrench w;
    w.force = Eigen::Vector3d(force[0], force[1], force[2]);
    w.torque = Eigen::Vector3d(torque[0], torque[1], torque[2]);
    Vector6d d;
    for (int i = 0; i < 6; ++i) d[i] = direction[static_cast<std::size_t>(i)];
    const char* no_color = std::getenv("NO_COLOR");
    const bool color = (no_color == nullptr || *no_color == '\0') && &out == &std::cout && isatty(1);
    return cmd_classify(w, d, color, out, err);
  }
  return cmd_plot(csv_in, columns, out_path, out, err);
}

}  // namespace trajadv
