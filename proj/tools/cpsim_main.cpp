#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpsim/caseio.hpp"
#include "cpsim/csvio.hpp"
#include "cpsim/simulator.hpp"
#include "cpsim/svgplot.hpp"

namespace {

using namespace cpsim;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

NetworkCase load_case(const std::string& spec) {
  if (spec == "builtin:case14") return builtin_case14();
  return parse_matpower_case(slurp(spec));
}

AttackSchedule load_schedule(const std::string& spec) {
  if (spec == "default") return default_schedule();
  if (spec == "none") return AttackSchedule{};
  return parse_schedule(slurp(spec));
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

SimulationLog read_log(const std::string& path) { return read_csv_text(slurp(path)); }

int cmd_run(const std::string& case_spec, const std::string& schedule_spec, int steps,
            unsigned long long seed, double sigma, const std::string& out,
            const std::string& baseline_out) {
  NetworkCase net = load_case(case_spec);
  SimConfig cfg;
  cfg.n_steps = steps;
  cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.noise_amplitude = sigma;
  cfg.schedule = load_schedule(schedule_spec);

  SimulationLog log = run(net, cfg);
  write_csv(log, out + ".csv");
  write_sidecar(log, out + ".json");

  int bad = 0;
  for (const TelemetryFrame& f : log.frames)
    if (!f.converged) ++bad;

  if (!baseline_out.empty()) {
    SimConfig base_cfg = cfg;
    base_cfg.schedule = AttackSchedule{};
    SimulationLog base = run(net, base_cfg);
    write_csv(base, baseline_out + ".csv");
    write_sidecar(base, baseline_out + ".json");
  }

  MetricsSummary m = compute_metrics(log, Side::True);
  std::cout << "steps=" << log.frames.size() << " converged=" << (log.frames.size() - bad) << "/"
            << log.frames.size() << " mean_rms_dev=" << format_double(m.mean_rms_dev)
            << " violations_true=" << m.violation_count_true
            << " avg_losses_mw=" << format_double(m.avg_losses_mw)
            << " switch_events=" << m.switch_event_total << "\n";
  if (bad) {
    std::cerr << "error: " << bad << " of " << log.frames.size()
              << " steps failed to converge\n";
    return 1;
  }
  return 0;
}

int cmd_metrics(const std::string& csv_path, const std::string& side,
                const std::string& json_out) {
  SimulationLog log = read_log(csv_path);
  Side s = side == "meas" ? Side::Measured : Side::True;
  MetricsSummary m = compute_metrics(log, s);
  std::ostringstream out;
  out << "side=" << (s == Side::Measured ? "meas" : "true") << "\n"
      << "mean_rms_dev=" << format_double(m.mean_rms_dev) << "\n"
      << "max_dev=" << format_double(m.max_dev) << "\n"
      << "violations_true=" << m.violation_count_true << "\n"
      << "violations_meas=" << m.violation_count_meas << "\n"
      << "avg_losses_mw=" << format_double(m.avg_losses_mw) << "\n"
      << "switch_events=" << m.switch_event_total << "\n";
  std::cout << out.str();
  if (!json_out.empty()) {
    std::ostringstream js;
    js << "{\n  \"side\": \"" << (s == Side::Measured ? "meas" : "true") << "\",\n"
       << "  \"mean_rms_dev\": " << format_double(m.mean_rms_dev) << ",\n"
       << "  \"max_dev\": " << format_double(m.max_dev) << ",\n"
       << "  \"violations_true\": " << m.violation_count_true << ",\n"
       << "  \"violations_meas\": " << m.violation_count_meas << ",\n"
       << "  \"avg_losses_mw\": " << format_double(m.avg_losses_mw) << ",\n"
       << "  \"switch_events\": " << m.switch_event_total << "\n}\n";
    write_text(json_out, js.str());
  }
  return 0;
}

int cmd_compare(const std::string& a_path, const std::string& b_path, const std::string& out,
                double tau) {
  SimulationLog a = read_log(a_path);
  SimulationLog b = read_log(b_path);
  std::vector<DeltaFrame> deltas = compare_runs(a, b);
  if (!out.empty()) write_text(out + "_delta.csv", delta_csv(deltas, a.bus_ids));

  std::vector<int> anomalies = detect_anomalies(a, b, tau);
  double max_mean = 0.0, max_dloss = 0.0;
  for (const DeltaFrame& d : deltas) {
    max_mean = std::max(max_mean, std::abs(d.mean_dvm_true));
    max_dloss = std::max(max_dloss, std::abs(d.dloss_mw));
  }
  std::cout << "frames=" << deltas.size() << " max_mean_dvm_true=" << format_double(max_mean)
            << " max_dloss_mw=" << format_double(max_dloss)
            << " anomaly_steps=" << anomalies.size() << "\n";
  if (!anomalies.empty()) {
    std::cout << "anomalies=";
    for (size_t i = 0; i < anomalies.size(); ++i)
      std::cout << (i ? "," : "") << anomalies[i];
    std::cout << "\n";
  }
  return 0;
}

int cmd_plot(const std::string& csv_path, const std::string& baseline_path,
             const std::string& kind, const std::vector<int>& buses, double tau,
             const std::string& title, const std::string& out) {
  SimulationLog log = read_log(csv_path);
  SimulationLog base;
  const SimulationLog* base_ptr = nullptr;
  if (!baseline_path.empty()) {
    base = read_log(baseline_path);
    base_ptr = &base;
  }
  PlotRequest req;
  req.kind = plot_kind_from_name(kind);
  req.buses = buses;
  req.tau = tau;
  req.title = title;
  write_text(out, render_plot(req, log, base_ptr));
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cyber-physical grid simulator"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "simulate and export telemetry");
  std::string case_spec = "builtin:case14";
  std::string schedule_spec = "default";
  int steps = 144;
  unsigned long long seed = 0;
  double sigma = 0.0;
  std::string out_prefix = "run";
  std::string baseline_out;
  run_cmd->add_option("--case", case_spec, "case file path or builtin:case14");
  run_cmd->add_option("--schedule", schedule_spec, "schedule JSON path, 'default', or 'none'");
  run_cmd->add_option("--steps", steps, "number of timesteps")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", seed, "load noise seed");
  run_cmd->add_option("--sigma", sigma, "load noise amplitude");
  run_cmd->add_option("--out", out_prefix, "output prefix for .csv and .json");
  run_cmd->add_option("--baseline-out", baseline_out,
                      "also run without attacks and export under this prefix");

  auto* metrics_cmd = app.add_subcommand("metrics", "summarize a telemetry CSV");
  std::string metrics_csv;
  std::string side = "true";
  std::string metrics_json;
  metrics_cmd->add_option("csv", metrics_csv, "telemetry CSV path")->required();
  metrics_cmd->add_option("--side", side, "true or meas")
      ->check(CLI::IsMember({"true", "meas"}));
  metrics_cmd->add_option("--json", metrics_json, "also write metrics to this JSON file");

  auto* compare_cmd = app.add_subcommand("compare", "frame-by-frame delta of two runs");
  std::string cmp_a, cmp_b, cmp_out;
  double cmp_tau = 0.005;
  compare_cmd->add_option("a", cmp_a, "attacked run CSV")->required();
  compare_cmd->add_option("b", cmp_b, "baseline run CSV")->required();
  compare_cmd->add_option("--out", cmp_out, "prefix for <prefix>_delta.csv");
  compare_cmd->add_option("--tau", cmp_tau, "anomaly threshold on rms deviation delta");

  auto* plot_cmd = app.add_subcommand("plot", "render an SVG figure from telemetry");
  std::string plot_csv, plot_baseline, plot_kind = "voltages", plot_title, plot_out = "plot.svg";
  std::vector<int> plot_buses;
  double plot_tau = 0.005;
  plot_cmd->add_option("csv", plot_csv, "telemetry CSV path")->required();
  plot_cmd->add_option("--baseline", plot_baseline, "baseline CSV for overlays and deltas");
  plot_cmd->add_option("--kind", plot_kind,
                       "voltages|heatmap|rms|timeline|balance|genpq|switching");
  plot_cmd->add_option("--buses", plot_buses, "bus ids to draw (voltages)")->delimiter(',');
  plot_cmd->add_option("--tau", plot_tau, "anomaly threshold for rms markers");
  plot_cmd->add_option("--title", plot_title, "plot title override");
  plot_cmd->add_option("--out", plot_out, "output SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run_cmd->parsed())
      return cmd_run(case_spec, schedule_spec, steps, seed, sigma, out_prefix, baseline_out);
    if (metrics_cmd->parsed()) return cmd_metrics(metrics_csv, side, metrics_json);
    if (compare_cmd->parsed()) return cmd_compare(cmp_a, cmp_b, cmp_out, cmp_tau);
    if (plot_cmd->parsed())
      return cmd_plot(plot_csv, plot_baseline, plot_kind, plot_buses, plot_tau, plot_title,
                      plot_out);
  } catch (const CaseParseError& e) {
    std::cerr << "case error: " << e.what() << "\n";
    return 2;
  } catch (const ScheduleError& e) {
    std::cerr << "schedule error: " << e.what() << "\n";
    return 2;
  } catch (const UnknownTargetBusError& e) {
    std::cerr << "schedule error: " << e.what() << "\n";
    return 2;
  } catch (const CsvError& e) {
    std::cerr << "csv error: " << e.what() << "\n";
    return 2;
  } catch (const PlotError& e) {
    std::cerr << "plot error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
