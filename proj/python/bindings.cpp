#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cpsim/attacks.hpp"
#include "cpsim/caseio.hpp"
#include "cpsim/csvio.hpp"
#include "cpsim/powerflow.hpp"
#include "cpsim/simulator.hpp"
#include "cpsim/svgplot.hpp"

namespace py = pybind11;
using namespace cpsim;

namespace {

std::vector<std::vector<std::complex<double>>> ybus_rows(const AdmittanceMatrix& y) {
  std::vector<std::vector<std::complex<double>>> rows(y.n);
  for (int i = 0; i < y.n; ++i) {
    rows[i].resize(y.n);
    for (int k = 0; k < y.n; ++k) rows[i][k] = y.Y(i, k);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "cyber-physical grid simulation core";

  py::enum_<BusKind>(m, "BusKind")
      .value("PQ", BusKind::PQ)
      .value("PV", BusKind::PV)
      .value("Slack", BusKind::Slack)
      .value("Isolated", BusKind::Isolated);

  py::class_<BusRecord>(m, "BusRecord")
      .def(py::init<>())
      .def_readwrite("id", &BusRecord::id)
      .def_readwrite("bus_kind", &BusRecord::bus_kind)
      .def_readwrite("pd", &BusRecord::pd)
      .def_readwrite("qd", &BusRecord::qd)
      .def_readwrite("gs", &BusRecord::gs)
      .def_readwrite("bs", &BusRecord::bs)
      .def_readwrite("vm0", &BusRecord::vm0)
      .def_readwrite("va0", &BusRecord::va0)
      .def_readwrite("base_kv", &BusRecord::base_kv)
      .def_readwrite("vmax", &BusRecord::vmax)
      .def_readwrite("vmin", &BusRecord::vmin)
      .def("__eq__", [](const BusRecord& a, const BusRecord& b) { return a == b; });

  py::class_<GenRecord>(m, "GenRecord")
      .def(py::init<>())
      .def_readwrite("bus", &GenRecord::bus)
      .def_readwrite("pg", &GenRecord::pg)
      .def_readwrite("qg", &GenRecord::qg)
      .def_readwrite("qmax", &GenRecord::qmax)
      .def_readwrite("qmin", &GenRecord::qmin)
      .def_readwrite("vset", &GenRecord::vset)
      .def_readwrite("status", &GenRecord::status)
      .def_readwrite("pmax", &GenRecord::pmax)
      .def_readwrite("pmin", &GenRecord::pmin)
      .def("__eq__", [](const GenRecord& a, const GenRecord& b) { return a == b; });

  py::class_<BranchRecord>(m, "BranchRecord")
      .def(py::init<>())
      .def_readwrite("from_bus", &BranchRecord::from_bus)
      .def_readwrite("to_bus", &BranchRecord::to_bus)
      .def_readwrite("r", &BranchRecord::r)
      .def_readwrite("x", &BranchRecord::x)
      .def_readwrite("b", &BranchRecord::b)
      .def_readwrite("tap", &BranchRecord::tap)
      .def_readwrite("shift", &BranchRecord::shift)
      .def_readwrite("status", &BranchRecord::status)
      .def("__eq__", [](const BranchRecord& a, const BranchRecord& b) { return a == b; });

  py::class_<NetworkCase>(m, "NetworkCase")
      .def(py::init<>())
      .def_readwrite("base_mva", &NetworkCase::base_mva)
      .def_readwrite("buses", &NetworkCase::buses)
      .def_readwrite("gens", &NetworkCase::gens)
      .def_readwrite("branches", &NetworkCase::branches)
      .def("bus_index", &NetworkCase::bus_index)
      .def("__eq__", [](const NetworkCase& a, const NetworkCase& b) { return a == b; });

  py::register_exception<CaseParseError>(m, "CaseParseError", PyExc_ValueError);
  py::register_exception<ScheduleError>(m, "ScheduleError", PyExc_ValueError);
  py::register_exception<UnknownTargetBusError>(m, "UnknownTargetBusError", PyExc_ValueError);
  py::register_exception<CsvError>(m, "CsvError", PyExc_ValueError);
  py::register_exception<PlotError>(m, "PlotError", PyExc_ValueError);
  py::register_exception<ZeroImpedanceError>(m, "ZeroImpedanceError", PyExc_ValueError);
  py::register_exception<ShapeMismatchError>(m, "ShapeMismatchError", PyExc_ValueError);

  m.def("parse_matpower_case", &parse_matpower_case, py::arg("text"));
  m.def("builtin_case14", &builtin_case14);
  m.def("validate_case", &validate_case, py::arg("network"));
  m.def("serialize_case", &serialize_case, py::arg("network"));

  py::enum_<SolveStatus>(m, "SolveStatus")
      .value("Converged", SolveStatus::Converged)
      .value("NotConverged", SolveStatus::NotConverged)
      .value("SingularJacobian", SolveStatus::SingularJacobian)
      .value("QlimRoundsExceeded", SolveStatus::QlimRoundsExceeded);

  py::enum_<LimitKind>(m, "LimitKind").value("Qmin", LimitKind::Qmin).value("Qmax", LimitKind::Qmax);

  py::class_<SwitchedGen>(m, "SwitchedGen")
      .def_readonly("gen", &SwitchedGen::gen)
      .def_readonly("limit", &SwitchedGen::limit);

  py::class_<PowerFlowOptions>(m, "PowerFlowOptions")
      .def(py::init<>())
      .def_readwrite("tol", &PowerFlowOptions::tol)
      .def_readwrite("max_iter", &PowerFlowOptions::max_iter)
      .def_readwrite("enforce_q_lims", &PowerFlowOptions::enforce_q_lims)
      .def_readwrite("max_qlim_rounds", &PowerFlowOptions::max_qlim_rounds)
      .def_readwrite("flat_start", &PowerFlowOptions::flat_start)
      .def_readwrite("qlim_one_at_a_time", &PowerFlowOptions::qlim_one_at_a_time);

  py::class_<PowerFlowSolution>(m, "PowerFlowSolution")
      .def_readonly("vm", &PowerFlowSolution::vm)
      .def_readonly("va", &PowerFlowSolution::va)
      .def_readonly("pg", &PowerFlowSolution::pg)
      .def_readonly("qg", &PowerFlowSolution::qg)
      .def_readonly("converged", &PowerFlowSolution::converged)
      .def_readonly("status", &PowerFlowSolution::status)
      .def_readonly("iterations", &PowerFlowSolution::iterations)
      .def_readonly("qlim_rounds", &PowerFlowSolution::qlim_rounds)
      .def_readonly("max_mismatch", &PowerFlowSolution::max_mismatch)
      .def_readonly("losses_mw", &PowerFlowSolution::losses_mw)
      .def_readonly("switched_gens", &PowerFlowSolution::switched_gens)
      .def_readonly("slack_q_violations", &PowerFlowSolution::slack_q_violations);

  m.def("build_ybus",
        [](const NetworkCase& c) { return ybus_rows(build_ybus(c)); }, py::arg("network"));
  m.def(
      "nr_solve",
      [](const NetworkCase& c, const PowerFlowOptions& options) {
        AdmittanceMatrix y = build_ybus(c);
        return nr_solve(c, y, solver_bus_kinds(c), options);
      },
      py::arg("network"), py::arg("options") = PowerFlowOptions{});
  m.def("solve_with_qlims", &solve_with_qlims, py::arg("network"),
        py::arg("options") = PowerFlowOptions{});
  m.def(
      "compute_losses",
      [](const NetworkCase& c, const std::vector<double>& vm, const std::vector<double>& va) {
        return compute_losses(c, build_ybus(c), vm, va);
      },
      py::arg("network"), py::arg("vm"), py::arg("va"));

  py::enum_<AttackKind>(m, "AttackKind")
      .value("DoS", AttackKind::DoS)
      .value("DoD", AttackKind::DoD)
      .value("FDI", AttackKind::FDI);

  py::class_<AttackWindow>(m, "AttackWindow")
      .def(py::init<>())
      .def_readwrite("kind", &AttackWindow::kind)
      .def_readwrite("t_start", &AttackWindow::t_start)
      .def_readwrite("t_end", &AttackWindow::t_end)
      .def_readwrite("target_buses", &AttackWindow::target_buses)
      .def_readwrite("scale", &AttackWindow::scale)
      .def_readwrite("bias", &AttackWindow::bias)
      .def("active_at", &AttackWindow::active_at, py::arg("t"))
      .def("__eq__", [](const AttackWindow& a, const AttackWindow& b) { return a == b; });

  py::class_<AttackSchedule>(m, "AttackSchedule")
      .def(py::init<>())
      .def_readwrite("windows", &AttackSchedule::windows)
      .def("__eq__", [](const AttackSchedule& a, const AttackSchedule& b) { return a == b; });

  m.def("default_schedule", &default_schedule);
  m.def("attack_mask_at", &attack_mask_at, py::arg("schedule"), py::arg("t"));
  m.def("parse_schedule", &parse_schedule, py::arg("text"));
  m.def("serialize_schedule", &serialize_schedule, py::arg("schedule"));

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("n_steps", &SimConfig::n_steps)
      .def_readwrite("hours_per_cycle", &SimConfig::hours_per_cycle)
      .def_readwrite("sinus_amplitude", &SimConfig::sinus_amplitude)
      .def_readwrite("noise_amplitude", &SimConfig::noise_amplitude)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("vmin", &SimConfig::vmin)
      .def_readwrite("vmax", &SimConfig::vmax)
      .def_readwrite("schedule", &SimConfig::schedule)
      .def_readwrite("pf_options", &SimConfig::pf_options);

  py::class_<TelemetryFrame>(m, "TelemetryFrame")
      .def_readonly("t", &TelemetryFrame::t)
      .def_readonly("hour", &TelemetryFrame::hour)
      .def_readonly("attack_mask", &TelemetryFrame::attack_mask)
      .def_readonly("converged", &TelemetryFrame::converged)
      .def_readonly("vm_true", &TelemetryFrame::vm_true)
      .def_readonly("vm_meas", &TelemetryFrame::vm_meas)
      .def_readonly("va", &TelemetryFrame::va)
      .def_readonly("pg", &TelemetryFrame::pg)
      .def_readonly("qg", &TelemetryFrame::qg)
      .def_readonly("pd_eff", &TelemetryFrame::pd_eff)
      .def_readonly("qd_eff", &TelemetryFrame::qd_eff)
      .def_readonly("total_load_mw", &TelemetryFrame::total_load_mw)
      .def_readonly("total_gen_mw", &TelemetryFrame::total_gen_mw)
      .def_readonly("losses_mw", &TelemetryFrame::losses_mw)
      .def_readonly("violations_true", &TelemetryFrame::violations_true)
      .def_readonly("violations_meas", &TelemetryFrame::violations_meas)
      .def_readonly("pvpq_switch_count", &TelemetryFrame::pvpq_switch_count);

  py::class_<SimulationLog>(m, "SimulationLog")
      .def(py::init<>())
      .def_readwrite("config", &SimulationLog::config)
      .def_readwrite("bus_ids", &SimulationLog::bus_ids)
      .def_readwrite("n_gens", &SimulationLog::n_gens)
      .def_readwrite("frames", &SimulationLog::frames);

  py::enum_<Side>(m, "Side").value("True_", Side::True).value("Measured", Side::Measured);

  py::class_<MetricsSummary>(m, "MetricsSummary")
      .def_readonly("mean_rms_dev", &MetricsSummary::mean_rms_dev)
      .def_readonly("max_dev", &MetricsSummary::max_dev)
      .def_readonly("violation_count_true", &MetricsSummary::violation_count_true)
      .def_readonly("violation_count_meas", &MetricsSummary::violation_count_meas)
      .def_readonly("avg_losses_mw", &MetricsSummary::avg_losses_mw)
      .def_readonly("switch_event_total", &MetricsSummary::switch_event_total)
      .def_readonly("anomaly_steps", &MetricsSummary::anomaly_steps)
      .def("__repr__", [](const MetricsSummary& s) {
        return "MetricsSummary(mean_rms_dev=" + format_double(s.mean_rms_dev) +
               ", max_dev=" + format_double(s.max_dev) +
               ", violations_true=" + std::to_string(s.violation_count_true) +
               ", violations_meas=" + std::to_string(s.violation_count_meas) +
               ", avg_losses_mw=" + format_double(s.avg_losses_mw) +
               ", switch_events=" + std::to_string(s.switch_event_total) + ")";
      });

  py::class_<DeltaFrame>(m, "DeltaFrame")
      .def_readonly("t", &DeltaFrame::t)
      .def_readonly("dvm_true", &DeltaFrame::dvm_true)
      .def_readonly("dvm_meas", &DeltaFrame::dvm_meas)
      .def_readonly("mean_dvm_true", &DeltaFrame::mean_dvm_true)
      .def_readonly("mean_dvm_meas", &DeltaFrame::mean_dvm_meas)
      .def_readonly("dloss_mw", &DeltaFrame::dloss_mw);

  m.def("load_multiplier", &load_multiplier, py::arg("t"), py::arg("config"));
  m.def("run", &run, py::arg("network"), py::arg("config"));
  m.def("rms_deviation", &rms_deviation, py::arg("vm"));
  m.def("count_violations", &count_violations, py::arg("vm"), py::arg("vmin"), py::arg("vmax"));
  m.def("compute_metrics", &compute_metrics, py::arg("log"), py::arg("side") = Side::True);
  m.def("compare_runs", &compare_runs, py::arg("a"), py::arg("b"));
  m.def("detect_anomalies", &detect_anomalies, py::arg("attacked"), py::arg("baseline"),
        py::arg("tau") = 0.005);

  m.def("to_csv", &to_csv, py::arg("log"));
  m.def("read_csv_text", &read_csv_text, py::arg("text"));
  m.def("sidecar_json", &sidecar_json, py::arg("log"));
  m.def("format_double", &format_double, py::arg("value"));

  py::enum_<PlotKind>(m, "PlotKind")
      .value("Voltages", PlotKind::Voltages)
      .value("Heatmap", PlotKind::Heatmap)
      .value("Rms", PlotKind::Rms)
      .value("Timeline", PlotKind::Timeline)
      .value("Balance", PlotKind::Balance)
      .value("GenPQ", PlotKind::GenPQ)
      .value("Switching", PlotKind::Switching);

  py::class_<PlotRequest>(m, "PlotRequest")
      .def(py::init<>())
      .def_readwrite("kind", &PlotRequest::kind)
      .def_readwrite("buses", &PlotRequest::buses)
      .def_readwrite("tau", &PlotRequest::tau)
      .def_readwrite("title", &PlotRequest::title);

  m.def("plot_kind_from_name", &plot_kind_from_name, py::arg("name"));
  m.def(
      "render_plot",
      [](const PlotRequest& req, const SimulationLog& log, const SimulationLog* baseline) {
        return render_plot(req, log, baseline);
      },
      py::arg("request"), py::arg("log"), py::arg("baseline") = nullptr);
}
