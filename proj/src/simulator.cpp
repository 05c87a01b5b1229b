#include "cpsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace cpsim {

namespace {

// SplitMix64 keyed on (seed, t); cheap, stateless, fully reproducible.
double noise_at(std::uint64_t seed, int t, double sigma) {
  if (sigma == 0.0) return 0.0;
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(t) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  double u = static_cast<double>(z >> 11) * 0x1.0p-53;  // [0, 1)
  return (2.0 * u - 1.0) * sigma;
}

void check_config(const SimConfig& cfg) {
  if (cfg.n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  if (cfg.noise_amplitude < 0.0 || cfg.noise_amplitude >= 1.0)
    throw std::invalid_argument("noise_amplitude must be in [0, 1)");
  if (!(cfg.vmin < cfg.vmax)) throw std::invalid_argument("vband requires vmin < vmax");
}

std::vector<int> case_bus_ids(const NetworkCase& c) {
  std::vector<int> ids(c.buses.size());
  for (size_t i = 0; i < c.buses.size(); ++i) ids[i] = c.buses[i].id;
  return ids;
}

LoadVector nominal_loads(const NetworkCase& c, const SimConfig& cfg, int t) {
  double m = load_multiplier(t, cfg);
  LoadVector lv;
  lv.pd.resize(c.buses.size());
  lv.qd.resize(c.buses.size());
  for (size_t i = 0; i < c.buses.size(); ++i) {
    lv.pd[i] = c.buses[i].pd * m;
    lv.qd[i] = c.buses[i].qd * m;
  }
  return lv;
}

}  // namespace

double load_multiplier(int t, const SimConfig& cfg) {
  double hour = t * cfg.hours_per_cycle / cfg.n_steps;
  double phase = 2.0 * std::numbers::pi * hour / cfg.hours_per_cycle;
  return 1.0 + cfg.sinus_amplitude * std::sin(phase) +
         noise_at(cfg.seed, t, cfg.noise_amplitude);
}

TelemetryFrame step(const NetworkCase& c, const SimConfig& cfg, int t,
                    const LoadVector& prev_effective, LoadVector* effective_out) {
  std::vector<int> bus_ids = case_bus_ids(c);
  LoadVector nominal = nominal_loads(c, cfg, t);
  LoadVector eff = apply_load_attacks(cfg.schedule, t, nominal, prev_effective, bus_ids);

  NetworkCase work = c;
  for (size_t i = 0; i < work.buses.size(); ++i) {
    work.buses[i].pd = eff.pd[i];
    work.buses[i].qd = eff.qd[i];
  }
  PowerFlowSolution sol = solve_with_qlims(work, cfg.pf_options);

  TelemetryFrame f;
  f.t = t;
  f.hour = t * cfg.hours_per_cycle / cfg.n_steps;
  f.attack_mask = attack_mask_at(cfg.schedule, t);
  f.converged = sol.converged;
  f.vm_true = sol.vm;
  f.vm_meas = apply_measurement_attacks(cfg.schedule, t, sol.vm, bus_ids);
  f.va = sol.va;
  f.pg = sol.pg;
  f.qg = sol.qg;
  f.pd_eff = eff.pd;
  f.qd_eff = eff.qd;
  f.total_load_mw = std::accumulate(eff.pd.begin(), eff.pd.end(), 0.0);
  f.total_gen_mw = std::accumulate(sol.pg.begin(), sol.pg.end(), 0.0);
  f.losses_mw = sol.losses_mw;
  f.violations_true = count_violations(f.vm_true, cfg.vmin, cfg.vmax);
  f.violations_meas = count_violations(f.vm_meas, cfg.vmin, cfg.vmax);
  f.pvpq_switch_count = static_cast<int>(sol.switched_gens.size());

  if (effective_out) *effective_out = std::move(eff);
  return f;
}

SimulationLog run(const NetworkCase& c, const SimConfig& cfg) {
  check_config(cfg);
  std::vector<std::string> problems = validate_case(c);
  if (!problems.empty()) {
    std::string msg = "invalid case:";
    for (const std::string& p : problems) msg += " [" + p + "]";
    throw std::invalid_argument(msg);
  }
  std::vector<int> bus_ids = case_bus_ids(c);
  for (const AttackWindow& w : cfg.schedule.windows)
    for (int id : w.target_buses)
      if (std::find(bus_ids.begin(), bus_ids.end(), id) == bus_ids.end())
        throw UnknownTargetBusError(id);

  SimulationLog log;
  log.config = cfg;
  log.bus_ids = bus_ids;
  log.n_gens = static_cast<int>(c.gens.size());
  log.frames.reserve(cfg.n_steps);

  LoadVector prev = nominal_loads(c, cfg, 0);
  for (int t = 0; t < cfg.n_steps; ++t) {
    LoadVector eff;
    log.frames.push_back(step(c, cfg, t, prev, &eff));
    prev = std::move(eff);
  }
  return log;
}

double rms_deviation(const std::vector<double>& vm) {
  if (vm.empty()) throw std::invalid_argument("rms_deviation of an empty vector");
  double acc = 0.0;
  for (double v : vm) acc += (v - 1.0) * (v - 1.0);
  return std::sqrt(acc / static_cast<double>(vm.size()));
}

int count_violations(const std::vector<double>& vm, double vmin, double vmax) {
  int n = 0;
  for (double v : vm)
    if (v < vmin || v > vmax) ++n;
  return n;
}

MetricsSummary compute_metrics(const SimulationLog& log, Side which) {
  if (log.frames.empty()) throw std::invalid_argument("compute_metrics on an empty log");
  MetricsSummary m;
  double rms_sum = 0.0, loss_sum = 0.0;
  for (const TelemetryFrame& f : log.frames) {
    const std::vector<double>& vm = which == Side::True ? f.vm_true : f.vm_meas;
    rms_sum += rms_deviation(vm);
    for (double v : vm) m.max_dev = std::max(m.max_dev, std::abs(v - 1.0));
    m.violation_count_true += f.violations_true;
    m.violation_count_meas += f.violations_meas;
    loss_sum += f.losses_mw;
    m.switch_event_total += f.pvpq_switch_count;
  }
  m.mean_rms_dev = rms_sum / static_cast<double>(log.frames.size());
  m.avg_losses_mw = loss_sum / static_cast<double>(log.frames.size());
  return m;
}

std::vector<DeltaFrame> compare_runs(const SimulationLog& a, const SimulationLog& b) {
  if (a.frames.size() != b.frames.size())
    throw ShapeMismatchError("runs have different step counts");
  if (a.bus_ids != b.bus_ids) throw ShapeMismatchError("runs have different bus sets");

  std::vector<DeltaFrame> out;
  out.reserve(a.frames.size());
  const size_t nb = a.bus_ids.size();
  for (size_t t = 0; t < a.frames.size(); ++t) {
    const TelemetryFrame& fa = a.frames[t];
    const TelemetryFrame& fb = b.frames[t];
    if (fa.vm_true.size() != nb || fb.vm_true.size() != nb)
      throw ShapeMismatchError("frame voltage vector size mismatch");
    DeltaFrame d;
    d.t = fa.t;
    d.dvm_true.resize(nb);
    d.dvm_meas.resize(nb);
    for (size_t i = 0; i < nb; ++i) {
      d.dvm_true[i] = fa.vm_true[i] - fb.vm_true[i];
      d.dvm_meas[i] = fa.vm_meas[i] - fb.vm_meas[i];
      d.mean_dvm_true += d.dvm_true[i];
      d.mean_dvm_meas += d.dvm_meas[i];
    }
    d.mean_dvm_true /= static_cast<double>(nb);
    d.mean_dvm_meas /= static_cast<double>(nb);
    d.dloss_mw = fa.losses_mw - fb.losses_mw;
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<int> detect_anomalies(const SimulationLog& attacked, const SimulationLog& baseline,
                                  double tau) {
  if (attacked.frames.size() != baseline.frames.size())
    throw ShapeMismatchError("logs have different step counts");
  std::vector<int> flagged;
  for (size_t t = 0; t < attacked.frames.size(); ++t) {
    double ra = rms_deviation(attacked.frames[t].vm_true);
    double rb = rms_deviation(baseline.frames[t].vm_true);
    if (std::abs(ra - rb) > tau) flagged.push_back(static_cast<int>(t));
  }
  return flagged;
}

}  // namespace cpsim
