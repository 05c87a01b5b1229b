#include <doctest.h>

#include <cmath>
#include <random>

#include "cpsim/simulator.hpp"

using namespace cpsim;

namespace {

SimConfig default_cfg() {
  SimConfig cfg;
  cfg.schedule = default_schedule();
  return cfg;
}

const SimulationLog& attacked_log() {
  static SimulationLog log = run(builtin_case14(), default_cfg());
  return log;
}

const SimulationLog& baseline_log() {
  static SimulationLog log = run(builtin_case14(), SimConfig{});
  return log;
}

}  // namespace

TEST_CASE("load multiplier hits the diurnal landmarks exactly") {
  SimConfig cfg;
  CHECK(load_multiplier(0, cfg) == 1.0);
  CHECK(load_multiplier(36, cfg) == 1.15);
  CHECK(load_multiplier(108, cfg) == 0.85);
  CHECK(std::abs(load_multiplier(72, cfg) - 1.0) <= 1e-15);
}

TEST_CASE("load noise is deterministic, bounded, and off when sigma is zero") {
  SimConfig cfg;
  cfg.noise_amplitude = 0.05;
  cfg.seed = 12345;
  bool any_nonzero = false;
  for (int t = 0; t < 144; ++t) {
    double m1 = load_multiplier(t, cfg);
    double m2 = load_multiplier(t, cfg);
    CHECK(m1 == m2);
    double pure = 1.0 + cfg.sinus_amplitude *
                            std::sin(2.0 * M_PI * (t * cfg.hours_per_cycle / cfg.n_steps) /
                                     cfg.hours_per_cycle);
    CHECK(std::abs(m1 - pure) <= cfg.noise_amplitude);
    if (m1 != pure) any_nonzero = true;
  }
  CHECK(any_nonzero);

  SimConfig other = cfg;
  other.seed = 54321;
  bool differs = false;
  for (int t = 0; t < 144; ++t)
    if (load_multiplier(t, cfg) != load_multiplier(t, other)) differs = true;
  CHECK(differs);
}

TEST_CASE("default run has the documented shape") {
  const SimulationLog& log = attacked_log();
  CHECK(log.frames.size() == 144);
  CHECK(log.bus_ids.size() == 14);
  CHECK(log.n_gens == 5);
  for (const TelemetryFrame& f : log.frames) CHECK(f.converged);
  for (int t = 0; t < 144; ++t) CHECK(log.frames[t].t == t);
}

TEST_CASE("FDI window frames show the exact bias split") {
  const SimulationLog& log = attacked_log();
  const TelemetryFrame& f = log.frames[75];
  CHECK(f.attack_mask == 4);
  for (int i = 0; i < 14; ++i) CHECK(f.vm_meas[i] == f.vm_true[i] + 0.1);
}

TEST_CASE("telemetry split: vm_meas deviates only under FDI") {
  for (const TelemetryFrame& f : attacked_log().frames) {
    if (f.attack_mask & 4) continue;
    CHECK(f.vm_meas == f.vm_true);
  }
}

TEST_CASE("DoS freeze holds loads and voltages constant") {
  const SimulationLog& log = attacked_log();
  const TelemetryFrame& anchor = log.frames[20];
  for (int t = 21; t <= 50; ++t) {
    const TelemetryFrame& f = log.frames[t];
    CHECK(f.pd_eff == anchor.pd_eff);
    CHECK(f.qd_eff == anchor.qd_eff);
    CHECK(f.vm_true == anchor.vm_true);
    CHECK(f.total_load_mw == anchor.total_load_mw);
  }
  // the frozen vector is the last one received before the window opened
  CHECK(anchor.pd_eff == log.frames[19].pd_eff);
  CHECK(anchor.total_load_mw == log.frames[19].total_load_mw);
}

TEST_CASE("empty schedule is the identity pipeline") {
  const SimulationLog& base = baseline_log();
  for (const TelemetryFrame& f : base.frames) {
    CHECK(f.attack_mask == 0);
    CHECK(f.vm_meas == f.vm_true);
  }
}

TEST_CASE("runs are deterministic field by field") {
  SimConfig cfg = default_cfg();
  cfg.noise_amplitude = 0.02;
  cfg.seed = 99;
  cfg.n_steps = 24;
  NetworkCase c = builtin_case14();
  SimulationLog a = run(c, cfg);
  SimulationLog b = run(c, cfg);
  REQUIRE(a.frames.size() == b.frames.size());
  for (size_t t = 0; t < a.frames.size(); ++t) {
    CHECK(a.frames[t].vm_true == b.frames[t].vm_true);
    CHECK(a.frames[t].vm_meas == b.frames[t].vm_meas);
    CHECK(a.frames[t].va == b.frames[t].va);
    CHECK(a.frames[t].pg == b.frames[t].pg);
    CHECK(a.frames[t].qg == b.frames[t].qg);
    CHECK(a.frames[t].losses_mw == b.frames[t].losses_mw);
  }
}

TEST_CASE("per-frame conservation holds for converged frames") {
  for (const SimulationLog* log : {&attacked_log(), &baseline_log()})
    for (const TelemetryFrame& f : log->frames) {
      if (!f.converged) continue;
      CHECK(std::abs(f.total_gen_mw - f.total_load_mw - f.losses_mw) < 1e-6);
    }
}

TEST_CASE("rms deviation on the documented examples") {
  CHECK(rms_deviation({1.0, 1.0, 1.0}) == 0.0);
  CHECK(rms_deviation({1.05, 1.05}) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(rms_deviation({0.9, 1.1}) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_THROWS_AS(rms_deviation({}), std::invalid_argument);
}

TEST_CASE("violation counting uses a closed band") {
  CHECK(count_violations({0.94, 1.0, 1.06}, 0.95, 1.05) == 2);
  CHECK(count_violations({1.05, 0.95}, 0.95, 1.05) == 0);
  CHECK(count_violations({1.0, 1.0}, 0.95, 1.05) == 0);
  CHECK(count_violations({}, 0.95, 1.05) == 0);
}

TEST_CASE("metrics aggregate as documented") {
  const SimulationLog& log = attacked_log();
  MetricsSummary t = compute_metrics(log, Side::True);
  MetricsSummary m = compute_metrics(log, Side::Measured);
  CHECK(m.max_dev >= t.max_dev);
  CHECK(m.max_dev == doctest::Approx(t.max_dev + 0.1).epsilon(0.02));
  CHECK(t.violation_count_true == m.violation_count_true);

  long stored = 0;
  for (const TelemetryFrame& f : log.frames) stored += f.violations_true;
  CHECK(t.violation_count_true == stored);

  SimulationLog single = log;
  single.frames.resize(1);
  MetricsSummary s = compute_metrics(single, Side::True);
  CHECK(s.mean_rms_dev == rms_deviation(log.frames[0].vm_true));
  CHECK(s.avg_losses_mw == log.frames[0].losses_mw);
  CHECK(s.switch_event_total == log.frames[0].pvpq_switch_count);

  SimulationLog empty;
  CHECK_THROWS_AS(compute_metrics(empty, Side::True), std::invalid_argument);
}

TEST_CASE("flat unity frames produce zero metrics") {
  SimulationLog log;
  log.bus_ids = {1, 2};
  log.n_gens = 1;
  for (int t = 0; t < 3; ++t) {
    TelemetryFrame f;
    f.t = t;
    f.converged = true;
    f.vm_true = {1.0, 1.0};
    f.vm_meas = {1.0, 1.0};
    f.va = {0.0, 0.0};
    f.pg = {5.0};
    f.qg = {0.0};
    f.losses_mw = 2.5;
    log.frames.push_back(f);
  }
  MetricsSummary s = compute_metrics(log, Side::True);
  CHECK(s.mean_rms_dev == 0.0);
  CHECK(s.max_dev == 0.0);
  CHECK(s.violation_count_true == 0);
  CHECK(s.avg_losses_mw == 2.5);
}

TEST_CASE("compare_runs deltas and shape checks") {
  const SimulationLog& log = attacked_log();
  std::vector<DeltaFrame> self = compare_runs(log, log);
  for (const DeltaFrame& d : self) {
    for (double v : d.dvm_true) CHECK(v == 0.0);
    CHECK(d.mean_dvm_true == 0.0);
    CHECK(d.dloss_mw == 0.0);
  }

  std::vector<DeltaFrame> deltas = compare_runs(log, baseline_log());
  for (int t = 60; t <= 90; ++t) {
    for (double v : deltas[t].dvm_true) CHECK(std::abs(v) < 0.01);
    for (double v : deltas[t].dvm_meas) CHECK(v == doctest::Approx(0.1).epsilon(0.15));
  }

  SimulationLog shorter = baseline_log();
  shorter.frames.resize(10);
  CHECK_THROWS_AS(compare_runs(log, shorter), ShapeMismatchError);
}

TEST_CASE("anomaly detection flags only in-window steps") {
  const SimulationLog& a = attacked_log();
  const SimulationLog& b = baseline_log();

  CHECK(detect_anomalies(a, a).empty());
  CHECK(detect_anomalies(a, b, 1e300).empty());

  AttackSchedule sched = default_schedule();
  for (int t : detect_anomalies(a, b)) CHECK(attack_mask_at(sched, t) != 0);

  std::vector<int> tight = detect_anomalies(a, b, 0.002);
  CHECK(!tight.empty());
  for (int t : tight) {
    CHECK(t >= 100);
    CHECK(t <= 130);
  }
}

TEST_CASE("metric oracles agree with brute force on random vectors") {
  std::mt19937 rng(424242);
  std::uniform_real_distribution<double> val(0.8, 1.2);
  for (int round = 0; round < 1000; ++round) {
    size_t n = 1 + rng() % 50;
    std::vector<double> v(n);
    for (double& x : v) x = val(rng);

    double acc = 0.0;
    for (double x : v) acc += (x - 1.0) * (x - 1.0);
    double brute_rms = std::sqrt(acc / static_cast<double>(n));
    CHECK(rms_deviation(v) == brute_rms);

    int brute_viol = 0;
    for (double x : v)
      if (x < 0.97 || x > 1.03) ++brute_viol;
    CHECK(count_violations(v, 0.97, 1.03) == brute_viol);
  }
}

TEST_CASE("configuration and schedule validation happens up front") {
  NetworkCase c = builtin_case14();
  SimConfig bad = default_cfg();
  bad.n_steps = 0;
  CHECK_THROWS_AS(run(c, bad), std::invalid_argument);

  bad = default_cfg();
  bad.vmin = 1.2;
  CHECK_THROWS_AS(run(c, bad), std::invalid_argument);

  bad = default_cfg();
  bad.noise_amplitude = -0.1;
  CHECK_THROWS_AS(run(c, bad), std::invalid_argument);

  SimConfig unknown_bus = default_cfg();
  unknown_bus.schedule.windows[2].target_buses = {99};
  CHECK_THROWS_AS(run(c, unknown_bus), UnknownTargetBusError);

  NetworkCase broken = c;
  broken.branches[0].x = 0.0;
  CHECK_THROWS_AS(run(broken, default_cfg()), std::invalid_argument);
}

TEST_CASE("non-convergence is recorded without aborting the run") {
  NetworkCase c;
  c.base_mva = 100.0;
  c.buses.push_back({1, BusKind::Slack, 0, 0, 0, 0, 1.0, 0, 230, 1.1, 0.9});
  c.buses.push_back({2, BusKind::PQ, 5000, 0, 0, 0, 1.0, 0, 230, 1.1, 0.9});
  c.gens.push_back({1, 0, 0, 9000, -9000, 1.0, true, 9000, 0});
  c.branches.push_back({1, 2, 0.0, 0.1, 0.0, 1.0, 0.0, true});
  SimConfig cfg;
  cfg.n_steps = 3;
  SimulationLog log = run(c, cfg);
  REQUIRE(log.frames.size() == 3);
  for (const TelemetryFrame& f : log.frames) {
    CHECK(!f.converged);
    REQUIRE(f.vm_true.size() == 2);
  }
}
