#pragma once

#include <cstdint>
#include <vector>

#include "cpsim/attacks.hpp"
#include "cpsim/caseio.hpp"
#include "cpsim/powerflow.hpp"

namespace cpsim {

struct SimConfig {
  int n_steps = 144;
  double hours_per_cycle = 24.0;
  double sinus_amplitude = 0.15;
  double noise_amplitude = 0.0;  // sigma, uniform half-range on the multiplier
  std::uint64_t seed = 0;
  double vmin = 0.95;  // p.u. band for violation counting
  double vmax = 1.05;
  AttackSchedule schedule;
  PowerFlowOptions pf_options;
};

struct TelemetryFrame {
  int t = 0;
  double hour = 0.0;
  unsigned attack_mask = 0;
  bool converged = false;
  std::vector<double> vm_true;  // p.u.
  std::vector<double> vm_meas;  // p.u.
  std::vector<double> va;       // radians
  std::vector<double> pg;       // MW
  std::vector<double> qg;       // MVAr
  std::vector<double> pd_eff;   // MW actually fed to the solver
  std::vector<double> qd_eff;   // MVAr
  double total_load_mw = 0.0;
  double total_gen_mw = 0.0;
  double losses_mw = 0.0;
  int violations_true = 0;
  int violations_meas = 0;
  int pvpq_switch_count = 0;
};

struct SimulationLog {
  SimConfig config;
  std::vector<int> bus_ids;
  int n_gens = 0;
  std::vector<TelemetryFrame> frames;
};

enum class Side { True, Measured };

struct MetricsSummary {
  double mean_rms_dev = 0.0;
  double max_dev = 0.0;
  long violation_count_true = 0;
  long violation_count_meas = 0;
  double avg_losses_mw = 0.0;
  long switch_event_total = 0;
  std::vector<int> anomaly_steps;  // filled by detect_anomalies, not here
};

struct DeltaFrame {
  int t = 0;
  std::vector<double> dvm_true;
  std::vector<double> dvm_meas;
  double mean_dvm_true = 0.0;
  double mean_dvm_meas = 0.0;
  double dloss_mw = 0.0;
};

class ShapeMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// m(t) = 1 + A*sin(2*pi*h/H) + eta_t, h = t*H/n_steps; eta_t uniform in
// [-sigma, sigma], drawn deterministically from (seed, t).
double load_multiplier(int t, const SimConfig& cfg);

// One timestep: scale loads, apply attacks, solve, split true/measured.
// prev_effective carries step t-1's solver loads (pass nominal at t = 0).
TelemetryFrame step(const NetworkCase& c, const SimConfig& cfg, int t,
                    const LoadVector& prev_effective, LoadVector* effective_out = nullptr);

SimulationLog run(const NetworkCase& c, const SimConfig& cfg);

double rms_deviation(const std::vector<double>& vm);

// Entries strictly outside the closed band [vmin, vmax].
int count_violations(const std::vector<double>& vm, double vmin, double vmax);

MetricsSummary compute_metrics(const SimulationLog& log, Side which);

std::vector<DeltaFrame> compare_runs(const SimulationLog& a, const SimulationLog& b);

// Steps where |rms(attacked vm_true) - rms(baseline vm_true)| > tau.
std::vector<int> detect_anomalies(const SimulationLog& attacked,
                                  const SimulationLog& baseline,
                                  double tau = 0.005);

}  // namespace cpsim
