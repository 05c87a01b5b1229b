#pragma once

#include <stdexcept>
#include <string>

#include "cpsim/simulator.hpp"

namespace cpsim {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fixed column order:
//   t, hour, attack_mask, converged,
//   vm_true_<busid>..., vm_meas_<busid>..., va_<busid>...,
//   pg_<genidx>..., qg_<genidx>...,
//   total_load_mw, total_gen_mw, losses_mw,
//   violations_true, violations_meas, pvpq_switch_count
// Floats are shortest round-trip decimals; output is byte-deterministic.
std::string to_csv(const SimulationLog& log);
void write_csv(const SimulationLog& log, const std::string& path);

// Strict reader for the schema above; throws CsvError on any shape problem.
SimulationLog read_csv_text(const std::string& text);
SimulationLog read_csv(const std::string& path);

// Config echo + schedule + both-side metrics, as JSON.
std::string sidecar_json(const SimulationLog& log);
void write_sidecar(const SimulationLog& log, const std::string& path);

std::string delta_csv(const std::vector<DeltaFrame>& deltas,
                      const std::vector<int>& bus_ids);

// Shortest round-trip decimal for a double (CSV/SVG/JSON number formatting).
std::string format_double(double v);

}  // namespace cpsim
