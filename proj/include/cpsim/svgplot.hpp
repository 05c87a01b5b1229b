#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpsim/simulator.hpp"

namespace cpsim {

enum class PlotKind {
  Voltages,   // vm_true lines for selected buses, band rules, attack spans
  Heatmap,    // bus x t grid; two logs -> delta, diverging scale centered at 0
  Rms,        // per-step RMS deviation; two logs -> overlay + anomaly markers
  Timeline,   // attack mask bit lanes
  Balance,    // total load / generation / losses
  GenPQ,      // per-generator P (solid) and Q (dashed)
  Switching,  // PV->PQ conversion count per step
};

class PlotError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PlotRequest {
  PlotKind kind = PlotKind::Voltages;
  std::vector<int> buses;  // empty = all (Voltages); ignored elsewhere
  double tau = 0.005;      // anomaly threshold for Rms with a baseline
  std::string title;
};

PlotKind plot_kind_from_name(const std::string& name);

// Self-contained deterministic SVG 1.1. baseline may be null.
std::string render_plot(const PlotRequest& req, const SimulationLog& log,
                        const SimulationLog* baseline = nullptr);

}  // namespace cpsim
