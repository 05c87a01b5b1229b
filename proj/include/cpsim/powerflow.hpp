#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cpsim/caseio.hpp"

namespace cpsim {

struct AdmittanceMatrix {
  int n = 0;
  Eigen::MatrixXcd Y;
};

struct PowerFlowOptions {
  double tol = 1e-8;       // p.u. max mismatch
  int max_iter = 20;
  bool enforce_q_lims = true;
  int max_qlim_rounds = 10;
  bool flat_start = true;  // false: start from the case's stored vm0/va0
  bool qlim_one_at_a_time = false;  // convert only the worst violator per round
};

enum class SolveStatus {
  Converged,
  NotConverged,
  SingularJacobian,
  QlimRoundsExceeded,
};

enum class LimitKind { Qmin, Qmax };

struct SwitchedGen {
  int gen = 0;  // index into NetworkCase::gens
  LimitKind limit = LimitKind::Qmax;
  bool operator==(const SwitchedGen&) const = default;
};

struct PowerFlowSolution {
  std::vector<double> vm;  // p.u., per bus
  std::vector<double> va;  // radians, per bus
  std::vector<double> pg;  // MW, per generator
  std::vector<double> qg;  // MVAr, per generator
  bool converged = false;
  SolveStatus status = SolveStatus::NotConverged;
  int iterations = 0;       // total NR iterations across all rounds
  int qlim_rounds = 0;
  double max_mismatch = 0.0;  // p.u., at the returned iterate
  double losses_mw = 0.0;
  std::vector<SwitchedGen> switched_gens;
  std::vector<int> slack_q_violations;  // gen indices; reported, never switched
};

class ZeroImpedanceError : public std::invalid_argument {
 public:
  explicit ZeroImpedanceError(int branch_index)
      : std::invalid_argument("in-service branch " + std::to_string(branch_index) +
                              " has zero series reactance"),
        branch_(branch_index) {}
  int branch() const { return branch_; }

 private:
  int branch_;
};

AdmittanceMatrix build_ybus(const NetworkCase& c);

// Bus typing used by the solver; PV buses without an in-service generator
// are demoted to PQ. Throws std::invalid_argument when no slack remains.
std::vector<BusKind> solver_bus_kinds(const NetworkCase& c);

// S_i = V_i * conj(sum_j Y_ij V_j), p.u.
Eigen::VectorXcd compute_injections(const AdmittanceMatrix& Y,
                                    const std::vector<double>& vm,
                                    const std::vector<double>& va);

// [dP at non-slack buses; dQ at PQ buses], p.u.; dP = P_sched - P_calc.
Eigen::VectorXd mismatch(const NetworkCase& c, const AdmittanceMatrix& Y,
                         const std::vector<double>& vm,
                         const std::vector<double>& va,
                         const std::vector<BusKind>& bus_kinds);

// Analytic d(mismatch)/d[va at non-slack; vm at PQ], same ordering as mismatch.
Eigen::MatrixXd jacobian(const NetworkCase& c, const AdmittanceMatrix& Y,
                         const std::vector<double>& vm,
                         const std::vector<double>& va,
                         const std::vector<BusKind>& bus_kinds);

// Single Newton-Raphson round; no reactive-limit handling.
PowerFlowSolution nr_solve(const NetworkCase& c, const AdmittanceMatrix& Y,
                           const std::vector<BusKind>& bus_kinds,
                           const PowerFlowOptions& options = {});

// Outer PV->PQ loop around nr_solve. Violating generators are pinned at the
// violated limit and their bus re-typed PQ; the slack is never switched.
PowerFlowSolution solve_with_qlims(const NetworkCase& c,
                                   const PowerFlowOptions& options = {});

// Total MW losses plus the per-branch breakdown (MW, file row order).
std::pair<double, std::vector<double>> compute_losses(const NetworkCase& c,
                                                      const AdmittanceMatrix& Y,
                                                      const std::vector<double>& vm,
                                                      const std::vector<double>& va);

}  // namespace cpsim
