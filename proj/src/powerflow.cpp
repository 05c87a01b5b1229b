#include "cpsim/powerflow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cpsim {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

Eigen::VectorXcd scheduled_injections(const NetworkCase& c) {
  const int n = static_cast<int>(c.buses.size());
  Eigen::VectorXcd s(n);
  for (int i = 0; i < n; ++i)
    s(i) = -std::complex<double>(c.buses[i].pd, c.buses[i].qd);
  for (const GenRecord& g : c.gens) {
    if (!g.status) continue;
    s(c.bus_index(g.bus)) += std::complex<double>(g.pg, g.qg);
  }
  return s / c.base_mva;
}

struct RowLayout {
  std::vector<int> pbus;  // non-slack, non-isolated buses (P rows / va cols)
  std::vector<int> qbus;  // PQ buses (Q rows / vm cols)
};

RowLayout layout_for(const std::vector<BusKind>& kinds) {
  RowLayout lo;
  for (int i = 0; i < static_cast<int>(kinds.size()); ++i) {
    if (kinds[i] == BusKind::Slack || kinds[i] == BusKind::Isolated) continue;
    lo.pbus.push_back(i);
  }
  for (int i = 0; i < static_cast<int>(kinds.size()); ++i)
    if (kinds[i] == BusKind::PQ) lo.qbus.push_back(i);
  return lo;
}

Eigen::VectorXcd voltage_vector(const std::vector<double>& vm, const std::vector<double>& va) {
  Eigen::VectorXcd V(static_cast<int>(vm.size()));
  for (int i = 0; i < V.size(); ++i) V(i) = std::polar(vm[i], va[i]);
  return V;
}

// Reactive requirement per bus (MVAr) implied by a solved state.
std::vector<double> bus_q_required(const NetworkCase& c, const AdmittanceMatrix& Y,
                                   const std::vector<double>& vm,
                                   const std::vector<double>& va) {
  Eigen::VectorXcd S = compute_injections(Y, vm, va);
  std::vector<double> q(c.buses.size());
  for (size_t i = 0; i < c.buses.size(); ++i)
    q[i] = S(static_cast<int>(i)).imag() * c.base_mva + c.buses[i].qd;
  return q;
}

// Splits a bus's P/Q among its generators and fills solution outputs.
// Gens at PQ-typed buses keep the (possibly pinned) case values.
void fill_gen_outputs(const NetworkCase& c, const AdmittanceMatrix& Y,
                      const std::vector<BusKind>& kinds, PowerFlowSolution& sol) {
  const int n = static_cast<int>(c.buses.size());
  Eigen::VectorXcd S = compute_injections(Y, sol.vm, sol.va);

  sol.pg.assign(c.gens.size(), 0.0);
  sol.qg.assign(c.gens.size(), 0.0);
  for (size_t g = 0; g < c.gens.size(); ++g) {
    if (!c.gens[g].status) continue;
    sol.pg[g] = c.gens[g].pg;
    sol.qg[g] = c.gens[g].qg;
  }

  for (int i = 0; i < n; ++i) {
    if (kinds[i] != BusKind::Slack && kinds[i] != BusKind::PV) continue;
    std::vector<int> at_bus;
    for (size_t g = 0; g < c.gens.size(); ++g)
      if (c.gens[g].status && c.bus_index(c.gens[g].bus) == i)
        at_bus.push_back(static_cast<int>(g));
    if (at_bus.empty()) continue;

    double q_total = S(i).imag() * c.base_mva + c.buses[i].qd;
    if (at_bus.size() == 1) {
      sol.qg[at_bus[0]] = q_total;
    } else {
      double qmin_sum = 0.0, range_sum = 0.0;
      for (int g : at_bus) {
        qmin_sum += c.gens[g].qmin;
        range_sum += c.gens[g].qmax - c.gens[g].qmin;
      }
      for (int g : at_bus) {
        if (range_sum > 0.0) {
          double share = (c.gens[g].qmax - c.gens[g].qmin) / range_sum;
          sol.qg[g] = c.gens[g].qmin + share * (q_total - qmin_sum);
        } else {
          sol.qg[g] = q_total / static_cast<double>(at_bus.size());
        }
      }
    }

    if (kinds[i] == BusKind::Slack) {
      double p_total = S(i).real() * c.base_mva + c.buses[i].pd;
      double p_others = 0.0;
      for (size_t k = 1; k < at_bus.size(); ++k) p_others += c.gens[at_bus[k]].pg;
      sol.pg[at_bus[0]] = p_total - p_others;
    }
  }
}

PowerFlowSolution nr_core(const NetworkCase& c, const AdmittanceMatrix& Y,
                          const std::vector<BusKind>& kinds, const PowerFlowOptions& opt,
                          const std::vector<double>* vm_start,
                          const std::vector<double>* va_start) {
  const int n = static_cast<int>(c.buses.size());
  PowerFlowSolution sol;

  if (vm_start && va_start) {
    sol.vm = *vm_start;
    sol.va = *va_start;
  } else if (opt.flat_start) {
    int slack = -1;
    for (int i = 0; i < n; ++i)
      if (kinds[i] == BusKind::Slack) { slack = i; break; }
    double va0 = slack >= 0 ? c.buses[slack].va0 * kDegToRad : 0.0;
    sol.vm.assign(n, 1.0);
    sol.va.assign(n, va0);
    for (const GenRecord& g : c.gens)
      if (g.status) sol.vm[c.bus_index(g.bus)] = g.vset;
  } else {
    sol.vm.resize(n);
    sol.va.resize(n);
    for (int i = 0; i < n; ++i) {
      sol.vm[i] = c.buses[i].vm0;
      sol.va[i] = c.buses[i].va0 * kDegToRad;
    }
  }

  RowLayout lo = layout_for(kinds);
  const int np = static_cast<int>(lo.pbus.size());
  const int nq = static_cast<int>(lo.qbus.size());

  sol.status = SolveStatus::NotConverged;
  for (int iter = 0; iter <= opt.max_iter; ++iter) {
    Eigen::VectorXd m = mismatch(c, Y, sol.vm, sol.va, kinds);
    sol.max_mismatch = m.size() > 0 ? m.cwiseAbs().maxCoeff() : 0.0;
    if (sol.max_mismatch < opt.tol) {
      sol.converged = true;
      sol.status = SolveStatus::Converged;
      break;
    }
    if (iter == opt.max_iter) break;

    Eigen::MatrixXd J = jacobian(c, Y, sol.vm, sol.va, kinds);
    Eigen::VectorXd dx = J.partialPivLu().solve(m);
    if (!dx.allFinite()) {
      sol.status = SolveStatus::SingularJacobian;
      break;
    }
    for (int a = 0; a < np; ++a) sol.va[lo.pbus[a]] -= dx(a);
    for (int b = 0; b < nq; ++b) sol.vm[lo.qbus[b]] -= dx(np + b);
    ++sol.iterations;
  }

  fill_gen_outputs(c, Y, kinds, sol);
  sol.losses_mw = compute_losses(c, Y, sol.vm, sol.va).first;
  return sol;
}

}  // namespace

AdmittanceMatrix build_ybus(const NetworkCase& c) {
  const int n = static_cast<int>(c.buses.size());
  AdmittanceMatrix A;
  A.n = n;
  A.Y = Eigen::MatrixXcd::Zero(n, n);

  for (size_t k = 0; k < c.branches.size(); ++k) {
    const BranchRecord& br = c.branches[k];
    if (!br.status) continue;
    if (br.x == 0.0) throw ZeroImpedanceError(static_cast<int>(k));
    int f = c.bus_index(br.from_bus);
    int t = c.bus_index(br.to_bus);
    std::complex<double> y = 1.0 / std::complex<double>(br.r, br.x);
    std::complex<double> half_b(0.0, br.b / 2.0);
    std::complex<double> tap = std::polar(br.tap, br.shift * kDegToRad);
    A.Y(f, f) += (y + half_b) / (br.tap * br.tap);
    A.Y(t, t) += y + half_b;
    A.Y(f, t) += -y / std::conj(tap);
    A.Y(t, f) += -y / tap;
  }
  for (int i = 0; i < n; ++i)
    A.Y(i, i) += std::complex<double>(c.buses[i].gs, c.buses[i].bs) / c.base_mva;
  return A;
}

std::vector<BusKind> solver_bus_kinds(const NetworkCase& c) {
  std::vector<BusKind> kinds(c.buses.size());
  std::vector<char> has_gen(c.buses.size(), 0);
  for (const GenRecord& g : c.gens)
    if (g.status) has_gen[c.bus_index(g.bus)] = 1;

  bool slack_found = false;
  for (size_t i = 0; i < c.buses.size(); ++i) {
    kinds[i] = c.buses[i].bus_kind;
    if (kinds[i] == BusKind::PV && !has_gen[i]) kinds[i] = BusKind::PQ;
    if (kinds[i] == BusKind::Slack) {
      if (!has_gen[i])
        throw std::invalid_argument("slack bus " + std::to_string(c.buses[i].id) +
                                    " has no in-service generator");
      slack_found = true;
    }
  }
  if (!slack_found) throw std::invalid_argument("case has no slack bus");
  return kinds;
}

Eigen::VectorXcd compute_injections(const AdmittanceMatrix& Y, const std::vector<double>& vm,
                                    const std::vector<double>& va) {
  Eigen::VectorXcd V = voltage_vector(vm, va);
  Eigen::VectorXcd I = Y.Y * V;
  return V.cwiseProduct(I.conjugate());
}

Eigen::VectorXd mismatch(const NetworkCase& c, const AdmittanceMatrix& Y,
                         const std::vector<double>& vm, const std::vector<double>& va,
                         const std::vector<BusKind>& kinds) {
  Eigen::VectorXcd dS = scheduled_injections(c) - compute_injections(Y, vm, va);
  RowLayout lo = layout_for(kinds);
  Eigen::VectorXd m(lo.pbus.size() + lo.qbus.size());
  int k = 0;
  for (int i : lo.pbus) m(k++) = dS(i).real();
  for (int i : lo.qbus) m(k++) = dS(i).imag();
  return m;
}

Eigen::MatrixXd jacobian(const NetworkCase& c, const AdmittanceMatrix& Y,
                         const std::vector<double>& vm, const std::vector<double>& va,
                         const std::vector<BusKind>& kinds) {
  (void)c;
  const int n = Y.n;
  Eigen::VectorXcd V = voltage_vector(vm, va);
  Eigen::VectorXcd Ibus = Y.Y * V;
  Eigen::VectorXcd Vnorm(n);
  for (int i = 0; i < n; ++i) Vnorm(i) = std::polar(1.0, va[i]);

  // dS_dVa(i,k) = j*V_i*conj(delta_ik*Ibus_i - Y_ik*V_k)
  // dS_dVm(i,k) = V_i*conj(Y_ik*Vnorm_k) + delta_ik*conj(Ibus_i)*Vnorm_i
  Eigen::MatrixXcd dSdVa(n, n), dSdVm(n, n);
  const std::complex<double> j(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      std::complex<double> d = i == k ? Ibus(i) : std::complex<double>(0.0, 0.0);
      dSdVa(i, k) = j * V(i) * std::conj(d - Y.Y(i, k) * V(k));
      dSdVm(i, k) = V(i) * std::conj(Y.Y(i, k) * Vnorm(k));
      if (i == k) dSdVm(i, k) += std::conj(Ibus(i)) * Vnorm(i);
    }
  }

  RowLayout lo = layout_for(kinds);
  const int np = static_cast<int>(lo.pbus.size());
  const int nq = static_cast<int>(lo.qbus.size());
  Eigen::MatrixXd J(np + nq, np + nq);
  for (int a = 0; a < np; ++a) {
    for (int b = 0; b < np; ++b) J(a, b) = -dSdVa(lo.pbus[a], lo.pbus[b]).real();
    for (int b = 0; b < nq; ++b) J(a, np + b) = -dSdVm(lo.pbus[a], lo.qbus[b]).real();
  }
  for (int a = 0; a < nq; ++a) {
    for (int b = 0; b < np; ++b) J(np + a, b) = -dSdVa(lo.qbus[a], lo.pbus[b]).imag();
    for (int b = 0; b < nq; ++b) J(np + a, np + b) = -dSdVm(lo.qbus[a], lo.qbus[b]).imag();
  }
  return J;
}

PowerFlowSolution nr_solve(const NetworkCase& c, const AdmittanceMatrix& Y,
                           const std::vector<BusKind>& bus_kinds,
                           const PowerFlowOptions& options) {
  return nr_core(c, Y, bus_kinds, options, nullptr, nullptr);
}

PowerFlowSolution solve_with_qlims(const NetworkCase& c, const PowerFlowOptions& options) {
  AdmittanceMatrix Y = build_ybus(c);
  NetworkCase work = c;
  std::vector<BusKind> kinds = solver_bus_kinds(c);

  PowerFlowSolution sol = nr_core(work, Y, kinds, options, nullptr, nullptr);
  int total_iterations = sol.iterations;
  int rounds = 1;
  std::vector<SwitchedGen> switched;
  std::vector<int> slack_violations;

  if (options.enforce_q_lims) {
    std::vector<char> converted(c.buses.size(), 0);
    while (sol.converged) {
      std::vector<double> q_req = bus_q_required(work, Y, sol.vm, sol.va);

      // (bus, violated limit, excess magnitude) for unswitched PV buses
      struct Violation { int bus; LimitKind limit; double excess; };
      std::vector<Violation> violations;
      for (size_t i = 0; i < c.buses.size(); ++i) {
        if (kinds[i] != BusKind::PV || converted[i]) continue;
        double qmin_sum = 0.0, qmax_sum = 0.0;
        bool any = false;
        for (const GenRecord& g : work.gens) {
          if (!g.status || work.bus_index(g.bus) != static_cast<int>(i)) continue;
          qmin_sum += g.qmin;
          qmax_sum += g.qmax;
          any = true;
        }
        if (!any) continue;
        if (q_req[i] > qmax_sum)
          violations.push_back({static_cast<int>(i), LimitKind::Qmax, q_req[i] - qmax_sum});
        else if (q_req[i] < qmin_sum)
          violations.push_back({static_cast<int>(i), LimitKind::Qmin, qmin_sum - q_req[i]});
      }
      if (violations.empty()) break;
      if (rounds >= options.max_qlim_rounds) {
        sol.status = SolveStatus::QlimRoundsExceeded;
        break;
      }
      if (options.qlim_one_at_a_time) {
        auto worst = std::max_element(
            violations.begin(), violations.end(),
            [](const Violation& a, const Violation& b) { return a.excess < b.excess; });
        violations = {*worst};
      }

      for (const Violation& v : violations) {
        kinds[v.bus] = BusKind::PQ;
        converted[v.bus] = 1;
        for (size_t g = 0; g < work.gens.size(); ++g) {
          GenRecord& gen = work.gens[g];
          if (!gen.status || work.bus_index(gen.bus) != v.bus) continue;
          gen.qg = v.limit == LimitKind::Qmax ? gen.qmax : gen.qmin;
          switched.push_back({static_cast<int>(g), v.limit});
        }
      }

      std::vector<double> vm_warm = sol.vm;
      std::vector<double> va_warm = sol.va;
      sol = nr_core(work, Y, kinds, options, &vm_warm, &va_warm);
      total_iterations += sol.iterations;
      ++rounds;
    }

    // Slack reactive limits are reported, never switched.
    for (size_t g = 0; g < c.gens.size(); ++g) {
      const GenRecord& gen = c.gens[g];
      if (!gen.status) continue;
      if (c.buses[c.bus_index(gen.bus)].bus_kind != BusKind::Slack) continue;
      double q = sol.qg[g];
      if (q < gen.qmin - 1e-9 || q > gen.qmax + 1e-9)
        slack_violations.push_back(static_cast<int>(g));
    }
  }

  sol.iterations = total_iterations;
  sol.qlim_rounds = rounds;
  sol.switched_gens = std::move(switched);
  sol.slack_q_violations = std::move(slack_violations);
  return sol;
}

std::pair<double, std::vector<double>> compute_losses(const NetworkCase& c,
                                                      const AdmittanceMatrix&,
                                                      const std::vector<double>& vm,
                                                      const std::vector<double>& va) {
  std::vector<double> per_branch(c.branches.size(), 0.0);
  double total = 0.0;
  for (size_t k = 0; k < c.branches.size(); ++k) {
    const BranchRecord& br = c.branches[k];
    if (!br.status) continue;
    int f = c.bus_index(br.from_bus);
    int t = c.bus_index(br.to_bus);
    std::complex<double> y = 1.0 / std::complex<double>(br.r, br.x);
    std::complex<double> half_b(0.0, br.b / 2.0);
    std::complex<double> tap = std::polar(br.tap, br.shift * kDegToRad);
    std::complex<double> yff = (y + half_b) / (br.tap * br.tap);
    std::complex<double> yft = -y / std::conj(tap);
    std::complex<double> ytf = -y / tap;
    std::complex<double> ytt = y + half_b;
    std::complex<double> Vf = std::polar(vm[f], va[f]);
    std::complex<double> Vt = std::polar(vm[t], va[t]);
    std::complex<double> Sf = Vf * std::conj(yff * Vf + yft * Vt);
    std::complex<double> St = Vt * std::conj(ytf * Vf + ytt * Vt);
    per_branch[k] = (Sf + St).real() * c.base_mva;
    total += per_branch[k];
  }
  return {total, per_branch};
}

}  // namespace cpsim
