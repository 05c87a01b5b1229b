#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cpsim {

enum class AttackKind : unsigned { DoS = 1, DoD = 2, FDI = 4 };

struct AttackWindow {
  AttackKind kind = AttackKind::DoS;
  int t_start = 0;
  int t_end = 0;  // inclusive
  std::vector<int> target_buses;  // DoD: required; FDI: empty = all buses
  double scale = 1.0;  // DoD only
  double bias = 0.0;   // FDI only, p.u.

  bool operator==(const AttackWindow&) const = default;
  bool active_at(int t) const { return t >= t_start && t <= t_end; }
};

struct AttackSchedule {
  std::vector<AttackWindow> windows;
  bool operator==(const AttackSchedule&) const = default;
};

struct LoadVector {
  std::vector<double> pd;  // MW, per bus
  std::vector<double> qd;  // MVAr, per bus
  bool operator==(const LoadVector&) const = default;
};

enum class ScheduleErrorKind { SchemaError, RangeError, MissingParam };

class ScheduleError : public std::runtime_error {
 public:
  ScheduleError(ScheduleErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ScheduleErrorKind kind() const { return kind_; }

 private:
  ScheduleErrorKind kind_;
};

class UnknownTargetBusError : public std::invalid_argument {
 public:
  explicit UnknownTargetBusError(int bus_id)
      : std::invalid_argument("attack targets unknown bus " + std::to_string(bus_id)),
        bus_(bus_id) {}
  int bus() const { return bus_; }

 private:
  int bus_;
};

// DoS [20,50]; FDI [60,90] bias +0.1 all buses; DoD [100,130] scale 1.5 at {5,7,9}.
AttackSchedule default_schedule();

unsigned attack_mask_at(const AttackSchedule& s, int t);

// Effective loads for step t. DoS freezes prev_effective (callers pass the
// nominal vector as prev_effective at t = 0); DoD scales pd and qd at target
// buses; DoS wins when both are active.
LoadVector apply_load_attacks(const AttackSchedule& s, int t,
                              const LoadVector& nominal,
                              const LoadVector& prev_effective,
                              const std::vector<int>& bus_ids);

// Measured voltages for step t; FDI adds bias at target buses (all when the
// target list is empty). The input vector is never modified.
std::vector<double> apply_measurement_attacks(const AttackSchedule& s, int t,
                                              const std::vector<double>& vm_true,
                                              const std::vector<int>& bus_ids);

// JSON array of window objects:
//   {"type":"dos"|"dod"|"fdi","start":int,"end":int,
//    "buses":[int]?, "scale":number?, "bias":number?}
AttackSchedule parse_schedule(const std::string& json_text);
std::string serialize_schedule(const AttackSchedule& s);

}  // namespace cpsim
