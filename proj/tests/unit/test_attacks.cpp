#include <doctest.h>

#include "cpsim/attacks.hpp"

using namespace cpsim;

namespace {

const std::vector<int> kIds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};

LoadVector make_loads(double p0) {
  LoadVector v;
  for (int i = 0; i < 14; ++i) {
    v.pd.push_back(p0 + i);
    v.qd.push_back((p0 + i) / 4.0);
  }
  return v;
}

ScheduleErrorKind parse_error_kind(const std::string& text) {
  try {
    parse_schedule(text);
  } catch (const ScheduleError& e) {
    return e.kind();
  }
  FAIL("expected ScheduleError");
  return ScheduleErrorKind::SchemaError;
}

}  // namespace

TEST_CASE("default schedule carries the three standard windows") {
  AttackSchedule s = default_schedule();
  REQUIRE(s.windows.size() == 3);

  CHECK(s.windows[0].kind == AttackKind::DoS);
  CHECK(s.windows[0].t_start == 20);
  CHECK(s.windows[0].t_end == 50);

  CHECK(s.windows[1].kind == AttackKind::FDI);
  CHECK(s.windows[1].t_start == 60);
  CHECK(s.windows[1].t_end == 90);
  CHECK(s.windows[1].bias == 0.1);
  CHECK(s.windows[1].target_buses.empty());

  CHECK(s.windows[2].kind == AttackKind::DoD);
  CHECK(s.windows[2].t_start == 100);
  CHECK(s.windows[2].t_end == 130);
  CHECK(s.windows[2].scale == 1.5);
  CHECK(s.windows[2].target_buses == std::vector<int>{5, 7, 9});
}

TEST_CASE("bitmask composition") {
  AttackSchedule s = default_schedule();
  CHECK(attack_mask_at(s, 35) == 1);
  CHECK(attack_mask_at(s, 55) == 0);
  CHECK(attack_mask_at(s, 19) == 0);
  CHECK(attack_mask_at(s, 20) == 1);
  CHECK(attack_mask_at(s, 50) == 1);
  CHECK(attack_mask_at(s, 51) == 0);
  CHECK(attack_mask_at(s, 60) == 4);
  CHECK(attack_mask_at(s, 90) == 4);
  CHECK(attack_mask_at(s, 100) == 2);
  CHECK(attack_mask_at(s, 130) == 2);
  CHECK(attack_mask_at(s, 131) == 0);

  AttackSchedule overlap;
  overlap.windows.push_back({AttackKind::DoS, 0, 10, {}, 1.0, 0.0});
  overlap.windows.push_back({AttackKind::FDI, 5, 10, {}, 1.0, 0.1});
  CHECK(attack_mask_at(overlap, 7) == 5);
  CHECK(attack_mask_at(overlap, 3) == 1);
  CHECK(attack_mask_at(overlap, 11) == 0);
}

TEST_CASE("DoS freezes the previous effective loads verbatim") {
  AttackSchedule s = default_schedule();
  LoadVector nominal = make_loads(10.0);
  LoadVector prev = make_loads(99.0);
  LoadVector out = apply_load_attacks(s, 35, nominal, prev, kIds);
  CHECK(out == prev);
}

TEST_CASE("DoD scales demand only at target buses") {
  AttackSchedule s = default_schedule();
  LoadVector nominal = make_loads(10.0);
  LoadVector out = apply_load_attacks(s, 110, nominal, nominal, kIds);
  for (int i = 0; i < 14; ++i) {
    int id = kIds[i];
    if (id == 5 || id == 7 || id == 9) {
      CHECK(out.pd[i] == nominal.pd[i] * 1.5);
      CHECK(out.qd[i] == nominal.qd[i] * 1.5);
    } else {
      CHECK(out.pd[i] == nominal.pd[i]);
      CHECK(out.qd[i] == nominal.qd[i]);
    }
  }
}

TEST_CASE("identity outside all windows") {
  AttackSchedule s = default_schedule();
  LoadVector nominal = make_loads(20.0);
  LoadVector prev = make_loads(77.0);
  CHECK(apply_load_attacks(s, 0, nominal, prev, kIds) == nominal);
  CHECK(apply_load_attacks(s, 55, nominal, prev, kIds) == nominal);
  CHECK(apply_load_attacks(s, 143, nominal, prev, kIds) == nominal);

  std::vector<double> vm(14, 1.02);
  CHECK(apply_measurement_attacks(s, 10, vm, kIds) == vm);
}

TEST_CASE("DoS wins when DoS and DoD overlap") {
  AttackSchedule s;
  s.windows.push_back({AttackKind::DoS, 10, 20, {}, 1.0, 0.0});
  s.windows.push_back({AttackKind::DoD, 15, 25, {5}, 2.0, 0.0});
  LoadVector nominal = make_loads(10.0);
  LoadVector prev = make_loads(55.0);
  CHECK(apply_load_attacks(s, 17, nominal, prev, kIds) == prev);
  // after the DoS window ends the DoD scaling applies again
  LoadVector after = apply_load_attacks(s, 22, nominal, prev, kIds);
  CHECK(after.pd[4] == nominal.pd[4] * 2.0);
  CHECK(after.pd[0] == nominal.pd[0]);
}

TEST_CASE("FDI biases measurements and never touches the input") {
  AttackSchedule s = default_schedule();
  std::vector<double> vm(14);
  for (int i = 0; i < 14; ++i) vm[i] = 1.0 + 0.001 * i;
  std::vector<double> vm_copy = vm;

  std::vector<double> meas = apply_measurement_attacks(s, 75, vm, kIds);
  for (int i = 0; i < 14; ++i) CHECK(meas[i] == vm[i] + 0.1);
  CHECK(vm == vm_copy);

  AttackSchedule targeted;
  targeted.windows.push_back({AttackKind::FDI, 0, 5, {3, 9}, 1.0, 0.07});
  meas = apply_measurement_attacks(targeted, 2, vm, kIds);
  for (int i = 0; i < 14; ++i) {
    if (kIds[i] == 3 || kIds[i] == 9)
      CHECK(meas[i] == vm[i] + 0.07);
    else
      CHECK(meas[i] == vm[i]);
  }

  AttackSchedule zero_bias;
  zero_bias.windows.push_back({AttackKind::FDI, 0, 5, {}, 1.0, 0.0});
  CHECK(apply_measurement_attacks(zero_bias, 2, vm, kIds) == vm);
}

TEST_CASE("overlapping FDI biases add") {
  AttackSchedule s;
  s.windows.push_back({AttackKind::FDI, 0, 10, {}, 1.0, 0.1});
  s.windows.push_back({AttackKind::FDI, 5, 10, {2}, 1.0, 0.05});
  std::vector<double> vm(14, 1.0);
  std::vector<double> meas = apply_measurement_attacks(s, 7, vm, kIds);
  CHECK(meas[1] == 1.0 + 0.1 + 0.05);
  CHECK(meas[0] == 1.1);
}

TEST_CASE("unknown target buses are rejected") {
  AttackSchedule s;
  s.windows.push_back({AttackKind::DoD, 0, 5, {99}, 1.5, 0.0});
  LoadVector nominal = make_loads(10.0);
  CHECK_THROWS_AS(apply_load_attacks(s, 2, nominal, nominal, kIds), UnknownTargetBusError);

  AttackSchedule f;
  f.windows.push_back({AttackKind::FDI, 0, 5, {99}, 1.0, 0.1});
  std::vector<double> vm(14, 1.0);
  CHECK_THROWS_AS(apply_measurement_attacks(f, 2, vm, kIds), UnknownTargetBusError);
}

TEST_CASE("schedule json parses the documented forms") {
  AttackSchedule one = parse_schedule(R"([{"type":"dos","start":20,"end":50}])");
  REQUIRE(one.windows.size() == 1);
  CHECK(one.windows[0].kind == AttackKind::DoS);
  CHECK(one.windows[0].t_start == 20);
  CHECK(one.windows[0].t_end == 50);

  CHECK(parse_schedule("[]").windows.empty());

  AttackSchedule full = parse_schedule(
      R"([{"type":"dod","start":1,"end":2,"buses":[5,9],"scale":0.4},
          {"type":"fdi","start":3,"end":4,"bias":-0.05}])");
  REQUIRE(full.windows.size() == 2);
  CHECK(full.windows[0].scale == 0.4);
  CHECK(full.windows[0].target_buses == std::vector<int>{5, 9});
  CHECK(full.windows[1].bias == -0.05);
}

TEST_CASE("schedule json rejects malformed input with typed errors") {
  CHECK(parse_error_kind(R"([{"type":"dod","start":0,"end":5}])") ==
        ScheduleErrorKind::MissingParam);
  CHECK(parse_error_kind(R"([{"type":"dod","start":0,"end":5,"buses":[5]}])") ==
        ScheduleErrorKind::MissingParam);
  CHECK(parse_error_kind(R"([{"type":"fdi","start":0,"end":5}])") ==
        ScheduleErrorKind::MissingParam);
  CHECK(parse_error_kind(R"([{"type":"dos","end":5}])") == ScheduleErrorKind::MissingParam);
  CHECK(parse_error_kind(R"([{"type":"dos","start":9,"end":5}])") ==
        ScheduleErrorKind::RangeError);
  CHECK(parse_error_kind(R"([{"type":"dos","start":-1,"end":5}])") ==
        ScheduleErrorKind::RangeError);
  CHECK(parse_error_kind(R"([{"type":"dos","start":0,"end":5,"frobnicate":1}])") ==
        ScheduleErrorKind::SchemaError);
  CHECK(parse_error_kind(R"([{"type":"dos","start":"zero","end":5}])") ==
        ScheduleErrorKind::SchemaError);
  CHECK(parse_error_kind(R"([{"type":"meow","start":0,"end":5}])") ==
        ScheduleErrorKind::SchemaError);
  CHECK(parse_error_kind(R"({"type":"dos"})") == ScheduleErrorKind::SchemaError);
  CHECK(parse_error_kind("not json at all") == ScheduleErrorKind::SchemaError);
  CHECK(parse_error_kind(R"([{"type":"dod","start":0,"end":5,"buses":[5],"scale":0}])") ==
        ScheduleErrorKind::RangeError);
}

TEST_CASE("serialize then parse round-trips schedules") {
  AttackSchedule d = default_schedule();
  CHECK(parse_schedule(serialize_schedule(d)) == d);

  AttackSchedule exotic;
  exotic.windows.push_back({AttackKind::FDI, 0, 3, {2, 4}, 1.0, -0.2});
  exotic.windows.push_back({AttackKind::DoD, 4, 9, {14}, 0.25, 0.0});
  exotic.windows.push_back({AttackKind::DoS, 9, 9, {}, 1.0, 0.0});
  CHECK(parse_schedule(serialize_schedule(exotic)) == exotic);
}
