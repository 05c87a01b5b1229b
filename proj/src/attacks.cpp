#include "cpsim/attacks.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace cpsim {

namespace {

using nlohmann::json;

[[noreturn]] void schema_fail(const std::string& msg) {
  throw ScheduleError(ScheduleErrorKind::SchemaError, msg);
}

int require_int(const json& obj, const char* key) {
  if (!obj.contains(key)) {
    throw ScheduleError(ScheduleErrorKind::MissingParam,
                        std::string("window is missing \"") + key + "\"");
  }
  const json& v = obj.at(key);
  if (!v.is_number_integer()) schema_fail(std::string("\"") + key + "\" must be an integer");
  return v.get<int>();
}

std::vector<int> window_targets(const AttackWindow& w, const std::vector<int>& bus_ids) {
  std::vector<int> indices;
  for (int id : w.target_buses) {
    auto it = std::find(bus_ids.begin(), bus_ids.end(), id);
    if (it == bus_ids.end()) throw UnknownTargetBusError(id);
    indices.push_back(static_cast<int>(it - bus_ids.begin()));
  }
  return indices;
}

}  // namespace

AttackSchedule default_schedule() {
  AttackSchedule s;
  s.windows.push_back({AttackKind::DoS, 20, 50, {}, 1.0, 0.0});
  s.windows.push_back({AttackKind::FDI, 60, 90, {}, 1.0, 0.1});
  s.windows.push_back({AttackKind::DoD, 100, 130, {5, 7, 9}, 1.5, 0.0});
  return s;
}

unsigned attack_mask_at(const AttackSchedule& s, int t) {
  unsigned mask = 0;
  for (const AttackWindow& w : s.windows)
    if (w.active_at(t)) mask |= static_cast<unsigned>(w.kind);
  return mask;
}

LoadVector apply_load_attacks(const AttackSchedule& s, int t, const LoadVector& nominal,
                              const LoadVector& prev_effective,
                              const std::vector<int>& bus_ids) {
  for (const AttackWindow& w : s.windows)
    if (w.kind == AttackKind::DoS && w.active_at(t)) return prev_effective;

  LoadVector out = nominal;
  for (const AttackWindow& w : s.windows) {
    if (w.kind != AttackKind::DoD || !w.active_at(t)) continue;
    for (int i : window_targets(w, bus_ids)) {
      out.pd[i] *= w.scale;
      out.qd[i] *= w.scale;
    }
  }
  return out;
}

std::vector<double> apply_measurement_attacks(const AttackSchedule& s, int t,
                                              const std::vector<double>& vm_true,
                                              const std::vector<int>& bus_ids) {
  std::vector<double> out = vm_true;
  for (const AttackWindow& w : s.windows) {
    if (w.kind != AttackKind::FDI || !w.active_at(t)) continue;
    if (w.target_buses.empty()) {
      for (double& v : out) v += w.bias;
    } else {
      for (int i : window_targets(w, bus_ids)) out[i] += w.bias;
    }
  }
  return out;
}

AttackSchedule parse_schedule(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    schema_fail(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) schema_fail("schedule must be a JSON array of window objects");

  AttackSchedule s;
  for (const json& obj : doc) {
    if (!obj.is_object()) schema_fail("each window must be an object");
    for (const auto& [key, value] : obj.items()) {
      (void)value;
      if (key != "type" && key != "start" && key != "end" && key != "buses" &&
          key != "scale" && key != "bias")
        schema_fail("unknown key \"" + key + "\"");
    }
    if (!obj.contains("type") || !obj.at("type").is_string())
      schema_fail("window needs a string \"type\"");
    std::string type = obj.at("type").get<std::string>();

    AttackWindow w;
    if (type == "dos") w.kind = AttackKind::DoS;
    else if (type == "dod") w.kind = AttackKind::DoD;
    else if (type == "fdi") w.kind = AttackKind::FDI;
    else schema_fail("unknown attack type \"" + type + "\"");

    w.t_start = require_int(obj, "start");
    w.t_end = require_int(obj, "end");
    if (w.t_start < 0) throw ScheduleError(ScheduleErrorKind::RangeError, "start must be >= 0");
    if (w.t_end < w.t_start)
      throw ScheduleError(ScheduleErrorKind::RangeError,
                          "window end " + std::to_string(w.t_end) + " precedes start " +
                              std::to_string(w.t_start));

    if (obj.contains("buses")) {
      const json& buses = obj.at("buses");
      if (!buses.is_array()) schema_fail("\"buses\" must be an array of bus ids");
      for (const json& b : buses) {
        if (!b.is_number_integer()) schema_fail("\"buses\" entries must be integers");
        w.target_buses.push_back(b.get<int>());
      }
    }
    if (obj.contains("scale")) {
      if (!obj.at("scale").is_number()) schema_fail("\"scale\" must be a number");
      w.scale = obj.at("scale").get<double>();
    }
    if (obj.contains("bias")) {
      if (!obj.at("bias").is_number()) schema_fail("\"bias\" must be a number");
      w.bias = obj.at("bias").get<double>();
    }

    if (w.kind == AttackKind::DoD) {
      if (w.target_buses.empty())
        throw ScheduleError(ScheduleErrorKind::MissingParam, "dod window needs \"buses\"");
      if (!obj.contains("scale"))
        throw ScheduleError(ScheduleErrorKind::MissingParam, "dod window needs \"scale\"");
      if (!(w.scale > 0.0))
        throw ScheduleError(ScheduleErrorKind::RangeError, "dod scale must be positive");
    }
    if (w.kind == AttackKind::FDI) {
      if (!obj.contains("bias"))
        throw ScheduleError(ScheduleErrorKind::MissingParam, "fdi window needs \"bias\"");
      if (!std::isfinite(w.bias))
        throw ScheduleError(ScheduleErrorKind::RangeError, "fdi bias must be finite");
    }
    s.windows.push_back(std::move(w));
  }
  return s;
}

std::string serialize_schedule(const AttackSchedule& s) {
  json doc = json::array();
  for (const AttackWindow& w : s.windows) {
    json obj;
    switch (w.kind) {
      case AttackKind::DoS: obj["type"] = "dos"; break;
      case AttackKind::DoD: obj["type"] = "dod"; break;
      case AttackKind::FDI: obj["type"] = "fdi"; break;
    }
    obj["start"] = w.t_start;
    obj["end"] = w.t_end;
    if (!w.target_buses.empty() || w.kind == AttackKind::DoD) obj["buses"] = w.target_buses;
    if (w.scale != 1.0 || w.kind == AttackKind::DoD) obj["scale"] = w.scale;
    if (w.bias != 0.0 || w.kind == AttackKind::FDI) obj["bias"] = w.bias;
    doc.push_back(std::move(obj));
  }
  return doc.dump(2);
}

}  // namespace cpsim
