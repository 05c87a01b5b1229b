#include "cpsim/csvio.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cpsim {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> header_columns(const std::vector<int>& bus_ids, int n_gens) {
  std::vector<std::string> cols = {"t", "hour", "attack_mask", "converged"};
  for (int id : bus_ids) cols.push_back("vm_true_" + std::to_string(id));
  for (int id : bus_ids) cols.push_back("vm_meas_" + std::to_string(id));
  for (int id : bus_ids) cols.push_back("va_" + std::to_string(id));
  for (int k = 1; k <= n_gens; ++k) cols.push_back("pg_" + std::to_string(k));
  for (int k = 1; k <= n_gens; ++k) cols.push_back("qg_" + std::to_string(k));
  cols.push_back("total_load_mw");
  cols.push_back("total_gen_mw");
  cols.push_back("losses_mw");
  cols.push_back("violations_true");
  cols.push_back("violations_meas");
  cols.push_back("pvpq_switch_count");
  return cols;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(const std::string& tok, const std::string& where) {
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw CsvError("non-numeric value \"" + tok + "\" in " + where);
  return v;
}

long parse_long(const std::string& tok, const std::string& where) {
  long v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw CsvError("non-integer value \"" + tok + "\" in " + where);
  return v;
}

// Consumes a run of "<prefix><number>" columns, returning the numbers.
std::vector<int> take_id_group(const std::vector<std::string>& cols, size_t& i,
                               const std::string& prefix) {
  std::vector<int> ids;
  while (i < cols.size() && cols[i].rfind(prefix, 0) == 0) {
    ids.push_back(static_cast<int>(parse_long(cols[i].substr(prefix.size()), "header")));
    ++i;
  }
  return ids;
}

nlohmann::json metrics_to_json(const MetricsSummary& m) {
  nlohmann::json j;
  j["mean_rms_dev"] = m.mean_rms_dev;
  j["max_dev"] = m.max_dev;
  j["violation_count_true"] = m.violation_count_true;
  j["violation_count_meas"] = m.violation_count_meas;
  j["avg_losses_mw"] = m.avg_losses_mw;
  j["switch_event_total"] = m.switch_event_total;
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CsvError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw CsvError("failed writing " + path);
}

}  // namespace

std::string to_csv(const SimulationLog& log) {
  std::string out;
  const std::vector<std::string> cols = header_columns(log.bus_ids, log.n_gens);
  for (size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  out += '\n';

  for (const TelemetryFrame& f : log.frames) {
    out += std::to_string(f.t);
    out += ',';
    out += format_double(f.hour);
    out += ',';
    out += std::to_string(f.attack_mask);
    out += ',';
    out += f.converged ? '1' : '0';
    for (double v : f.vm_true) { out += ','; out += format_double(v); }
    for (double v : f.vm_meas) { out += ','; out += format_double(v); }
    for (double v : f.va) { out += ','; out += format_double(v); }
    for (double v : f.pg) { out += ','; out += format_double(v); }
    for (double v : f.qg) { out += ','; out += format_double(v); }
    out += ',';
    out += format_double(f.total_load_mw);
    out += ',';
    out += format_double(f.total_gen_mw);
    out += ',';
    out += format_double(f.losses_mw);
    out += ',';
    out += std::to_string(f.violations_true);
    out += ',';
    out += std::to_string(f.violations_meas);
    out += ',';
    out += std::to_string(f.pvpq_switch_count);
    out += '\n';
  }
  return out;
}

void write_csv(const SimulationLog& log, const std::string& path) {
  write_text_file(path, to_csv(log));
}

SimulationLog read_csv_text(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::string cur;
    for (char c : text) {
      if (c == '\n') {
        if (!cur.empty() && cur.back() == '\r') cur.pop_back();
        lines.push_back(std::move(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) lines.push_back(std::move(cur));
  }
  if (lines.empty()) throw CsvError("empty CSV");

  const std::vector<std::string> head = split(lines[0], ',');
  size_t i = 0;
  auto expect = [&](const char* name) {
    if (i >= head.size() || head[i] != name)
      throw CsvError(std::string("expected column \"") + name + "\" at position " +
                     std::to_string(i));
    ++i;
  };
  expect("t");
  expect("hour");
  expect("attack_mask");
  expect("converged");
  std::vector<int> ids_true = take_id_group(head, i, "vm_true_");
  std::vector<int> ids_meas = take_id_group(head, i, "vm_meas_");
  std::vector<int> ids_va = take_id_group(head, i, "va_");
  if (ids_true.empty()) throw CsvError("no vm_true_<bus> columns");
  if (ids_meas != ids_true || ids_va != ids_true)
    throw CsvError("vm_true/vm_meas/va column groups disagree");
  std::vector<int> pg_idx = take_id_group(head, i, "pg_");
  std::vector<int> qg_idx = take_id_group(head, i, "qg_");
  if (pg_idx != qg_idx) throw CsvError("pg/qg column groups disagree");
  for (size_t k = 0; k < pg_idx.size(); ++k)
    if (pg_idx[k] != static_cast<int>(k) + 1) throw CsvError("pg columns are not pg_1..pg_N");
  expect("total_load_mw");
  expect("total_gen_mw");
  expect("losses_mw");
  expect("violations_true");
  expect("violations_meas");
  expect("pvpq_switch_count");
  if (i != head.size()) throw CsvError("unexpected trailing columns");

  const size_t nb = ids_true.size();
  const size_t ng = pg_idx.size();
  SimulationLog log;
  log.bus_ids = ids_true;
  log.n_gens = static_cast<int>(ng);

  for (size_t row = 1; row < lines.size(); ++row) {
    if (lines[row].empty() && row + 1 == lines.size()) break;
    const std::vector<std::string> f = split(lines[row], ',');
    const std::string where = "row " + std::to_string(row);
    if (f.size() != head.size())
      throw CsvError(where + " has " + std::to_string(f.size()) + " fields, expected " +
                     std::to_string(head.size()));
    TelemetryFrame fr;
    size_t k = 0;
    fr.t = static_cast<int>(parse_long(f[k++], where));
    if (fr.t != static_cast<int>(row) - 1) throw CsvError(where + ": timesteps not contiguous");
    fr.hour = parse_double(f[k++], where);
    long mask = parse_long(f[k++], where);
    if (mask < 0) throw CsvError(where + ": negative attack_mask");
    fr.attack_mask = static_cast<unsigned>(mask);
    long conv = parse_long(f[k++], where);
    if (conv != 0 && conv != 1) throw CsvError(where + ": converged must be 0 or 1");
    fr.converged = conv == 1;
    fr.vm_true.resize(nb);
    for (size_t b = 0; b < nb; ++b) fr.vm_true[b] = parse_double(f[k++], where);
    fr.vm_meas.resize(nb);
    for (size_t b = 0; b < nb; ++b) fr.vm_meas[b] = parse_double(f[k++], where);
    fr.va.resize(nb);
    for (size_t b = 0; b < nb; ++b) fr.va[b] = parse_double(f[k++], where);
    fr.pg.resize(ng);
    for (size_t g = 0; g < ng; ++g) fr.pg[g] = parse_double(f[k++], where);
    fr.qg.resize(ng);
    for (size_t g = 0; g < ng; ++g) fr.qg[g] = parse_double(f[k++], where);
    fr.total_load_mw = parse_double(f[k++], where);
    fr.total_gen_mw = parse_double(f[k++], where);
    fr.losses_mw = parse_double(f[k++], where);
    fr.violations_true = static_cast<int>(parse_long(f[k++], where));
    fr.violations_meas = static_cast<int>(parse_long(f[k++], where));
    fr.pvpq_switch_count = static_cast<int>(parse_long(f[k++], where));
    log.frames.push_back(std::move(fr));
  }
  if (log.frames.empty()) throw CsvError("CSV has a header but no rows");
  log.config.n_steps = static_cast<int>(log.frames.size());
  return log;
}

SimulationLog read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_csv_text(ss.str());
}

std::string sidecar_json(const SimulationLog& log) {
  nlohmann::json j;
  const SimConfig& c = log.config;
  j["config"]["n_steps"] = c.n_steps;
  j["config"]["hours_per_cycle"] = c.hours_per_cycle;
  j["config"]["sinus_amplitude"] = c.sinus_amplitude;
  j["config"]["noise_amplitude"] = c.noise_amplitude;
  j["config"]["seed"] = c.seed;
  j["config"]["vband"] = {c.vmin, c.vmax};
  j["config"]["pf_options"]["tol"] = c.pf_options.tol;
  j["config"]["pf_options"]["max_iter"] = c.pf_options.max_iter;
  j["config"]["pf_options"]["enforce_q_lims"] = c.pf_options.enforce_q_lims;
  j["config"]["pf_options"]["max_qlim_rounds"] = c.pf_options.max_qlim_rounds;
  j["config"]["schedule"] = nlohmann::json::parse(serialize_schedule(c.schedule));
  j["metrics_true"] = metrics_to_json(compute_metrics(log, Side::True));
  j["metrics_meas"] = metrics_to_json(compute_metrics(log, Side::Measured));
  return j.dump(2) + "\n";
}

void write_sidecar(const SimulationLog& log, const std::string& path) {
  write_text_file(path, sidecar_json(log));
}

std::string delta_csv(const std::vector<DeltaFrame>& deltas, const std::vector<int>& bus_ids) {
  std::string out = "t";
  for (int id : bus_ids) out += ",dvm_true_" + std::to_string(id);
  for (int id : bus_ids) out += ",dvm_meas_" + std::to_string(id);
  out += ",mean_dvm_true,mean_dvm_meas,dloss_mw\n";
  for (const DeltaFrame& d : deltas) {
    out += std::to_string(d.t);
    for (double v : d.dvm_true) { out += ','; out += format_double(v); }
    for (double v : d.dvm_meas) { out += ','; out += format_double(v); }
    out += ',';
    out += format_double(d.mean_dvm_true);
    out += ',';
    out += format_double(d.mean_dvm_meas);
    out += ',';
    out += format_double(d.dloss_mw);
    out += '\n';
  }
  return out;
}

}  // namespace cpsim
