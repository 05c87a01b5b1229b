#include "cpsim/caseio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "cpsim/csvio.hpp"

namespace cpsim {

int NetworkCase::bus_index(int bus_id) const {
  for (size_t i = 0; i < buses.size(); ++i)
    if (buses[i].id == bus_id) return static_cast<int>(i);
  return -1;
}

namespace {

struct MatrixRow {
  std::vector<double> values;
  int line = 0;
};

struct Section {
  bool present = false;
  bool is_matrix = false;
  double scalar = 0.0;
  std::vector<MatrixRow> rows;
  int line = 0;
};

[[noreturn]] void fail(ParseErrorKind kind, int line, const std::string& msg) {
  throw CaseParseError(kind, line, line > 0 ? "line " + std::to_string(line) + ": " + msg : msg);
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}
bool number_start(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
}

class Scanner {
 public:
  explicit Scanner(const std::string& text) : s_(text) {}

  bool eof() const { return pos_ >= s_.size(); }
  int line() const { return line_; }
  char peek() const { return s_[pos_]; }

  void advance() {
    if (s_[pos_] == '\n') ++line_;
    ++pos_;
  }

  // Skips spaces, tabs, CR and comments; stops at newline when stop_at_eol.
  void skip_blanks(bool stop_at_eol) {
    while (!eof()) {
      char c = s_[pos_];
      if (c == '%') {
        while (!eof() && s_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        if (stop_at_eol) return;
        advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == ',') {
        ++pos_;
      } else {
        return;
      }
    }
  }

  void skip_to_eol() {
    while (!eof() && s_[pos_] != '\n') ++pos_;
    if (!eof()) advance();
  }

  std::string read_ident() {
    size_t start = pos_;
    while (!eof() && ident_char(s_[pos_])) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  // Reads one numeric literal; returns false when the token is not a number.
  bool read_number(double& out) {
    size_t start = pos_;
    while (!eof() && (ident_char(s_[pos_]) || number_start(s_[pos_]))) {
      char c = s_[pos_];
      // 1e-5 / 1e+5: sign is part of the literal only after an exponent mark
      if ((c == '+' || c == '-') && pos_ > start) {
        char p = s_[pos_ - 1];
        if (p != 'e' && p != 'E') break;
      }
      ++pos_;
    }
    if (pos_ == start) {
      if (!eof() && number_start(s_[pos_])) ++pos_;  // lone sign or dot
      else return false;
    }
    std::string tok = s_.substr(start, pos_ - start);
    const char* b = tok.data();
    const char* e = b + tok.size();
    auto res = std::from_chars(b, e, out);
    return res.ec == std::errc() && res.ptr == e && std::isfinite(out);
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;
  int line_ = 1;
};

std::string last_component(const std::string& ident) {
  auto dot = ident.rfind('.');
  return dot == std::string::npos ? ident : ident.substr(dot + 1);
}

int checked_int(double v, int line, const std::string& what) {
  if (!std::isfinite(v) || std::trunc(v) != v || v < -2147483647.0 || v > 2147483647.0)
    fail(ParseErrorKind::MalformedRow, line, what + " is not an integer");
  return static_cast<int>(v);
}

BusKind bus_kind_from_code(int code, int line) {
  switch (code) {
    case 1: return BusKind::PQ;
    case 2: return BusKind::PV;
    case 3: return BusKind::Slack;
    case 4: return BusKind::Isolated;
    default: fail(ParseErrorKind::MalformedRow, line, "unknown bus type " + std::to_string(code));
  }
}

// Collects rows of `[ ... ]`. Rows end at ';' or at a newline.
std::vector<MatrixRow> read_matrix(Scanner& sc) {
  std::vector<MatrixRow> rows;
  MatrixRow row;
  row.line = sc.line();
  auto flush = [&]() {
    if (!row.values.empty()) rows.push_back(std::move(row));
    row = MatrixRow{};
  };
  while (true) {
    sc.skip_blanks(true);
    if (sc.eof()) fail(ParseErrorKind::MalformedRow, sc.line(), "unterminated matrix");
    char c = sc.peek();
    if (c == '\n') {
      flush();
      sc.advance();
      row.line = sc.line();
      continue;
    }
    if (c == ']') {
      flush();
      sc.advance();
      return rows;
    }
    if (c == ';') {
      flush();
      sc.advance();
      row.line = sc.line();
      continue;
    }
    if (row.values.empty()) row.line = sc.line();
    double v = 0.0;
    if (!sc.read_number(v))
      fail(ParseErrorKind::MalformedRow, sc.line(), "non-numeric token in matrix");
    row.values.push_back(v);
  }
}

void skip_value(Scanner& sc) {
  sc.skip_blanks(false);
  if (sc.eof()) return;
  char c = sc.peek();
  if (c == '[') {
    sc.advance();
    read_matrix(sc);
  } else if (c == '{') {
    int depth = 0;
    while (!sc.eof()) {
      char d = sc.peek();
      sc.advance();
      if (d == '{') ++depth;
      if (d == '}' && --depth == 0) break;
    }
  } else if (c == '\'') {
    sc.advance();
    while (!sc.eof() && sc.peek() != '\'' && sc.peek() != '\n') sc.advance();
    if (!sc.eof() && sc.peek() == '\'') sc.advance();
  } else {
    sc.skip_to_eol();
    return;
  }
  sc.skip_blanks(true);
  if (!sc.eof() && sc.peek() == ';') sc.advance();
}

}  // namespace

NetworkCase parse_matpower_case(const std::string& text) {
  Scanner sc(text);
  Section base, bus, gen, branch;

  while (true) {
    sc.skip_blanks(false);
    if (sc.eof()) break;
    char c = sc.peek();
    if (!ident_start(c)) {
      sc.skip_to_eol();
      continue;
    }
    int stmt_line = sc.line();
    std::string ident = sc.read_ident();
    if (ident == "function") {
      sc.skip_to_eol();
      continue;
    }
    sc.skip_blanks(true);
    if (sc.eof() || sc.peek() != '=') {
      sc.skip_to_eol();
      continue;
    }
    sc.advance();  // '='
    std::string name = last_component(ident);
    if (name == "baseMVA") {
      sc.skip_blanks(true);
      double v = 0.0;
      if (sc.eof() || !sc.read_number(v))
        fail(ParseErrorKind::MalformedRow, stmt_line, "baseMVA must be a numeric scalar");
      base.present = true;
      base.scalar = v;
      base.line = stmt_line;
      sc.skip_blanks(true);
      if (!sc.eof() && sc.peek() == ';') sc.advance();
    } else if (name == "bus" || name == "gen" || name == "branch") {
      sc.skip_blanks(false);
      if (sc.eof() || sc.peek() != '[')
        fail(ParseErrorKind::MalformedRow, stmt_line, name + " must be a matrix");
      sc.advance();
      Section* dst = name == "bus" ? &bus : name == "gen" ? &gen : &branch;
      dst->present = true;
      dst->is_matrix = true;
      dst->line = stmt_line;
      dst->rows = read_matrix(sc);
      sc.skip_blanks(true);
      if (!sc.eof() && sc.peek() == ';') sc.advance();
    } else {
      skip_value(sc);
    }
  }

  if (!base.present) fail(ParseErrorKind::MissingSection, 0, "missing baseMVA assignment");
  if (!bus.present) fail(ParseErrorKind::MissingSection, 0, "missing bus matrix");
  if (!gen.present) fail(ParseErrorKind::MissingSection, 0, "missing gen matrix");
  if (!branch.present) fail(ParseErrorKind::MissingSection, 0, "missing branch matrix");

  NetworkCase c;
  c.base_mva = base.scalar;

  std::set<int> ids;
  for (const MatrixRow& row : bus.rows) {
    if (row.values.size() != 13)
      fail(ParseErrorKind::MalformedRow, row.line,
           "bus row has " + std::to_string(row.values.size()) + " columns, expected 13");
    const std::vector<double>& v = row.values;
    BusRecord b;
    b.id = checked_int(v[0], row.line, "bus id");
    b.bus_kind = bus_kind_from_code(checked_int(v[1], row.line, "bus type"), row.line);
    b.pd = v[2];
    b.qd = v[3];
    b.gs = v[4];
    b.bs = v[5];
    b.vm0 = v[7];
    b.va0 = v[8];
    b.base_kv = v[9];
    b.vmax = v[11];
    b.vmin = v[12];
    if (!ids.insert(b.id).second)
      fail(ParseErrorKind::DuplicateBusId, row.line, "duplicate bus id " + std::to_string(b.id));
    c.buses.push_back(b);
  }

  for (const MatrixRow& row : gen.rows) {
    if (row.values.size() < 10)
      fail(ParseErrorKind::MalformedRow, row.line,
           "gen row has " + std::to_string(row.values.size()) + " columns, expected at least 10");
    const std::vector<double>& v = row.values;
    GenRecord g;
    g.bus = checked_int(v[0], row.line, "gen bus");
    g.pg = v[1];
    g.qg = v[2];
    g.qmax = v[3];
    g.qmin = v[4];
    g.vset = v[5];
    g.status = v[7] > 0;
    g.pmax = v[8];
    g.pmin = v[9];
    if (!ids.count(g.bus))
      fail(ParseErrorKind::DanglingReference, row.line,
           "gen references unknown bus " + std::to_string(g.bus));
    c.gens.push_back(g);
  }

  for (const MatrixRow& row : branch.rows) {
    if (row.values.size() < 13)
      fail(ParseErrorKind::MalformedRow, row.line,
           "branch row has " + std::to_string(row.values.size()) +
               " columns, expected at least 13");
    const std::vector<double>& v = row.values;
    BranchRecord br;
    br.from_bus = checked_int(v[0], row.line, "branch from-bus");
    br.to_bus = checked_int(v[1], row.line, "branch to-bus");
    br.r = v[2];
    br.x = v[3];
    br.b = v[4];
    br.tap = v[8] == 0.0 ? 1.0 : v[8];
    br.shift = v[9];
    br.status = v[10] != 0.0;
    if (!ids.count(br.from_bus))
      fail(ParseErrorKind::DanglingReference, row.line,
           "branch references unknown bus " + std::to_string(br.from_bus));
    if (!ids.count(br.to_bus))
      fail(ParseErrorKind::DanglingReference, row.line,
           "branch references unknown bus " + std::to_string(br.to_bus));
    c.branches.push_back(br);
  }

  bool has_slack = std::any_of(c.buses.begin(), c.buses.end(), [](const BusRecord& b) {
    return b.bus_kind == BusKind::Slack;
  });
  if (!has_slack) fail(ParseErrorKind::NoSlackBus, 0, "case has no slack bus");

  return c;
}

std::vector<std::string> validate_case(const NetworkCase& c) {
  std::vector<std::string> out;
  if (!(c.base_mva > 0)) out.push_back("base_mva must be positive");

  std::map<int, int> id_count;
  std::vector<int> slack_ids;
  for (const BusRecord& b : c.buses) {
    ++id_count[b.id];
    if (b.bus_kind == BusKind::Slack) slack_ids.push_back(b.id);
    if (!(b.vmin <= b.vmax))
      out.push_back("bus " + std::to_string(b.id) + ": vmin > vmax");
    if (!(b.vm0 > 0)) out.push_back("bus " + std::to_string(b.id) + ": vm0 must be positive");
  }
  for (const auto& [id, n] : id_count)
    if (n > 1) out.push_back("bus id " + std::to_string(id) + " appears " + std::to_string(n) + " times");
  if (slack_ids.empty()) {
    out.push_back("no slack bus");
  } else if (slack_ids.size() > 1) {
    std::string msg = "multiple slack buses:";
    for (int id : slack_ids) msg += " " + std::to_string(id);
    out.push_back(msg);
  }

  for (size_t i = 0; i < c.gens.size(); ++i) {
    const GenRecord& g = c.gens[i];
    std::string tag = "gen " + std::to_string(i + 1);
    if (!(g.qmin <= g.qmax)) out.push_back(tag + ": qmin > qmax");
    if (!(g.pmin <= g.pmax)) out.push_back(tag + ": pmin > pmax");
    int bi = c.bus_index(g.bus);
    if (bi < 0) {
      out.push_back(tag + ": references unknown bus " + std::to_string(g.bus));
    } else if (g.status) {
      BusKind k = c.buses[bi].bus_kind;
      if (k != BusKind::Slack && k != BusKind::PV)
        out.push_back(tag + ": in service at non-generator bus " + std::to_string(g.bus));
    }
  }

  for (size_t i = 0; i < c.branches.size(); ++i) {
    const BranchRecord& br = c.branches[i];
    std::string tag = "branch " + std::to_string(i + 1);
    if (c.bus_index(br.from_bus) < 0)
      out.push_back(tag + ": references unknown bus " + std::to_string(br.from_bus));
    if (c.bus_index(br.to_bus) < 0)
      out.push_back(tag + ": references unknown bus " + std::to_string(br.to_bus));
    if (br.from_bus == br.to_bus)
      out.push_back(tag + ": from_bus equals to_bus (" + std::to_string(br.from_bus) + ")");
    if (br.status && br.x == 0.0)
      out.push_back(tag + ": in-service branch with zero reactance");
  }
  return out;
}

namespace {

int bus_kind_code(BusKind k) {
  switch (k) {
    case BusKind::PQ: return 1;
    case BusKind::PV: return 2;
    case BusKind::Slack: return 3;
    case BusKind::Isolated: return 4;
  }
  return 1;
}

void append_row(std::string& out, const std::vector<double>& values) {
  for (double v : values) {
    out += '\t';
    out += format_double(v);
  }
  out += ";\n";
}

}  // namespace

std::string serialize_case(const NetworkCase& c) {
  std::string out;
  out += "function mpc = case\n";
  out += "mpc.version = '2';\n";
  out += "mpc.baseMVA = " + format_double(c.base_mva) + ";\n\n";

  out += "mpc.bus = [\n";
  for (const BusRecord& b : c.buses)
    append_row(out, {static_cast<double>(b.id), static_cast<double>(bus_kind_code(b.bus_kind)),
                     b.pd, b.qd, b.gs, b.bs, 1.0, b.vm0, b.va0, b.base_kv, 1.0, b.vmax, b.vmin});
  out += "];\n\n";

  out += "mpc.gen = [\n";
  for (const GenRecord& g : c.gens)
    append_row(out, {static_cast<double>(g.bus), g.pg, g.qg, g.qmax, g.qmin, g.vset, c.base_mva,
                     g.status ? 1.0 : 0.0, g.pmax, g.pmin});
  out += "];\n\n";

  out += "mpc.branch = [\n";
  for (const BranchRecord& br : c.branches)
    append_row(out, {static_cast<double>(br.from_bus), static_cast<double>(br.to_bus), br.r, br.x,
                     br.b, 0.0, 0.0, 0.0, br.tap, br.shift, br.status ? 1.0 : 0.0, -360.0, 360.0});
  out += "];\n";
  return out;
}

NetworkCase builtin_case14() {
  static const NetworkCase c = parse_matpower_case(builtin_case14_text());
  return c;
}

}  // namespace cpsim
