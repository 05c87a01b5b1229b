#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cpsim {

enum class BusKind { PQ = 1, PV = 2, Slack = 3, Isolated = 4 };

struct BusRecord {
  int id = 0;
  BusKind bus_kind = BusKind::PQ;
  double pd = 0.0;   // MW
  double qd = 0.0;   // MVAr
  double gs = 0.0;   // MW at 1.0 p.u.
  double bs = 0.0;   // MVAr at 1.0 p.u.
  double vm0 = 1.0;  // p.u.
  double va0 = 0.0;  // degrees
  double base_kv = 0.0;
  double vmax = 0.0;
  double vmin = 0.0;

  bool operator==(const BusRecord&) const = default;
};

struct GenRecord {
  int bus = 0;
  double pg = 0.0;  // MW
  double qg = 0.0;  // MVAr
  double qmax = 0.0;
  double qmin = 0.0;
  double vset = 1.0;  // p.u.
  bool status = true;
  double pmax = 0.0;
  double pmin = 0.0;

  bool operator==(const GenRecord&) const = default;
};

struct BranchRecord {
  int from_bus = 0;
  int to_bus = 0;
  double r = 0.0;  // p.u.
  double x = 0.0;  // p.u.
  double b = 0.0;  // p.u. total charging
  double tap = 1.0;   // 1.0 means nominal (0 in a file is normalized at parse)
  double shift = 0.0; // degrees
  bool status = true;

  bool operator==(const BranchRecord&) const = default;
};

struct NetworkCase {
  double base_mva = 100.0;
  std::vector<BusRecord> buses;
  std::vector<GenRecord> gens;
  std::vector<BranchRecord> branches;

  bool operator==(const NetworkCase&) const = default;

  // Dense index of a bus id, or -1 when absent. Ids need not be contiguous.
  int bus_index(int bus_id) const;
};

enum class ParseErrorKind {
  MissingSection,
  MalformedRow,
  NoSlackBus,
  DuplicateBusId,
  DanglingReference,
};

class CaseParseError : public std::runtime_error {
 public:
  CaseParseError(ParseErrorKind kind, int line, const std::string& what)
      : std::runtime_error(what), kind_(kind), line_(line) {}
  ParseErrorKind kind() const { return kind_; }
  int line() const { return line_; }  // 1-based source line, 0 if file-level

 private:
  ParseErrorKind kind_;
  int line_;
};

NetworkCase parse_matpower_case(const std::string& text);

// The embedded 14-bus benchmark case; identical to parsing data/case14.m.
NetworkCase builtin_case14();
const std::string& builtin_case14_text();

// One entry per violated invariant; empty means the case is valid.
std::vector<std::string> validate_case(const NetworkCase& c);

// Case-file text that parses back to a field-identical NetworkCase.
std::string serialize_case(const NetworkCase& c);

}  // namespace cpsim
