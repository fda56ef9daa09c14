#include "qmlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qmlab/linalg.hpp"

namespace qmlab {

const char* check_kind_name(CheckKind k) {
  switch (k) {
    case CheckKind::exact: return "exact";
    case CheckKind::reference: return "reference";
    case CheckKind::oracle: return "oracle";
  }
  throw Error("unreachable check kind");
}

CheckRecord make_check(const std::string& name, int criterion, CheckKind kind,
                       double computed, double expected, double tolerance) {
  CheckRecord r;
  r.name = name;
  r.criterion = criterion;
  r.kind = kind;
  r.op = CheckOp::abs_diff;
  r.computed = computed;
  r.expected = expected;
  r.tolerance = tolerance;
  r.passed = std::isfinite(computed) && std::abs(computed - expected) <= tolerance;
  return r;
}

CheckRecord make_greater_check(const std::string& name, int criterion,
                               CheckKind kind, double computed,
                               double threshold) {
  CheckRecord r;
  r.name = name;
  r.criterion = criterion;
  r.kind = kind;
  r.op = CheckOp::greater;
  r.computed = computed;
  r.expected = threshold;
  r.tolerance = 0;
  r.passed = std::isfinite(computed) && computed > threshold;
  return r;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // Prefer the shortest representation that still round-trips.
  for (int prec = 1; prec <= 16; ++prec) {
    char trial[64];
    std::snprintf(trial, sizeof(trial), "%.*g", prec, v);
    double back = 0;
    std::sscanf(trial, "%lf", &back);
    if (back == v || (std::isnan(back) && std::isnan(v))) return trial;
  }
  return buf;
}

void Series::add_row(const std::vector<double>& values) {
  std::vector<std::string> row;
  row.reserve(values.size());
  for (double v : values) row.push_back(format_double(v));
  add_row(std::move(row));
}

void Series::add_row(std::vector<std::string> values) {
  if (values.size() != columns.size())
    throw Error("row width does not match header");
  rows.push_back(std::move(values));
}

Series make_series(std::vector<std::string> columns) {
  return Series{std::move(columns), {}};
}

void RunReport::push_series(const std::string& name, Series s) {
  for (const auto& [existing, unused] : series)
    if (existing == name) throw Error("duplicate series '" + name + "'");
  series.emplace_back(name, std::move(s));
}

bool RunReport::all_passed() const { return failures() == 0; }

int RunReport::failures() const {
  int n = 0;
  for (const auto& c : checks) n += c.passed ? 0 : 1;
  return n;
}

std::string csv_text(const Series& s) {
  std::ostringstream os;
  for (size_t i = 0; i < s.columns.size(); ++i)
    os << (i ? "," : "") << s.columns[i];
  os << "\n";
  for (const auto& row : s.rows) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  return os.str();
}

Series checks_series(const RunReport& report) {
  Series s;
  s.columns = {"name", "criterion", "kind", "op",
               "computed", "expected", "tolerance", "passed"};
  for (const auto& c : report.checks) {
    s.add_row(std::vector<std::string>{
        c.name, std::to_string(c.criterion), check_kind_name(c.kind),
        c.op == CheckOp::abs_diff ? "abs_diff" : "greater",
        format_double(c.computed), format_double(c.expected),
        format_double(c.tolerance), c.passed ? "1" : "0"});
  }
  return s;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace qmlab
