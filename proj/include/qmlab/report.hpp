#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qmlab {

// How a check's expected side was obtained: closed-form identities checked
// directly, values transcribed from the model's defining relations, or an
// independently computed oracle.
enum class CheckKind { exact, reference, oracle };
const char* check_kind_name(CheckKind k);

// How computed relates to expected.
enum class CheckOp { abs_diff, greater };

struct CheckRecord {
  std::string name;
  int criterion = 0;  // 1..10 ties the check to an acceptance criterion
  CheckKind kind = CheckKind::exact;
  CheckOp op = CheckOp::abs_diff;
  double computed = 0;
  double expected = 0;
  double tolerance = 0;
  bool passed = false;
};

CheckRecord make_check(const std::string& name, int criterion, CheckKind kind,
                       double computed, double expected, double tolerance);
// passed when computed > threshold (separation checks).
CheckRecord make_greater_check(const std::string& name, int criterion,
                               CheckKind kind, double computed,
                               double threshold);

struct Series {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  void add_row(const std::vector<double>& values);
  void add_row(std::vector<std::string> values);
};

Series make_series(std::vector<std::string> columns);

struct RunReport {
  std::vector<CheckRecord> checks;
  std::vector<std::pair<std::string, Series>> series;  // insertion order
  std::vector<std::string> artifacts;  // files written, relative to out dir
  std::vector<std::string> notes;
  std::string config_echo;
  double wall_seconds = 0;

  // Series are built locally and moved in once complete; references into
  // `series` are unstable while more series are being appended.
  void push_series(const std::string& name, Series s);
  bool all_passed() const;
  int failures() const;
};

// Shortest decimal form that round-trips the double.
std::string format_double(double v);

std::string csv_text(const Series& s);
Series checks_series(const RunReport& report);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace qmlab
