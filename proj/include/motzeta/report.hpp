#ifndef MOTZETA_REPORT_HPP
#define MOTZETA_REPORT_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "motzeta/taskfile.hpp"

namespace motzeta {

enum class ReportFormat { Text, Structured };

struct RunOptions {
  Int budget_cap = Int(Budget::kDefaultCap);
  std::optional<unsigned long> seed; // overrides the file-level seed
  long coeff_cap = 30;               // coefficient-extraction bound
};

/** One exact value in a report row. */
struct ReportValue {
  enum class Kind { Text, Integer, Rational, Bool };
  Kind kind = Kind::Text;
  std::string text; // Text: canonical expression; Integer: decimal digits
  Rat rat;          // Rational
  bool flag = false;

  static ReportValue of_text(std::string s);
  static ReportValue of_int(const Int& z);
  static ReportValue of_rat(const Rat& r);
  static ReportValue of_bool(bool b);
};

struct TaskReport {
  std::string name, kind;
  std::string status;                    // "ok" | "failed" | "error"
  std::string error_code, error_message; // status == "error" only
  std::vector<std::string> input;        // canonical task lines (echo)
  std::vector<std::pair<std::string, ReportValue>> output;
  std::vector<std::string> failures;     // unmet expectations / failed checks
};

struct Report {
  unsigned long seed = 0;
  std::vector<TaskReport> tasks;
  long n_ok = 0, n_failed = 0, n_error = 0;
  bool all_ok() const { return n_failed == 0 && n_error == 0; }
};

/** Executes tasks in declaration order; per-task errors become statuses. */
Report run_taskfile(const TaskFile& file, const RunOptions& opt = {});

/** Deterministic text or structured (JSON) rendering; no timestamps. */
std::string render_report(const Report& report, ReportFormat format);

} // namespace motzeta

#endif
