#ifndef MOTZETA_TASKFILE_HPP
#define MOTZETA_TASKFILE_HPP

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "motzeta/arcs.hpp"
#include "motzeta/identity.hpp"
#include "motzeta/polyhedra.hpp"
#include "motzeta/resolution.hpp"

namespace motzeta {

/**
 * Line-oriented task files:
 *
 *   motzeta 1
 *   seed 7            # optional, default 0
 *
 *   task <name> <kind>
 *     <key> <values...>
 *   end
 *
 * '#' starts a comment; keys and their value syntax depend on the kind.
 * Every parse error carries "line N"; every semantic error names the task
 * and field.
 */

/** Evaluate a ring/series expression; canonical form and optional value. */
struct ZetaTask {
  std::string expr;
  std::optional<Rat> specialize_at;  // ring values only
  std::optional<std::string> expect; // expression, compared exactly
  std::optional<Rat> expect_value;   // expected specialized value
};

/** Limit of a series expression at T -> infinity. */
struct LimitTask {
  std::string expr;
  std::optional<std::string> expect; // ring expression
};

/** Coefficientwise product of two series expressions. */
struct HadamardTask {
  std::string a, b;
  std::optional<std::string> expect;       // series expression
  std::optional<std::string> expect_limit; // ring expression
};

/** Nearby-cycles class of resolution data. */
struct NearbyTask {
  ResolutionDatum datum;
  std::optional<std::string> expect; // ring expression
};

/** Volume series of resolution data, with optional coefficient extraction. */
struct VolumeSeriesTask {
  ResolutionDatum datum;
  long coefficients = 0;            // report coefficient(m) for 1 <= m <= this
  std::optional<Rat> specialize_at; // also report coefficients specialized here
  std::vector<std::pair<long, Rat>> expect_coeff; // specialized expectations
  std::optional<std::string> expect;        // series expression
  std::optional<std::string> expect_volume; // ring expression
};

/** Weighted lattice-point sum over conical pieces. */
struct AmSumTask {
  std::vector<ConicalPiece> pieces;
  long m = 1;
  std::optional<AffineWeight> weight;
  std::optional<std::string> expect; // ring expression
};

/** Euler characteristic, or an integral against dchi over disjoint pieces. */
struct EulerTask {
  std::vector<std::pair<Polyhedron, std::string>> pieces; // (piece, coefficient expression)
  bool integral = false; // true when any explicit `piece` line appears
  std::optional<std::string> expect; // integer (plain) or ring expression (integral)
};

/** One truncated-arc count. */
struct ArcCountTask {
  std::vector<std::string> vars;
  ArcTask task;
  std::optional<Int> expect_count;
  std::optional<Rat> expect_xtilde;
};

/** Count of a block-predicate subset of an arc problem. */
struct CountSetTask {
  std::vector<std::string> vars;
  SetSpec spec;
  std::optional<Int> expect_count;
  std::optional<Rat> expect_xtilde;
};

/** Coefficientwise checks of the integral identity. */
struct TermwiseTask {
  std::vector<std::string> vars;
  IdentityInstance inst;
  struct ExpectCounts {
    long m = 0;
    int qf = 0;
    Int x, x0, x1;
  };
  std::vector<ExpectCounts> expects;
};

/** Full identity verification with fitted series. */
struct IdentityTask {
  std::vector<std::string> vars;
  IdentityInstance inst;
  bool seed_set = false; // task-level seed overrides the file/CLI seed
  std::optional<Rat> expect_lhs, expect_rhs;
};

using TaskPayload =
    std::variant<ZetaTask, LimitTask, HadamardTask, NearbyTask, VolumeSeriesTask,
                 AmSumTask, EulerTask, ArcCountTask, CountSetTask, TermwiseTask,
                 IdentityTask>;

struct TaskEntry {
  std::string name;
  std::string kind;
  TaskPayload payload;
};

struct TaskFile {
  long version = 1;
  unsigned long seed = 0; // file-level default for tasks that consume a seed
  std::vector<TaskEntry> entries;
};

/** Parses and validates; raises ParseError ("line N: ...") or ValidationError. */
TaskFile parse_taskfile(const std::string& text);

/** Canonical payload lines of one task (round-trips through the parser). */
std::vector<std::string> render_task_lines(const TaskEntry& entry);

/** Canonical rendering of the whole file. */
std::string render_taskfile(const TaskFile& file);

} // namespace motzeta

#endif
