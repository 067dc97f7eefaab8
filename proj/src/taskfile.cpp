#include "motzeta/taskfile.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <string>

#include "motzeta/error.hpp"
#include "motzeta/expr.hpp"

namespace motzeta {

namespace {

std::string rat_str(const Rat& r) { return r.get_str(); }
std::string int_str(const Int& z) { return z.get_str(); }

/** One nonempty, comment-stripped input line, pre-split into tokens. */
struct PLine {
  long no = 0;
  std::string text;
  std::vector<std::string> tok;
  std::vector<size_t> tokpos;

  const std::string& key() const { return tok.front(); }
  std::string rest_after(size_t k) const {
    return k < tok.size() ? text.substr(tokpos[k]) : std::string();
  }
};

[[noreturn]] void perr(long no, const std::string& msg) {
  raise(ErrorCode::ParseError, "line " + std::to_string(no) + ": " + msg);
}

[[noreturn]] void verr(const std::string& task, const std::string& field,
                       const std::string& msg) {
  raise(ErrorCode::ValidationError,
        "task '" + task + "', field '" + field + "': " + msg);
}

std::vector<PLine> scan(const std::string& text) {
  std::vector<PLine> out;
  std::istringstream in(text);
  std::string raw;
  long no = 0;
  while (std::getline(in, raw)) {
    ++no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    size_t b = raw.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    size_t e = raw.find_last_not_of(" \t\r");
    PLine l;
    l.no = no;
    l.text = raw.substr(b, e - b + 1);
    size_t i = 0;
    while (i < l.text.size()) {
      while (i < l.text.size() && std::isspace(static_cast<unsigned char>(l.text[i]))) ++i;
      if (i >= l.text.size()) break;
      size_t j = i;
      while (j < l.text.size() && !std::isspace(static_cast<unsigned char>(l.text[j]))) ++j;
      l.tok.push_back(l.text.substr(i, j - i));
      l.tokpos.push_back(i);
      i = j;
    }
    out.push_back(std::move(l));
  }
  return out;
}

const std::string& arg(const PLine& l, size_t i) {
  if (i >= l.tok.size())
    perr(l.no, "key '" + l.key() + "' is missing an argument");
  return l.tok[i];
}

void arity(const PLine& l, size_t n) {
  if (l.tok.size() != n)
    perr(l.no, "key '" + l.key() + "' takes " + std::to_string(n - 1) +
                   " argument(s), got " + std::to_string(l.tok.size() - 1));
}

std::string rest_required(const PLine& l, size_t k) {
  std::string r = l.rest_after(k);
  if (r.empty()) perr(l.no, "key '" + l.key() + "' needs a value");
  return r;
}

long to_long(const PLine& l, const std::string& s) {
  try {
    size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    perr(l.no, "key '" + l.key() + "': expected an integer, got '" + s + "'");
  }
}

Int to_int(const PLine& l, const std::string& s) {
  try {
    return parse_integer(s);
  } catch (const EngineError& e) {
    perr(l.no, "key '" + l.key() + "': " + e.what());
  }
}

Rat to_rat(const PLine& l, const std::string& s) {
  try {
    return parse_rational(s);
  } catch (const EngineError& e) {
    perr(l.no, "key '" + l.key() + "': " + e.what());
  }
}

/** Runs an expression parser, prefixing its column message with our line. */
template <class F>
auto in_line(const PLine& l, const std::string& field, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const EngineError& e) {
    raise(e.code(),
          "line " + std::to_string(l.no) + ", " + field + ": " + e.what());
  }
}

std::vector<std::string> split_list(const PLine& l, const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    size_t b = cur.find_first_not_of(" \t");
    if (b == std::string::npos) perr(l.no, "key '" + l.key() + "': empty list entry");
    size_t e = cur.find_last_not_of(" \t");
    out.push_back(cur.substr(b, e - b + 1));
  }
  if (out.empty()) perr(l.no, "key '" + l.key() + "': empty list");
  return out;
}

std::vector<long> to_long_list(const PLine& l, const std::string& s) {
  std::vector<long> out;
  for (auto& part : split_list(l, s, ',')) out.push_back(to_long(l, part));
  return out;
}

std::vector<int> to_subset(const PLine& l, const std::string& s) {
  std::vector<int> out;
  for (long v : to_long_list(l, s)) out.push_back(static_cast<int>(v));
  return out;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

bool is_reserved(const std::string& s) {
  return s == "L" || s == "T" || s == "gen" || s == "lim" || s == "had";
}

void check_prime_field(const std::string& task, long q) {
  if (q != 2 && q != 3 && q != 5 && q != 7)
    verr(task, "qf", "a prime field size (2, 3, 5, or 7) is required");
}

/** Tracks one-shot keys within a task body. */
struct Seen {
  std::set<std::string> keys;
  void once(const PLine& l) {
    if (!keys.insert(l.key()).second)
      perr(l.no, "duplicate key '" + l.key() + "'");
  }
  bool has(const std::string& k) const { return keys.count(k) != 0; }
};

void require(const std::string& task, const std::string& field, bool ok) {
  if (!ok) verr(task, field, "required key is missing");
}

// ---------------------------------------------------------------------------
// Shared sub-builders
// ---------------------------------------------------------------------------

struct DatumBuilder {
  ResolutionDatum datum;
  Seen seen;
  bool any = false;

  bool handle(const PLine& l) {
    const std::string& k = l.key();
    if (k == "dim") {
      seen.once(l);
      arity(l, 2);
      datum.reldim = static_cast<int>(to_long(l, arg(l, 1)));
      any = true;
      return true;
    }
    if (k == "component") {
      arity(l, 3);
      ResolutionDatum::Component c;
      c.N = to_long(l, arg(l, 1));
      c.alpha = to_long(l, arg(l, 2));
      datum.components.push_back(c);
      any = true;
      return true;
    }
    if (k == "stratum") {
      std::vector<int> subset = to_subset(l, arg(l, 1));
      Motive cls = in_line(l, "stratum class", [&] {
        return parse_motive_expr(rest_required(l, 2));
      });
      if (!datum.strata.emplace(subset, cls).second)
        perr(l.no, "duplicate stratum subset");
      any = true;
      return true;
    }
    if (k == "cover") {
      arity(l, 3);
      std::vector<int> subset = to_subset(l, arg(l, 1));
      if (!datum.covering_order.emplace(subset, to_long(l, arg(l, 2))).second)
        perr(l.no, "duplicate cover subset");
      any = true;
      return true;
    }
    return false;
  }

  void finalize(const std::string& task) {
    require(task, "dim", seen.has("dim"));
    require(task, "component", !datum.components.empty());
    try {
      validate_resolution(datum);
    } catch (const EngineError& e) {
      verr(task, "resolution", e.what());
    }
  }
};

std::vector<std::string> datum_lines(const ResolutionDatum& d) {
  std::vector<std::string> out;
  out.push_back("dim " + std::to_string(d.reldim));
  for (auto& c : d.components)
    out.push_back("component " + std::to_string(c.N) + " " + std::to_string(c.alpha));
  auto subset_str = [](const std::vector<int>& s) {
    std::string t;
    for (size_t i = 0; i < s.size(); ++i) {
      if (i) t += ",";
      t += std::to_string(s[i]);
    }
    return t;
  };
  for (auto& [subset, cls] : d.strata)
    out.push_back("stratum " + subset_str(subset) + " " + cls.str());
  for (auto& [subset, k] : d.covering_order)
    out.push_back("cover " + subset_str(subset) + " " + std::to_string(k));
  return out;
}

struct ArcBuilder {
  std::vector<std::string> vars;
  ArcTask task;
  Seen seen;
  std::set<std::string> var_lines;

  bool handle(const PLine& l, const std::string& name) {
    const std::string& k = l.key();
    if (k == "vars") {
      seen.once(l);
      arity(l, 2);
      vars = split_list(l, arg(l, 1), ',');
      std::set<std::string> uniq;
      for (auto& v : vars) {
        if (!is_identifier(v) || is_reserved(v))
          verr(name, "vars", "'" + v + "' is not a usable variable name");
        if (!uniq.insert(v).second) verr(name, "vars", "duplicate variable '" + v + "'");
      }
      task.base.assign(vars.size(), VarConstraint::free_var());
      return true;
    }
    if (k == "f") {
      seen.once(l);
      if (!seen.has("vars")) perr(l.no, "'vars' must precede 'f'");
      task.f = in_line(l, "f", [&] {
        return parse_polynomial_expr(rest_required(l, 1), vars);
      });
      return true;
    }
    if (k == "level") {
      seen.once(l);
      arity(l, 2);
      task.level = to_long(l, arg(l, 1));
      return true;
    }
    if (k == "trunc") {
      seen.once(l);
      arity(l, 2);
      task.trunc = to_long(l, arg(l, 1));
      return true;
    }
    if (k == "qf") {
      seen.once(l);
      arity(l, 2);
      long q = to_long(l, arg(l, 1));
      check_prime_field(name, q);
      task.qf = static_cast<int>(q);
      return true;
    }
    if (k == "target") {
      seen.once(l);
      arity(l, 2);
      const std::string& t = arg(l, 1);
      if (t == "exact_tm")
        task.target = ArcTask::Target::ExactTm;
      else if (t == "rvt")
        task.target = ArcTask::Target::RvT;
      else if (t == "none")
        task.target = ArcTask::Target::None;
      else
        perr(l.no, "target must be exact_tm, rvt, or none");
      return true;
    }
    if (k == "var") {
      if (!seen.has("vars")) perr(l.no, "'vars' must precede 'var'");
      const std::string& vn = arg(l, 1);
      auto it = std::find(vars.begin(), vars.end(), vn);
      if (it == vars.end()) perr(l.no, "unknown variable '" + vn + "'");
      if (!var_lines.insert(vn).second)
        perr(l.no, "duplicate 'var' line for '" + vn + "'");
      size_t idx = static_cast<size_t>(it - vars.begin());
      const std::string& kind = arg(l, 2);
      if (kind == "free") {
        arity(l, 3);
        task.base[idx] = VarConstraint::free_var();
      } else if (kind == "zero") {
        arity(l, 3);
        task.base[idx] = VarConstraint::zero();
      } else if (kind == "minval") {
        arity(l, 4);
        task.base[idx] = VarConstraint::min_val_at_least(to_long(l, arg(l, 3)));
      } else if (kind == "point") {
        arity(l, 4);
        task.base[idx] = VarConstraint::at_point(to_long(l, arg(l, 3)));
      } else {
        perr(l.no, "var constraint must be free, zero, minval, or point");
      }
      return true;
    }
    return false;
  }

  void finalize(const std::string& name) {
    require(name, "vars", seen.has("vars"));
    require(name, "f", seen.has("f"));
    require(name, "qf", seen.has("qf"));
  }
};

std::string var_line(const std::string& name, const VarConstraint& c) {
  switch (c.kind) {
    case VarConstraint::Kind::Free: return "var " + name + " free";
    case VarConstraint::Kind::Zero: return "var " + name + " zero";
    case VarConstraint::Kind::MinVal:
      return "var " + name + " minval " + std::to_string(c.min_val);
    case VarConstraint::Kind::Point:
      return "var " + name + " point " + std::to_string(c.point);
  }
  return {};
}

std::string target_name(ArcTask::Target t) {
  switch (t) {
    case ArcTask::Target::ExactTm: return "exact_tm";
    case ArcTask::Target::RvT: return "rvt";
    case ArcTask::Target::None: return "none";
  }
  return {};
}

std::vector<std::string> arc_lines(const std::vector<std::string>& vars,
                                   const ArcTask& task) {
  std::vector<std::string> out;
  std::string vs;
  for (size_t i = 0; i < vars.size(); ++i) {
    if (i) vs += ",";
    vs += vars[i];
  }
  out.push_back("vars " + vs);
  out.push_back("f " + task.f.str(vars));
  out.push_back("level " + std::to_string(task.level));
  out.push_back("trunc " + std::to_string(task.trunc));
  out.push_back("qf " + std::to_string(task.qf));
  out.push_back("target " + target_name(task.target));
  for (size_t i = 0; i < vars.size(); ++i)
    out.push_back(var_line(vars[i], task.base[i]));
  return out;
}

BlockSpec parse_blocks(const PLine& l, const std::string& name,
                       size_t nvars, bool have_vars) {
  if (!have_vars) perr(l.no, "'vars' must precede 'blocks'");
  arity(l, 4);
  BlockSpec b;
  b.d1 = static_cast<int>(to_long(l, arg(l, 1)));
  b.d2 = static_cast<int>(to_long(l, arg(l, 2)));
  b.d3 = static_cast<int>(to_long(l, arg(l, 3)));
  if (b.d1 < 0 || b.d2 < 0 || b.d3 < 0)
    verr(name, "blocks", "block sizes must be nonnegative");
  if (static_cast<size_t>(b.total()) != nvars)
    verr(name, "blocks", "block sizes must sum to the number of variables");
  return b;
}

std::string blocks_line(const BlockSpec& b) {
  return "blocks " + std::to_string(b.d1) + " " + std::to_string(b.d2) + " " +
         std::to_string(b.d3);
}

BlockPredicate parse_pred(const PLine& l) {
  arity(l, 2);
  const std::string& p = arg(l, 1);
  using K = BlockPredicate::Kind;
  if (p == "true") return BlockPredicate::of(K::True);
  if (p == "xzero") return BlockPredicate::of(K::XZero);
  if (p == "yzero") return BlockPredicate::of(K::YZero);
  if (p == "xnonzero") return BlockPredicate::of(K::XNonzero);
  if (p == "ynonzero") return BlockPredicate::of(K::YNonzero);
  if (p == "some_zero")
    return BlockPredicate::any_of(
        {BlockPredicate::of(K::XZero), BlockPredicate::of(K::YZero)});
  if (p == "both_nonzero")
    return BlockPredicate::all_of(
        {BlockPredicate::of(K::XNonzero), BlockPredicate::of(K::YNonzero)});
  perr(l.no, "pred must be one of true, xzero, yzero, xnonzero, ynonzero, "
             "some_zero, both_nonzero");
}

std::string pred_name(const BlockPredicate& p) {
  using K = BlockPredicate::Kind;
  switch (p.kind) {
    case K::True: return "true";
    case K::XZero: return "xzero";
    case K::YZero: return "yzero";
    case K::XNonzero: return "xnonzero";
    case K::YNonzero: return "ynonzero";
    case K::Or: return "some_zero";
    case K::And: return "both_nonzero";
  }
  return {};
}

std::vector<BasisKey> parse_basis(const PLine& l) {
  std::vector<BasisKey> out;
  for (auto& part : split_list(l, rest_required(l, 1), ';'))
    out.push_back(in_line(l, "basis entry", [&] { return parse_generator_product(part); }));
  return out;
}

std::string basis_str(const std::vector<BasisKey>& basis) {
  std::string s;
  for (size_t i = 0; i < basis.size(); ++i) {
    if (i) s += "; ";
    for (size_t j = 0; j < basis[i].size(); ++j) {
      if (j) s += "*";
      s += basis[i][j].str();
    }
  }
  return s;
}

std::vector<long> parse_levels(const PLine& l, const std::string& name) {
  std::vector<long> out = to_long_list(l, arg(l, 1));
  for (size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 1) verr(name, "levels", "levels must be positive");
    if (i && out[i] <= out[i - 1])
      verr(name, "levels", "levels must be strictly increasing");
  }
  return out;
}

std::vector<int> parse_fields(const PLine& l, const std::string& name) {
  std::vector<int> out;
  for (long q : to_long_list(l, arg(l, 1))) {
    check_prime_field(name, q);
    out.push_back(static_cast<int>(q));
  }
  for (size_t i = 1; i < out.size(); ++i)
    if (out[i] <= out[i - 1])
      verr(name, "fields", "fields must be strictly increasing");
  return out;
}

template <class T>
std::string join_longs(const std::vector<T>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

// Identity-flavoured tasks share f/blocks/levels/fields handling.
struct InstanceBuilder {
  std::vector<std::string> vars;
  IdentityInstance inst;
  Seen seen;

  bool handle(const PLine& l, const std::string& name) {
    const std::string& k = l.key();
    if (k == "vars") {
      seen.once(l);
      arity(l, 2);
      vars = split_list(l, arg(l, 1), ',');
      std::set<std::string> uniq;
      for (auto& v : vars) {
        if (!is_identifier(v) || is_reserved(v))
          verr(name, "vars", "'" + v + "' is not a usable variable name");
        if (!uniq.insert(v).second) verr(name, "vars", "duplicate variable '" + v + "'");
      }
      return true;
    }
    if (k == "f") {
      seen.once(l);
      if (!seen.has("vars")) perr(l.no, "'vars' must precede 'f'");
      inst.f = in_line(l, "f", [&] {
        return parse_polynomial_expr(rest_required(l, 1), vars);
      });
      return true;
    }
    if (k == "blocks") {
      seen.once(l);
      inst.blocks = parse_blocks(l, name, vars.size(), seen.has("vars"));
      return true;
    }
    if (k == "levels") {
      seen.once(l);
      arity(l, 2);
      inst.levels = parse_levels(l, name);
      return true;
    }
    if (k == "fields") {
      seen.once(l);
      arity(l, 2);
      inst.fields = parse_fields(l, name);
      return true;
    }
    return false;
  }

  void finalize(const std::string& name) {
    require(name, "vars", seen.has("vars"));
    require(name, "f", seen.has("f"));
    require(name, "blocks", seen.has("blocks"));
    require(name, "levels", seen.has("levels"));
    require(name, "fields", seen.has("fields"));
  }
};

std::vector<std::string> instance_lines(const std::vector<std::string>& vars,
                                        const IdentityInstance& inst) {
  std::vector<std::string> out;
  std::string vs;
  for (size_t i = 0; i < vars.size(); ++i) {
    if (i) vs += ",";
    vs += vars[i];
  }
  out.push_back("vars " + vs);
  out.push_back("f " + inst.f.str(vars));
  out.push_back(blocks_line(inst.blocks));
  out.push_back("levels " + join_longs(inst.levels));
  out.push_back("fields " + join_longs(inst.fields));
  return out;
}

// ---------------------------------------------------------------------------
// Polyhedron keys
// ---------------------------------------------------------------------------

Constraint parse_constraint(const PLine& l, int dim) {
  if (l.tok.size() != static_cast<size_t>(dim) + 3)
    perr(l.no, "constraint needs " + std::to_string(dim) +
                   " coefficient(s), a constant, and a relation");
  Constraint c;
  for (int i = 0; i < dim; ++i) c.a.push_back(to_rat(l, l.tok[1 + i]));
  c.b = to_rat(l, l.tok[1 + dim]);
  const std::string& rel = l.tok[2 + dim];
  if (rel == "ge")
    c.rel = Constraint::Rel::Ge;
  else if (rel == "gt")
    c.rel = Constraint::Rel::Gt;
  else if (rel == "eq")
    c.rel = Constraint::Rel::Eq;
  else
    perr(l.no, "relation must be ge, gt, or eq");
  return c;
}

std::string constraint_line(const Constraint& c) {
  std::string s = "constraint";
  for (auto& a : c.a) s += " " + rat_str(a);
  s += " " + rat_str(c.b);
  switch (c.rel) {
    case Constraint::Rel::Ge: s += " ge"; break;
    case Constraint::Rel::Gt: s += " gt"; break;
    case Constraint::Rel::Eq: s += " eq"; break;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Per-kind parsers
// ---------------------------------------------------------------------------

using Body = std::vector<PLine>;

TaskPayload parse_zeta(const std::string& name, const Body& body) {
  ZetaTask t;
  Seen seen;
  for (auto& l : body) {
    const std::string& k = l.key();
    if (k == "expr") {
      seen.once(l);
      t.expr = rest_required(l, 1);
      in_line(l, "expr", [&] { return parse_series_expr(t.expr); });
    } else if (k == "specialize") {
      seen.once(l);
      arity(l, 2);
      t.specialize_at = to_rat(l, arg(l, 1));
    } else if (k == "expect") {
      seen.once(l);
      t.expect = rest_required(l, 1);
      in_line(l, "expect", [&] { return parse_series_expr(*t.expect); });
    } else if (k == "expect_value") {
      seen.once(l);
      arity(l, 2);
      t.expect_value = to_rat(l, arg(l, 1));
    } else {
      perr(l.no, "unknown key '" + k + "' for kind 'zeta'");
    }
  }
  require(name, "expr", seen.has("expr"));
  if (t.expect_value && !t.specialize_at)
    verr(name, "expect_value", "requires a 'specialize' key");
  return t;
}

TaskPayload parse_limit(const std::string& name, const Body& body) {
  LimitTask t;
  Seen seen;
  for (auto& l : body) {
    const std::string& k = l.key();
    if (k == "expr") {
      seen.once(l);
      t.expr = rest_required(l, 1);
      in_line(l, "expr", [&] { return parse_series_expr(t.expr); });
    } else if (k == "expect") {
      seen.once(l);
      t.expect = rest_required(l, 1);
      in_line(l, "expect", [&] { return parse_motive_expr(*t.expect); });
    } else {
      perr(l.no, "unknown key '" + k + "' for kind 'limit'");
    }
  }
  require(name, "expr", seen.has("expr"));
  return t;
}

TaskPayload parse_hadamard(const std::string& name, const Body& body) {
  HadamardTask t;
  Seen seen;
  for (auto& l : body) {
    const std::string& k = l.key();
    if (k == "a" || k == "b") {
      seen.once(l);
      std::string v = rest_required(l, 1);
      in_line(l, k, [&] { return parse_series(v); });
      (k == "a" ? t.a : t.b) = v;
    } else if (k == "expect") {
      seen.once(l);
      t.expect = rest_required(l, 1);
      in_line(l, "expect", [&] { return parse_series(*t.expect); });
    } else if (k == "expect_limit") {
      seen.once(l);
      t.expect_limit = rest_required(l, 1);
      in_line(l, "expect_limit", [&] { return parse_motive_expr(*t.expect_limit); });
    } else {
      perr(l.no, "unknown key '" + k + "' for kind 'hadamard'");
    }
  }
  require(name, "a", seen.has("a"));
  require(name, "b", seen.has("b"));
  return t;
}

TaskPayload parse_nearby(const std::string& name, const Body& body) {
  NearbyTask t;
  DatumBuilder d;
  Seen seen;
  for (auto& l : body) {
    if (d.handle(l)) continue;
    const std::string& k = l.key();
    if (k == "expect") {
      seen.once(l);
      t.expect = rest_required(l, 1);
      in_line(l, "expect", [&] { return parse_motive_expr(*t.expect); });
    } else {
      perr(l.no, "unknown key '" + k + "' for kind 'nearby'");
    }
  }
  d.finalize(name);
  t.datum = std::move(d.datum);
  return t;
}

TaskPayload parse_volume_series(const std::string& name, const Body& body) {
  VolumeSeriesTask t;
  DatumBuilder d;
  Seen seen;
  for (auto& l : body) {
    if (d.handle(l)) continue;
    const std::string& k = l.key();
    if (k == "coefficients") {
      seen.once(l);
      arity(l, 2);
      t.coefficients = to_long(l, arg(l, 1));
      if (t.coefficients < 1) verr(name, "coefficients", "must be positive");
    } else if (k == "specialize") {
      seen.once(l);
      arity(l, 2);
      t.specialize_at = to_rat(l, arg(l, 1));
    } else if (k == "expect_coeff") {
      arity(l, 3);
      t.expect_coeff.emplace_back(to_long(l, arg(l, 1)), to_rat(l, arg(l, 2)));
    } else if (k == "expect") {
      seen.once(l);
      t.expect = rest_required(l, 1);
      in_line(l, "expect", [&] { return parse_series(*t.expect); });
    } else if (k == "expect_volume") {
      seen.once(l);
      t.expect_volume = rest_required(l, 1);
      in_line(l, "expect_volume", [&] { return parse_motive_expr(*t.expect_volume); });
    } else {
      perr(l.no, "unknown key '" + k + "' for kind 'volume_series'");
    }
  }
  d.finalize(name);
  t.datum = std::move(d.datum);
  if (!t.expect_coeff.empty()) {
    if (!t.specialize_at) verr(name, "expect_coeff", "requires a 'specialize' key");
    for (auto& [m, v] : t.expect_coeff)
      if (m < 1 || m > t.coefficients)
        verr(name, "expect_coeff", "index outside the reported coefficient range");
  }
  return t;
}

TaskPayload parse_am_sum(const std::string& name, const Body& body) {
  AmSumTask t;
  Seen seen;
  int dim = -1;
  bool explicit_piece = false;
  auto current = [&]() -> ConicalPiece& {
    if (t.pieces.empty()) {
      t.pieces.emplace_back();
      t.pieces.back().base.dim = dim;
    }
    return t.pieces.back();
  };
  for (auto& l : body) {
    const std::string& k = l.key();
    if (k == "dim") {
      seen.once(l);
      arity(l, 2);
      dim = static_cast<int>(to_long(l, arg(l, 1)));
      if (dim < 1) verr(name, "dim", "must be positive");
    } else if (k == "m") {
      seen.once(l);
      arity(l, 2);
      t.m = to_long(l, arg(l, 1));
      if (t.m < 1) verr(name, "m", "must be positive");
    } else if (k == "weight") {
      seen.once(l);
      if (dim < 0) perr(l.no, "'dim' must precede 'weight'");
      if (l.tok.size() != static_cast<size_t>(dim) + 2)
        perr(l.no, "weight needs " + std::to_string(dim) +
                       " coefficient(s) and a constant");
      AffineWeight w;
      for (int i = 0; i < dim; ++i) w.w.push_back(to_rat(l, l.tok[1 + i]));
      w.w0 = to_rat(l, l.tok[1 + dim]);
      t.weight = std::move(w);
    } else if (k == "piece") {
      arity(l, 1);
      if (dim < 0) perr(l.no, "'dim' must precede 'piece'");
      explicit_piece = true;
      t.pieces.emplace_back();
      t.pieces.back().base.dim = dim;
    } else if (k == "constraint") {
      if (dim < 0) perr(l.no, "'dim' must precede 'constraint'");
      current().base.cons.push_back(parse_constraint(l, dim));
    } else if (k == "ray") {
      if (dim < 0) perr(l.no, "'dim' must precede 'ray'");
      if (l.tok.size() != static_cast<size_t>(dim) + 1)
        perr(l.no, "ray needs " + std::to_string(dim) + " coordinate(s)");
      std::vector<long> r;
      for (int i = 0; i < dim; ++i) r.push_back(to_long(l, l.tok[1 + i]));
      current().rays.push_back(std::move(r));
    } else if (k == "expect") {
      seen.once(l);
      t.expect = rest_required(l, 1);
      in_line(l, "expect", [&] { return parse_motive_expr(*t.expect); });
    } else {
      perr(l.no, "unknown key '" + k + "' for kind 'am_sum'");
    }
  }
  require(name, "dim", dim >= 0);
  require(name, "m", seen.has("m"));
  if (t.pieces.empty()) t.pieces.emplace_back().base.dim = dim;
  (void)explicit_piece;
  return t;
}

TaskPayload parse_euler(const std::string& name, const Body& body) {
  EulerTask t;
  Seen seen;
  int dim = -1;
  auto current = [&]() -> std::pair<Polyhedron, std::string>& {
    if (t.pieces.empty()) {
      t.pieces.emplace_back();
      t.pieces.back().first.dim = dim;
      t.pieces.back().second = "1";
    }
    return t.pieces.back();
  };
  for (auto& l : body) {
    const std::string& k = l.key();
    if (k == "dim") {
      seen.once(l);
      arity(l, 2);
      dim = static_cast<int>(to_long(l, arg(l, 1)));
      if (dim < 1) verr(name, "dim", "must be positive");
    } else if (k == "piece") {
      if (dim < 0) perr(l.no, "'dim' must precede 'piece'");
      t.integral = true;
      std::string coeff = rest_required(l, 1);
      in_line(l, "piece", [&] { return parse_motive_expr(coeff); });
      t.pieces.emplace_back();
      t.pieces.back().first.dim = dim;
      t.pieces.back().second = coeff;
    } else if (k == "constraint") {
      if (dim < 0) perr(l.no, "'dim' must precede 'constraint'");
      current().first.cons.push_back(parse_constraint(l, dim));
    } else if (k == "expect") {
      seen.once(l);
      t.expect = rest_required(l, 1);
      in_line(l, "expect", [&] { return parse_motive_expr(*t.expect); });
    } else {
      perr(l.no, "unknown key '" + k + "' for kind 'euler'");
    }
  }
  require(name, "dim", dim >= 0);
  if (t.pieces.empty()) t.pieces.emplace_back().first.dim = dim;
  if (t.pieces[0].second.empty()) t.pieces[0].second = "1";
  return t;
}

TaskPayload parse_arc_count(const std::string& name, const Body& body) {
  ArcCountTask t;
  ArcBuilder a;
  Seen seen;
  for (auto& l : body) {
    if (a.handle(l, name)) continue;
    const std::string& k = l.key();
    if (k == "expect_count") {
      seen.once(l);
      arity(l, 2);
      t.expect_count = to_int(l, arg(l, 1));
    } else if (k == "expect_xtilde") {
      seen.once(l);
      arity(l, 2);
      t.expect_xtilde = to_rat(l, arg(l, 1));
    } else {
      perr(l.no, "unknown key '" + k + "' for kind 'arc_count'");
    }
  }
  a.finalize(name);
  t.vars = std::move(a.vars);
  t.task = std::move(a.task);
  return t;
}

TaskPayload parse_count_set(const std::string& name, const Body& body) {
  CountSetTask t;
  ArcBuilder a;
  Seen seen;
  bool have_blocks = false;
  for (auto& l : body) {
    if (a.handle(l, name)) continue;
    const std::string& k = l.key();
    if (k == "blocks") {
      seen.once(l);
      t.spec.blocks = parse_blocks(l, name, a.vars.size(), a.seen.has("vars"));
      have_blocks = true;
    } else if (k == "pred") {
      seen.once(l);
      t.spec.pred = parse_pred(l);
    } else if (k == "expect_count") {
      seen.once(l);
      arity(l, 2);
      t.expect_count = to_int(l, arg(l, 1));
    } else if (k == "expect_xtilde") {
      seen.once(l);
      arity(l, 2);
      t.expect_xtilde = to_rat(l, arg(l, 1));
    } else {
      perr(l.no, "unknown key '" + k + "' for kind 'count_set'");
    }
  }
  a.finalize(name);
  require(name, "blocks", have_blocks);
  t.vars = std::move(a.vars);
  t.spec.task = std::move(a.task);
  return t;
}

TaskPayload parse_check_termwise(const std::string& name, const Body& body) {
  TermwiseTask t;
  InstanceBuilder b;
  for (auto& l : body) {
    if (b.handle(l, name)) continue;
    const std::string& k = l.key();
    if (k == "expect_counts") {
      arity(l, 6);
      TermwiseTask::ExpectCounts e;
      e.m = to_long(l, arg(l, 1));
      long q = to_long(l, arg(l, 2));
      check_prime_field(name, q);
      e.qf = static_cast<int>(q);
      e.x = to_int(l, arg(l, 3));
      e.x0 = to_int(l, arg(l, 4));
      e.x1 = to_int(l, arg(l, 5));
      t.expects.push_back(std::move(e));
    } else {
      perr(l.no, "unknown key '" + k + "' for kind 'check_termwise'");
    }
  }
  b.finalize(name);
  t.vars = std::move(b.vars);
  t.inst = std::move(b.inst);
  return t;
}

TaskPayload parse_check_identity(const std::string& name, const Body& body) {
  IdentityTask t;
  InstanceBuilder b;
  DatumBuilder d;
  Seen seen;
  for (auto& l : body) {
    if (b.handle(l, name)) continue;
    const std::string& k = l.key();
    if (k == "basis") {
      seen.once(l);
      b.inst.basis_hint = parse_basis(l);
    } else if (k == "x1_basis") {
      seen.once(l);
      b.inst.x1_basis = parse_basis(l);
    } else if (k == "rhs_basis") {
      seen.once(l);
      b.inst.rhs_basis = parse_basis(l);
    } else if (k == "rhs_route") {
      seen.once(l);
      arity(l, 2);
      const std::string& r = arg(l, 1);
      if (r == "arc_counts")
        b.inst.rhs_route = IdentityInstance::RhsRoute::ArcCounts;
      else if (r == "resolution")
        b.inst.rhs_route = IdentityInstance::RhsRoute::Resolution;
      else
        perr(l.no, "rhs_route must be arc_counts or resolution");
    } else if (d.handle(l)) {
      // resolution data for the restricted function
    } else if (k == "seed") {
      seen.once(l);
      arity(l, 2);
      long s = to_long(l, arg(l, 1));
      if (s < 0) verr(name, "seed", "must be nonnegative");
      b.inst.seed = static_cast<unsigned long>(s);
      t.seed_set = true;
    } else if (k == "expect_lhs") {
      seen.once(l);
      arity(l, 2);
      t.expect_lhs = to_rat(l, arg(l, 1));
    } else if (k == "expect_rhs") {
      seen.once(l);
      arity(l, 2);
      t.expect_rhs = to_rat(l, arg(l, 1));
    } else {
      perr(l.no, "unknown key '" + k + "' for kind 'check_identity'");
    }
  }
  b.finalize(name);
  if (d.any) {
    d.finalize(name);
    b.inst.res = std::move(d.datum);
  }
  if (b.inst.rhs_route == IdentityInstance::RhsRoute::Resolution && !b.inst.res)
    verr(name, "rhs_route", "resolution route requires resolution data");
  if ((t.expect_lhs || t.expect_rhs) && b.inst.fields.size() != 1)
    verr(name, "expect_lhs",
         "side expectations require exactly one field size");
  t.vars = std::move(b.vars);
  t.inst = std::move(b.inst);
  return t;
}

} // namespace

// ---------------------------------------------------------------------------
// File-level parse
// ---------------------------------------------------------------------------

TaskFile parse_taskfile(const std::string& text) {
  std::vector<PLine> lines = scan(text);
  if (lines.empty())
    raise(ErrorCode::ParseError, "line 1: expected header 'motzeta 1'");
  size_t pos = 0;
  {
    const PLine& h = lines[0];
    if (h.tok.size() != 2 || h.tok[0] != "motzeta" || h.tok[1] != "1")
      perr(h.no, "expected header 'motzeta 1'");
    ++pos;
  }
  TaskFile file;
  std::set<std::string> names;
  bool seed_seen = false;
  while (pos < lines.size()) {
    const PLine& l = lines[pos];
    if (l.key() == "seed") {
      if (!file.entries.empty()) perr(l.no, "'seed' must precede all tasks");
      if (seed_seen) perr(l.no, "duplicate 'seed'");
      seed_seen = true;
      arity(l, 2);
      long s = to_long(l, arg(l, 1));
      if (s < 0) perr(l.no, "seed must be nonnegative");
      file.seed = static_cast<unsigned long>(s);
      ++pos;
      continue;
    }
    if (l.key() != "task")
      perr(l.no, "expected 'task' or 'seed', got '" + l.key() + "'");
    arity(l, 3);
    std::string name = l.tok[1];
    std::string kind = l.tok[2];
    if (!is_identifier(name) && name.find_first_not_of(
            "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
            "0123456789_.-") != std::string::npos)
      perr(l.no, "task name '" + name + "' has unsupported characters");
    if (!names.insert(name).second) perr(l.no, "duplicate task name '" + name + "'");
    ++pos;
    Body body;
    bool closed = false;
    while (pos < lines.size()) {
      if (lines[pos].key() == "end") {
        arity(lines[pos], 1);
        ++pos;
        closed = true;
        break;
      }
      if (lines[pos].key() == "task")
        perr(lines[pos].no, "missing 'end' before the next task");
      body.push_back(lines[pos]);
      ++pos;
    }
    if (!closed) perr(l.no, "task '" + name + "' is missing its 'end' line");

    TaskEntry entry;
    entry.name = name;
    entry.kind = kind;
    if (kind == "zeta")
      entry.payload = parse_zeta(name, body);
    else if (kind == "limit")
      entry.payload = parse_limit(name, body);
    else if (kind == "hadamard")
      entry.payload = parse_hadamard(name, body);
    else if (kind == "nearby")
      entry.payload = parse_nearby(name, body);
    else if (kind == "volume_series")
      entry.payload = parse_volume_series(name, body);
    else if (kind == "am_sum")
      entry.payload = parse_am_sum(name, body);
    else if (kind == "euler")
      entry.payload = parse_euler(name, body);
    else if (kind == "arc_count")
      entry.payload = parse_arc_count(name, body);
    else if (kind == "count_set")
      entry.payload = parse_count_set(name, body);
    else if (kind == "check_termwise")
      entry.payload = parse_check_termwise(name, body);
    else if (kind == "check_identity")
      entry.payload = parse_check_identity(name, body);
    else
      perr(l.no, "unknown task kind '" + kind + "'");
    file.entries.push_back(std::move(entry));
  }
  return file;
}

// ---------------------------------------------------------------------------
// Canonical rendering
// ---------------------------------------------------------------------------

namespace {

struct LineRenderer {
  std::vector<std::string> out;

  void operator()(const ZetaTask& t) {
    out.push_back("expr " + t.expr);
    if (t.specialize_at) out.push_back("specialize " + rat_str(*t.specialize_at));
    if (t.expect) out.push_back("expect " + *t.expect);
    if (t.expect_value) out.push_back("expect_value " + rat_str(*t.expect_value));
  }

  void operator()(const LimitTask& t) {
    out.push_back("expr " + t.expr);
    if (t.expect) out.push_back("expect " + *t.expect);
  }

  void operator()(const HadamardTask& t) {
    out.push_back("a " + t.a);
    out.push_back("b " + t.b);
    if (t.expect) out.push_back("expect " + *t.expect);
    if (t.expect_limit) out.push_back("expect_limit " + *t.expect_limit);
  }

  void operator()(const NearbyTask& t) {
    for (auto& l : datum_lines(t.datum)) out.push_back(l);
    if (t.expect) out.push_back("expect " + *t.expect);
  }

  void operator()(const VolumeSeriesTask& t) {
    for (auto& l : datum_lines(t.datum)) out.push_back(l);
    if (t.coefficients > 0)
      out.push_back("coefficients " + std::to_string(t.coefficients));
    if (t.specialize_at) out.push_back("specialize " + rat_str(*t.specialize_at));
    for (auto& [m, v] : t.expect_coeff)
      out.push_back("expect_coeff " + std::to_string(m) + " " + rat_str(v));
    if (t.expect) out.push_back("expect " + *t.expect);
    if (t.expect_volume) out.push_back("expect_volume " + *t.expect_volume);
  }

  void operator()(const AmSumTask& t) {
    int dim = t.pieces.empty() ? 1 : t.pieces[0].base.dim;
    out.push_back("dim " + std::to_string(dim));
    out.push_back("m " + std::to_string(t.m));
    if (t.weight) {
      std::string w = "weight";
      for (auto& c : t.weight->w) w += " " + rat_str(c);
      w += " " + rat_str(t.weight->w0);
      out.push_back(w);
    }
    bool multi = t.pieces.size() > 1;
    for (auto& p : t.pieces) {
      if (multi) out.push_back("piece");
      for (auto& c : p.base.cons) out.push_back(constraint_line(c));
      for (auto& r : p.rays) {
        std::string s = "ray";
        for (long v : r) s += " " + std::to_string(v);
        out.push_back(s);
      }
    }
    if (t.expect) out.push_back("expect " + *t.expect);
  }

  void operator()(const EulerTask& t) {
    int dim = t.pieces.empty() ? 1 : t.pieces[0].first.dim;
    out.push_back("dim " + std::to_string(dim));
    for (auto& [poly, coeff] : t.pieces) {
      if (t.integral) out.push_back("piece " + coeff);
      for (auto& c : poly.cons) out.push_back(constraint_line(c));
    }
    if (t.expect) out.push_back("expect " + *t.expect);
  }

  void operator()(const ArcCountTask& t) {
    for (auto& l : arc_lines(t.vars, t.task)) out.push_back(l);
    if (t.expect_count) out.push_back("expect_count " + int_str(*t.expect_count));
    if (t.expect_xtilde) out.push_back("expect_xtilde " + rat_str(*t.expect_xtilde));
  }

  void operator()(const CountSetTask& t) {
    for (auto& l : arc_lines(t.vars, t.spec.task)) out.push_back(l);
    out.push_back(blocks_line(t.spec.blocks));
    out.push_back("pred " + pred_name(t.spec.pred));
    if (t.expect_count) out.push_back("expect_count " + int_str(*t.expect_count));
    if (t.expect_xtilde) out.push_back("expect_xtilde " + rat_str(*t.expect_xtilde));
  }

  void operator()(const TermwiseTask& t) {
    for (auto& l : instance_lines(t.vars, t.inst)) out.push_back(l);
    for (auto& e : t.expects)
      out.push_back("expect_counts " + std::to_string(e.m) + " " +
                    std::to_string(e.qf) + " " + int_str(e.x) + " " +
                    int_str(e.x0) + " " + int_str(e.x1));
  }

  void operator()(const IdentityTask& t) {
    for (auto& l : instance_lines(t.vars, t.inst)) out.push_back(l);
    if (!t.inst.basis_hint.empty())
      out.push_back("basis " + basis_str(t.inst.basis_hint));
    if (!t.inst.x1_basis.empty())
      out.push_back("x1_basis " + basis_str(t.inst.x1_basis));
    if (!t.inst.rhs_basis.empty())
      out.push_back("rhs_basis " + basis_str(t.inst.rhs_basis));
    out.push_back(std::string("rhs_route ") +
                  (t.inst.rhs_route == IdentityInstance::RhsRoute::ArcCounts
                       ? "arc_counts"
                       : "resolution"));
    if (t.inst.res)
      for (auto& l : datum_lines(*t.inst.res)) out.push_back(l);
    if (t.seed_set) out.push_back("seed " + std::to_string(t.inst.seed));
    if (t.expect_lhs) out.push_back("expect_lhs " + rat_str(*t.expect_lhs));
    if (t.expect_rhs) out.push_back("expect_rhs " + rat_str(*t.expect_rhs));
  }
};

} // namespace

std::vector<std::string> render_task_lines(const TaskEntry& entry) {
  LineRenderer r;
  std::visit(r, entry.payload);
  return std::move(r.out);
}

std::string render_taskfile(const TaskFile& file) {
  std::ostringstream os;
  os << "motzeta " << file.version << "\n";
  if (file.seed != 0) os << "seed " << file.seed << "\n";
  for (auto& entry : file.entries) {
    os << "\ntask " << entry.name << " " << entry.kind << "\n";
    for (auto& l : render_task_lines(entry)) os << "  " << l << "\n";
    os << "end\n";
  }
  return os.str();
}

} // namespace motzeta
