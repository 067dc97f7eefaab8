#include "motzeta/report.hpp"

#include <map>
#include <sstream>

#include <json.hpp>

#include "motzeta/error.hpp"
#include "motzeta/expr.hpp"
#include "motzeta/identity.hpp"

namespace motzeta {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::PoleAtQ: return "PoleAtQ";
    case ErrorCode::NonvanishingPolyPart: return "NonvanishingPolyPart";
    case ErrorCode::Inconsistent: return "Inconsistent";
    case ErrorCode::Underdetermined: return "Underdetermined";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::UnsupportedShape: return "UnsupportedShape";
    case ErrorCode::InfiniteGrading: return "InfiniteGrading";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::OverlappingPieces: return "OverlappingPieces";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::WeightCheckFailed: return "WeightCheckFailed";
    case ErrorCode::DegenerateRHS: return "DegenerateRHS";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

ReportValue ReportValue::of_text(std::string s) {
  ReportValue v;
  v.kind = Kind::Text;
  v.text = std::move(s);
  return v;
}
ReportValue ReportValue::of_int(const Int& z) {
  ReportValue v;
  v.kind = Kind::Integer;
  v.text = z.get_str();
  return v;
}
ReportValue ReportValue::of_rat(const Rat& r) {
  ReportValue v;
  v.kind = Kind::Rational;
  v.rat = r;
  return v;
}
ReportValue ReportValue::of_bool(bool b) {
  ReportValue v;
  v.kind = Kind::Bool;
  v.flag = b;
  return v;
}

namespace {

using ordered_json = nlohmann::ordered_json;

Int int_pow(long base, long e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base),
                static_cast<unsigned long>(e));
  return r;
}

void put(TaskReport& r, const std::string& k, ReportValue v) {
  r.output.emplace_back(k, std::move(v));
}

void expect_check(TaskReport& r, bool ok, const std::string& msg) {
  if (!ok) r.failures.push_back(msg);
}

std::string fitted_series_str(const std::vector<BasisKey>& basis,
                              const std::vector<Rat>& coeffs) {
  if (basis.empty()) return "0";
  std::string s;
  for (size_t i = 0; i < basis.size(); ++i) {
    if (i) s += " + ";
    s += "(" + coeffs[i].get_str() + ")";
    for (auto& g : basis[i]) s += "*" + g.str();
  }
  return s;
}

// ---------------------------------------------------------------------------
// Per-kind execution
// ---------------------------------------------------------------------------

void exec(const ZetaTask& t, const RunOptions&, unsigned long, TaskReport& r,
          Budget&) {
  SeriesExprValue v = parse_series_expr(t.expr);
  put(r, "value",
      ReportValue::of_text(v.is_series ? v.series.str() : v.motive.str()));
  std::optional<Rat> at;
  if (t.specialize_at) {
    if (v.is_series)
      raise(ErrorCode::ValidationError, "cannot specialize a series value");
    at = v.motive.specialize(*t.specialize_at);
    put(r, "value_at", ReportValue::of_rat(*at));
  }
  if (t.expect) {
    SeriesExprValue e = parse_series_expr(*t.expect);
    bool same = (v.is_series || e.is_series)
                    ? v.as_series().equals(e.as_series())
                    : v.motive.equals(e.motive);
    expect_check(r, same, "value differs from expect");
  }
  if (t.expect_value)
    expect_check(r, at && *at == *t.expect_value,
                 "specialized value differs from expect_value");
}

void exec(const LimitTask& t, const RunOptions&, unsigned long, TaskReport& r,
          Budget&) {
  RationalSeries s = parse_series(t.expr);
  put(r, "series", ReportValue::of_text(s.str()));
  Motive lim = s.limit();
  put(r, "limit", ReportValue::of_text(lim.str()));
  if (t.expect)
    expect_check(r, lim.equals(parse_motive_expr(*t.expect)),
                 "limit differs from expect");
}

void exec(const HadamardTask& t, const RunOptions&, unsigned long,
          TaskReport& r, Budget&) {
  RationalSeries a = parse_series(t.a);
  RationalSeries b = parse_series(t.b);
  RationalSeries h = RationalSeries::hadamard(a, b);
  put(r, "product", ReportValue::of_text(h.str()));
  if (t.expect)
    expect_check(r, h.equals(parse_series(*t.expect)),
                 "product differs from expect");
  if (t.expect_limit) {
    Motive lim = h.limit();
    put(r, "limit", ReportValue::of_text(lim.str()));
    expect_check(r, lim.equals(parse_motive_expr(*t.expect_limit)),
                 "limit differs from expect_limit");
  }
}

void exec(const NearbyTask& t, const RunOptions&, unsigned long, TaskReport& r,
          Budget&) {
  Motive cls = nearby_cycles(t.datum);
  put(r, "nearby", ReportValue::of_text(cls.str()));
  if (t.expect)
    expect_check(r, cls.equals(parse_motive_expr(*t.expect)),
                 "nearby class differs from expect");
}

void exec(const VolumeSeriesTask& t, const RunOptions& opt, unsigned long,
          TaskReport& r, Budget&) {
  RationalSeries s = volume_series(t.datum);
  put(r, "series", ReportValue::of_text(s.str()));
  Motive vol = motivic_volume(t.datum);
  put(r, "volume", ReportValue::of_text(vol.str()));
  if (t.coefficients > opt.coeff_cap)
    raise(ErrorCode::ValidationError,
          "coefficient extraction exceeds the cap of " +
              std::to_string(opt.coeff_cap));
  std::map<long, Rat> specialized;
  for (long m = 1; m <= t.coefficients; ++m) {
    Motive c = s.coefficient(m);
    put(r, "coeff_" + std::to_string(m), ReportValue::of_text(c.str()));
    if (t.specialize_at) {
      Rat cv = c.specialize(*t.specialize_at);
      specialized.emplace(m, cv);
      put(r, "coeff_at_" + std::to_string(m), ReportValue::of_rat(cv));
    }
  }
  if (t.expect)
    expect_check(r, s.equals(parse_series(*t.expect)),
                 "series differs from expect");
  if (t.expect_volume)
    expect_check(r, vol.equals(parse_motive_expr(*t.expect_volume)),
                 "volume differs from expect_volume");
  for (auto& [m, v] : t.expect_coeff) {
    auto it = specialized.find(m);
    expect_check(r, it != specialized.end() && it->second == v,
                 "coefficient " + std::to_string(m) + " differs from expect_coeff");
  }
}

void exec(const AmSumTask& t, const RunOptions&, unsigned long, TaskReport& r,
          Budget&) {
  Motive v = t.weight ? graded_a_m_sum_conical(t.pieces, *t.weight, t.m)
                      : a_m_sum_conical(t.pieces, t.m);
  put(r, "value", ReportValue::of_text(v.str()));
  if (t.expect)
    expect_check(r, v.equals(parse_motive_expr(*t.expect)),
                 "value differs from expect");
}

void exec(const EulerTask& t, const RunOptions&, unsigned long, TaskReport& r,
          Budget&) {
  Motive v;
  if (t.integral) {
    std::vector<std::pair<Polyhedron, Motive>> pieces;
    for (auto& [poly, coeff] : t.pieces)
      pieces.emplace_back(poly, parse_motive_expr(coeff));
    v = integrate_dchi(pieces);
    put(r, "value", ReportValue::of_text(v.str()));
  } else {
    long chi = euler_char(t.pieces[0].first);
    v = Motive(chi);
    put(r, "chi", ReportValue::of_int(Int(chi)));
  }
  if (t.expect)
    expect_check(r, v.equals(parse_motive_expr(*t.expect)),
                 "value differs from expect");
}

long active_vars(const ArcTask& task) {
  long n = 0;
  for (auto& c : task.base)
    if (c.kind != VarConstraint::Kind::Zero) ++n;
  return n;
}

void exec(const ArcCountTask& t, const RunOptions&, unsigned long,
          TaskReport& r, Budget& budget) {
  Int count = count_arcs(t.task, budget);
  put(r, "count", ReportValue::of_int(count));
  Rat xt(count, int_pow(t.task.qf, (t.task.trunc - 1) * active_vars(t.task)));
  xt.canonicalize();
  put(r, "xtilde", ReportValue::of_rat(xt));
  if (t.expect_count)
    expect_check(r, count == *t.expect_count, "count differs from expect_count");
  if (t.expect_xtilde)
    expect_check(r, xt == *t.expect_xtilde, "xtilde differs from expect_xtilde");
}

void exec(const CountSetTask& t, const RunOptions&, unsigned long,
          TaskReport& r, Budget& budget) {
  Int count = count_set(t.spec, budget);
  put(r, "count", ReportValue::of_int(count));
  Rat xt(count,
         int_pow(t.spec.task.qf, (t.spec.task.trunc - 1) * active_vars(t.spec.task)));
  xt.canonicalize();
  put(r, "xtilde", ReportValue::of_rat(xt));
  if (t.expect_count)
    expect_check(r, count == *t.expect_count, "count differs from expect_count");
  if (t.expect_xtilde)
    expect_check(r, xt == *t.expect_xtilde, "xtilde differs from expect_xtilde");
}

void append_termwise_rows(const TermwiseResult& res, TaskReport& r) {
  for (auto& row : res.rows) {
    std::string p = "m" + std::to_string(row.m) + "_q" + std::to_string(row.qf);
    put(r, p + "_x", ReportValue::of_int(row.count_x));
    put(r, p + "_x0", ReportValue::of_int(row.count_x0));
    put(r, p + "_x1", ReportValue::of_int(row.count_x1));
    put(r, p + "_partition", ReportValue::of_bool(row.partition_ok));
    put(r, p + "_factorization", ReportValue::of_bool(row.factor_ok));
    put(r, p + "_product", ReportValue::of_bool(row.product_ok));
  }
}

void exec(const TermwiseTask& t, const RunOptions&, unsigned long,
          TaskReport& r, Budget& budget) {
  TermwiseResult res = check_termwise(t.inst, budget);
  append_termwise_rows(res, r);
  put(r, "all_checks", ReportValue::of_bool(res.all_ok));
  expect_check(r, res.all_ok, "coefficientwise checks failed");
  for (auto& e : t.expects) {
    const TermwiseRow* found = nullptr;
    for (auto& row : res.rows)
      if (row.m == e.m && row.qf == e.qf) found = &row;
    std::string p = "m" + std::to_string(e.m) + "_q" + std::to_string(e.qf);
    if (!found) {
      r.failures.push_back(p + ": no computed row for expect_counts");
      continue;
    }
    expect_check(r,
                 found->count_x == e.x && found->count_x0 == e.x0 &&
                     found->count_x1 == e.x1,
                 p + ": counts differ from expect_counts");
  }
}

void exec(const IdentityTask& t, const RunOptions&, unsigned long seed,
          TaskReport& r, Budget& budget) {
  IdentityInstance inst = t.inst;
  if (!t.seed_set) inst.seed = seed;
  IdentityResult res = check_identity(inst, budget);
  append_termwise_rows(res.termwise, r);
  expect_check(r, res.termwise.all_ok, "coefficientwise checks failed");
  for (auto& cell : res.cells) {
    std::string p = "q" + std::to_string(cell.qf);
    for (auto& [m, v] : cell.lhs_data)
      put(r, p + "_xt_m" + std::to_string(m), ReportValue::of_rat(v));
    put(r, p + "_lhs_series",
        ReportValue::of_text(fitted_series_str(cell.lhs_basis, cell.lhs_fit)));
    put(r, p + "_lhs", ReportValue::of_rat(cell.lhs_value));
    for (auto& [m, v] : cell.x1_data)
      put(r, p + "_x1_m" + std::to_string(m), ReportValue::of_rat(v));
    put(r, p + "_x1_series",
        ReportValue::of_text(fitted_series_str(cell.x1_basis, cell.x1_fit)));
    put(r, p + "_x1_limit", ReportValue::of_rat(cell.x1_limit));
    if (cell.degenerate_rhs) {
      put(r, p + "_rhs", ReportValue::of_text("degenerate"));
    } else {
      for (auto& [m, v] : cell.rhs_data)
        put(r, p + "_h_m" + std::to_string(m), ReportValue::of_rat(v));
      if (!cell.rhs_basis.empty())
        put(r, p + "_rhs_series",
            ReportValue::of_text(fitted_series_str(cell.rhs_basis, cell.rhs_fit)));
      put(r, p + "_rhs", ReportValue::of_rat(cell.rhs_value));
      expect_check(r, cell.sides_equal, p + ": sides differ");
    }
    put(r, p + "_tau", ReportValue::of_int(Int(cell.tau)));
    put(r, p + "_scaling", ReportValue::of_bool(cell.homogeneity_ok));
    put(r, p + "_pass", ReportValue::of_bool(cell.pass));
    expect_check(r, cell.x1_limit == 0, p + ": complement limit is nonzero");
    expect_check(r, cell.homogeneity_ok, p + ": scaling recount differs");
  }
  put(r, "pass", ReportValue::of_bool(res.pass));
  if (t.expect_lhs)
    expect_check(r, !res.cells.empty() && res.cells[0].lhs_value == *t.expect_lhs,
                 "LHS differs from expect_lhs");
  if (t.expect_rhs)
    expect_check(r,
                 !res.cells.empty() && !res.cells[0].degenerate_rhs &&
                     res.cells[0].rhs_value == *t.expect_rhs,
                 "RHS differs from expect_rhs");
}

} // namespace

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

Report run_taskfile(const TaskFile& file, const RunOptions& opt) {
  Report rep;
  rep.seed = opt.seed ? *opt.seed : file.seed;
  for (auto& entry : file.entries) {
    TaskReport tr;
    tr.name = entry.name;
    tr.kind = entry.kind;
    tr.input = render_task_lines(entry);
    Budget budget{opt.budget_cap};
    try {
      std::visit(
          [&](const auto& payload) { exec(payload, opt, rep.seed, tr, budget); },
          entry.payload);
      tr.status = tr.failures.empty() ? "ok" : "failed";
    } catch (const EngineError& e) {
      tr.status = "error";
      tr.error_code = error_code_name(e.code());
      tr.error_message = e.what();
    }
    if (tr.status == "ok")
      ++rep.n_ok;
    else if (tr.status == "failed")
      ++rep.n_failed;
    else
      ++rep.n_error;
    rep.tasks.push_back(std::move(tr));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

std::string value_text(const ReportValue& v) {
  switch (v.kind) {
    case ReportValue::Kind::Text:
    case ReportValue::Kind::Integer:
      return v.text;
    case ReportValue::Kind::Rational:
      return v.rat.get_str();
    case ReportValue::Kind::Bool:
      return v.flag ? "true" : "false";
  }
  return {};
}

ordered_json value_json(const ReportValue& v) {
  switch (v.kind) {
    case ReportValue::Kind::Text:
    case ReportValue::Kind::Integer:
      return v.text;
    case ReportValue::Kind::Rational:
      return ordered_json{{"num", v.rat.get_num().get_str()},
                          {"den", v.rat.get_den().get_str()}};
    case ReportValue::Kind::Bool:
      return v.flag;
  }
  return {};
}

std::string render_text(const Report& rep) {
  std::ostringstream os;
  os << "motzeta report\n";
  os << "seed " << rep.seed << "\n";
  for (auto& t : rep.tasks) {
    os << "\ntask " << t.name << " " << t.kind << ": " << t.status;
    if (t.status == "error") os << " (" << t.error_code << ")";
    os << "\n";
    os << "  input:\n";
    for (auto& l : t.input) os << "    " << l << "\n";
    if (!t.output.empty()) {
      os << "  output:\n";
      for (auto& [k, v] : t.output) os << "    " << k << ": " << value_text(v) << "\n";
    }
    if (!t.failures.empty()) {
      os << "  failures:\n";
      for (auto& f : t.failures) os << "    - " << f << "\n";
    }
    if (t.status == "error")
      os << "  error: " << t.error_code << ": " << t.error_message << "\n";
  }
  os << "\nsummary: " << rep.tasks.size() << " tasks, " << rep.n_ok << " ok, "
     << rep.n_failed << " failed, " << rep.n_error << " error\n";
  return os.str();
}

std::string render_structured(const Report& rep) {
  ordered_json j;
  j["motzeta"] = "1";
  j["seed"] = std::to_string(rep.seed);
  j["tasks"] = ordered_json::array();
  for (auto& t : rep.tasks) {
    ordered_json jt;
    jt["name"] = t.name;
    jt["kind"] = t.kind;
    jt["status"] = t.status;
    if (t.status == "error")
      jt["error"] = ordered_json{{"code", t.error_code}, {"message", t.error_message}};
    jt["input"] = t.input;
    ordered_json out = ordered_json::object();
    for (auto& [k, v] : t.output) out[k] = value_json(v);
    jt["output"] = out;
    jt["failures"] = t.failures;
    j["tasks"].push_back(std::move(jt));
  }
  j["summary"] = ordered_json{{"tasks", std::to_string(rep.tasks.size())},
                              {"ok", std::to_string(rep.n_ok)},
                              {"failed", std::to_string(rep.n_failed)},
                              {"error", std::to_string(rep.n_error)}};
  return j.dump(2) + "\n";
}

} // namespace

std::string render_report(const Report& report, ReportFormat format) {
  return format == ReportFormat::Text ? render_text(report)
                                      : render_structured(report);
}

} // namespace motzeta
