#include "motzeta/arcs.hpp"

#include <algorithm>
#include <sstream>

#include "motzeta/error.hpp"

namespace motzeta {

void Budget::raise_exceeded() const {
  std::ostringstream os;
  os << "enumeration budget exceeded (cap " << cap_.get_str() << ")";
  raise(ErrorCode::BudgetExceeded, os.str());
}

namespace {

bool is_supported_prime(int q) { return q == 2 || q == 3 || q == 5 || q == 7; }

Int int_pow(long base, long e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base),
                static_cast<unsigned long>(e));
  return r;
}

enum class LayerKind { Fixed, Enumerated, Free };

struct LayerPlan {
  LayerKind kind = LayerKind::Free;
  std::uint16_t value = 0; // Fixed only
};

struct TaskPlan {
  bool impossible = false;
  long free_total = 0;
  int J = 0;                                    // checked coefficient window
  std::vector<std::vector<LayerPlan>> layers;   // [var][0..trunc)
  std::vector<std::vector<int>> enum_vars;      // [layer j < J] -> variables
};

void validate(const ArcTask& t) {
  if (t.f.nvars() < 1) raise(ErrorCode::ValidationError, "arc task needs at least one variable");
  if (static_cast<int>(t.base.size()) != t.f.nvars())
    raise(ErrorCode::ValidationError, "base constraint count does not match variable count");
  if (!is_supported_prime(t.qf))
    raise(ErrorCode::ValidationError, "field size must be a prime <= 7");
  if (t.trunc < 1 || t.trunc > 100000)
    raise(ErrorCode::ValidationError, "truncation order out of range");
  for (auto& c : t.base)
    if (c.kind == VarConstraint::Kind::MinVal && c.min_val < 0)
      raise(ErrorCode::ValidationError, "negative valuation bound");
  if (t.target != ArcTask::Target::None) {
    if (t.level < 1) raise(ErrorCode::ValidationError, "level must be positive");
    if (t.trunc < t.level + 1)
      raise(ErrorCode::ValidationError, "truncation must exceed the level");
    if (t.level + 1 > 64)
      raise(ErrorCode::ValidationError, "level too large for the jet window");
  }
}

TaskPlan build_plan(const ArcTask& t) {
  TaskPlan plan;
  plan.J = t.target == ArcTask::Target::None ? 0 : static_cast<int>(t.level + 1);
  const int n = t.f.nvars();
  plan.layers.assign(n, {});
  plan.enum_vars.assign(plan.J, {});
  for (int v = 0; v < n; ++v) {
    const VarConstraint& c = t.base[v];
    long minv = 0;
    switch (c.kind) {
      case VarConstraint::Kind::Free:
      case VarConstraint::Kind::Point:
        minv = 0;
        break;
      case VarConstraint::Kind::MinVal:
        minv = c.min_val;
        break;
      case VarConstraint::Kind::Zero:
        minv = t.trunc;
        break;
    }
    long pointval = -1;
    if (c.kind == VarConstraint::Kind::Point) {
      pointval = c.point % t.qf;
      if (pointval < 0) pointval += t.qf;
    }
    auto& lv = plan.layers[v];
    lv.resize(t.trunc);
    for (long j = 0; j < t.trunc; ++j) {
      if (j < minv) {
        lv[j] = {LayerKind::Fixed, 0};
        if (j == 0 && pointval > 0) plan.impossible = true; // point off the zero locus
      } else if (j == 0 && pointval >= 0) {
        lv[j] = {LayerKind::Fixed, static_cast<std::uint16_t>(pointval)};
      } else if (j < plan.J) {
        lv[j] = {LayerKind::Enumerated, 0};
        plan.enum_vars[j].push_back(v);
      } else {
        lv[j] = {LayerKind::Free, 0};
        ++plan.free_total;
      }
    }
  }
  return plan;
}

/** Exhaustive layered enumeration with linear-form pruning; final-layer
 *  fibers of the linear condition are counted in closed form. */
class Engine {
public:
  Engine(const ArcTask& t, const TaskPlan& plan, Budget& budget, const JetKernel& kernel)
      : t_(t), plan_(plan), budget_(budget), kernel_(kernel), q_(t.qf),
        n_(t.f.nvars()), J_(plan.J),
        jp_(JetPoly::from(t.f, static_cast<std::uint16_t>(t.qf))) {
    partials_.reserve(n_);
    for (int v = 0; v < n_; ++v)
      partials_.push_back(JetPoly::from(t.f.partial(v), static_cast<std::uint16_t>(t.qf)));
    jets_.assign(static_cast<size_t>(n_) * J_, 0);
    for (int v = 0; v < n_; ++v)
      for (int j = 0; j < J_; ++j)
        if (plan_.layers[v][j].kind == LayerKind::Fixed)
          jets_[static_cast<size_t>(v) * J_ + j] = plan_.layers[v][j].value;
    F_.assign(J_, 0);
    glin_.assign(n_, 0);
    tgt_.assign(J_, 0);
    if (t.level < J_) tgt_[t.level] = 1;
    lanes_ = std::max(1, kernel_.preferred_lanes);
    batch_arcs_.assign(static_cast<size_t>(n_) * J_ * lanes_, 0);
    batch_out_.assign(static_cast<size_t>(J_) * lanes_, 0);
  }

  Int run() {
    layer0();
    return survivors_;
  }

private:
  std::uint16_t eval_point(const JetPoly& p) const {
    // Value of p at the layer-0 point of the current jets.
    std::uint32_t acc = 0;
    for (auto& mono : p.monos) {
      std::uint32_t term = mono.coeff;
      for (int v = 0; v < n_; ++v)
        for (std::uint8_t r = 0; r < mono.exps[v]; ++r)
          term = term * jets_[static_cast<size_t>(v) * J_] % q_;
      acc += term;
    }
    return static_cast<std::uint16_t>(acc % q_);
  }

  void full_eval_single() { jet_eval_single(jp_, jets_.data(), J_, F_.data()); }

  void layer0() {
    const auto& vars = plan_.enum_vars[0];
    std::vector<int> vals(vars.size(), 0);
    while (true) {
      budget_.charge(1);
      for (size_t i = 0; i < vars.size(); ++i)
        jets_[static_cast<size_t>(vars[i]) * J_] = static_cast<std::uint16_t>(vals[i]);
      if (eval_point(jp_) == tgt_[0]) {
        full_eval_single();
        for (int v = 0; v < n_; ++v) glin_[v] = eval_point(partials_[v]);
        recurse(1);
      }
      size_t i = 0;
      while (i < vals.size() && ++vals[i] == q_) vals[i++] = 0;
      if (i == vals.size()) break;
      if (vars.empty()) break;
    }
    for (int v : vars) jets_[static_cast<size_t>(v) * J_] = 0;
  }

  void recurse(int j) {
    if (j == J_ - 1) {
      final_layer(j);
      return;
    }
    const auto& vars = plan_.enum_vars[j];
    const std::uint16_t need = tgt_[j];
    std::vector<std::uint16_t> Fsave = F_;
    std::vector<int> vals(vars.size(), 0);
    std::vector<std::vector<int>> pending;
    while (true) {
      budget_.charge(1);
      std::uint32_t lhs = Fsave[j];
      for (size_t i = 0; i < vars.size(); ++i)
        lhs += static_cast<std::uint32_t>(glin_[vars[i]]) * vals[i];
      if (lhs % q_ == need) {
        pending.push_back(vals);
        if (static_cast<int>(pending.size()) == lanes_) flush(j, pending, Fsave);
      }
      if (vars.empty()) break;
      size_t i = 0;
      while (i < vals.size() && ++vals[i] == q_) vals[i++] = 0;
      if (i == vals.size()) break;
    }
    if (!pending.empty()) flush(j, pending, Fsave);
    F_ = Fsave;
  }

  void flush(int j, std::vector<std::vector<int>>& pending,
             const std::vector<std::uint16_t>& Fsave) {
    const auto& vars = plan_.enum_vars[j];
    const int real = static_cast<int>(pending.size());
    for (int lane = 0; lane < lanes_; ++lane) {
      const std::vector<int>& cand = pending[std::min(lane, real - 1)];
      for (int v = 0; v < n_; ++v)
        for (int jj = 0; jj < J_; ++jj)
          batch_arcs_[(static_cast<size_t>(v) * J_ + jj) * lanes_ + lane] =
              jets_[static_cast<size_t>(v) * J_ + jj];
      for (size_t i = 0; i < vars.size(); ++i)
        batch_arcs_[(static_cast<size_t>(vars[i]) * J_ + j) * lanes_ + lane] =
            static_cast<std::uint16_t>(cand[i]);
    }
    kernel_.fn(jp_, batch_arcs_.data(), J_, lanes_, batch_out_.data());
    // Deeper recursion reuses batch_out_, so copy every lane's coefficient
    // column out before recursing into any of them.
    std::vector<std::uint16_t> cols(static_cast<size_t>(real) * J_);
    for (int lane = 0; lane < real; ++lane)
      for (int jj = 0; jj < J_; ++jj)
        cols[static_cast<size_t>(lane) * J_ + jj] =
            batch_out_[static_cast<size_t>(jj) * lanes_ + lane];
    for (int lane = 0; lane < real; ++lane) {
      for (size_t i = 0; i < vars.size(); ++i)
        jets_[static_cast<size_t>(vars[i]) * J_ + j] =
            static_cast<std::uint16_t>(pending[lane][i]);
      std::copy(cols.begin() + static_cast<long>(lane) * J_,
                cols.begin() + static_cast<long>(lane + 1) * J_, F_.begin());
      recurse(j + 1);
    }
    for (int v : vars) jets_[static_cast<size_t>(v) * J_ + j] = 0;
    F_ = Fsave;
    pending.clear();
  }

  void final_layer(int j) {
    // Children differ from the prefix only in this layer, so the condition
    // F'[j] == tgt[j] is the linear equation F[j] + sum_v glin[v] a_v = tgt[j]
    // over the enumerated coordinates: its fiber has q^(k-1) points when some
    // glin[v] != 0, else q^k or 0.
    const auto& vars = plan_.enum_vars[j];
    const long k = static_cast<long>(vars.size());
    budget_.charge(k + 1);
    bool nonzero = false;
    for (int v : vars)
      if (glin_[v] % q_ != 0) nonzero = true;
    std::uint16_t have = F_[j];
    if (nonzero) {
      survivors_ += int_pow(q_, k - 1);
    } else if (have == tgt_[j]) {
      survivors_ += int_pow(q_, k);
    }
  }

  const ArcTask& t_;
  const TaskPlan& plan_;
  Budget& budget_;
  JetKernel kernel_;
  const int q_, n_, J_;
  JetPoly jp_;
  std::vector<JetPoly> partials_;
  int lanes_ = 1;
  std::vector<std::uint16_t> jets_, F_, glin_, tgt_;
  std::vector<std::uint16_t> batch_arcs_, batch_out_;
  Int survivors_{0};
};

Int count_with(const ArcTask& t, Budget& budget, const JetKernel& kernel) {
  validate(t);
  TaskPlan plan = build_plan(t);
  if (plan.impossible) return Int(0);
  Int tail = int_pow(t.qf, plan.free_total);
  if (t.target == ArcTask::Target::None) return tail;
  Engine eng(t, plan, budget, kernel);
  return eng.run() * tail;
}

/** Intersects a base constraint with "identically zero"; nullopt = empty. */
std::optional<VarConstraint> intersect_zero(const VarConstraint& c, int qf) {
  switch (c.kind) {
    case VarConstraint::Kind::Free:
    case VarConstraint::Kind::MinVal:
    case VarConstraint::Kind::Zero:
      return VarConstraint::zero();
    case VarConstraint::Kind::Point:
      if (c.point % qf == 0) return VarConstraint::zero();
      return std::nullopt;
  }
  return std::nullopt;
}

/** Count with the listed blocks forced identically zero. */
Int count_forced(const SetSpec& spec, bool xz, bool yz, Budget& budget,
                 const JetKernel& kernel) {
  ArcTask t = spec.task;
  auto force = [&](int lo, int hi) -> bool {
    for (int v = lo; v < hi; ++v) {
      auto r = intersect_zero(t.base[v], t.qf);
      if (!r) return false;
      t.base[v] = *r;
    }
    return true;
  };
  if (xz && !force(0, spec.blocks.d1)) return Int(0);
  if (yz && !force(spec.blocks.d1, spec.blocks.d1 + spec.blocks.d2)) return Int(0);
  return count_with(t, budget, kernel);
}

void validate_blocks(const SetSpec& spec) {
  if (spec.blocks.d1 < 0 || spec.blocks.d2 < 0 || spec.blocks.d3 < 0 ||
      spec.blocks.total() != spec.task.f.nvars())
    raise(ErrorCode::ValidationError, "blocks must partition the variables");
}

Int count_set_with(const SetSpec& spec, Budget& budget, const JetKernel& kernel) {
  validate_blocks(spec);
  // Inclusion-exclusion over the four (x-block zero?, y-block zero?) cells.
  std::optional<Int> c_ff, c_zf, c_fz, c_zz;
  auto get = [&](bool xz, bool yz) -> const Int& {
    auto& slot = xz ? (yz ? c_zz : c_zf) : (yz ? c_fz : c_ff);
    if (!slot) slot = count_forced(spec, xz, yz, budget, kernel);
    return *slot;
  };
  Int total(0);
  for (int bx = 0; bx < 2; ++bx)
    for (int by = 0; by < 2; ++by) {
      if (!spec.pred.eval(bx == 1, by == 1)) continue;
      if (bx && by)
        total += get(true, true);
      else if (bx)
        total += get(true, false) - get(true, true);
      else if (by)
        total += get(false, true) - get(true, true);
      else
        total += get(false, false) - get(true, false) - get(false, true) +
                 get(true, true);
    }
  return total;
}

} // namespace

bool BlockPredicate::eval(bool xzero, bool yzero) const {
  switch (kind) {
    case Kind::True:
      return true;
    case Kind::XZero:
      return xzero;
    case Kind::YZero:
      return yzero;
    case Kind::XNonzero:
      return !xzero;
    case Kind::YNonzero:
      return !yzero;
    case Kind::And:
      for (auto& a : args)
        if (!a.eval(xzero, yzero)) return false;
      return true;
    case Kind::Or:
      for (auto& a : args)
        if (a.eval(xzero, yzero)) return true;
      return false;
  }
  return false;
}

Int count_arcs(const ArcTask& task, Budget& budget) {
  return count_with(task, budget, select_jet_kernel());
}

Int count_arcs_with_kernel(const ArcTask& task, Budget& budget, const JetKernel& kernel) {
  return count_with(task, budget, kernel);
}

Int count_set(const SetSpec& spec, Budget& budget) {
  return count_set_with(spec, budget, select_jet_kernel());
}

Rat xtilde(const SetSpec& spec, Budget& budget) {
  Int c = count_set(spec, budget);
  long n_active = 0;
  for (auto& b : spec.task.base)
    if (b.kind != VarConstraint::Kind::Zero) ++n_active;
  long e = (spec.task.trunc - 1) * n_active; // count * qf^(-e)
  Rat r(c, int_pow(spec.task.qf, e));
  r.canonicalize();
  return r;
}

bool weight_check(const IntPolynomial& f, const BlockSpec& blocks) {
  if (blocks.total() != f.nvars() || blocks.d1 < 0 || blocks.d2 < 0 || blocks.d3 < 0)
    return false;
  for (auto& [e, c] : f.terms()) {
    long dx = IntPolynomial::block_degree(e, 0, blocks.d1);
    long dy = IntPolynomial::block_degree(e, blocks.d1, blocks.d1 + blocks.d2);
    if (dx != dy) return false;
    if (dx == 0 && IntPolynomial::block_degree(e, 0, blocks.total()) == 0)
      return false; // nonzero constant term
  }
  return true;
}

std::pair<Int, Rat> annulus_count(long p, long qden, long m, int qf, Budget& budget) {
  if (p < 1 || qden < 1 || m < 1)
    raise(ErrorCode::ValidationError, "annulus parameters must be positive");
  if (!is_supported_prime(qf))
    raise(ErrorCode::ValidationError, "field size must be a prime <= 7");
  long trunc = 2 * m * qden;
  long r = std::min(p, 2 * qden);
  ArcTask all;
  all.f = IntPolynomial::variable(1, 0);
  all.level = m * qden;
  all.trunc = trunc;
  all.qf = qf;
  all.base = {VarConstraint::free_var()};
  all.target = ArcTask::Target::None;
  ArcTask deep = all;
  deep.base = {VarConstraint::min_val_at_least(std::min(m * r, trunc))};
  Int count = count_arcs(all, budget) - count_arcs(deep, budget);
  Rat xt(count, int_pow(qf, trunc - 1));
  xt.canonicalize();
  return {count, xt};
}

} // namespace motzeta
