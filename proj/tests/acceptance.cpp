// Acceptance gate: runs the nine end-to-end checks the project promises,
// printing one PASS/FAIL line per criterion. Exit code = number of failures.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "motzeta/arcs.hpp"
#include "motzeta/error.hpp"
#include "motzeta/fit.hpp"
#include "motzeta/identity.hpp"
#include "motzeta/motive.hpp"
#include "motzeta/polyhedra.hpp"
#include "motzeta/polynomial.hpp"
#include "motzeta/resolution.hpp"
#include "motzeta/series.hpp"

using namespace motzeta;

namespace {

struct Checker {
  std::vector<std::string> failures;
  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

long rand_in(std::mt19937_64& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

Motive random_laurent(std::mt19937_64& rng) {
  LaurentPoly p;
  int terms = static_cast<int>(rand_in(rng, 1, 2));
  for (int t = 0; t < terms; ++t) {
    long c = rand_in(rng, -3, 3);
    if (c == 0) c = 1;
    p = p + LaurentPoly::monomial(Int(c), rand_in(rng, -2, 2));
  }
  return Motive(p);
}

// --- criterion 1: limits of generators and linearity ------------------------

void limit_axioms(Checker& ck) {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 20; ++t) {
    Generator g{rand_in(rng, -9, 9), rand_in(rng, 1, 5)};
    Motive lim = RationalSeries::generator(g).limit();
    ck.require(lim == Motive(-1), "limit of " + g.str() + " is " + lim.str());
  }
  for (int t = 0; t < 20; ++t) {
    RationalSeries acc;
    Motive expect(0);
    int terms = static_cast<int>(rand_in(rng, 1, 4));
    for (int j = 0; j < terms; ++j) {
      Generator g{rand_in(rng, -6, 3), rand_in(rng, 1, 4)};
      Motive c = random_laurent(rng);
      acc = acc + RationalSeries::generator(g, c);
      expect = expect + c * Motive(-1);
    }
    if (acc.is_zero()) continue; // coefficients cancelled
    ck.require(acc.limit() == expect, "linear combination limit mismatch");
  }
}

// --- criterion 2: annulus series vanish in the limit ------------------------

void annulus_vanishing(Checker& ck) {
  const long pairs[4][2] = {{1, 1}, {1, 2}, {3, 2}, {5, 1}};
  for (auto& pq : pairs) {
    long p = pq[0], qden = pq[1];
    long r = std::min(p, 2 * qden);
    // sum_m (L - L^{-mr+1}) T^{mq} = L*gen(0,q) - L*gen(-r,q)
    RationalSeries s =
        RationalSeries::generator({0, qden}, Motive::lefschetz()) -
        RationalSeries::generator({-r, qden}, Motive::lefschetz());
    for (long m = 1; m <= 3; ++m) {
      Motive expect = Motive::lefschetz() - Motive::lefschetz_pow(-m * r + 1);
      ck.require(s.coefficient(m * qden) == expect,
                 "annulus series coefficient mismatch at m=" + std::to_string(m));
    }
    ck.require(s.limit() == Motive(0),
               "annulus series limit nonzero for p/q = " + std::to_string(p) +
                   "/" + std::to_string(qden));
  }
  for (long m = 1; m <= 2; ++m) {
    Budget b;
    auto [count, xt] = annulus_count(1, 1, m, 3, b);
    Rat expect = (Motive::lefschetz() - Motive::lefschetz_pow(-m + 1)).specialize(Rat(3));
    ck.require(xt == expect, "annulus count at m=" + std::to_string(m) +
                                 " does not match the specialized class");
  }
}

// --- criterion 3: coefficientwise products ----------------------------------

void hadamard_products(Checker& ck) {
  std::mt19937_64 rng(303);
  for (int t = 0; t < 50; ++t) {
    auto rand_series = [&] {
      RationalSeries s;
      int terms = static_cast<int>(rand_in(rng, 1, 3));
      for (int j = 0; j < terms; ++j)
        s = s + RationalSeries::generator({rand_in(rng, -5, 2), rand_in(rng, 1, 4)},
                                          random_laurent(rng));
      return s;
    };
    RationalSeries a = rand_series(), b = rand_series();
    if (a.is_zero() || b.is_zero()) continue;
    RationalSeries h = RationalSeries::hadamard(a, b);
    for (long m = 0; m <= 20; ++m)
      ck.require(h.coefficient(m) == a.coefficient(m) * b.coefficient(m),
                 "coefficient mismatch at m=" + std::to_string(m));
    ck.require(h.limit() == Motive(-1) * a.limit() * b.limit(),
               "product limit rule violated");
  }
}

// --- criterion 4: volume-series limit against the fiber class ---------------

ResolutionDatum random_datum(std::mt19937_64& rng) {
  ResolutionDatum res;
  int nj = static_cast<int>(rand_in(rng, 1, 3));
  res.reldim = static_cast<int>(rand_in(rng, 0, 3));
  for (int i = 0; i < nj; ++i)
    res.components.push_back({rand_in(rng, 1, 4), rand_in(rng, 1, 3)});
  for (int mask = 1; mask < (1 << nj); ++mask) {
    if (rand_in(rng, 0, 4) == 0) continue; // leave some strata at zero
    std::vector<int> subset;
    for (int i = 0; i < nj; ++i)
      if (mask & (1 << i)) subset.push_back(i);
    res.strata[subset] = random_laurent(rng);
    if (rand_in(rng, 0, 1) == 0) {
      long g = 0;
      for (int i : subset) g = g == 0 ? res.components[i].N : std::gcd(g, res.components[i].N);
      res.covering_order[subset] = g;
    }
  }
  return res;
}

void volume_limit_consistency(Checker& ck) {
  std::mt19937_64 rng(404);
  for (int t = 0; t < 100; ++t) {
    ResolutionDatum res = random_datum(rng);
    validate_resolution(res);
    Motive lim = volume_series(res).limit();
    Motive rhs = Motive::lefschetz_pow(-res.reldim) * nearby_cycles(res);
    ck.require(lim + rhs == Motive(0), "volume-series limit disagrees with the fiber class");
  }
}

// --- criterion 5: one-variable power maps against arc counts ----------------

void power_map_cross_validation(Checker& ck) {
  const long pairs[3][2] = {{2, 5}, {2, 7}, {3, 7}}; // k and q with k | q-1
  for (auto& kq : pairs) {
    long k = kq[0], q = kq[1];
    ResolutionDatum res;
    res.components.push_back({k, 1});
    res.strata[{0}] = Motive(k);
    res.covering_order[{0}] = k;
    res.reldim = 1;
    RationalSeries vol = volume_series(res);

    IntPolynomial f = IntPolynomial::variable(1, 0).pow(k);
    for (long m = 1; m <= 6; ++m) {
      ArcTask task;
      task.f = f;
      task.level = m;
      task.trunc = m + 1;
      task.qf = static_cast<int>(q);
      task.base = {VarConstraint::free_var()};
      task.target = ArcTask::Target::ExactTm;
      Budget b;
      Int count = count_arcs(task, b);
      Rat normalized = Rat(count) * rat_pow(Rat(q), -(m + 1));
      Rat coeff = vol.coefficient(m).specialize(Rat(q));
      ck.require(coeff == normalized,
                 "x^" + std::to_string(k) + " over F_" + std::to_string(q) +
                     " at m=" + std::to_string(m) + ": series gives " +
                     coeff.get_str() + ", arcs give " + normalized.get_str());
    }
  }
}

// --- criterion 6: termwise identity checks ----------------------------------

IntPolynomial xy_plus_z2() {
  auto v = [](int i) { return IntPolynomial::variable(3, i); };
  return v(0) * v(1) + v(2).pow(2);
}

IntPolynomial xy_two_vars() {
  return IntPolynomial::variable(2, 0) * IntPolynomial::variable(2, 1);
}

void termwise_checks(Checker& ck) {
  struct Case {
    IntPolynomial f;
    BlockSpec blocks;
    std::vector<long> levels;
    std::vector<int> fields;
    std::vector<std::array<long, 3>> counts; // per (level, field) row: X, X0, X1
    const char* name;
  };
  std::vector<Case> cases = {
      {xy_plus_z2(), {1, 1, 1}, {1, 2}, {3}, {{18, 0, 18}, {13122, 1926, 11196}}, "xy+z^2 over F_3"},
      {xy_plus_z2(), {1, 1, 1}, {1}, {5}, {{100, 0, 100}}, "xy+z^2 over F_5"},
      {xy_two_vars(), {1, 1, 0}, {1, 2}, {3}, {{6, 0, 6}, {324, 0, 324}}, "xy over F_3"},
      {xy_two_vars(), {1, 1, 0}, {1}, {5}, {{20, 0, 20}}, "xy over F_5"},
  };
  for (auto& c : cases) {
    IdentityInstance inst;
    inst.f = c.f;
    inst.blocks = c.blocks;
    inst.levels = c.levels;
    inst.fields = c.fields;
    Budget b;
    TermwiseResult res = check_termwise(inst, b);
    ck.require(res.all_ok, std::string(c.name) + ": a termwise check failed");
    ck.require(res.rows.size() == c.counts.size(),
               std::string(c.name) + ": unexpected row count");
    for (size_t i = 0; i < res.rows.size() && i < c.counts.size(); ++i) {
      const TermwiseRow& row = res.rows[i];
      ck.require(row.ok(), std::string(c.name) + ": row " + std::to_string(i) +
                               " partition/factorization/product check failed");
      ck.require(row.count_x == Int(c.counts[i][0]) && row.count_x0 == Int(c.counts[i][1]) &&
                     row.count_x1 == Int(c.counts[i][2]),
                 std::string(c.name) + ": counts differ from the frozen values at row " +
                     std::to_string(i));
    }
  }
}

// --- criterion 7: the specialized identity for xy + z^2 ---------------------

void specialized_identity(Checker& ck) {
  IdentityInstance inst;
  inst.f = xy_plus_z2();
  inst.blocks = {1, 1, 1};
  inst.levels = {1, 2, 3, 4, 5, 6};
  inst.fields = {3};
  inst.basis_hint = {{{-1, 1}}, {{-3, 2}}, {{-1, 1}, {-3, 2}}};
  inst.x1_basis = {{{-1, 1}}, {{-3, 2}}, {{-1, 1}, {-3, 2}}, {{-5, 2}}, {{-9, 2}}};
  inst.rhs_basis = {{{-1, 2}}};
  inst.seed = 1; // makes the scaling recount use tau = 2
  Budget b;
  IdentityResult res = check_identity(inst, b);
  ck.require(res.termwise.all_ok, "termwise prerequisite failed");
  ck.require(res.cells.size() == 1, "expected one field cell");
  if (res.cells.size() == 1) {
    const IdentityCell& cell = res.cells[0];
    ck.require(cell.lhs_value == Rat(6), "left side is " + cell.lhs_value.get_str() +
                                             ", expected 2*3 = 6");
    ck.require(cell.rhs_value == Rat(6), "right side is " + cell.rhs_value.get_str() +
                                             ", expected 2*3 = 6");
    ck.require(cell.x1_limit == Rat(0),
               "complement fitted limit is " + cell.x1_limit.get_str() + ", expected 0");
    ck.require(cell.homogeneity_ok, "scaling recount failed");
    ck.require(cell.sides_equal && cell.pass, "cell did not pass");
  }
  ck.require(res.pass, "identity verification did not pass");
}

// --- criterion 8: weighted lattice sums and Euler characteristics -----------

Polyhedron point_at(const Rat& c) {
  Polyhedron p;
  p.dim = 1;
  p.cons.push_back({{Rat(1)}, c, Constraint::Rel::Eq});
  return p;
}

Polyhedron interval(const Rat& a, const Rat& b, Constraint::Rel lo, Constraint::Rel hi) {
  Polyhedron p;
  p.dim = 1;
  p.cons.push_back({{Rat(1)}, a, lo});
  p.cons.push_back({{Rat(-1)}, -b, hi});
  return p;
}

Polyhedron pad_product(const Polyhedron& a, const Polyhedron& b) {
  Polyhedron p;
  p.dim = 2;
  for (auto c : a.cons) {
    c.a = {c.a[0], Rat(0)};
    p.cons.push_back(c);
  }
  for (auto c : b.cons) {
    c.a = {Rat(0), c.a[0]};
    p.cons.push_back(c);
  }
  return p;
}

void lattice_sum_suite(Checker& ck) {
  using Rel = Constraint::Rel;
  for (long m = 1; m <= 4; ++m)
    for (long i = 0; i <= 6; ++i) {
      Motive got = a_m_sum(point_at(Rat(i) / Rat(m)), m);
      Motive expect = Motive::lefschetz_pow(-i) * (Motive::lefschetz() - Motive(1));
      ck.require(got == expect, "point sum at i=" + std::to_string(i) +
                                    ", m=" + std::to_string(m) + " is " + got.str());
    }

  // Truth table for the o-minimal Euler characteristic.
  ck.require(euler_char(point_at(Rat(2))) == 1, "point has chi 1");
  ck.require(euler_char(interval(Rat(0), Rat(1), Rel::Gt, Rel::Gt)) == -1,
             "open interval has chi -1");
  ck.require(euler_char(interval(Rat(0), Rat(1), Rel::Ge, Rel::Ge)) == 1,
             "closed interval has chi 1");
  ck.require(euler_char(interval(Rat(0), Rat(1), Rel::Ge, Rel::Gt)) == 0,
             "half-open interval has chi 0");
  Polyhedron ray;
  ray.dim = 1;
  ray.cons.push_back({{Rat(1)}, Rat(0), Rel::Gt});
  ck.require(euler_char(ray) == -1, "open ray has chi -1");

  std::mt19937_64 rng(808);
  auto random_1d = [&]() {
    switch (rand_in(rng, 0, 4)) {
      case 0: return point_at(Rat(rand_in(rng, -3, 3)));
      case 1: return interval(Rat(rand_in(rng, -3, 0)), Rat(rand_in(rng, 1, 3)), Rel::Gt, Rel::Gt);
      case 2: return interval(Rat(rand_in(rng, -3, 0)), Rat(rand_in(rng, 1, 3)), Rel::Ge, Rel::Ge);
      case 3: return interval(Rat(rand_in(rng, -3, 0)), Rat(rand_in(rng, 1, 3)), Rel::Ge, Rel::Gt);
      default: {
        Polyhedron p;
        p.dim = 1;
        p.cons.push_back({{Rat(rand_in(rng, 0, 1) == 0 ? 1 : -1)}, Rat(rand_in(rng, -2, 2)),
                          Rel::Gt});
        return p;
      }
    }
  };
  for (int t = 0; t < 30; ++t) {
    Polyhedron a = random_1d(), b = random_1d();
    ck.require(euler_char(pad_product(a, b)) == euler_char(a) * euler_char(b),
               "chi is not multiplicative on a product");
  }
  for (int t = 0; t < 30; ++t) {
    int dim = static_cast<int>(rand_in(rng, 1, 2));
    Polyhedron p;
    p.dim = dim;
    int ncons = static_cast<int>(rand_in(rng, 1, 3));
    for (int c = 0; c < ncons; ++c) {
      Constraint con;
      for (int v = 0; v < dim; ++v) con.a.push_back(Rat(rand_in(rng, -2, 2)));
      con.b = Rat(rand_in(rng, -2, 2));
      con.rel = rand_in(rng, 0, 1) == 0 ? Rel::Ge : Rel::Gt;
      p.cons.push_back(con);
    }
    int axis = static_cast<int>(rand_in(rng, 0, dim - 1));
    Rat c(rand_in(rng, -2, 2));
    auto with = [&](Rel rel, bool flip) {
      Polyhedron q = p;
      Constraint con;
      con.a.assign(static_cast<size_t>(dim), Rat(0));
      con.a[static_cast<size_t>(axis)] = flip ? Rat(-1) : Rat(1);
      con.b = flip ? -c : c;
      con.rel = rel;
      q.cons.push_back(con);
      return q;
    };
    long whole = euler_char(p);
    long parts = euler_char(with(Rel::Gt, false)) + euler_char(with(Rel::Eq, false)) +
                 euler_char(with(Rel::Gt, true));
    ck.require(whole == parts, "chi is not additive across a hyperplane split");
  }
}

// --- criterion 9: CLI determinism on the shipped fixtures -------------------

bool run_command(const std::string& cmd, std::string& out) {
  out.clear();
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return false;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  return WIFEXITED(status) && WEXITSTATUS(status) == 0;
}

void cli_determinism(Checker& ck) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  for (auto& entry : fs::directory_iterator(MOTZETA_FIXTURES))
    if (entry.path().extension() == ".mz") files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  ck.require(files.size() >= 4, "expected at least four shipped fixture files");
  for (const std::string& fx : files)
    for (const char* fmt : {"text", "structured"}) {
      std::string base = std::string(MOTZETA_BIN) + " run '" + fx + "' --format " + fmt;
      std::string out1, out2;
      bool ok1 = run_command(base, out1);
      bool ok2 = run_command(base, out2);
      ck.require(ok1 && ok2, fx + " (" + fmt + "): run did not succeed");
      ck.require(out1 == out2, fx + " (" + fmt + "): outputs differ between runs");
      ck.require(!out1.empty(), fx + " (" + fmt + "): empty report");
    }
}

// --- driver ------------------------------------------------------------------

struct Criterion {
  int number;
  const char* name;
  double seconds_limit; // 0 = no stated limit
  std::function<void(Checker&)> run;
};

} // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "generator limits and linearity", 1.0, limit_axioms},
      {2, "annulus series vanish in the limit", 1.0, annulus_vanishing},
      {3, "coefficientwise products", 5.0, hadamard_products},
      {4, "volume-series limits match fiber classes", 5.0, volume_limit_consistency},
      {5, "power-map series against arc counts", 60.0, power_map_cross_validation},
      {6, "termwise identity checks", 300.0, termwise_checks},
      {7, "specialized identity for xy + z^2", 600.0, specialized_identity},
      {8, "lattice sums and Euler characteristics", 5.0, lattice_sum_suite},
      {9, "CLI determinism on shipped fixtures", 0.0, cli_determinism},
  };
  int failures = 0;
  for (auto& c : criteria) {
    Checker ck;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(ck);
    } catch (const std::exception& e) {
      ck.failures.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.seconds_limit > 0 && secs > c.seconds_limit)
      ck.failures.push_back("exceeded the " + std::to_string(c.seconds_limit) +
                            " s budget");
    bool pass = ck.failures.empty();
    if (!pass) ++failures;
    std::printf("criterion %d: %s  %s (%.2f s)\n", c.number, pass ? "PASS" : "FAIL",
                c.name, secs);
    size_t shown = 0;
    for (const std::string& f : ck.failures) {
      if (++shown > 5) {
        std::printf("    ... %zu more\n", ck.failures.size() - 5);
        break;
      }
      std::printf("    %s\n", f.c_str());
    }
  }
  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures;
}
