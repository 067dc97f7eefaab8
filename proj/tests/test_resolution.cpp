#include <doctest.h>

#include <random>

#include "motzeta/arcs.hpp"
#include "motzeta/error.hpp"
#include "motzeta/resolution.hpp"

using namespace motzeta;

namespace {

Motive L_pow(long e) { return Motive::lefschetz_pow(e); }

ResolutionDatum xk_datum(long k) {
  ResolutionDatum res;
  res.components = {{k, 1}};
  res.strata[{0}] = Motive(k);
  res.covering_order[{0}] = k;
  res.reldim = 1;
  return res;
}

ResolutionDatum random_datum(std::mt19937& rng) {
  std::uniform_int_distribution<int> szd(1, 3), Nd(1, 4), ad(1, 3), dd(1, 3), cf(-3, 3);
  ResolutionDatum res;
  int sz = szd(rng);
  for (int i = 0; i < sz; ++i) res.components.push_back({Nd(rng), ad(rng)});
  res.reldim = dd(rng);
  // Random classes on random nonempty subsets (others default to zero).
  for (int mask = 1; mask < (1 << sz); ++mask) {
    if (rng() % 2) continue;
    std::vector<int> subset;
    for (int i = 0; i < sz; ++i)
      if (mask & (1 << i)) subset.push_back(i);
    LaurentPoly p;
    for (int t = 0; t < 2; ++t) p = p + LaurentPoly::monomial(Int(cf(rng)), long(rng() % 3));
    res.strata[subset] = Motive(p);
  }
  return res;
}

} // namespace

TEST_CASE("validation rejects malformed data") {
  ResolutionDatum res = xk_datum(2);
  CHECK_NOTHROW(validate_resolution(res));
  res.components[0].N = 0;
  CHECK_THROWS_AS(validate_resolution(res), EngineError);
  res = xk_datum(2);
  res.components[0].alpha = 0;
  CHECK_THROWS_AS(validate_resolution(res), EngineError);
  res = xk_datum(2);
  res.strata[{1}] = Motive(1); // index out of range
  CHECK_THROWS_AS(validate_resolution(res), EngineError);
  res = xk_datum(2);
  res.strata[{}] = Motive(1); // empty subset
  CHECK_THROWS_AS(validate_resolution(res), EngineError);
  res = xk_datum(2);
  res.reldim = -1;
  CHECK_THROWS_AS(validate_resolution(res), EngineError);
  res = xk_datum(2);
  res.covering_order[{0}] = 3; // must divide gcd of the multiplicities
  CHECK_THROWS_AS(validate_resolution(res), EngineError);
}

TEST_CASE("nearby cycles of the k-fold point") {
  for (long k : {2L, 3L, 5L}) CHECK(nearby_cycles(xk_datum(k)) == Motive(k));
}

TEST_CASE("nearby cycles of a two-component crossing") {
  // Two components meeting in a point, each with a punctured-line stratum.
  ResolutionDatum res;
  res.components = {{1, 1}, {1, 1}};
  res.strata[{0}] = Motive::lefschetz() - Motive(1);
  res.strata[{1}] = Motive::lefschetz() - Motive(1);
  res.strata[{0, 1}] = Motive(1);
  res.reldim = 2;
  // (L-1) + (L-1) + (1-L)*1 = L - 1.
  CHECK(nearby_cycles(res) == Motive::lefschetz() - Motive(1));
}

TEST_CASE("volume series coefficients of the k-fold point") {
  for (long k : {2L, 3L}) {
    RationalSeries vs = volume_series(xk_datum(k));
    for (long m = 1; m <= 12; ++m) {
      Motive expect = (m % k == 0) ? Motive(k) * L_pow(-1 - m / k) : Motive(0);
      CHECK(vs.coefficient(m) == expect);
    }
    CHECK(motivic_volume(xk_datum(k)) == Motive(k) * L_pow(-1));
  }
}

TEST_CASE("limit of the volume series matches nearby cycles") {
  std::mt19937 rng(777);
  for (int it = 0; it < 60; ++it) {
    ResolutionDatum res = random_datum(rng);
    Motive lhs = -volume_series(res).limit();
    Motive rhs = L_pow(-res.reldim) * nearby_cycles(res);
    CHECK(lhs == rhs);
    CHECK(motivic_volume(res) == lhs);
  }
}

TEST_CASE("volume series coefficients specialize to normalized arc counts") {
  // x^k in one variable: the T^m coefficient evaluated at q matches the
  // exact jet count renormalized by q^((m+1) d).
  for (long k : {2L, 3L}) {
    RationalSeries vs = volume_series(xk_datum(k));
    for (int q : {5, 7}) {
      if ((q - 1) % k != 0) continue;
      for (long m = 1; m <= 6; ++m) {
        ArcTask t;
        t.f = IntPolynomial::variable(1, 0).pow(k);
        t.level = m;
        t.trunc = m + 1;
        t.qf = q;
        t.base = {VarConstraint::free_var()};
        t.target = ArcTask::Target::ExactTm;
        Budget b;
        Rat normalized = Rat(count_arcs(t, b)) / rat_pow(Rat(q), (m + 1) * 1);
        CHECK(vs.coefficient(m).specialize(Rat(q)) == normalized);
      }
    }
  }
}

TEST_CASE("standard domain volumes") {
  using F = StandardDomain::Factor;
  StandardDomain closed{{F{F::Kind::ClosedPolydisc, 2, 1, 1}}};
  CHECK(standard_volume(closed) == Motive(1));
  StandardDomain open{{F{F::Kind::OpenPolydisc, 3, 1, 1}}};
  CHECK(standard_volume(open) == L_pow(-3));
  StandardDomain punctured{{F{F::Kind::PuncturedClosedPolydisc, 1, 1, 1}}};
  CHECK(standard_volume(punctured) == Motive(0));
  StandardDomain annulus{{F{F::Kind::Annulus, 1, 2, 3}}};
  CHECK(standard_volume(annulus) == Motive(0));
  // Factors multiply; a zero factor annihilates.
  StandardDomain mix{{F{F::Kind::OpenPolydisc, 2, 1, 1}, F{F::Kind::ClosedPolydisc, 1, 1, 1}}};
  CHECK(standard_volume(mix) == L_pow(-2));
  StandardDomain wiped{{F{F::Kind::OpenPolydisc, 2, 1, 1}, F{F::Kind::Annulus, 1, 1, 2}}};
  CHECK(standard_volume(wiped) == Motive(0));
}
