#include <doctest.h>

#include <random>

#include "motzeta/motive.hpp"

using namespace motzeta;

namespace {

LaurentPoly L_pow(long e) { return LaurentPoly::monomial(Int(1), e); }

Motive random_motive(std::mt19937& rng) {
  std::uniform_int_distribution<int> cf(-5, 5), ex(-3, 3), den(0, 2), di(1, 4);
  LaurentPoly num;
  for (int i = 0; i < 3; ++i) num = num + LaurentPoly::monomial(Int(cf(rng)), ex(rng));
  std::map<long, int> d;
  int nd = den(rng);
  for (int i = 0; i < nd; ++i) d[di(rng)] += 1;
  return Motive::fraction(num, d);
}

} // namespace

TEST_CASE("construction and rendering") {
  CHECK(Motive().is_zero());
  CHECK(Motive(5).str() == "5");
  CHECK(Motive::lefschetz().str() == "L");
  CHECK(Motive::lefschetz_pow(-2).str() == "L^-2");
  CHECK(Motive::fraction(LaurentPoly(1), {{1, 1}}).str() == "1/(1 - L)");
  CHECK(Motive::fraction(L_pow(2) - L_pow(1), {{1, 1}, {3, 1}}).str() == "-L/(1 - L^3)");
}

TEST_CASE("fractions normalize by cancelling cyclotomic content") {
  // (L^2 - L)/((1 - L)(1 - L^3)) = -L/(1 - L^3)
  Motive a = Motive::fraction(L_pow(2) - L_pow(1), {{1, 1}, {3, 1}});
  Motive b = Motive::fraction(-L_pow(1), {{3, 1}});
  CHECK(a == b);
  CHECK(a.den().size() == 1);
  CHECK(a.den().count(3) == 1);

  // (1 - L^6)/(1 - L^2) clears the denominator entirely.
  Motive c = Motive::fraction(LaurentPoly::one_minus_power(6), {{2, 1}});
  CHECK(c.is_polynomial());
  CHECK(c == Motive(LaurentPoly(1) + L_pow(2) + L_pow(4)));
}

TEST_CASE("cross-form equality") {
  Motive a = Motive::fraction(LaurentPoly(1) - L_pow(2), {{1, 1}});
  Motive b = Motive(LaurentPoly(1) + L_pow(1));
  CHECK(a == b);
  CHECK(a != Motive(LaurentPoly(1)));
}

TEST_CASE("specialization at a rational point") {
  Motive a = Motive::fraction(L_pow(2) - L_pow(1), {{1, 1}, {3, 1}});
  CHECK(a.specialize(Rat(3)) == Rat(3, 26)); // -3/(1-27)
  CHECK(Motive::lefschetz_pow(-2).specialize(Rat(5)) == Rat(1, 25));
  CHECK(Motive(7).specialize(Rat(2)) == Rat(7));
}

TEST_CASE("specialization is a ring homomorphism") {
  std::mt19937 rng(11);
  const Rat q(5);
  for (int it = 0; it < 60; ++it) {
    Motive a = random_motive(rng), b = random_motive(rng);
    CHECK((a + b).specialize(q) == a.specialize(q) + b.specialize(q));
    CHECK((a - b).specialize(q) == a.specialize(q) - b.specialize(q));
    CHECK((a * b).specialize(q) == a.specialize(q) * b.specialize(q));
  }
}

TEST_CASE("inverses in the localized ring") {
  // L is invertible with inverse L^-1.
  auto li = Motive::lefschetz().inverse();
  REQUIRE(li.has_value());
  CHECK(*li == Motive::lefschetz_pow(-1));

  // 1 - L inverts to the stored fraction and back.
  Motive om = Motive(LaurentPoly::one_minus_power(1));
  auto omi = om.inverse();
  REQUIRE(omi.has_value());
  CHECK(*omi == Motive::fraction(LaurentPoly(1), {{1, 1}}));
  CHECK(*omi * om == Motive(1));

  // 1 + L = (1 - L^2)/(1 - L) is invertible too.
  Motive pl = Motive(LaurentPoly(1) + L_pow(1));
  auto pli = pl.inverse();
  REQUIRE(pli.has_value());
  CHECK(*pli * pl == Motive(1));

  // 2 - L and plain 2 are not units here.
  CHECK(!Motive(LaurentPoly(2) - L_pow(1)).inverse().has_value());
  CHECK(!Motive(2).inverse().has_value());
  CHECK(!Motive(0).inverse().has_value());
}

TEST_CASE("powers, including negative exponents") {
  CHECK(Motive::lefschetz().pow(3) == Motive::lefschetz_pow(3));
  CHECK(Motive::lefschetz().pow(-2) == Motive::lefschetz_pow(-2));
  CHECK(Motive(LaurentPoly::one_minus_power(1)).pow(-1) ==
        Motive::fraction(LaurentPoly(1), {{1, 1}}));
  Motive a = Motive::fraction(L_pow(1), {{2, 1}});
  CHECK(a.pow(2) == a * a);
  CHECK(a.pow(0) == Motive(1));
  CHECK(a.pow(-1) * a == Motive(1));
}

TEST_CASE("ring laws on random elements") {
  std::mt19937 rng(23);
  for (int it = 0; it < 40; ++it) {
    Motive a = random_motive(rng), b = random_motive(rng), c = random_motive(rng);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) * c == a * c + b * c);
    CHECK(a - a == Motive(0));
    CHECK(-(-a) == a);
  }
}
