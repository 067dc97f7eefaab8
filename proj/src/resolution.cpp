#include "motzeta/resolution.hpp"

#include <algorithm>
#include <numeric>

#include "motzeta/error.hpp"

namespace motzeta {

void validate_resolution(const ResolutionDatum& res) {
  if (res.reldim < 0) raise(ErrorCode::ValidationError, "negative relative dimension");
  for (auto& c : res.components)
    if (c.N < 1 || c.alpha < 1)
      raise(ErrorCode::ValidationError, "multiplicities and weights must be >= 1");
  auto check_subset = [&](const std::vector<int>& I) {
    if (I.empty()) raise(ErrorCode::ValidationError, "empty stratum subset");
    for (size_t j = 0; j < I.size(); ++j) {
      if (I[j] < 0 || I[j] >= static_cast<int>(res.components.size()))
        raise(ErrorCode::ValidationError, "stratum subset index out of range");
      if (j > 0 && I[j] <= I[j - 1])
        raise(ErrorCode::ValidationError, "stratum subset must be strictly increasing");
    }
  };
  for (auto& [I, m] : res.strata) check_subset(I);
  for (auto& [I, order] : res.covering_order) {
    check_subset(I);
    long g = 0;
    for (int i : I) g = std::gcd(g, res.components[i].N);
    if (order != g)
      raise(ErrorCode::ValidationError, "covering order tag must equal gcd of multiplicities");
  }
}

Motive nearby_cycles(const ResolutionDatum& res) {
  validate_resolution(res);
  Motive one_minus_l = Motive(1) - Motive::lefschetz();
  Motive sum(0);
  for (auto& [I, cls] : res.strata)
    sum += one_minus_l.pow(static_cast<long>(I.size()) - 1) * cls;
  return sum;
}

RationalSeries volume_series(const ResolutionDatum& res) {
  validate_resolution(res);
  Motive l_minus_one = Motive::lefschetz() - Motive(1);
  Motive scale = Motive::lefschetz_pow(-res.reldim);
  RationalSeries out;
  for (auto& [I, cls] : res.strata) {
    if (cls.is_zero()) continue;
    std::vector<Generator> gens;
    gens.reserve(I.size());
    for (int i : I) gens.push_back({-res.components[i].alpha, res.components[i].N});
    std::sort(gens.begin(), gens.end());
    Motive coeff = scale * l_minus_one.pow(static_cast<long>(I.size()) - 1) * cls;
    out = out + RationalSeries::product_key(gens, coeff);
  }
  return out;
}

Motive motivic_volume(const ResolutionDatum& res) {
  Motive vol = -volume_series(res).limit();
  Motive expected = Motive::lefschetz_pow(-res.reldim) * nearby_cycles(res);
  if (!(vol == expected))
    raise(ErrorCode::ValidationError, "volume limit disagrees with the stratum sum");
  return vol;
}

Motive standard_volume(const StandardDomain& dom) {
  Motive prod(1);
  for (auto& f : dom.factors) {
    switch (f.kind) {
      case StandardDomain::Factor::Kind::ClosedPolydisc:
        if (f.n < 1) raise(ErrorCode::ValidationError, "polydisc dimension must be >= 1");
        break; // factor 1
      case StandardDomain::Factor::Kind::OpenPolydisc:
        if (f.n < 1) raise(ErrorCode::ValidationError, "polydisc dimension must be >= 1");
        prod *= Motive::lefschetz_pow(-f.n);
        break;
      case StandardDomain::Factor::Kind::PuncturedClosedPolydisc:
        if (f.n < 1) raise(ErrorCode::ValidationError, "polydisc dimension must be >= 1");
        prod *= Motive(0);
        break;
      case StandardDomain::Factor::Kind::Annulus: {
        if (f.p < 1 || f.q < 1)
          raise(ErrorCode::ValidationError, "annulus valuation must be positive");
        if (std::gcd(f.p, f.q) != 1)
          raise(ErrorCode::ValidationError, "annulus valuation must be in lowest terms");
        prod *= Motive(0);
        break;
      }
    }
  }
  return prod;
}

} // namespace motzeta
