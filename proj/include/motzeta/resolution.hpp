#ifndef MOTZETA_RESOLUTION_HPP
#define MOTZETA_RESOLUTION_HPP

#include <map>
#include <optional>
#include <vector>

#include "motzeta/series.hpp"

namespace motzeta {

/**
 * Normal-crossings resolution data: components with multiplicities N_i and
 * weights alpha_i, and the classes of the (covered) open strata indexed by
 * nonempty component subsets. Strata for absent subsets default to zero.
 */
struct ResolutionDatum {
  struct Component {
    long N = 1;     // multiplicity, >= 1
    long alpha = 1; // weight, >= 1
  };
  std::vector<Component> components;
  std::map<std::vector<int>, Motive> strata;      // sorted index subsets
  std::map<std::vector<int>, long> covering_order; // optional tags = gcd(N_i)
  int reldim = 1;                                  // d
};

/** Validates subset indexing, N/alpha positivity, and covering-order tags. */
void validate_resolution(const ResolutionDatum& res);

/** sum over nonempty I of (1 - L)^(|I|-1) * strata[I]. */
Motive nearby_cycles(const ResolutionDatum& res);

/**
 * Closed-form generating series whose T^m coefficient is
 * L^(-d) sum_I (L-1)^(|I|-1) strata[I] * sum_{k_i>=1, sum k_i N_i = m} L^(-sum k_i alpha_i):
 * assembled as L^(-d) sum_I (L-1)^(|I|-1) strata[I] prod_i gen(-alpha_i, N_i).
 */
RationalSeries volume_series(const ResolutionDatum& res);

/**
 * Minus the limit of volume_series; checked internally against
 * L^(-d) * nearby_cycles, which it equals identically.
 */
Motive motivic_volume(const ResolutionDatum& res);

/** Product of standard pieces with known motivic volumes. */
struct StandardDomain {
  struct Factor {
    enum class Kind {
      ClosedPolydisc,          // value 1
      OpenPolydisc,            // value L^(-n)
      PuncturedClosedPolydisc, // value 0
      Annulus,                 // value 0
    };
    Kind kind = Kind::ClosedPolydisc;
    int n = 1;       // polydisc dimension
    long p = 1, q = 1; // annulus valuation p/q in lowest terms
  };
  std::vector<Factor> factors;
};

Motive standard_volume(const StandardDomain& dom);

} // namespace motzeta

#endif
