#ifndef MOTZETA_JET_KERNEL_HPP
#define MOTZETA_JET_KERNEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "motzeta/polynomial.hpp"

namespace motzeta {

/** A polynomial prepared for mod-q truncated power-series evaluation. */
struct JetPoly {
  struct Mono {
    std::uint16_t coeff;             // in [0, q)
    std::vector<std::uint8_t> exps;  // one exponent per variable
  };
  int nvars = 0;
  std::uint16_t q = 3;
  std::vector<Mono> monos;

  static JetPoly from(const IntPolynomial& f, std::uint16_t q);
};

/**
 * Batched truncated evaluation: for each lane, computes the first J
 * t-coefficients of f(arc) over F_q.
 *
 * Input layout:  arcs[(v*J + j)*lanes + lane] = j-th coefficient of
 * variable v, in [0, q). Output: out[j*lanes + lane], in [0, q).
 */
using JetKernelFn = void (*)(const JetPoly& f, const std::uint16_t* arcs, int J,
                             int lanes, std::uint16_t* out);

struct JetKernel {
  const char* name;
  int preferred_lanes; // batch width the variant is tuned for
  JetKernelFn fn;
};

/** Portable reference implementation (any J, any lane count). */
JetKernel scalar_jet_kernel();

/** Widest variant usable on this machine (runtime feature detection). */
JetKernel select_jet_kernel();

/** Every variant usable on this machine, reference first. */
std::vector<JetKernel> available_jet_kernels();

/** Convenience single-arc evaluation with the reference kernel. */
void jet_eval_single(const JetPoly& f, const std::uint16_t* coeffs, int J,
                     std::uint16_t* out);

} // namespace motzeta

#endif
