#include "motzeta/jet_kernel.hpp"

#include <cstring>

#include "motzeta/error.hpp"

namespace motzeta {

JetPoly JetPoly::from(const IntPolynomial& f, std::uint16_t q) {
  if (q < 2) raise(ErrorCode::ValidationError, "field size must be at least 2");
  JetPoly jp;
  jp.nvars = f.nvars();
  jp.q = q;
  for (auto& [e, c] : f.terms()) {
    Int r = c % q;
    if (r < 0) r += q;
    if (r == 0) continue;
    JetPoly::Mono m;
    m.coeff = static_cast<std::uint16_t>(r.get_ui());
    m.exps.reserve(e.size());
    for (unsigned x : e) {
      if (x > 255) raise(ErrorCode::ValidationError, "monomial exponent too large");
      m.exps.push_back(static_cast<std::uint8_t>(x));
    }
    jp.monos.push_back(std::move(m));
  }
  return jp;
}

namespace {

void scalar_kernel(const JetPoly& f, const std::uint16_t* arcs, int J, int lanes,
                   std::uint16_t* out) {
  const std::uint32_t q = f.q;
  std::vector<std::uint32_t> acc(static_cast<size_t>(J));
  std::vector<std::uint32_t> tmp(static_cast<size_t>(J));
  std::vector<std::uint32_t> nxt(static_cast<size_t>(J));
  for (int lane = 0; lane < lanes; ++lane) {
    std::fill(acc.begin(), acc.end(), 0u);
    for (auto& mono : f.monos) {
      std::fill(tmp.begin(), tmp.end(), 0u);
      tmp[0] = mono.coeff;
      for (int v = 0; v < f.nvars; ++v) {
        const std::uint16_t* av = arcs + (static_cast<size_t>(v) * J) * lanes;
        for (std::uint8_t rep = 0; rep < mono.exps[v]; ++rep) {
          std::fill(nxt.begin(), nxt.end(), 0u);
          for (int i = 0; i < J; ++i) {
            if (tmp[i] == 0) continue;
            for (int j = 0; i + j < J; ++j)
              nxt[i + j] += tmp[i] * av[static_cast<size_t>(j) * lanes + lane];
          }
          for (int i = 0; i < J; ++i) tmp[i] = nxt[i] % q;
        }
      }
      for (int i = 0; i < J; ++i) acc[i] += tmp[i];
    }
    for (int i = 0; i < J; ++i)
      out[static_cast<size_t>(i) * lanes + lane] = static_cast<std::uint16_t>(acc[i] % q);
  }
}

} // namespace

JetKernel scalar_jet_kernel() { return {"scalar", 1, &scalar_kernel}; }

#if MOTZETA_HAVE_AVX2_TU
JetKernel avx2_jet_kernel(); // defined in the AVX2 translation unit
bool avx2_supported();
#endif

std::vector<JetKernel> available_jet_kernels() {
  std::vector<JetKernel> ks{scalar_jet_kernel()};
#if MOTZETA_HAVE_AVX2_TU
  if (avx2_supported()) ks.push_back(avx2_jet_kernel());
#endif
  return ks;
}

JetKernel select_jet_kernel() {
  auto ks = available_jet_kernels();
  return ks.back();
}

void jet_eval_single(const JetPoly& f, const std::uint16_t* coeffs, int J,
                     std::uint16_t* out) {
  scalar_kernel(f, coeffs, J, 1, out);
}

} // namespace motzeta
