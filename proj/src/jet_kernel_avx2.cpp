// AVX2 variant of the batched jet-evaluation kernel: 16 lanes of uint16
// residues per vector. Compiled with -mavx2 in this translation unit only;
// callers must check avx2_supported() first (runtime CPU detection), so the
// rest of the library stays portable.

#include "motzeta/jet_kernel.hpp"

#if MOTZETA_HAVE_AVX2_TU

#include <immintrin.h>

#include "motzeta/error.hpp"

namespace motzeta {

namespace {

constexpr int kLanes = 16;
constexpr int kMaxJ = 64;

/** r = v mod q for v < 2^15, via Barrett multiply-high plus one conditional
 *  subtract (the unsigned-min trick). */
inline __m256i mod_q(__m256i v, __m256i mulconst, __m256i qvec) {
  __m256i t = _mm256_mulhi_epu16(v, mulconst);
  __m256i r = _mm256_sub_epi16(v, _mm256_mullo_epi16(t, qvec));
  return _mm256_min_epu16(r, _mm256_sub_epi16(r, qvec));
}

void avx2_kernel(const JetPoly& f, const std::uint16_t* arcs, int J, int lanes,
                 std::uint16_t* out) {
  if (lanes != kLanes || J > kMaxJ)
    raise(ErrorCode::ValidationError, "avx2 kernel requires 16 lanes and J <= 64");
  const std::uint16_t q = f.q;
  // mulconst = floor(2^16 / q): mulhi(v, mulconst) = floor(v/q) or one less,
  // leaving a remainder in [0, 2q) fixed by the conditional subtract.
  const __m256i mulconst = _mm256_set1_epi16(static_cast<short>(65536u / q));
  const __m256i qvec = _mm256_set1_epi16(static_cast<short>(q));

  __m256i acc[kMaxJ], tmp[kMaxJ], nxt[kMaxJ];
  for (int i = 0; i < J; ++i) acc[i] = _mm256_setzero_si256();

  for (auto& mono : f.monos) {
    tmp[0] = _mm256_set1_epi16(static_cast<short>(mono.coeff));
    for (int i = 1; i < J; ++i) tmp[i] = _mm256_setzero_si256();
    for (int v = 0; v < f.nvars; ++v) {
      const std::uint16_t* av = arcs + static_cast<size_t>(v) * J * kLanes;
      for (std::uint8_t rep = 0; rep < mono.exps[v]; ++rep) {
        for (int i = 0; i < J; ++i) nxt[i] = _mm256_setzero_si256();
        for (int i = 0; i < J; ++i) {
          // Entries stay < q <= 7, so each product is < 49 and a sum of at
          // most 64 of them stays well below 2^15: exact in uint16 lanes.
          for (int j = 0; i + j < J; ++j) {
            __m256i a = _mm256_loadu_si256(
                reinterpret_cast<const __m256i*>(av + static_cast<size_t>(j) * kLanes));
            nxt[i + j] = _mm256_add_epi16(nxt[i + j], _mm256_mullo_epi16(tmp[i], a));
          }
        }
        for (int i = 0; i < J; ++i) tmp[i] = mod_q(nxt[i], mulconst, qvec);
      }
    }
    for (int i = 0; i < J; ++i)
      acc[i] = mod_q(_mm256_add_epi16(acc[i], tmp[i]), mulconst, qvec);
  }
  for (int i = 0; i < J; ++i)
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + static_cast<size_t>(i) * kLanes),
                        acc[i]);
}

} // namespace

bool avx2_supported() { return __builtin_cpu_supports("avx2"); }

JetKernel avx2_jet_kernel() { return {"avx2", kLanes, &avx2_kernel}; }

} // namespace motzeta

#endif
