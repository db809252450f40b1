#include "mathrec/metrics/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <vector>

namespace mathrec::kernels {

namespace {

// Anti-diagonal DP: every cell on diagonal d = i+j depends only on diagonals
// d-1 and d-2, so the inner loop vectorizes. Buffers are indexed by i; for
// diagonal d, cell (i, d-i) lives at index i.
struct DiagBuffers {
  std::vector<std::int32_t> prev2, prev1, cur;
  std::vector<std::int32_t> b_rev;

  DiagBuffers(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
    prev2.assign(a.size() + 9, 0);
    prev1.assign(a.size() + 9, 0);
    cur.assign(a.size() + 9, 0);
    b_rev.assign(b.rbegin(), b.rend());
    b_rev.resize(b.size() + 8, 0);
  }
};

}  // namespace

__attribute__((target("avx2"))) std::int64_t levenshtein_avx2(
    std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
  const std::int64_t n = static_cast<std::int64_t>(a.size());
  const std::int64_t m = static_cast<std::int64_t>(b.size());
  if (n < 8 || m < 8) return levenshtein_scalar(a, b);

  DiagBuffers buf(a, b);
  const __m256i ones = _mm256_set1_epi32(1);

  for (std::int64_t d = 0; d <= n + m; ++d) {
    const std::int64_t lo = std::max<std::int64_t>(1, d - m);
    const std::int64_t hi = std::min(n, d - 1);

    if (d <= m) buf.cur[0] = static_cast<std::int32_t>(d);
    if (d <= n) buf.cur[d] = static_cast<std::int32_t>(d);

    std::int64_t i = lo;
    for (; i + 7 <= hi; i += 8) {
      __m256i p1m1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&buf.prev1[i - 1]));
      __m256i p1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&buf.prev1[i]));
      __m256i p2m1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&buf.prev2[i - 1]));
      __m256i av = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&a[i - 1]));
      __m256i bv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&buf.b_rev[m - d + i]));
      __m256i eq = _mm256_cmpeq_epi32(av, bv);  // -1 where tokens match
      __m256i sub = _mm256_add_epi32(p2m1, _mm256_add_epi32(ones, eq));
      __m256i ins_del = _mm256_add_epi32(_mm256_min_epi32(p1m1, p1), ones);
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(&buf.cur[i]),
                          _mm256_min_epi32(sub, ins_del));
    }
    for (; i <= hi; ++i) {
      std::int32_t cost = buf.prev2[i - 1] + (a[i - 1] == b[d - i - 1] ? 0 : 1);
      buf.cur[i] = std::min({buf.prev1[i - 1] + 1, buf.prev1[i] + 1, cost});
    }

    std::swap(buf.prev2, buf.prev1);
    std::swap(buf.prev1, buf.cur);
  }
  return buf.prev1[n];  // diagonal n+m ended up in prev1 after the final swap
}

__attribute__((target("avx2"))) std::int64_t lcs_avx2(std::span<const std::int32_t> a,
                                                      std::span<const std::int32_t> b) {
  const std::int64_t n = static_cast<std::int64_t>(a.size());
  const std::int64_t m = static_cast<std::int64_t>(b.size());
  if (n < 8 || m < 8) return lcs_scalar(a, b);

  DiagBuffers buf(a, b);
  const __m256i ones = _mm256_set1_epi32(1);

  for (std::int64_t d = 0; d <= n + m; ++d) {
    const std::int64_t lo = std::max<std::int64_t>(1, d - m);
    const std::int64_t hi = std::min(n, d - 1);

    if (d <= m) buf.cur[0] = 0;
    if (d <= n) buf.cur[d] = 0;

    std::int64_t i = lo;
    for (; i + 7 <= hi; i += 8) {
      __m256i p1m1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&buf.prev1[i - 1]));
      __m256i p1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&buf.prev1[i]));
      __m256i p2m1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&buf.prev2[i - 1]));
      __m256i av = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&a[i - 1]));
      __m256i bv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&buf.b_rev[m - d + i]));
      __m256i eq = _mm256_cmpeq_epi32(av, bv);
      __m256i take = _mm256_add_epi32(p2m1, ones);
      __m256i skip = _mm256_max_epi32(p1m1, p1);
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(&buf.cur[i]),
                          _mm256_blendv_epi8(skip, take, eq));
    }
    for (; i <= hi; ++i) {
      buf.cur[i] = a[i - 1] == b[d - i - 1]
                       ? buf.prev2[i - 1] + 1
                       : std::max(buf.prev1[i - 1], buf.prev1[i]);
    }

    std::swap(buf.prev2, buf.prev1);
    std::swap(buf.prev1, buf.cur);
  }
  return buf.prev1[n];
}

}  // namespace mathrec::kernels

#endif  // x86_64
