#include <algorithm>
#include <atomic>
#include <vector>

#include "mathrec/metrics/kernels.hpp"

namespace mathrec::kernels {

std::int64_t levenshtein_scalar(std::span<const std::int32_t> a,
                                std::span<const std::int32_t> b) {
  const std::size_t n = a.size(), m = b.size();
  if (n == 0) return static_cast<std::int64_t>(m);
  if (m == 0) return static_cast<std::int64_t>(n);
  // Single-row DP over the shorter side.
  if (m > n) return levenshtein_scalar(b, a);
  std::vector<std::int32_t> row(m + 1);
  for (std::size_t j = 0; j <= m; ++j) row[j] = static_cast<std::int32_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    std::int32_t diag = row[0];
    row[0] = static_cast<std::int32_t>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      std::int32_t up = row[j];
      std::int32_t cost = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({row[j - 1] + 1, up + 1, cost});
      diag = up;
    }
  }
  return row[m];
}

std::int64_t lcs_scalar(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
  const std::size_t n = a.size(), m = b.size();
  if (n == 0 || m == 0) return 0;
  if (m > n) return lcs_scalar(b, a);
  std::vector<std::int32_t> row(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    std::int32_t diag = 0;
    for (std::size_t j = 1; j <= m; ++j) {
      std::int32_t up = row[j];
      row[j] = a[i - 1] == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[m];
}

namespace {

std::atomic<Backend> g_forced{Backend::Auto};

Backend resolve() {
  Backend forced = g_forced.load(std::memory_order_relaxed);
  if (forced == Backend::Scalar) return Backend::Scalar;
#if defined(__x86_64__) || defined(_M_X64)
  if (avx2_available()) return Backend::Avx2;
#endif
  return Backend::Scalar;
}

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

void force_backend(Backend backend) { g_forced.store(backend, std::memory_order_relaxed); }

Backend active_backend() { return resolve(); }

std::int64_t levenshtein(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
#if defined(__x86_64__) || defined(_M_X64)
  if (resolve() == Backend::Avx2) return levenshtein_avx2(a, b);
#endif
  return levenshtein_scalar(a, b);
}

std::int64_t lcs_length(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
#if defined(__x86_64__) || defined(_M_X64)
  if (resolve() == Backend::Avx2) return lcs_avx2(a, b);
#endif
  return lcs_scalar(a, b);
}

}  // namespace mathrec::kernels
