#pragma once

#include <cstdint>
#include <span>

namespace mathrec::kernels {

// Token-level Levenshtein distance and LCS length over interned token ids.
// Scalar reference kernels plus AVX2 anti-diagonal variants; the dispatched
// entry points pick an implementation once per process based on cpuid.

std::int64_t levenshtein(std::span<const std::int32_t> a, std::span<const std::int32_t> b);
std::int64_t lcs_length(std::span<const std::int32_t> a, std::span<const std::int32_t> b);

std::int64_t levenshtein_scalar(std::span<const std::int32_t> a, std::span<const std::int32_t> b);
std::int64_t lcs_scalar(std::span<const std::int32_t> a, std::span<const std::int32_t> b);

#if defined(__x86_64__) || defined(_M_X64)
std::int64_t levenshtein_avx2(std::span<const std::int32_t> a, std::span<const std::int32_t> b);
std::int64_t lcs_avx2(std::span<const std::int32_t> a, std::span<const std::int32_t> b);
#endif

bool avx2_available();

enum class Backend { Auto, Scalar, Avx2 };

// Overrides dispatch (tests and the CLI's --kernel flag). Backend::Avx2 on a
// machine without AVX2 falls back to scalar.
void force_backend(Backend backend);
Backend active_backend();  // the backend calls will actually use

}  // namespace mathrec::kernels
