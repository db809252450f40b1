#pragma once

#include <cstdint>
#include <string>

#include "mathrec/fit/rational.hpp"

namespace mathrec::fit {

struct FitParams {
  std::int64_t height = 0;      // H0, pixels
  std::int64_t width = 0;       // W0, pixels
  std::int64_t patch = 0;       // p, patch side
  std::int64_t max_patches = 0; // N_max

  void validate() const;  // throws DomainError("InvalidParams")
};

struct ResolutionPlan {
  Rational s_star;           // exact maximum feasible scale, capped at 1
  std::int64_t grid_h = 0;   // ⌈s*·H0/p⌉
  std::int64_t grid_w = 0;   // ⌈s*·W0/p⌉
  std::int64_t target_h = 0; // p · grid_h
  std::int64_t target_w = 0; // p · grid_w
  bool resized = false;      // H0·W0 > p²·N_max
  Rational mdr_literal;      // 1 − H*W*/(H0W0), clamped at 0; 0 when not resized
  Rational mdr_rounding;     // 1 − s*²H0W0/(H*W*): the ceiling-rounding surplus

  std::string to_json() const;
};

// Largest scale whose ceiling patch grid fits the budget, found by exact
// enumeration of grid rows (g_w = ⌊N_max/g_h⌋). The grid always satisfies
// grid_h·grid_w ≤ N_max, including the degenerate near-budget cases where
// the unpadded image itself would not.
ResolutionPlan plan_resolution(const FitParams& params);

// True when ⌈s·H0/p⌉·⌈s·W0/p⌉ ≤ N_max, evaluated in exact arithmetic.
bool scale_is_feasible(const FitParams& params, const Rational& scale);

// (p−1)(H0+W0)/(H0·W0): worst-case rounding distortion for an H0×W0 image.
Rational mdr_bound(std::int64_t patch, std::int64_t height, std::int64_t width);

// 2(p−1)/H0: the square-image form; equals mdr_bound(p, H0, H0) exactly.
Rational mdr_bound_square(std::int64_t patch, std::int64_t height);

}  // namespace mathrec::fit
