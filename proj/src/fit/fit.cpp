#include "mathrec/fit/fit.hpp"

#include "nlohmann/json.hpp"

namespace mathrec::fit {

void FitParams::validate() const {
  if (height <= 0 || width <= 0 || patch <= 0 || max_patches <= 0) {
    throw DomainError("InvalidParams", "all fit parameters must be positive");
  }
}

bool scale_is_feasible(const FitParams& params, const Rational& scale) {
  if (scale <= Rational(0)) return false;
  std::int64_t gh = (Rational(params.height) * scale / Rational(params.patch)).ceil();
  std::int64_t gw = (Rational(params.width) * scale / Rational(params.patch)).ceil();
  if (gh < 1) gh = 1;
  if (gw < 1) gw = 1;
  return static_cast<__int128>(gh) * gw <= params.max_patches;
}

ResolutionPlan plan_resolution(const FitParams& params) {
  params.validate();
  const Rational one(1);

  // Enumerate grid rows; columns take the budget remainder. The candidate
  // scale for a pair is min(g_h·p/H0, g_w·p/W0), capped at 1.
  Rational best(0);
  for (std::int64_t gh = 1; gh <= params.max_patches; ++gh) {
    std::int64_t gw = params.max_patches / gh;
    Rational s_h(gh * params.patch, params.height);
    Rational s_w(gw * params.patch, params.width);
    Rational s = s_h < s_w ? s_h : s_w;
    if (s > one) s = one;
    if (s > best) best = s;
    if (best == one) break;
  }

  ResolutionPlan plan;
  plan.s_star = best;
  plan.grid_h = (Rational(params.height) * best / Rational(params.patch)).ceil();
  plan.grid_w = (Rational(params.width) * best / Rational(params.patch)).ceil();
  if (plan.grid_h < 1) plan.grid_h = 1;
  if (plan.grid_w < 1) plan.grid_w = 1;
  plan.target_h = params.patch * plan.grid_h;
  plan.target_w = params.patch * plan.grid_w;

  const Rational area(params.height * params.width);
  const Rational budget_area(params.patch * params.patch * params.max_patches);
  plan.resized = area > budget_area;

  const Rational target_area(plan.target_h * plan.target_w);
  if (plan.resized) {
    Rational literal = Rational(1) - target_area / area;
    plan.mdr_literal = literal < Rational(0) ? Rational(0) : literal;
  } else {
    plan.mdr_literal = Rational(0);
  }
  plan.mdr_rounding = Rational(1) - plan.s_star * plan.s_star * area / target_area;
  return plan;
}

Rational mdr_bound(std::int64_t patch, std::int64_t height, std::int64_t width) {
  if (patch <= 0 || height <= 0 || width <= 0) {
    throw DomainError("InvalidParams", "mdr_bound arguments must be positive");
  }
  return Rational(patch - 1) * Rational(height + width) / Rational(height * width);
}

Rational mdr_bound_square(std::int64_t patch, std::int64_t height) {
  if (patch <= 0 || height <= 0) {
    throw DomainError("InvalidParams", "mdr_bound_square arguments must be positive");
  }
  return Rational(2 * (patch - 1), height);
}

std::string ResolutionPlan::to_json() const {
  nlohmann::json j;
  j["s_star"] = s_star.to_string();
  j["grid"] = {grid_h, grid_w};
  j["target"] = {target_h, target_w};
  j["resized"] = resized;
  j["mdr_literal"] = mdr_literal.to_double();
  j["mdr_rounding"] = mdr_rounding.to_double();
  return j.dump();
}

}  // namespace mathrec::fit
