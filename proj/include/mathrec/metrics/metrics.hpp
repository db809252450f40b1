#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mathrec::metrics {

// All string metrics share the math lexer's token stream (surface lexemes,
// comments stripped, whitespace collapsed).
using TokenStream = std::vector<std::string>;

TokenStream tokenize(const std::string& latex_input);

struct PrF1 {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

struct RecallF1 {
  double recall = 0.0;
  double f1 = 0.0;
};

// Geometric mean of clipped n-gram precisions (uniform weights) times the
// brevity penalty. Orders with zero matches add 1 to both the match and
// total count for that order only. An empty prediction scores 0.
double bleu(const TokenStream& pred, const TokenStream& ref, int max_n = 4);

PrF1 rouge_n(const TokenStream& pred, const TokenStream& ref, int n);
PrF1 rouge_l(const TokenStream& pred, const TokenStream& ref);

std::int64_t edit_distance(const TokenStream& pred, const TokenStream& ref);

// Canonicalization-based structural match (a rendering-free approximation):
// both sides go through lenient parse -> normalize -> visible-token
// extraction (brace tokens dropped), then LCS matching.
RecallF1 cdm_lite(const std::string& pred_latex, const std::string& ref_latex);

// Visible tokens of one side, exposed for tests.
std::vector<std::string> visible_tokens(const std::string& latex_input);

struct SampleScore {
  double bleu = 0.0;
  PrF1 rouge1, rouge2, rougeL;
  std::int64_t edit_distance = 0;
  RecallF1 cdm_lite;
};

SampleScore score_sample(const std::string& pred_latex, const std::string& ref_latex);

enum class Tier { Easy, Moderate, Complex };

const char* tier_name(Tier tier);
std::optional<Tier> tier_from_name(const std::string& name);

struct TierReport {
  std::string tier;  // "Easy" / "Moderate" / "Complex" / "Overall"
  std::size_t count = 0;
  double bleu = 0.0;
  PrF1 rouge1, rouge2, rougeL;
  double avg_edit = 0.0;
  RecallF1 cdm_lite;
};

struct Report {
  std::vector<TierReport> tiers;  // fixed order, only non-empty tiers
  TierReport overall;
};

Report aggregate(const std::vector<std::pair<SampleScore, Tier>>& scored);

std::string report_to_json(const Report& report);
// Plain-text table: one row per tier plus Overall, ROUGE columns show f1.
std::string report_to_text(const Report& report);

}  // namespace mathrec::metrics
