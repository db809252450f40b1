#include <cmath>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "mathrec/metrics/metrics.hpp"

#include "mathrec/latex/ops.hpp"
#include "mathrec/latex/parser.hpp"
#include "mathrec/latex/token.hpp"
#include "mathrec/metrics/kernels.hpp"
#include "nlohmann/json.hpp"

namespace mathrec::metrics {

TokenStream tokenize(const std::string& latex_input) {
  TokenStream out;
  for (const auto& tok : latex::lex(latex_input)) out.push_back(tok.surface());
  return out;
}

namespace {

// Interns both streams into int32 ids so the DP kernels work on plain
// integer lanes.
std::pair<std::vector<std::int32_t>, std::vector<std::int32_t>> intern(
    const TokenStream& a, const TokenStream& b) {
  std::unordered_map<std::string, std::int32_t> ids;
  auto conv = [&](const TokenStream& s) {
    std::vector<std::int32_t> out;
    out.reserve(s.size());
    for (const auto& t : s) {
      auto [it, _] = ids.emplace(t, static_cast<std::int32_t>(ids.size()));
      out.push_back(it->second);
    }
    return out;
  };
  auto ia = conv(a);
  auto ib = conv(b);
  return {std::move(ia), std::move(ib)};
}

double harmonic(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

// n-gram multiset counts keyed by the id sequence.
std::map<std::vector<std::int32_t>, std::int64_t> ngram_counts(
    const std::vector<std::int32_t>& ids, int n) {
  std::map<std::vector<std::int32_t>, std::int64_t> counts;
  if (static_cast<int>(ids.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= ids.size(); ++i) {
    counts[std::vector<std::int32_t>(ids.begin() + i, ids.begin() + i + n)] += 1;
  }
  return counts;
}

std::int64_t clipped_matches(const std::map<std::vector<std::int32_t>, std::int64_t>& pred,
                             const std::map<std::vector<std::int32_t>, std::int64_t>& ref) {
  std::int64_t total = 0;
  for (const auto& [gram, count] : pred) {
    auto it = ref.find(gram);
    if (it != ref.end()) total += std::min(count, it->second);
  }
  return total;
}

}  // namespace

double bleu(const TokenStream& pred, const TokenStream& ref, int max_n) {
  if (max_n < 1) max_n = 1;
  if (pred.empty()) return 0.0;
  auto [pid, rid] = intern(pred, ref);

  double log_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    auto pc = ngram_counts(pid, n);
    auto rc = ngram_counts(rid, n);
    std::int64_t matched = clipped_matches(pc, rc);
    std::int64_t total = static_cast<int>(pid.size()) >= n
                             ? static_cast<std::int64_t>(pid.size()) - n + 1
                             : 0;
    if (matched == 0) {
      matched = 1;
      total += 1;
    }
    log_sum += std::log(static_cast<double>(matched) / static_cast<double>(total));
  }
  double brevity = 1.0;
  if (pred.size() < ref.size()) {
    brevity = std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(pred.size()));
  }
  return brevity * std::exp(log_sum / max_n);
}

PrF1 rouge_n(const TokenStream& pred, const TokenStream& ref, int n) {
  auto [pid, rid] = intern(pred, ref);
  auto pc = ngram_counts(pid, n);
  auto rc = ngram_counts(rid, n);
  std::int64_t matched = clipped_matches(pc, rc);
  std::int64_t pred_total = static_cast<int>(pid.size()) >= n
                                ? static_cast<std::int64_t>(pid.size()) - n + 1
                                : 0;
  std::int64_t ref_total = static_cast<int>(rid.size()) >= n
                               ? static_cast<std::int64_t>(rid.size()) - n + 1
                               : 0;
  PrF1 out;
  out.recall = ref_total == 0 ? 0.0 : static_cast<double>(matched) / ref_total;
  out.precision = pred_total == 0 ? 0.0 : static_cast<double>(matched) / pred_total;
  out.f1 = harmonic(out.precision, out.recall);
  return out;
}

PrF1 rouge_l(const TokenStream& pred, const TokenStream& ref) {
  auto [pid, rid] = intern(pred, ref);
  std::int64_t l = kernels::lcs_length(pid, rid);
  PrF1 out;
  out.recall = rid.empty() ? 0.0 : static_cast<double>(l) / rid.size();
  out.precision = pid.empty() ? 0.0 : static_cast<double>(l) / pid.size();
  out.f1 = harmonic(out.precision, out.recall);
  return out;
}

std::int64_t edit_distance(const TokenStream& pred, const TokenStream& ref) {
  auto [pid, rid] = intern(pred, ref);
  return kernels::levenshtein(pid, rid);
}

std::vector<std::string> visible_tokens(const std::string& latex_input) {
  auto parsed = latex::parse(latex_input, latex::ParseMode::Lenient);
  auto canon = latex::render(latex::normalize(parsed.root));
  std::vector<std::string> out;
  for (const auto& tok : latex::lex(canon)) {
    if (tok.kind == latex::TokenKind::OpenBrace || tok.kind == latex::TokenKind::CloseBrace) {
      continue;
    }
    out.push_back(tok.surface());
  }
  return out;
}

RecallF1 cdm_lite(const std::string& pred_latex, const std::string& ref_latex) {
  auto pred = visible_tokens(pred_latex);
  auto ref = visible_tokens(ref_latex);
  RecallF1 out;
  if (pred.empty() && ref.empty()) {
    out.recall = out.f1 = 1.0;  // identical (empty) canonical forms
    return out;
  }
  auto [pid, rid] = intern(pred, ref);
  std::int64_t matched = kernels::lcs_length(pid, rid);
  double recall = ref.empty() ? 0.0 : static_cast<double>(matched) / ref.size();
  double precision = pred.empty() ? 0.0 : static_cast<double>(matched) / pred.size();
  out.recall = recall;
  out.f1 = harmonic(precision, recall);
  return out;
}

SampleScore score_sample(const std::string& pred_latex, const std::string& ref_latex) {
  auto pred = tokenize(pred_latex);
  auto ref = tokenize(ref_latex);
  SampleScore s;
  s.bleu = bleu(pred, ref);
  s.rouge1 = rouge_n(pred, ref, 1);
  s.rouge2 = rouge_n(pred, ref, 2);
  s.rougeL = rouge_l(pred, ref);
  s.edit_distance = edit_distance(pred, ref);
  s.cdm_lite = cdm_lite(pred_latex, ref_latex);
  return s;
}

const char* tier_name(Tier tier) {
  switch (tier) {
    case Tier::Easy: return "Easy";
    case Tier::Moderate: return "Moderate";
    case Tier::Complex: return "Complex";
  }
  return "?";
}

std::optional<Tier> tier_from_name(const std::string& name) {
  if (name == "Easy" || name == "easy") return Tier::Easy;
  if (name == "Moderate" || name == "moderate") return Tier::Moderate;
  if (name == "Complex" || name == "complex") return Tier::Complex;
  return std::nullopt;
}

namespace {

struct Accumulator {
  std::size_t count = 0;
  double bleu = 0, r1r = 0, r1p = 0, r1f = 0, r2r = 0, r2p = 0, r2f = 0;
  double rlr = 0, rlp = 0, rlf = 0, edit = 0, cdmr = 0, cdmf = 0;

  void add(const SampleScore& s) {
    ++count;
    bleu += s.bleu;
    r1r += s.rouge1.recall; r1p += s.rouge1.precision; r1f += s.rouge1.f1;
    r2r += s.rouge2.recall; r2p += s.rouge2.precision; r2f += s.rouge2.f1;
    rlr += s.rougeL.recall; rlp += s.rougeL.precision; rlf += s.rougeL.f1;
    edit += static_cast<double>(s.edit_distance);
    cdmr += s.cdm_lite.recall;
    cdmf += s.cdm_lite.f1;
  }

  TierReport mean(const std::string& name) const {
    TierReport r;
    r.tier = name;
    r.count = count;
    if (count == 0) return r;
    double k = static_cast<double>(count);
    r.bleu = bleu / k;
    r.rouge1 = {r1r / k, r1p / k, r1f / k};
    r.rouge2 = {r2r / k, r2p / k, r2f / k};
    r.rougeL = {rlr / k, rlp / k, rlf / k};
    r.avg_edit = edit / k;
    r.cdm_lite = {cdmr / k, cdmf / k};
    return r;
  }
};

}  // namespace

Report aggregate(const std::vector<std::pair<SampleScore, Tier>>& scored) {
  Accumulator per_tier[3];
  Accumulator overall;
  for (const auto& [score, tier] : scored) {
    per_tier[static_cast<int>(tier)].add(score);
    overall.add(score);
  }
  Report report;
  for (Tier t : {Tier::Easy, Tier::Moderate, Tier::Complex}) {
    const auto& acc = per_tier[static_cast<int>(t)];
    if (acc.count > 0) report.tiers.push_back(acc.mean(tier_name(t)));
  }
  report.overall = overall.mean("Overall");
  return report;
}

namespace {

nlohmann::json prf_json(const PrF1& v) {
  return {{"recall", v.recall}, {"precision", v.precision}, {"f1", v.f1}};
}

nlohmann::json tier_json(const TierReport& r) {
  return {{"tier", r.tier},
          {"count", r.count},
          {"rouge1", prf_json(r.rouge1)},
          {"rouge2", prf_json(r.rouge2)},
          {"rougeL", prf_json(r.rougeL)},
          {"bleu", r.bleu},
          {"avg_edit", r.avg_edit},
          {"cdm_lite", {{"recall", r.cdm_lite.recall}, {"f1", r.cdm_lite.f1}}}};
}

}  // namespace

std::string report_to_json(const Report& report) {
  nlohmann::json j;
  j["tiers"] = nlohmann::json::array();
  for (const auto& t : report.tiers) j["tiers"].push_back(tier_json(t));
  j["overall"] = tier_json(report.overall);
  return j.dump();
}

std::string report_to_text(const Report& report) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "Tier" << std::right << std::setw(8) << "Count"
      << std::setw(10) << "ROUGE-1" << std::setw(10) << "ROUGE-2" << std::setw(10) << "ROUGE-L"
      << std::setw(10) << "BLEU" << std::setw(14) << "AvgEditDist" << std::setw(12)
      << "CDM-lite" << '\n';
  auto row = [&](const TierReport& r) {
    out << std::left << std::setw(10) << r.tier << std::right << std::setw(8) << r.count
        << std::fixed << std::setprecision(4) << std::setw(10) << r.rouge1.f1 << std::setw(10)
        << r.rouge2.f1 << std::setw(10) << r.rougeL.f1 << std::setw(10) << r.bleu
        << std::setw(14) << std::setprecision(2) << r.avg_edit << std::setw(12)
        << std::setprecision(4) << r.cdm_lite.f1 << '\n';
    out.unsetf(std::ios::fixed);
  };
  for (const auto& t : report.tiers) row(t);
  row(report.overall);
  return out.str();
}

}  // namespace mathrec::metrics
