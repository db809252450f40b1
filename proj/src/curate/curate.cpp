#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

#include "mathrec/curate/curate.hpp"

#include "mathrec/common/error.hpp"
#include "mathrec/latex/ops.hpp"
#include "mathrec/latex/parser.hpp"
#include "mathrec/latex/token.hpp"
#include "nlohmann/json.hpp"

namespace mathrec::curate {

using latex::MathToken;
using latex::TokenKind;

void CurationConfig::validate() const {
  auto check_edges = [](const std::vector<int>& edges, const char* what) {
    if (edges.empty()) throw DomainError("BadConfig", std::string(what) + " edges empty");
    for (std::size_t i = 1; i < edges.size(); ++i) {
      if (edges[i] <= edges[i - 1]) {
        throw DomainError("BadConfig", std::string(what) + " edges must strictly increase");
      }
    }
  };
  check_edges(length_bucket_edges, "length bucket");
  check_edges(line_bucket_edges, "line bucket");
  if (min_tokens < 0 || max_tokens < min_tokens) {
    throw DomainError("BadConfig", "need 0 <= min_tokens <= max_tokens");
  }
}

void DifficultyProfile::validate() const {
  const double ws[] = {w_len, w_lines, w_depth, w_vocab};
  double sum = 0;
  for (double w : ws) {
    if (w < 0) throw DomainError("InvalidProfile", "weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw DomainError("InvalidProfile", "weights must sum to 1");
  }
  if (len_cap <= 0 || lines_cap <= 0 || depth_cap <= 0 || vocab_cap <= 0) {
    throw DomainError("InvalidProfile", "caps must be positive");
  }
  if (!(0.0 < easy_below && easy_below < moderate_below && moderate_below < 1.0)) {
    throw DomainError("InvalidProfile", "need 0 < easy_below < moderate_below < 1");
  }
}

// ---------------------------------------------------------------------------
// clean

namespace {

// Re-assembles a token run into a string: explicit space where the source had
// whitespace, and a guard space where command words would otherwise fuse.
std::string reassemble(const std::vector<MathToken>& tokens) {
  std::string out;
  auto ends_with_command_word = [&]() {
    if (out.empty()) return false;
    std::size_t i = out.size();
    while (i > 0 && ((out[i - 1] >= 'a' && out[i - 1] <= 'z') ||
                     (out[i - 1] >= 'A' && out[i - 1] <= 'Z'))) {
      --i;
    }
    if (i == out.size() || i == 0 || out[i - 1] != '\\') return false;
    std::size_t slashes = 0;
    while (i > 0 && out[i - 1] == '\\') { --i; ++slashes; }
    return slashes % 2 == 1;
  };
  for (const auto& tok : tokens) {
    std::string surface = tok.surface();
    if (surface.empty()) continue;
    bool first_alpha = (surface[0] >= 'a' && surface[0] <= 'z') ||
                       (surface[0] >= 'A' && surface[0] <= 'Z');
    if (!out.empty() && (tok.space_before || (first_alpha && ends_with_command_word()))) {
      out += ' ';
    }
    out += surface;
  }
  return out;
}

}  // namespace

std::string clean(const std::string& latex_input, const CurationConfig& config,
                  std::vector<std::string>* diagnostics) {
  std::set<std::string> tags(config.strip_tags.begin(), config.strip_tags.end());
  auto tokens = latex::lex(latex_input);

  bool any = false;
  for (const auto& t : tokens) {
    if (t.kind == TokenKind::Command && tags.count(t.text)) {
      any = true;
      break;
    }
  }
  if (!any) return latex_input;  // untouched inputs stay byte-identical

  const auto& tables = latex::CommandTables::defaults();
  std::vector<MathToken> out;
  bool pending_space = false;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const MathToken& t = tokens[i];
    if (t.kind != TokenKind::Command || !tags.count(t.text)) {
      out.push_back(t);
      if (pending_space) {
        out.back().space_before = true;
        pending_space = false;
      }
      ++i;
      continue;
    }
    // Skip the tag plus an optional [..] and its braced arguments. On any
    // mismatch the whole region passes through unchanged.
    std::size_t j = i + 1;
    bool matched = true;
    if (j < tokens.size() && tokens[j].kind == TokenKind::Symbol && tokens[j].text == "[") {
      std::size_t k = j + 1;
      while (k < tokens.size() &&
             !(tokens[k].kind == TokenKind::Symbol && tokens[k].text == "]")) {
        ++k;
      }
      if (k < tokens.size()) {
        j = k + 1;
      } else {
        matched = false;
      }
    }
    int args = tables.knows(t.text) ? tables.arity_of(t.text) : 1;
    for (int a = 0; matched && a < args; ++a) {
      if (j >= tokens.size() || tokens[j].kind != TokenKind::OpenBrace) {
        matched = false;
        break;
      }
      int depth = 1;
      ++j;
      while (j < tokens.size() && depth > 0) {
        if (tokens[j].kind == TokenKind::OpenBrace) ++depth;
        if (tokens[j].kind == TokenKind::CloseBrace) --depth;
        ++j;
      }
      if (depth != 0) matched = false;
    }
    if (!matched) {
      if (diagnostics) {
        diagnostics->push_back("strip tag \\" + t.text + " at byte " +
                               std::to_string(t.span.begin) + " has no matchable argument");
      }
      out.push_back(t);
      ++i;
      continue;
    }
    pending_space = pending_space || t.space_before;
    i = j;
  }
  std::string result = reassemble(out);
  // Trailing removals leave no token to carry the space.
  while (!result.empty() && result.back() == ' ') result.pop_back();
  return result;
}

// ---------------------------------------------------------------------------
// validation and stats

int measured_length(const std::string& latex_input, const CurationConfig& config) {
  if (config.length_unit == CurationConfig::LengthUnit::Chars) {
    int count = 0;
    for (unsigned char c : latex_input) {
      if ((c & 0xC0) != 0x80) ++count;  // count UTF-8 lead bytes
    }
    return count;
  }
  return static_cast<int>(latex::lex(latex_input).size());
}

ValidationResult is_valid(const std::string& cleaned_latex, const CurationConfig& config) {
  ValidationResult out;
  if (config.require_strict_parse) {
    try {
      (void)latex::parse(cleaned_latex, latex::ParseMode::Strict);
    } catch (const latex::ParseError& e) {
      out.reasons.push_back(std::string("Malformed: ") + e.what());
    }
  }
  int len = measured_length(cleaned_latex, config);
  if (len < config.min_tokens) out.reasons.push_back("TooSimplistic");
  if (len > config.max_tokens) out.reasons.push_back("TooLong");
  out.ok = out.reasons.empty();
  return out;
}

std::string dedup_key(const std::string& latex_input) {
  auto parsed = latex::parse(latex_input, latex::ParseMode::Lenient);
  std::string canon = latex::render(latex::normalize(parsed.root));
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

SampleStats compute_stats(const std::string& latex_input, const CurationConfig& config) {
  SampleStats s;
  auto tokens = latex::lex(latex_input);
  s.token_len = config.length_unit == CurationConfig::LengthUnit::Chars
                    ? measured_length(latex_input, config)
                    : static_cast<int>(tokens.size());
  auto parsed = latex::parse(std::span<const MathToken>(tokens), latex::ParseMode::Lenient);
  s.line_count = latex::count_lines(parsed.root);
  s.depth = latex::depth(parsed.root);
  std::set<std::string> names;
  for (const auto& t : tokens) {
    if (t.kind == TokenKind::Command || t.kind == TokenKind::BeginEnv) names.insert(t.text);
  }
  s.distinct_commands = static_cast<int>(names.size());
  return s;
}

double difficulty_score(const SampleStats& stats, const DifficultyProfile& profile) {
  profile.validate();
  auto saturate = [](double value, double cap) { return std::min(value / cap, 1.0); };
  return profile.w_len * saturate(stats.token_len, profile.len_cap) +
         profile.w_lines * saturate(stats.line_count, profile.lines_cap) +
         profile.w_depth * saturate(stats.depth, profile.depth_cap) +
         profile.w_vocab * saturate(stats.distinct_commands, profile.vocab_cap);
}

Tier assign_tier(double score, const DifficultyProfile& profile) {
  profile.validate();
  if (score < profile.easy_below) return Tier::Easy;
  if (score < profile.moderate_below) return Tier::Moderate;
  return Tier::Complex;
}

// ---------------------------------------------------------------------------
// buckets

std::size_t bucket_index(int value, const std::vector<int>& edges) {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (value <= edges[i]) return i;
  }
  return edges.size();
}

std::vector<std::string> bucket_labels(const std::vector<int>& edges, int domain_min) {
  std::vector<std::string> labels;
  int lo = domain_min;
  for (int edge : edges) {
    if (lo == edge) {
      labels.push_back(std::to_string(edge));
    } else {
      labels.push_back(std::to_string(lo) + "-" + std::to_string(edge));
    }
    lo = edge + 1;
  }
  labels.push_back(">" + std::to_string(edges.back()));
  return labels;
}

std::string bucket_label(int value, const std::vector<int>& edges, int domain_min) {
  return bucket_labels(edges, domain_min)[bucket_index(value, edges)];
}

StatsAccumulator::StatsAccumulator(const CurationConfig& config) : config_(config) {
  config_.validate();
  length_counts_.assign(config_.length_bucket_edges.size() + 1, 0);
  line_counts_.assign(config_.line_bucket_edges.size() + 1, 0);
}

void StatsAccumulator::add(const SampleStats& stats) {
  ++valid_;
  length_counts_[bucket_index(stats.token_len, config_.length_bucket_edges)] += 1;
  line_counts_[bucket_index(stats.line_count, config_.line_bucket_edges)] += 1;
}

void StatsAccumulator::add_invalid() { ++invalid_; }

CorpusStats StatsAccumulator::finish() const {
  CorpusStats out;
  out.by_length.labels = bucket_labels(config_.length_bucket_edges, 0);
  out.by_length.counts = length_counts_;
  out.by_lines.labels = bucket_labels(config_.line_bucket_edges, 1);
  out.by_lines.counts = line_counts_;
  out.valid = valid_;
  out.invalid = invalid_;
  return out;
}

std::string CorpusStats::to_json() const {
  nlohmann::json j;
  auto table = [](const BucketTable& t) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < t.labels.size(); ++i) {
      arr.push_back({{"bucket", t.labels[i]}, {"count", t.counts[i]}});
    }
    return arr;
  };
  j["by_length"] = table(by_length);
  j["by_lines"] = table(by_lines);
  j["valid"] = valid;
  j["invalid"] = invalid;
  j["total"] = total();
  return j.dump();
}

std::string CorpusStats::to_text() const {
  std::ostringstream out;
  auto table = [&](const char* title, const BucketTable& t) {
    out << title << '\n';
    for (std::size_t i = 0; i < t.labels.size(); ++i) {
      out << "  " << std::left << std::setw(10) << t.labels[i] << std::right << std::setw(12)
          << t.counts[i] << '\n';
    }
  };
  table("Length", by_length);
  table("Lines", by_lines);
  out << "  " << std::left << std::setw(10) << "valid" << std::right << std::setw(12) << valid
      << '\n';
  out << "  " << std::left << std::setw(10) << "invalid" << std::right << std::setw(12)
      << invalid << '\n';
  out << "  " << std::left << std::setw(10) << "total" << std::right << std::setw(12) << total()
      << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// pipeline

Pipeline::Pipeline(PipelineOptions options, std::function<void(const Sample&)> emit,
                   std::function<void(const Provenance&)> emit_drop)
    : options_(std::move(options)),
      emit_(std::move(emit)),
      emit_drop_(std::move(emit_drop)),
      stats_(options_.config) {
  options_.config.validate();
  if (options_.assign_tiers) options_.profile.validate();
}

void Pipeline::feed(Sample sample) {
  if (sample.id.empty()) throw DomainError("BadManifest", "sample with empty id");
  if (!seen_ids_.emplace(sample.id, true).second) {
    throw DomainError("DuplicateId", "duplicate sample id '" + sample.id + "'");
  }
  ++summary_.seen;

  sample.latex = clean(sample.latex, options_.config, &sample.diagnostics);

  auto validity = is_valid(sample.latex, options_.config);
  if (!validity.ok) {
    std::string reason;
    for (const auto& r : validity.reasons) {
      if (!reason.empty()) reason += "; ";
      reason += r;
    }
    emit_drop_(Provenance{sample.id, "validate", reason});
    return;
  }

  std::string key = dedup_key(sample.latex);
  auto [it, inserted] = key_to_id_.emplace(key, sample.id);
  if (!inserted) {
    emit_drop_(Provenance{sample.id, "dedup", "duplicate of '" + it->second + "'"});
    return;
  }

  sample.stats = compute_stats(sample.latex, options_.config);
  stats_.add(*sample.stats);

  if (options_.assign_tiers) {
    sample.tier = assign_tier(difficulty_score(*sample.stats, options_.profile),
                              options_.profile);
    summary_.tier_counts[metrics::tier_name(*sample.tier)] += 1;
  }
  ++summary_.kept;
  emit_(sample);
}

PipelineSummary Pipeline::finish() {
  summary_.stats = stats_.finish();
  return summary_;
}

PipelineResult run_pipeline(const std::vector<Sample>& input, const PipelineOptions& options) {
  PipelineResult result;
  Pipeline pipeline(
      options, [&](const Sample& s) { result.kept.push_back(s); },
      [&](const Provenance& p) { result.dropped.push_back(p); });
  for (const auto& s : input) pipeline.feed(s);
  result.summary = pipeline.finish();
  return result;
}

// ---------------------------------------------------------------------------
// manifest JSONL

Sample sample_from_json_line(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("BadManifest", std::string("bad JSONL line: ") + e.what());
  }
  if (!j.is_object() || !j.contains("id") || !j["id"].is_string() || !j.contains("latex") ||
      !j["latex"].is_string()) {
    throw DomainError("BadManifest", "manifest line needs string fields id and latex");
  }
  Sample s;
  s.id = j["id"].get<std::string>();
  s.latex = j["latex"].get<std::string>();
  if (j.contains("image") && j["image"].is_string()) s.image_ref = j["image"].get<std::string>();
  if (j.contains("tier") && j["tier"].is_string()) {
    s.tier = metrics::tier_from_name(j["tier"].get<std::string>());
  }
  if (j.contains("stats") && j["stats"].is_object()) {
    const auto& st = j["stats"];
    SampleStats stats;
    stats.token_len = st.value("token_len", 0);
    stats.line_count = st.value("line_count", 1);
    stats.depth = st.value("depth", 0);
    stats.distinct_commands = st.value("distinct_commands", 0);
    s.stats = stats;
  }
  if (j.contains("diagnostics") && j["diagnostics"].is_array()) {
    for (const auto& d : j["diagnostics"]) {
      if (d.is_string()) s.diagnostics.push_back(d.get<std::string>());
    }
  }
  return s;
}

std::string sample_to_json_line(const Sample& sample) {
  nlohmann::json j;
  j["id"] = sample.id;
  j["latex"] = sample.latex;
  if (sample.image_ref) j["image"] = *sample.image_ref;
  if (sample.tier) j["tier"] = metrics::tier_name(*sample.tier);
  if (sample.stats) {
    j["stats"] = {{"token_len", sample.stats->token_len},
                  {"line_count", sample.stats->line_count},
                  {"depth", sample.stats->depth},
                  {"distinct_commands", sample.stats->distinct_commands}};
  }
  if (!sample.diagnostics.empty()) j["diagnostics"] = sample.diagnostics;
  return j.dump();
}

}  // namespace mathrec::curate
