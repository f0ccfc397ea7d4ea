#include "scrap/decoder.h"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "scrap/serde.h"

namespace scrap {

VoteOutcome vote(const std::vector<std::vector<Quad>>& candidate_quad_sets, double threshold,
                 VoteFallback fallback) {
  if (candidate_quad_sets.empty()) {
    throw std::invalid_argument("vote: candidate list is empty");
  }
  if (threshold <= 0.0 || threshold > 1.0) {
    throw std::invalid_argument("vote: threshold must be in (0, 1]");
  }

  VoteOutcome outcome;
  std::vector<std::set<Quad>> deduped;
  deduped.reserve(candidate_quad_sets.size());
  for (const auto& quads : candidate_quad_sets) {
    deduped.emplace_back(quads.begin(), quads.end());
    if (!deduped.back().empty()) ++outcome.parseable_candidates;
  }

  const int denominator = outcome.parseable_candidates > 0
                              ? outcome.parseable_candidates
                              : static_cast<int>(candidate_quad_sets.size());

  // Tally in first-appearance order so results are reproducible.
  std::map<Quad, int> counts;
  std::vector<Quad> appearance;
  for (const auto& quads : candidate_quad_sets) {
    std::set<Quad> in_candidate(quads.begin(), quads.end());
    for (const auto& quad : in_candidate) {
      if (counts[quad]++ == 0) appearance.push_back(quad);
    }
  }
  for (const auto& quad : appearance) {
    outcome.tally.emplace_back(quad, counts[quad]);
  }

  for (const auto& [quad, count] : outcome.tally) {
    if (static_cast<double>(count) / denominator > threshold) {
      outcome.kept_pre_fallback.push_back(quad);
    }
  }
  outcome.kept = outcome.kept_pre_fallback;

  if (outcome.kept.empty() && fallback == VoteFallback::kModalOutput) {
    // Most frequent identical non-empty parsed set; earliest candidate wins ties.
    std::map<std::set<Quad>, int> set_counts;
    for (const auto& set : deduped) {
      if (!set.empty()) ++set_counts[set];
    }
    if (set_counts.empty()) {
      outcome.diagnostics.emplace_back("no parseable candidates; fallback yields empty set");
    } else {
      int best_count = 0;
      size_t best_index = deduped.size();
      for (size_t i = 0; i < deduped.size(); ++i) {
        if (deduped[i].empty()) continue;
        const int count = set_counts[deduped[i]];
        if (count > best_count) {
          best_count = count;
          best_index = i;
        }
      }
      outcome.kept.assign(deduped[best_index].begin(), deduped[best_index].end());
      outcome.fallback_applied = true;
      outcome.diagnostics.emplace_back("threshold left no quads; modal candidate " +
                                       std::to_string(best_index) + " used");
    }
  }
  return outcome;
}

DecodeResult decode_candidates(const std::vector<std::string>& candidates,
                               const DecoderConfig& config) {
  DecodeResult result;
  result.raw_candidates = candidates;

  std::vector<std::vector<Quad>> quad_sets;
  quad_sets.reserve(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i) {
    ParsedCandidate parsed;
    std::string quad_text;
    if (auto split = split_target(candidates[i])) {
      parsed.connector_found = true;
      parsed.reasoning = std::move(split->reasoning);
      quad_text = std::move(split->quad_segment);
    } else {
      parsed.reasoning = normalize_term(candidates[i]);
      quad_text = candidates[i];
      result.diagnostics.push_back("candidate " + std::to_string(i) +
                                   ": no connector; parsed whole text");
    }
    ParseResult parse = parse_quads(quad_text);
    parsed.quads = std::move(parse.quads);
    parsed.parse_diagnostics = std::move(parse.diagnostics);
    quad_sets.push_back(parsed.quads);
    result.parsed.push_back(std::move(parsed));
  }

  VoteOutcome outcome = vote(quad_sets, config.vote_threshold, config.fallback);
  result.tally = std::move(outcome.tally);
  result.final_quads = std::move(outcome.kept);
  if (outcome.fallback_applied || !outcome.diagnostics.empty()) {
    result.diagnostics.insert(result.diagnostics.end(), outcome.diagnostics.begin(),
                              outcome.diagnostics.end());
  }
  return result;
}

DecodeResult decode(const Seq2SeqBackend& backend, const ModelHandle& model,
                    const std::string& sentence, const DecoderConfig& config) {
  if (config.k < 1) throw std::invalid_argument("decode: k must be >= 1");
  if (config.temperature <= 0.0) throw std::invalid_argument("decode: temperature must be > 0");
  if (config.vote_threshold <= 0.0 || config.vote_threshold > 1.0) {
    throw std::invalid_argument("decode: vote threshold must be in (0, 1]");
  }
  const auto candidates = backend.sample(model, sentence, config.k, config.temperature);
  return decode_candidates(candidates, config);
}

}  // namespace scrap
