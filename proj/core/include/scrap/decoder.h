#pragma once

#include <string>
#include <utility>
#include <vector>

#include "scrap/backend.h"
#include "scrap/quad.h"

namespace scrap {

enum class VoteFallback { kModalOutput, kEmpty };

struct DecoderConfig {
  int k = 20;
  double temperature = 1.3;
  double vote_threshold = 0.5;  // strict: kept iff count/V > threshold
  VoteFallback fallback = VoteFallback::kModalOutput;
};

struct VoteOutcome {
  std::vector<Quad> kept;               // final quads, after any fallback
  std::vector<Quad> kept_pre_fallback;  // threshold survivors only
  std::vector<std::pair<Quad, int>> tally;  // first-appearance order
  int parseable_candidates = 0;         // candidates contributing >= 1 quad
  bool fallback_applied = false;
  std::vector<std::string> diagnostics;
};

// Consistency vote over per-candidate quad sets. Quads are deduplicated
// within each candidate; the denominator is the number of candidates with
// at least one parsed quad (falling back to the total when none have any),
// so unparseable candidates abstain rather than dilute. A quad survives iff
// count/V strictly exceeds the threshold. When nothing survives and the
// fallback is modal output, the most frequent identical non-empty quad set
// wins, ties resolved toward the earliest candidate.
VoteOutcome vote(const std::vector<std::vector<Quad>>& candidate_quad_sets, double threshold,
                 VoteFallback fallback);

struct ParsedCandidate {
  std::string reasoning;   // text before the connector (whole text if absent)
  std::vector<Quad> quads;
  bool connector_found = false;
  std::vector<std::string> parse_diagnostics;
};

struct DecodeResult {
  std::vector<std::string> raw_candidates;
  std::vector<ParsedCandidate> parsed;
  std::vector<std::pair<Quad, int>> tally;
  std::vector<Quad> final_quads;
  std::vector<std::string> diagnostics;
};

// Parses and votes over an already-sampled candidate pool (used directly by
// prefix-reusing sweeps).
DecodeResult decode_candidates(const std::vector<std::string>& candidates,
                               const DecoderConfig& config);

// Samples config.k candidates from the model at config.temperature, splits
// each at the connector (whole-text parse when it is missing), and votes.
DecodeResult decode(const Seq2SeqBackend& backend, const ModelHandle& model,
                    const std::string& sentence, const DecoderConfig& config);

}  // namespace scrap
