#pragma once

#include "scrap/backend.h"

namespace scrap {

// The shipped desk-scale generator: a conditional token-level model that
// interpolates five count distributions — target unigram/bigram/trigram,
// an input-conditioned trigram, and an input-conditioned full-prefix
// memory — over a uniform floor. train() fits the count tables in closed
// form (the exact NLL minimizer for this model family) and then runs one
// EM step per epoch on the interpolation weights, so the logged loss curve
// decreases monotonically. batch_size and learning_rate are validated and
// recorded in the provenance; the closed-form fit does not consume them.
//
// Sampling is ancestral with temperature scaling of the token distribution
// and is deterministic given (seed, input, sample index). Scoring returns
// the exact mean per-token NLL, the same quantity train() logs.
class CountBackend : public Seq2SeqBackend {
 public:
  std::string name() const override { return "count"; }
  ModelHandle train(const std::vector<TrainingPair>& pairs,
                    const TrainConfig& config) const override;
  std::vector<std::string> sample(const ModelHandle& model, const std::string& input_text,
                                  int k, double temperature) const override;
  double score_target(const ModelHandle& model, const std::string& input_text,
                      const std::string& target_text) const override;
  void save(const ModelHandle& model, const std::filesystem::path& dir) const override;
  ModelHandle load(const std::filesystem::path& dir) const override;
};

}  // namespace scrap
