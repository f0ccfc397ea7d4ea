#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "scrap/target_builder.h"

namespace scrap {

struct TrainConfig {
  int epochs = 20;
  int batch_size = 16;
  double learning_rate = 3e-5;
  uint64_t seed = 42;
  int max_target_length = 512;  // tokens; longer targets truncate with a warning
};

// Throws std::invalid_argument unless every field is positive.
void validate_train_config(const TrainConfig& config);

struct Provenance {
  TrainConfig config;
  std::string pair_digest;  // content digest of the training pairs
  size_t pair_count = 0;
  std::string backend;
};

// Backend-private trained state.
struct ModelState {
  virtual ~ModelState() = default;
};

// Opaque trained-model reference; valid for sample/score once train returns.
struct ModelHandle {
  std::shared_ptr<const ModelState> state;
  Provenance provenance;
  std::vector<double> loss_curve;       // mean per-token NLL, first = untrained
  std::vector<std::string> warnings;    // e.g. truncation notices
};

// Contract boundary to a conditional text-generation model. Nothing outside
// this module names a concrete model; the whole pipeline runs against the
// stub.
class Seq2SeqBackend {
 public:
  virtual ~Seq2SeqBackend() = default;

  virtual std::string name() const = 0;

  // Fits the model to the pairs by minimizing per-token NLL of each target
  // given its input. Deterministic given config.seed.
  virtual ModelHandle train(const std::vector<TrainingPair>& pairs,
                            const TrainConfig& config) const = 0;

  // k independent temperature-scaled samples conditioned on input_text,
  // order-stable under a fixed seed.
  virtual std::vector<std::string> sample(const ModelHandle& model,
                                          const std::string& input_text, int k,
                                          double temperature) const = 0;

  // Mean per-token negative log-likelihood of target_text given input_text;
  // non-negative, lower = more predictable. Equals the per-pair training
  // loss term.
  virtual double score_target(const ModelHandle& model, const std::string& input_text,
                              const std::string& target_text) const = 0;

  // Persists/restores the model plus a manifest (config, pair digest, seed).
  virtual void save(const ModelHandle& model, const std::filesystem::path& dir) const = 0;
  virtual ModelHandle load(const std::filesystem::path& dir) const = 0;
};

// Keys: "stub" for the deterministic test backend, "real" (alias "count")
// for the shipped count-based generator.
std::unique_ptr<Seq2SeqBackend> make_backend(const std::string& key);

std::string digest_pairs(const std::vector<TrainingPair>& pairs);

}  // namespace scrap
