#pragma once

#include <atomic>
#include <functional>
#include <unordered_map>

#include "scrap/backend.h"

namespace scrap {

// Deterministic test double. train memorizes the first target per input and
// echoes the pair count; sample replays scripted candidates (cycling) when a
// script covers the input, otherwise the memorized target; score_target is a
// pluggable pure rule, by default proportional to target length. Call
// counters let tests spy on usage.
class StubBackend : public Seq2SeqBackend {
 public:
  using Script = std::unordered_map<std::string, std::vector<std::string>>;
  using ScoreRule = std::function<double(const std::string&, const std::string&)>;

  StubBackend() = default;
  explicit StubBackend(Script script) : script_(std::move(script)) {}

  void set_script(Script script) { script_ = std::move(script); }
  void set_score_rule(ScoreRule rule) { score_rule_ = std::move(rule); }

  std::string name() const override { return "stub"; }
  ModelHandle train(const std::vector<TrainingPair>& pairs,
                    const TrainConfig& config) const override;
  std::vector<std::string> sample(const ModelHandle& model, const std::string& input_text,
                                  int k, double temperature) const override;
  double score_target(const ModelHandle& model, const std::string& input_text,
                      const std::string& target_text) const override;
  void save(const ModelHandle& model, const std::filesystem::path& dir) const override;
  ModelHandle load(const std::filesystem::path& dir) const override;

  int train_calls() const { return train_calls_.load(); }
  int sample_calls() const { return sample_calls_.load(); }
  int score_calls() const { return score_calls_.load(); }

 private:
  Script script_;
  ScoreRule score_rule_;
  mutable std::atomic<int> train_calls_{0};
  mutable std::atomic<int> sample_calls_{0};
  mutable std::atomic<int> score_calls_{0};
};

}  // namespace scrap
