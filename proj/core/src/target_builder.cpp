#include "scrap/target_builder.h"

#include <algorithm>
#include <stdexcept>

namespace scrap {

namespace {

size_t canonical_index(const Permutation& perm) {
  const auto& all = enumerate_permutations();
  for (size_t i = 0; i < all.size(); ++i) {
    if (all[i] == perm) return i;
  }
  return all.size();
}

}  // namespace

PermutationRanking rank_permutations(const std::vector<Example>& train,
                                     const TargetScorer& scorer, int p, size_t sample_limit) {
  const auto& all = enumerate_permutations();
  if (p < 1 || p > static_cast<int>(all.size())) {
    throw std::invalid_argument("rank_permutations: p must be in [1, 24]");
  }
  if (train.empty()) {
    throw std::invalid_argument("rank_permutations: no training examples to score");
  }
  const size_t sample = (sample_limit == 0) ? train.size() : std::min(sample_limit, train.size());

  PermutationRanking ranking;
  ranking.scored.reserve(all.size());
  for (const auto& perm : all) {
    double sum = 0.0;
    try {
      for (size_t i = 0; i < sample; ++i) {
        sum += scorer(train[i].sentence, serialize_quads(train[i].gold_quads, perm));
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("scoring permutation " + perm.to_string() + ": " + e.what());
    }
    ranking.scored.emplace_back(perm, sum / static_cast<double>(sample));
  }

  std::sort(ranking.scored.begin(), ranking.scored.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second < b.second;
              return canonical_index(a.first) < canonical_index(b.first);
            });
  for (int i = 0; i < p; ++i) ranking.chosen.push_back(ranking.scored[i].first);
  return ranking;
}

PermutationRanking fallback_ranking(int p) {
  const auto& all = enumerate_permutations();
  if (p < 1 || p > static_cast<int>(all.size())) {
    throw std::invalid_argument("fallback_ranking: p must be in [1, 24]");
  }
  const Permutation head = Permutation::from_string("SP-AT-OT-AC");
  PermutationRanking ranking;
  ranking.scored.emplace_back(head, 0.0);
  double score = 1.0;
  for (const auto& perm : all) {
    if (perm == head) continue;
    ranking.scored.emplace_back(perm, score);
    score += 1.0;
  }
  for (int i = 0; i < p; ++i) ranking.chosen.push_back(ranking.scored[i].first);
  return ranking;
}

std::vector<TrainingPair> build_targets(const Example& example,
                                        const std::vector<ReasoningPath>& reasonings,
                                        const PermutationRanking& ranking,
                                        const BuildOptions& options) {
  if (reasonings.empty()) {
    throw std::invalid_argument("build_targets: no reasoning paths");
  }
  if (ranking.chosen.empty()) {
    throw std::invalid_argument("build_targets: ranking has no chosen permutations");
  }

  auto make_pair = [&](const ReasoningPath& reasoning, const Permutation& perm) {
    TrainingPair pair;
    pair.sentence_id = example.sentence_id;
    pair.input_text = example.sentence;
    pair.permutation = perm;
    pair.reasoning_index = reasoning.index;
    try {
      pair.target_text = compose_target(reasoning.text, example.gold_quads, perm);
    } catch (const std::exception& e) {
      throw std::invalid_argument("build_targets: reasoning " + std::to_string(reasoning.index) +
                                  " with permutation " + perm.to_string() + ": " + e.what());
    }
    return pair;
  };

  std::vector<TrainingPair> pairs;
  if (options.cross_product) {
    pairs.reserve(reasonings.size() * ranking.chosen.size());
    for (const auto& reasoning : reasonings) {
      for (const auto& perm : ranking.chosen) {
        pairs.push_back(make_pair(reasoning, perm));
      }
    }
  } else {
    pairs.reserve(reasonings.size());
    for (size_t i = 0; i < reasonings.size(); ++i) {
      pairs.push_back(make_pair(reasonings[i], ranking.chosen[i % ranking.chosen.size()]));
    }
  }
  return pairs;
}

}  // namespace scrap
