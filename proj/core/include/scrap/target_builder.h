#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "scrap/quad.h"
#include "scrap/reasoning.h"
#include "scrap/serde.h"

namespace scrap {

// One fine-tuning example: raw sentence in, reasoning + serialized quads out.
struct TrainingPair {
  int sentence_id = -1;
  std::string input_text;
  std::string target_text;
  Permutation permutation;
  int reasoning_index = 0;
};

// Scores how predictable a serialized target is for an input; lower is more
// predictable (mean per-token NLL under whatever model backs the scorer).
using TargetScorer = std::function<double(const std::string& input_text,
                                          const std::string& target_text)>;

struct PermutationRanking {
  std::vector<std::pair<Permutation, double>> scored;  // all 24, ascending score
  std::vector<Permutation> chosen;                     // the first p
};

// Scores all 24 permutations by the mean scorer value of the quad-only
// serialization over (a prefix of) the training examples, keeping the p
// lowest. Ties resolve by canonical permutation order, so the result is a
// strict total order. sample_limit = 0 scores every example.
PermutationRanking rank_permutations(const std::vector<Example>& train,
                                     const TargetScorer& scorer, int p,
                                     size_t sample_limit = 0);

// Scorer-free ranking used when no pretrained scorer is configured: the
// SP-AT-OT-AC ordering first, then the remaining permutations in canonical
// order.
PermutationRanking fallback_ranking(int p);

struct BuildOptions {
  // Full N x P cross product when true; otherwise reasoning i pairs with
  // chosen permutation (i mod P) for an N-sized budget.
  bool cross_product = true;
};

// Emits one training pair per (reasoning, chosen permutation) combination.
// Gold quad order inside each serialization follows the dataset order.
std::vector<TrainingPair> build_targets(const Example& example,
                                        const std::vector<ReasoningPath>& reasonings,
                                        const PermutationRanking& ranking,
                                        const BuildOptions& options = {});

}  // namespace scrap
