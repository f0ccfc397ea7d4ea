#pragma once

#include <array>
#include <utility>
#include <vector>

#include "scrap/quad.h"
#include "scrap/serde.h"

namespace scrap {

// Per-sentence quad sets keyed by sentence_id. Duplicates within a sentence
// are collapsed before scoring (set semantics).
using QuadSetsById = std::vector<std::pair<int, std::vector<Quad>>>;

struct ScoreReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long tp = 0;
  long pred_count = 0;
  long gold_count = 0;
};

// Micro-averaged exact-match scoring: a predicted quad counts iff all four
// elements equal a gold quad's. Throws when the two id sets differ, listing
// the symmetric difference.
ScoreReport score(const QuadSetsById& predictions, const QuadSetsById& golds);

struct ElementErrorReport {
  // Indexed by ElementTag (AC, AT, OT, SP): incorrect predictions of that
  // element divided by total predicted quads.
  std::array<double, 4> error_rate{};
  std::array<long, 4> incorrect{};
  long predicted_quads = 0;
};

// Per-element error decomposition. Predicted quads are matched to unmatched
// gold quads of the same sentence best-agreement-first (ties favor earlier
// gold, then earlier predicted quads); each differing element of a matched
// pair counts one error for its type, and an unmatched prediction counts an
// error for all four.
ElementErrorReport element_error_rates(const QuadSetsById& predictions,
                                       const QuadSetsById& golds);

}  // namespace scrap
