#include "scrap/metrics.h"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace scrap {

namespace {

std::vector<Quad> dedup_ordered(const std::vector<Quad>& quads) {
  std::vector<Quad> out;
  std::set<Quad> seen;
  for (const auto& quad : quads) {
    if (seen.insert(quad).second) out.push_back(quad);
  }
  return out;
}

std::map<int, std::vector<Quad>> index_by_id(const QuadSetsById& sets, const char* label) {
  std::map<int, std::vector<Quad>> out;
  for (const auto& [id, quads] : sets) {
    if (!out.emplace(id, dedup_ordered(quads)).second) {
      throw std::invalid_argument(std::string(label) + ": duplicate sentence_id " +
                                  std::to_string(id));
    }
  }
  return out;
}

void check_alignment(const std::map<int, std::vector<Quad>>& preds,
                     const std::map<int, std::vector<Quad>>& golds) {
  std::vector<int> only_pred, only_gold;
  for (const auto& [id, _] : preds) {
    if (!golds.count(id)) only_pred.push_back(id);
  }
  for (const auto& [id, _] : golds) {
    if (!preds.count(id)) only_gold.push_back(id);
  }
  if (only_pred.empty() && only_gold.empty()) return;
  std::string msg = "sentence_id mismatch;";
  if (!only_pred.empty()) {
    msg += " only in predictions:";
    for (int id : only_pred) msg += " " + std::to_string(id);
    msg += ";";
  }
  if (!only_gold.empty()) {
    msg += " only in golds:";
    for (int id : only_gold) msg += " " + std::to_string(id);
  }
  throw std::invalid_argument(msg);
}

int agreement(const Quad& a, const Quad& b) {
  return (a.aspect_term == b.aspect_term) + (a.opinion_term == b.opinion_term) +
         (a.aspect_category == b.aspect_category) + (a.sentiment_polarity == b.sentiment_polarity);
}

}  // namespace

ScoreReport score(const QuadSetsById& predictions, const QuadSetsById& golds) {
  const auto pred_map = index_by_id(predictions, "predictions");
  const auto gold_map = index_by_id(golds, "golds");
  check_alignment(pred_map, gold_map);

  ScoreReport report;
  for (const auto& [id, preds] : pred_map) {
    const auto& gold = gold_map.at(id);
    const std::set<Quad> gold_set(gold.begin(), gold.end());
    report.pred_count += static_cast<long>(preds.size());
    report.gold_count += static_cast<long>(gold.size());
    for (const auto& quad : preds) {
      if (gold_set.count(quad)) ++report.tp;
    }
  }

  report.precision =
      report.pred_count == 0 ? 0.0 : static_cast<double>(report.tp) / report.pred_count;
  report.recall =
      report.gold_count == 0 ? 0.0 : static_cast<double>(report.tp) / report.gold_count;
  report.f1 = (report.precision + report.recall) == 0.0
                  ? 0.0
                  : 2.0 * report.precision * report.recall / (report.precision + report.recall);
  return report;
}

ElementErrorReport element_error_rates(const QuadSetsById& predictions,
                                       const QuadSetsById& golds) {
  const auto pred_map = index_by_id(predictions, "predictions");
  const auto gold_map = index_by_id(golds, "golds");
  check_alignment(pred_map, gold_map);

  ElementErrorReport report;
  for (const auto& [id, preds] : pred_map) {
    const auto& gold = gold_map.at(id);
    report.predicted_quads += static_cast<long>(preds.size());

    // Best-agreement-first matching over all (pred, gold) pairs.
    std::vector<bool> pred_used(preds.size(), false);
    std::vector<bool> gold_used(gold.size(), false);
    size_t matched = 0;
    const size_t matchable = std::min(preds.size(), gold.size());
    while (matched < matchable) {
      int best = -1;
      size_t best_pred = 0, best_gold = 0;
      for (size_t gi = 0; gi < gold.size(); ++gi) {
        if (gold_used[gi]) continue;
        for (size_t pi = 0; pi < preds.size(); ++pi) {
          if (pred_used[pi]) continue;
          const int a = agreement(preds[pi], gold[gi]);
          if (a > best) {
            best = a;
            best_gold = gi;
            best_pred = pi;
          }
        }
      }
      pred_used[best_pred] = true;
      gold_used[best_gold] = true;
      ++matched;

      const Quad& p = preds[best_pred];
      const Quad& g = gold[best_gold];
      if (p.aspect_category != g.aspect_category)
        ++report.incorrect[static_cast<size_t>(ElementTag::AC)];
      if (p.aspect_term != g.aspect_term) ++report.incorrect[static_cast<size_t>(ElementTag::AT)];
      if (p.opinion_term != g.opinion_term)
        ++report.incorrect[static_cast<size_t>(ElementTag::OT)];
      if (p.sentiment_polarity != g.sentiment_polarity)
        ++report.incorrect[static_cast<size_t>(ElementTag::SP)];
    }
    for (size_t pi = 0; pi < preds.size(); ++pi) {
      if (pred_used[pi]) continue;
      for (auto& count : report.incorrect) ++count;
    }
  }

  if (report.predicted_quads > 0) {
    for (size_t i = 0; i < report.error_rate.size(); ++i) {
      report.error_rate[i] =
          static_cast<double>(report.incorrect[i]) / static_cast<double>(report.predicted_quads);
    }
  }
  return report;
}

}  // namespace scrap
