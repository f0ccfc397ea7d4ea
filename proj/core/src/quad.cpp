#include "scrap/quad.h"

#include <algorithm>
#include <cctype>

namespace scrap {

const std::array<std::string_view, 13>& category_vocab() {
  static const std::array<std::string_view, 13> kCategories = {
      "food prices",
      "food style_options",
      "service general",
      "drinks prices",
      "ambience general",
      "drinks quality",
      "location general",
      "restaurant prices",
      "restaurant general",
      "drinks style_options",
      "food general",
      "restaurant miscellaneous",
      "food quality",
  };
  return kCategories;
}

const std::array<std::string_view, 3>& polarity_vocab() {
  static const std::array<std::string_view, 3> kPolarities = {
      "positive",
      "neutral",
      "negative",
  };
  return kPolarities;
}

bool is_known_category(std::string_view label) {
  const auto& vocab = category_vocab();
  return std::find(vocab.begin(), vocab.end(), label) != vocab.end();
}

bool is_known_polarity(std::string_view label) {
  const auto& vocab = polarity_vocab();
  return std::find(vocab.begin(), vocab.end(), label) != vocab.end();
}

std::string normalize_term(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool in_space = false;
  for (unsigned char c : raw) {
    if (std::isspace(c)) {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out.push_back(' ');
    in_space = false;
    out.push_back(static_cast<char>(c));
  }
  return out;
}

namespace {

bool is_null_sentinel(std::string_view s) {
  if (s.size() != kNullTerm.size()) return false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(s[i])) != kNullTerm[i]) return false;
  }
  return true;
}

}  // namespace

Quad Quad::normalized(std::string_view at, std::string_view ot,
                      std::string_view ac, std::string_view sp) {
  Quad q;
  q.aspect_term = normalize_term(at);
  if (is_null_sentinel(q.aspect_term)) q.aspect_term = std::string(kNullTerm);
  q.opinion_term = normalize_term(ot);
  q.aspect_category = normalize_term(ac);
  q.sentiment_polarity = normalize_term(sp);
  return q;
}

ValidationReport validate_quad(const Quad& q) {
  ValidationReport report;
  auto violate = [&report](std::string msg) {
    report.ok = false;
    report.violations.push_back(std::move(msg));
  };
  if (!is_known_category(normalize_term(q.aspect_category))) {
    violate("unknown category '" + q.aspect_category + "'");
  }
  if (!is_known_polarity(normalize_term(q.sentiment_polarity))) {
    violate("unknown polarity '" + q.sentiment_polarity + "'");
  }
  if (normalize_term(q.aspect_term).empty()) {
    violate("empty aspect term");
  }
  if (normalize_term(q.opinion_term).empty()) {
    violate("empty opinion term");
  }
  return report;
}

}  // namespace scrap
