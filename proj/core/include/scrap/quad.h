#pragma once

#include <array>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace scrap {

// The 13 restaurant-domain aspect category labels, in canonical order.
const std::array<std::string_view, 13>& category_vocab();

// The 3 sentiment polarity labels: positive, neutral, negative.
const std::array<std::string_view, 3>& polarity_vocab();

bool is_known_category(std::string_view label);
bool is_known_polarity(std::string_view label);

// Aspect terms may be implicit; they are stored as this literal sentinel.
inline constexpr std::string_view kNullTerm = "NULL";

// Trims leading/trailing whitespace and collapses internal whitespace runs
// to a single space. No case folding; idempotent.
std::string normalize_term(std::string_view raw);

// One sentiment quadruplet. Fields are compared element-wise, so two quads
// are equal iff all four normalized fields match exactly (case-sensitive).
struct Quad {
  std::string aspect_term;
  std::string opinion_term;
  std::string aspect_category;
  std::string sentiment_polarity;

  // Builds a quad with all fields normalized. An aspect term that matches
  // the null sentinel in any casing is canonicalized to "NULL".
  static Quad normalized(std::string_view at, std::string_view ot,
                         std::string_view ac, std::string_view sp);

  auto operator<=>(const Quad&) const = default;
  bool operator==(const Quad&) const = default;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// Checks the four quad invariants on the normalized fields: known category,
// known polarity, non-empty aspect term, non-empty opinion term.
// Violations are returned as data, never thrown.
ValidationReport validate_quad(const Quad& q);

// A review sentence with its gold quads. sentence_id is assigned by the
// loader (record index within the source file).
struct Example {
  int sentence_id = -1;
  std::string sentence;
  std::vector<Quad> gold_quads;
};

}  // namespace scrap
