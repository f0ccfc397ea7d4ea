#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scrap/quad.h"

namespace scrap {

// The four quad element tags. Canonical tag order is lexicographic over the
// tag names: AC < AT < OT < SP.
enum class ElementTag { AC, AT, OT, SP };

std::string_view tag_name(ElementTag tag);                  // "AC", "AT", ...
std::string_view tag_marker(ElementTag tag);                // "[AC]", "[AT]", ...
std::optional<ElementTag> tag_from_name(std::string_view);  // inverse of tag_name

// On-disk target grammar constants. These byte strings are part of the
// serialized format and must never change.
inline constexpr std::string_view kSsepMarker = "[SSEP]";
inline constexpr std::string_view kConnector = "Therefore, the quadruplets are:";

// An ordering of the four element tags; 24 distinct values exist.
struct Permutation {
  std::array<ElementTag, 4> order;

  auto operator<=>(const Permutation&) const = default;
  bool operator==(const Permutation&) const = default;

  std::string to_string() const;  // e.g. "SP-AT-OT-AC"
  static Permutation from_string(std::string_view text);  // throws on malformed input
};

// All 24 permutations in canonical (lexicographic by tag name) order.
const std::vector<Permutation>& enumerate_permutations();

// Renders quads as "[TAG] value" groups in perm order, quads joined by
// " [SSEP] ". Every quad must pass validate_quad and no field may contain a
// marker token or the connector phrase (the grammar has no escaping);
// violations throw std::invalid_argument naming the field. Empty list
// yields "".
std::string serialize_quads(const std::vector<Quad>& quads, const Permutation& perm);

struct ParseResult {
  std::vector<Quad> quads;                // normalized, validated, deduplicated
  std::vector<std::string> diagnostics;   // one entry per dropped segment/quad
};

// Recovers quads from arbitrary model output. Splits on [SSEP]; within each
// segment the four markers may appear in any order, and the value of a
// marker is the text up to the next marker or segment end. Segments missing
// a marker or repeating one are dropped with a diagnostic, as are quads that
// fail validation. Never throws on malformed text.
ParseResult parse_quads(std::string_view text);

struct TargetText {
  std::string reasoning;
  std::string quad_segment;
};

// Splits a composed target at the LAST occurrence of the connector
// (matched case-insensitively, original casing preserved). Both halves are
// whitespace-trimmed. Returns nullopt when no connector is present; the
// caller is expected to fall back to parse_quads on the whole text.
std::optional<TargetText> split_target(std::string_view text);

// reasoning + " <connector> " + serialize_quads(quads, perm).
// Throws std::invalid_argument on empty reasoning or empty quad list.
std::string compose_target(std::string_view reasoning, const std::vector<Quad>& quads,
                           const Permutation& perm);

}  // namespace scrap
