#include "scrap/serde.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

namespace scrap {

namespace {

constexpr std::array<ElementTag, 4> kCanonicalTags = {ElementTag::AC, ElementTag::AT,
                                                      ElementTag::OT, ElementTag::SP};

std::string_view trim_view(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

const std::string& field_label(ElementTag tag) {
  static const std::array<std::string, 4> kLabels = {"aspect_category", "aspect_term",
                                                     "opinion_term", "sentiment_polarity"};
  return kLabels[static_cast<size_t>(tag)];
}

std::string_view quad_field(const Quad& q, ElementTag tag) {
  switch (tag) {
    case ElementTag::AC: return q.aspect_category;
    case ElementTag::AT: return q.aspect_term;
    case ElementTag::OT: return q.opinion_term;
    case ElementTag::SP: return q.sentiment_polarity;
  }
  return {};
}

bool contains_reserved_token(std::string_view value) {
  for (ElementTag tag : kCanonicalTags) {
    if (value.find(tag_marker(tag)) != std::string_view::npos) return true;
  }
  return value.find(kSsepMarker) != std::string_view::npos ||
         lowercase(value).find(lowercase(kConnector)) != std::string::npos;
}

}  // namespace

std::string_view tag_name(ElementTag tag) {
  static const std::array<std::string_view, 4> kNames = {"AC", "AT", "OT", "SP"};
  return kNames[static_cast<size_t>(tag)];
}

std::string_view tag_marker(ElementTag tag) {
  static const std::array<std::string_view, 4> kMarkers = {"[AC]", "[AT]", "[OT]", "[SP]"};
  return kMarkers[static_cast<size_t>(tag)];
}

std::optional<ElementTag> tag_from_name(std::string_view name) {
  for (ElementTag tag : kCanonicalTags) {
    if (tag_name(tag) == name) return tag;
  }
  return std::nullopt;
}

std::string Permutation::to_string() const {
  std::string out;
  for (size_t i = 0; i < order.size(); ++i) {
    if (i) out.push_back('-');
    out.append(tag_name(order[i]));
  }
  return out;
}

Permutation Permutation::from_string(std::string_view text) {
  Permutation perm{};
  std::set<ElementTag> seen;
  size_t pos = 0;
  for (size_t i = 0; i < 4; ++i) {
    size_t dash = text.find('-', pos);
    std::string_view part =
        (i == 3) ? text.substr(pos) : text.substr(pos, dash == std::string_view::npos ? std::string_view::npos : dash - pos);
    auto tag = tag_from_name(trim_view(part));
    if (!tag || !seen.insert(*tag).second) {
      throw std::invalid_argument("malformed permutation '" + std::string(text) + "'");
    }
    perm.order[i] = *tag;
    if (i < 3) {
      if (dash == std::string_view::npos) {
        throw std::invalid_argument("malformed permutation '" + std::string(text) + "'");
      }
      pos = dash + 1;
    }
  }
  return perm;
}

const std::vector<Permutation>& enumerate_permutations() {
  static const std::vector<Permutation> kAll = [] {
    std::vector<Permutation> out;
    std::array<ElementTag, 4> tags = kCanonicalTags;
    do {
      out.push_back(Permutation{tags});
    } while (std::next_permutation(tags.begin(), tags.end()));
    return out;
  }();
  return kAll;
}

std::string serialize_quads(const std::vector<Quad>& quads, const Permutation& perm) {
  std::string out;
  for (size_t qi = 0; qi < quads.size(); ++qi) {
    const Quad& q = quads[qi];
    auto report = validate_quad(q);
    if (!report.ok) {
      throw std::invalid_argument("quad " + std::to_string(qi) + ": " + report.violations.front());
    }
    if (qi) {
      out.push_back(' ');
      out.append(kSsepMarker);
      out.push_back(' ');
    }
    for (size_t ti = 0; ti < perm.order.size(); ++ti) {
      ElementTag tag = perm.order[ti];
      std::string_view value = quad_field(q, tag);
      if (contains_reserved_token(value)) {
        throw std::invalid_argument("quad " + std::to_string(qi) + ": " + field_label(tag) +
                                    " contains a reserved marker token");
      }
      if (ti) out.push_back(' ');
      out.append(tag_marker(tag));
      out.push_back(' ');
      out.append(value);
    }
  }
  return out;
}

ParseResult parse_quads(std::string_view text) {
  ParseResult result;

  bool any_marker = false;
  for (ElementTag tag : kCanonicalTags) {
    if (text.find(tag_marker(tag)) != std::string_view::npos) {
      any_marker = true;
      break;
    }
  }
  if (!any_marker) {
    result.diagnostics.emplace_back("no markers found");
    return result;
  }

  // Split on [SSEP] into segments, preserving order.
  std::vector<std::string_view> segments;
  size_t pos = 0;
  while (true) {
    size_t sep = text.find(kSsepMarker, pos);
    if (sep == std::string_view::npos) {
      segments.push_back(text.substr(pos));
      break;
    }
    segments.push_back(text.substr(pos, sep - pos));
    pos = sep + kSsepMarker.size();
  }

  std::set<Quad> seen;
  for (size_t si = 0; si < segments.size(); ++si) {
    std::string_view segment = segments[si];

    struct MarkerHit {
      size_t pos;
      ElementTag tag;
    };
    std::vector<MarkerHit> hits;
    bool dropped = false;
    for (ElementTag tag : kCanonicalTags) {
      std::string_view marker = tag_marker(tag);
      size_t count = 0;
      for (size_t p = segment.find(marker); p != std::string_view::npos;
           p = segment.find(marker, p + marker.size())) {
        hits.push_back({p, tag});
        ++count;
      }
      if (count == 0) {
        result.diagnostics.push_back("missing " + std::string(tag_name(tag)) + " in segment " +
                                     std::to_string(si));
        dropped = true;
      } else if (count > 1) {
        result.diagnostics.push_back("duplicate " + std::string(tag_name(tag)) + " in segment " +
                                     std::to_string(si));
        dropped = true;
      }
    }
    if (dropped) continue;

    std::sort(hits.begin(), hits.end(),
              [](const MarkerHit& a, const MarkerHit& b) { return a.pos < b.pos; });
    std::array<std::string_view, 4> values{};
    for (size_t hi = 0; hi < hits.size(); ++hi) {
      size_t value_begin = hits[hi].pos + tag_marker(hits[hi].tag).size();
      size_t value_end = (hi + 1 < hits.size()) ? hits[hi + 1].pos : segment.size();
      values[static_cast<size_t>(hits[hi].tag)] = segment.substr(value_begin, value_end - value_begin);
    }

    Quad quad = Quad::normalized(values[static_cast<size_t>(ElementTag::AT)],
                                 values[static_cast<size_t>(ElementTag::OT)],
                                 values[static_cast<size_t>(ElementTag::AC)],
                                 values[static_cast<size_t>(ElementTag::SP)]);
    auto report = validate_quad(quad);
    if (!report.ok) {
      std::string msg = "invalid quad in segment " + std::to_string(si) + ":";
      for (const auto& violation : report.violations) msg += " " + violation + ";";
      msg.pop_back();
      result.diagnostics.push_back(std::move(msg));
      continue;
    }
    if (seen.insert(quad).second) {
      result.quads.push_back(std::move(quad));
    }
  }
  return result;
}

std::optional<TargetText> split_target(std::string_view text) {
  const std::string haystack = lowercase(text);
  const std::string needle = lowercase(kConnector);
  size_t pos = haystack.rfind(needle);
  if (pos == std::string::npos) return std::nullopt;
  TargetText out;
  out.reasoning = std::string(trim_view(text.substr(0, pos)));
  out.quad_segment = std::string(trim_view(text.substr(pos + needle.size())));
  return out;
}

std::string compose_target(std::string_view reasoning, const std::vector<Quad>& quads,
                           const Permutation& perm) {
  std::string_view trimmed = trim_view(reasoning);
  if (trimmed.empty()) {
    throw std::invalid_argument("compose_target: empty reasoning");
  }
  if (quads.empty()) {
    throw std::invalid_argument("compose_target: empty quad list");
  }
  std::string out(trimmed);
  out.push_back(' ');
  out.append(kConnector);
  out.push_back(' ');
  out.append(serialize_quads(quads, perm));
  return out;
}

}  // namespace scrap
