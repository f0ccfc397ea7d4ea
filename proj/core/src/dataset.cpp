#include "scrap/dataset.h"

#include <array>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scrap {

namespace {

constexpr std::string_view kDelimiter = "####";

struct LiteralCursor {
  std::string_view text;
  size_t pos = 0;

  void skip_space() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void expect(char c) {
    if (eof() || text[pos] != c) {
      throw std::runtime_error(std::string("expected '") + c + "' at offset " +
                               std::to_string(pos));
    }
    ++pos;
  }
};

std::string parse_quoted_string(LiteralCursor& cur) {
  cur.skip_space();
  if (cur.eof() || (cur.peek() != '\'' && cur.peek() != '"')) {
    throw std::runtime_error("expected quoted string at offset " + std::to_string(cur.pos));
  }
  const char quote = cur.peek();
  ++cur.pos;
  std::string out;
  while (!cur.eof()) {
    char c = cur.text[cur.pos];
    if (c == '\\' && cur.pos + 1 < cur.text.size()) {
      out.push_back(cur.text[cur.pos + 1]);
      cur.pos += 2;
      continue;
    }
    if (c == quote) {
      ++cur.pos;
      return out;
    }
    out.push_back(c);
    ++cur.pos;
  }
  throw std::runtime_error("unterminated string literal");
}

std::array<std::string, 4> parse_inner_list(LiteralCursor& cur) {
  cur.skip_space();
  cur.expect('[');
  std::array<std::string, 4> values;
  for (size_t i = 0; i < 4; ++i) {
    values[i] = parse_quoted_string(cur);
    cur.skip_space();
    if (i < 3) cur.expect(',');
  }
  cur.skip_space();
  cur.expect(']');
  return values;
}

bool needs_double_quotes(std::string_view value) {
  return value.find('\'') != std::string_view::npos;
}

}  // namespace

std::vector<std::array<std::string, 4>> parse_quad_literal(std::string_view literal) {
  LiteralCursor cur{literal};
  cur.skip_space();
  cur.expect('[');
  std::vector<std::array<std::string, 4>> out;
  cur.skip_space();
  if (!cur.eof() && cur.peek() == ']') {
    ++cur.pos;
  } else {
    while (true) {
      out.push_back(parse_inner_list(cur));
      cur.skip_space();
      if (!cur.eof() && cur.peek() == ',') {
        ++cur.pos;
        continue;
      }
      cur.expect(']');
      break;
    }
  }
  cur.skip_space();
  if (!cur.eof()) {
    throw std::runtime_error("trailing content after quad literal at offset " +
                             std::to_string(cur.pos));
  }
  return out;
}

std::string render_quad_literal(const std::vector<Quad>& quads) {
  std::string out = "[";
  for (size_t i = 0; i < quads.size(); ++i) {
    if (i) out += ", ";
    const std::array<std::string_view, 4> file_order = {
        quads[i].aspect_term, quads[i].aspect_category, quads[i].sentiment_polarity,
        quads[i].opinion_term};
    out += "[";
    for (size_t j = 0; j < file_order.size(); ++j) {
      if (j) out += ", ";
      if (needs_double_quotes(file_order[j])) {
        out += '"';
        out += file_order[j];
        out += '"';
      } else {
        out += '\'';
        out += file_order[j];
        out += '\'';
      }
    }
    out += "]";
  }
  out += "]";
  return out;
}

std::vector<Example> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open dataset file " + path.string());
  }
  std::vector<Example> examples;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (normalize_term(line).empty()) continue;

    const std::string where = path.filename().string() + ":" + std::to_string(line_number);
    size_t delim = line.find(kDelimiter);
    if (delim == std::string::npos) {
      throw std::runtime_error("line " + std::to_string(line_number) +
                               ": missing #### delimiter (" + where + ")");
    }
    Example example;
    example.sentence_id = static_cast<int>(examples.size());
    example.sentence = std::string(line.substr(0, delim));
    // Trim only the outer edges; internal sentence spacing is significant.
    while (!example.sentence.empty() && std::isspace(static_cast<unsigned char>(example.sentence.back())))
      example.sentence.pop_back();
    if (example.sentence.empty()) {
      throw std::runtime_error("line " + std::to_string(line_number) + ": empty sentence (" +
                               where + ")");
    }

    std::vector<std::array<std::string, 4>> literals;
    try {
      literals = parse_quad_literal(std::string_view(line).substr(delim + kDelimiter.size()));
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_number) + ": " + e.what() + " (" +
                               where + ")");
    }
    if (literals.empty()) {
      throw std::runtime_error("line " + std::to_string(line_number) + ": no gold quads (" +
                               where + ")");
    }
    for (const auto& lit : literals) {
      // File order is [at, ac, sp, ot].
      Quad quad = Quad::normalized(lit[0], lit[3], lit[1], lit[2]);
      auto report = validate_quad(quad);
      if (!report.ok) {
        throw std::runtime_error("line " + std::to_string(line_number) + ": " +
                                 report.violations.front() + " (" + where + ")");
      }
      example.gold_quads.push_back(std::move(quad));
    }
    examples.push_back(std::move(example));
  }
  return examples;
}

size_t write_records(const std::filesystem::path& path, const std::vector<Record>& records) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write records file " + path.string());
  }
  for (const auto& record : records) {
    out << record.dump() << '\n';
  }
  out.flush();
  if (!out) {
    throw std::runtime_error("write failed for records file " + path.string());
  }
  return records.size();
}

void append_records(const std::filesystem::path& path, const std::vector<Record>& records) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::app);
  if (!out) {
    throw std::runtime_error("cannot append to records file " + path.string());
  }
  for (const auto& record : records) {
    out << record.dump() << '\n';
  }
  out.flush();
  if (!out) {
    throw std::runtime_error("append failed for records file " + path.string());
  }
}

std::vector<Record> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open records file " + path.string());
  }
  std::vector<Record> records;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    Record record = Record::parse(line, nullptr, false);
    if (record.is_discarded()) {
      throw std::runtime_error("line " + std::to_string(line_number) + ": malformed record (" +
                               path.filename().string() + ")");
    }
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace scrap
