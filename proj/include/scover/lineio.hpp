#pragma once

#include "scover/error.hpp"
#include "scover/util.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace scover {

// One significant line of a line-oriented document. Comment lines (first
// non-blank character '#') and blank lines are skipped by the scanner.
struct DocLine {
  int number = 0;      // 1-based line number in the source text
  bool indented = false; // original line started with whitespace
  std::string text;    // trimmed content
};

// Splits a document into significant lines for the small text formats
// (GSN documents, rule sets, regions, bindings, run configs).
inline std::vector<DocLine> scan_lines(std::string_view document) {
  std::vector<DocLine> out;
  int number = 0;
  size_t pos = 0;
  while (pos <= document.size()) {
    size_t eol = document.find('\n', pos);
    std::string_view raw = (eol == std::string_view::npos)
                               ? document.substr(pos)
                               : document.substr(pos, eol - pos);
    ++number;
    std::string_view trimmed = trim(raw);
    if (!trimmed.empty() && trimmed.front() != '#') {
      DocLine dl;
      dl.number = number;
      dl.indented = !raw.empty() && (raw.front() == ' ' || raw.front() == '\t');
      dl.text = std::string(trimmed);
      out.push_back(std::move(dl));
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed: " + path);
}

// key/value line of the form "<key>: <value>". Returns false when the line
// has no colon-terminated first token.
inline bool split_key_value(std::string_view line, std::string_view& key, std::string_view& value) {
  size_t colon = line.find(':');
  if (colon == std::string_view::npos) return false;
  key = trim(line.substr(0, colon));
  value = trim(line.substr(colon + 1));
  return !key.empty() && key.find(' ') == std::string_view::npos && key.find('\t') == std::string_view::npos;
}

} // namespace scover
