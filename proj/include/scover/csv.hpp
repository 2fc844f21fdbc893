#pragma once

#include "scover/error.hpp"
#include "scover/util.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scover {

// Header of a comma-separated file: maps column name -> index.
class CsvHeader {
public:
  explicit CsvHeader(std::string_view header_line) {
    auto fields = split_char(header_line, ',');
    for (size_t i = 0; i < fields.size(); ++i) {
      std::string name(trim(fields[i]));
      if (!name.empty()) columns_[name] = i;
    }
  }

  // Index of a required column; throws naming the column when absent.
  size_t require(const std::string& name, const std::string& file) const {
    auto it = columns_.find(name);
    if (it == columns_.end())
      throw Error("missing column '" + name + "' in " + file);
    return it->second;
  }

  bool has(const std::string& name) const { return columns_.count(name) > 0; }

private:
  std::map<std::string, size_t> columns_;
};

struct CsvRow {
  int line = 0;                         // 1-based line number in the file
  std::vector<std::string_view> fields; // views into the reader's buffer
};

// Streams a CSV file row by row; blank lines are skipped. Row fields stay
// valid until the next call to next().
class CsvReader {
public:
  explicit CsvReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw Error("cannot open file: " + path);
    std::string line;
    if (!std::getline(in_, line)) throw Error("empty CSV file: " + path);
    header_.emplace(trim(line));
    line_no_ = 1;
  }

  const CsvHeader& header() const { return *header_; }
  const std::string& path() const { return path_; }

  bool next(CsvRow& row) {
    while (std::getline(in_, buffer_)) {
      ++line_no_;
      std::string_view r = trim(buffer_);
      if (r.empty()) continue;
      row.line = line_no_;
      row.fields.clear();
      for (auto f : split_char(r, ',')) row.fields.push_back(trim(f));
      return true;
    }
    return false;
  }

private:
  std::string path_;
  std::ifstream in_;
  std::optional<CsvHeader> header_;
  std::string buffer_;
  int line_no_ = 0;
};

inline void for_each_csv_row(const std::string& path,
                             const std::function<void(const CsvHeader&, const CsvRow&)>& fn) {
  CsvReader reader(path);
  CsvRow row;
  while (reader.next(row)) fn(reader.header(), row);
}

// Deterministic CSV writer: caller emits rows as pre-rendered cells.
class CsvWriter {
public:
  explicit CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void comment(const std::string& text) { comments_.push_back(text); }

  void row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size())
      throw Error("CSV row width mismatch");
    rows_.push_back(std::move(cells));
  }

  std::string render() const {
    std::string out;
    for (const auto& c : comments_) out += "# " + c + "\n";
    out += join(columns_);
    for (const auto& r : rows_) out += join(r);
    return out;
  }

private:
  static std::string join(const std::vector<std::string>& cells) {
    std::string line;
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) line += ',';
      line += cells[i];
    }
    line += '\n';
    return line;
  }

  std::vector<std::string> columns_;
  std::vector<std::string> comments_;
  std::vector<std::vector<std::string>> rows_;
};

} // namespace scover
