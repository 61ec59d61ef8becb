#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ctspin::io {

// Provenance block every output file carries.  `notes` are ordered extra
// key/value pairs (grid bounds, preset name, ...).  Nothing here may depend
// on wall-clock time: identical inputs must serialize to identical bytes.
struct Metadata {
  std::string tool;         // producing command, e.g. "ctspin spectrum"
  std::string schema;       // output schema tag, e.g. "spectrum-v1"
  std::string config_hash;  // Config::hash() of the effective configuration
  std::vector<std::pair<std::string, std::string>> notes;
};

// The shared '#'-prefixed comment header.
std::string metadata_header(const Metadata& meta);

// Column-oriented table with pre-formatted cells.  Cells may not contain
// commas, newlines or carriage returns (the CSV stays quote-free).
class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  void add(std::vector<std::string> cells);  // throws on width/character violations
  int rows() const { return static_cast<int>(cells_.size()); }
  int cols() const { return static_cast<int>(columns_.size()); }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& data() const { return cells_; }

  // Deterministic numeric formatting: %.12g with "-0" folded to "0".
  static std::string num(double v);
  static std::string num(long v);
  static std::string num(int v) { return num(static_cast<long>(v)); }

  // Comment header, then the column row, then one line per data row.
  std::string csv(const Metadata& meta) const;
  // Mirror of the CSV: {"meta": {...}, "columns": [...], "rows": [[...]]},
  // cells verbatim as strings.
  std::string json(const Metadata& meta) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> cells_;
};

// Free-form text report: comment header plus raw lines.
std::string text_report(const Metadata& meta, const std::vector<std::string>& lines);
// Mirror: {"meta": {...}, "lines": [...]}.
std::string json_report(const Metadata& meta, const std::vector<std::string>& lines);

// Atomic write: the full content lands under a temporary name first, then
// replaces `path` by rename.  Parent directories are created.  Throws
// std::runtime_error on filesystem failure.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace ctspin::io
