#include "ctspin/io/table.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace ctspin::io {

namespace {

void check_cell(const std::string& cell) {
  for (char c : cell)
    if (c == ',' || c == '\n' || c == '\r')
      throw std::invalid_argument("table cell contains a separator: '" + cell + "'");
}

nlohmann::json meta_json(const Metadata& meta) {
  nlohmann::json j;
  j["tool"] = meta.tool;
  j["schema"] = meta.schema;
  j["config"] = meta.config_hash;
  for (const auto& [k, v] : meta.notes) j[k] = v;
  return j;
}

}  // namespace

std::string metadata_header(const Metadata& meta) {
  std::string out;
  out += "# tool: " + meta.tool + "\n";
  out += "# schema: " + meta.schema + "\n";
  out += "# config: " + meta.config_hash + "\n";
  for (const auto& [k, v] : meta.notes) out += "# " + k + ": " + v + "\n";
  return out;
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("table needs at least one column");
  for (const auto& c : columns_) check_cell(c);
}

void Table::add(std::vector<std::string> cells) {
  if (cells.size() != columns_.size())
    throw std::invalid_argument("row width " + std::to_string(cells.size()) +
                                " does not match " + std::to_string(columns_.size()) +
                                " columns");
  for (const auto& c : cells) check_cell(c);
  cells_.push_back(std::move(cells));
}

std::string Table::num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s = buf;
  if (s == "-0") s = "0";
  return s;
}

std::string Table::num(long v) { return std::to_string(v); }

std::string Table::csv(const Metadata& meta) const {
  std::string out = metadata_header(meta);
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  for (const auto& row : cells_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

std::string Table::json(const Metadata& meta) const {
  nlohmann::json j;
  j["meta"] = meta_json(meta);
  j["columns"] = columns_;
  j["rows"] = cells_;
  return j.dump(2) + "\n";
}

std::string text_report(const Metadata& meta, const std::vector<std::string>& lines) {
  std::string out = metadata_header(meta);
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

std::string json_report(const Metadata& meta, const std::vector<std::string>& lines) {
  nlohmann::json j;
  j["meta"] = meta_json(meta);
  j["lines"] = lines;
  return j.dump(2) + "\n";
}

void write_text(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + target.parent_path().string() +
                                     ": " + ec.message());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw std::runtime_error("cannot move " + tmp.string() + " into place: " + ec.message());
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw std::runtime_error("read failed for " + path);
  return out;
}

}  // namespace ctspin::io
