#include "ctspin/io/config.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ctspin/io/table.hpp"

namespace ctspin::io {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Cuts an inline comment: '#' or ';' at the start of the value or after
// whitespace.  A '#' glued to preceding text stays part of the value.
std::string strip_comment(const std::string& line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if ((line[i] == '#' || line[i] == ';') &&
        (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))) {
      return line.substr(0, i);
    }
  }
  return line;
}

bool valid_name(const std::string& s) {
  if (s.empty() || s.front() == '.' || s.back() == '.') return false;
  bool prev_dot = false;
  for (char c : s) {
    if (c == '.') {
      if (prev_dot) return false;
      prev_dot = true;
      continue;
    }
    prev_dot = false;
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

double parse_double(const std::string& text, const std::string& key, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + key + ": '" + text + "'", line, key);
  }
  if (used != text.size())
    throw ConfigError("trailing characters in number for " + key + ": '" + text + "'", line, key);
  return v;
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string raw, section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("unterminated section header: '" + line + "'", line_no, "");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_name(section))
        throw ConfigError("bad section name: '" + section + "'", line_no, "");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value': '" + line + "'", line_no, "");
    const std::string key_part = trim(line.substr(0, eq));
    if (!valid_name(key_part))
      throw ConfigError("bad key name: '" + key_part + "'", line_no, "");
    const std::string key = section.empty() ? key_part : section + "." + key_part;
    if (cfg.entries_.count(key))
      throw ConfigError("duplicate key " + key, line_no, key);
    cfg.entries_[key] = Entry{trim(line.substr(eq + 1)), line_no};
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  return parse(read_text(path));
}

const Config::Entry& Config::lookup(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing key " + key, 0, key);
  return it->second;
}

int Config::line_of(const std::string& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

std::string Config::get_string(const std::string& key) const { return lookup(key).value; }

double Config::get_double(const std::string& key) const {
  const Entry& e = lookup(key);
  return parse_double(e.value, key, e.line);
}

long Config::get_int(const std::string& key) const {
  const Entry& e = lookup(key);
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(e.value, &used);
  } catch (const std::exception&) {
    throw ConfigError("bad integer for " + key + ": '" + e.value + "'", e.line, key);
  }
  if (used != e.value.size())
    throw ConfigError("trailing characters in integer for " + key + ": '" + e.value + "'", e.line,
                      key);
  return v;
}

bool Config::get_bool(const std::string& key) const {
  const Entry& e = lookup(key);
  std::string v;
  for (char c : e.value) v += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("bad boolean for " + key + ": '" + e.value + "'", e.line, key);
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  const Entry& e = lookup(key);
  std::vector<double> out;
  std::string item;
  std::istringstream in(e.value);
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    if (t.empty())
      throw ConfigError("empty element in list for " + key + ": '" + e.value + "'", e.line, key);
    out.push_back(parse_double(t, key, e.line));
  }
  if (out.empty())
    throw ConfigError("empty list for " + key, e.line, key);
  return out;
}

std::string Config::get_string_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}
double Config::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}
long Config::get_int_or(const std::string& key, long fallback) const {
  return has(key) ? get_int(key) : fallback;
}
bool Config::get_bool_or(const std::string& key, bool fallback) const {
  return has(key) ? get_bool(key) : fallback;
}
std::vector<double> Config::get_doubles_or(const std::string& key,
                                           const std::vector<double>& fallback) const {
  return has(key) ? get_doubles(key) : fallback;
}

void Config::set(const std::string& key, const std::string& value) {
  if (!valid_name(key)) throw ConfigError("bad key name: '" + key + "'", 0, key);
  entries_[key] = Entry{value, 0};
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [k, e] : entries_) out.push_back(k);
  return out;
}

std::vector<std::string> Config::keys_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  const std::string p = prefix + ".";
  for (const auto& [k, e] : entries_)
    if (k.compare(0, p.size(), p) == 0) out.push_back(k);
  return out;
}

std::string Config::canonical_text() const {
  std::string out;
  for (const auto& [k, e] : entries_) {
    out += k;
    out += " = ";
    out += e.value;
    out += '\n';
  }
  return out;
}

std::string Config::hash() const { return fnv1a_hex(canonical_text()); }

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ctspin::io
