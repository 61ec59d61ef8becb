#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctspin::io {

// Parse or lookup failure with the offending location attached.  `line` is
// the 1-based source line (0 when the entry was set programmatically or the
// error is not tied to a line); `field` is the dotted key, empty for purely
// structural errors.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line, std::string field)
      : std::runtime_error(what), line(line), field(std::move(field)) {}
  int line;
  std::string field;
};

// Key/value file with nested sections.
//
//   top_key = 1          # keys before any section header are top-level
//   [run]                ; '#' and ';' both start comments
//   preset = experimental_9p1GHz
//   [run.grid]
//   b_mT = 1, 2, 3
//
// Section headers nest by dotted names and keys flatten to dotted paths
// ("run.grid.b_mT").  Values run to the end of the line; an inline comment
// starts at a '#' or ';' that opens the value or follows whitespace.
// Duplicate keys are an error.
class Config {
 public:
  Config() = default;

  static Config parse(const std::string& text);
  static Config parse_file(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  int size() const { return static_cast<int>(entries_.size()); }
  // Source line of a key; 0 when absent or set programmatically.
  int line_of(const std::string& key) const;

  // Typed access.  The plain getters throw ConfigError when the key is
  // missing; every getter throws ConfigError naming the key and source line
  // when the stored text does not convert cleanly.
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  long get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;          // true/false/1/0/yes/no/on/off
  std::vector<double> get_doubles(const std::string& key) const;  // comma-separated

  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  double get_double_or(const std::string& key, double fallback) const;
  long get_int_or(const std::string& key, long fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles_or(const std::string& key,
                                     const std::vector<double>& fallback) const;

  // Inserts or overwrites an entry (line 0).
  void set(const std::string& key, const std::string& value);

  // All keys, sorted; optionally only those under "prefix." (prefix given
  // without the trailing dot).
  std::vector<std::string> keys() const;
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  // Canonical serialization: one sorted "key = value" line per entry.  Two
  // configs with equal entries print identically regardless of the source
  // formatting, so this is the hashing surface.
  std::string canonical_text() const;

  // FNV-1a 64-bit hash of canonical_text(), 16 lowercase hex digits.
  std::string hash() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  const Entry& lookup(const std::string& key) const;
  std::map<std::string, Entry> entries_;
};

// FNV-1a 64-bit of arbitrary bytes, 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace ctspin::io
