#include <doctest.h>

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctspin/io/config.hpp"
#include "ctspin/io/table.hpp"

using ctspin::io::Config;
using ctspin::io::ConfigError;
using ctspin::io::Metadata;
using ctspin::io::Table;

namespace {

const char* kSample = R"(top = 1            ; top-level keys live before any section
# full-line comment
[run]
preset = experimental_9p1GHz

[run.grid]
b_mT = 1, 2.5, 3   # inline comment
)";

std::filesystem::path temp_dir() {
  auto p = std::filesystem::temp_directory_path() / "ctspin_io_test";
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("config parses sections, nesting and comments") {
  const Config c = Config::parse(kSample);
  CHECK(c.size() == 3);
  CHECK(c.has("top"));
  CHECK(c.has("run.preset"));
  CHECK(c.has("run.grid.b_mT"));
  CHECK(c.get_string("run.preset") == "experimental_9p1GHz");
  CHECK(c.get_string("run.grid.b_mT") == "1, 2.5, 3");
  CHECK(c.get_string("top") == "1");

  // CRLF input and '#' glued into a value (no comment).
  const Config crlf = Config::parse("a = 1\r\nb = x#y\r\n");
  CHECK(crlf.get_string("a") == "1");
  CHECK(crlf.get_string("b") == "x#y");

  const Config empty = Config::parse("\n  \n# only comments\n");
  CHECK(empty.size() == 0);
}

TEST_CASE("config typed getters") {
  const Config c = Config::parse(
      "x = -2.5e-3\nn = 42\nflag_a = yes\nflag_b = Off\nlist = 1, 2.5 ,3\nname = abc\n");
  CHECK(c.get_double("x") == doctest::Approx(-2.5e-3).epsilon(1e-15));
  CHECK(c.get_int("n") == 42);
  CHECK(c.get_bool("flag_a"));
  CHECK_FALSE(c.get_bool("flag_b"));
  const std::vector<double> want{1.0, 2.5, 3.0};
  CHECK(c.get_doubles("list") == want);

  CHECK(c.get_double_or("x", 9.0) == doctest::Approx(-2.5e-3));
  CHECK(c.get_double_or("missing", 9.0) == 9.0);
  CHECK(c.get_int_or("missing", 7) == 7);
  CHECK(c.get_bool_or("missing", true));
  CHECK(c.get_string_or("missing", "fb") == "fb");
  CHECK(c.get_doubles_or("missing", {4.0}) == std::vector<double>{4.0});
}

TEST_CASE("config conversion errors carry line and field") {
  const Config c = Config::parse("a = 1\nbad = abc\ntrail = 1.5x\nhalf = 2.5\nmood = maybe\n");
  try {
    c.get_double("bad");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line == 2);
    CHECK(e.field == "bad");
    CHECK(std::string(e.what()).find("bad") != std::string::npos);
  }
  CHECK_THROWS_AS(c.get_double("trail"), ConfigError);
  CHECK_THROWS_AS(c.get_int("half"), ConfigError);
  CHECK_THROWS_AS(c.get_bool("mood"), ConfigError);
  CHECK_THROWS_AS(Config::parse("l = 1,,2\n").get_doubles("l"), ConfigError);
  CHECK_THROWS_AS(Config::parse("l =\n").get_doubles("l"), ConfigError);

  try {
    c.get_double("nope");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line == 0);
    CHECK(e.field == "nope");
  }
}

TEST_CASE("config structural errors name the line") {
  try {
    Config::parse("ok = 1\nno equals sign\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line == 2);
    CHECK(e.field.empty());
  }
  CHECK_THROWS_AS(Config::parse("[run\nk = 1\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[]\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[a..b]\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("a b = 1\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("= 1\n"), ConfigError);
  try {
    Config::parse("[s]\nk = 1\nk = 2\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line == 3);
    CHECK(e.field == "s.k");
  }
}

TEST_CASE("config set, keys and prefix queries") {
  Config c = Config::parse(kSample);
  c.set("run.out", "data");
  CHECK(c.get_string("run.out") == "data");
  c.set("top", "2");  // overwrite
  CHECK(c.get_int("top") == 2);
  CHECK_THROWS_AS(c.set("bad key", "1"), ConfigError);

  const std::vector<std::string> want{"run.grid.b_mT", "run.out", "run.preset", "top"};
  CHECK(c.keys() == want);
  const std::vector<std::string> under{"run.grid.b_mT", "run.out", "run.preset"};
  CHECK(c.keys_with_prefix("run") == under);
  CHECK(c.keys_with_prefix("run.grid") == std::vector<std::string>{"run.grid.b_mT"});
  CHECK(c.keys_with_prefix("ru").empty());
}

TEST_CASE("canonical text and hash are formatting-invariant") {
  const Config a = Config::parse(kSample);
  CHECK(a.canonical_text() ==
        "run.grid.b_mT = 1, 2.5, 3\nrun.preset = experimental_9p1GHz\ntop = 1\n");
  // Hand-computed FNV-1a 64 oracles.
  CHECK(a.hash() == "f0041f29b610671c");
  CHECK(Config().hash() == "cbf29ce484222325");
  CHECK(ctspin::io::fnv1a_hex("abc") == "e71fa2190541574b");

  // Reordered, differently commented and spaced source, same entries.
  const Config b = Config::parse(
      "top = 1\n[run.grid]\nb_mT=1, 2.5, 3\n\n[run]\n# note\npreset   =   "
      "experimental_9p1GHz\n");
  CHECK(b.hash() == a.hash());
  CHECK(Config::parse(a.canonical_text()).hash() == a.hash());

  Config changed = Config::parse(kSample);
  changed.set("top", "2");
  CHECK(changed.hash() != a.hash());
}

TEST_CASE("table formats numbers deterministically") {
  CHECK(Table::num(0.09) == "0.09");
  CHECK(Table::num(-0.0) == "0");
  CHECK(Table::num(0.0) == "0");
  CHECK(Table::num(1.0 / 3.0) == "0.333333333333");
  CHECK(Table::num(1e-7) == "1e-07");
  CHECK(Table::num(-9.1) == "-9.1");
  CHECK(Table::num(25000.0 / 9.0) == "2777.77777778");
  CHECK(Table::num(42L) == "42");
  CHECK(Table::num(-3) == "-3");
}

TEST_CASE("csv output is byte-stable") {
  Table t({"B_mT", "E_GHz"});
  t.add({Table::num(12.0), Table::num(0.09)});
  t.add({Table::num(24.0), Table::num(9.1)});
  CHECK(t.rows() == 2);
  CHECK(t.cols() == 2);

  Metadata meta;
  meta.tool = "t";
  meta.schema = "s-v1";
  meta.config_hash = "cbf29ce484222325";
  meta.notes = {{"preset", "p"}};
  const std::string want =
      "# tool: t\n# schema: s-v1\n# config: cbf29ce484222325\n# preset: p\n"
      "B_mT,E_GHz\n12,0.09\n24,9.1\n";
  CHECK(t.csv(meta) == want);
  CHECK(t.csv(meta) == t.csv(meta));

  CHECK_THROWS_AS(t.add({"1"}), std::invalid_argument);
  CHECK_THROWS_AS(t.add({"1", "two,three"}), std::invalid_argument);
  CHECK_THROWS_AS(Table(std::vector<std::string>{}), std::invalid_argument);
  CHECK_THROWS_AS(Table({"a\nb"}), std::invalid_argument);
}

TEST_CASE("json mirrors table and report content") {
  Table t({"k", "v"});
  t.add({"a", "1"});
  Metadata meta{"tool", "sch-v1", "00000000deadbeef", {{"note", "n1"}}};

  const auto j = nlohmann::json::parse(t.json(meta));
  CHECK(j["meta"]["tool"] == "tool");
  CHECK(j["meta"]["schema"] == "sch-v1");
  CHECK(j["meta"]["config"] == "00000000deadbeef");
  CHECK(j["meta"]["note"] == "n1");
  CHECK(j["columns"] == nlohmann::json({"k", "v"}));
  CHECK(j["rows"][0] == nlohmann::json({"a", "1"}));

  const auto r = nlohmann::json::parse(ctspin::io::json_report(meta, {"line one", "line two"}));
  CHECK(r["lines"].size() == 2);
  CHECK(r["lines"][1] == "line two");

  const std::string rep = ctspin::io::text_report(meta, {"alpha", "beta"});
  CHECK(rep ==
        "# tool: tool\n# schema: sch-v1\n# config: 00000000deadbeef\n# note: n1\nalpha\nbeta\n");
}

TEST_CASE("write_text is atomic and creates directories") {
  namespace fs = std::filesystem;
  const fs::path dir = temp_dir();
  const fs::path nested = dir / "a" / "b" / "out.csv";
  fs::remove_all(dir / "a");

  ctspin::io::write_text(nested.string(), "first\n");
  CHECK(ctspin::io::read_text(nested.string()) == "first\n");
  CHECK_FALSE(fs::exists(nested.string() + ".tmp"));

  ctspin::io::write_text(nested.string(), "second\n");
  CHECK(ctspin::io::read_text(nested.string()) == "second\n");

  CHECK_THROWS_AS(ctspin::io::read_text((dir / "missing.txt").string()), std::runtime_error);
  fs::remove_all(dir);
}

TEST_SUITE_END();
