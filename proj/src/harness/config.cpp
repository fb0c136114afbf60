#include "cheeger/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace cheeger::harness {

namespace {

enum class Kind { kInt, kReal, kBool, kString };

struct ParamRule {
  std::string name;
  Kind kind;
  bool required;
};

const std::map<std::string, std::vector<ParamRule>>& generator_rules() {
  static const std::map<std::string, std::vector<ParamRule>> rules = {
      {"cycle", {{"n", Kind::kInt, true}}},
      {"hypercube", {{"d", Kind::kInt, true}}},
      {"complete", {{"n", Kind::kInt, true}}},
      {"dumbbell", {{"m", Kind::kInt, true}, {"bridge", Kind::kReal, false}}},
      {"planted",
       {{"k", Kind::kInt, true}, {"m", Kind::kInt, true}, {"p_in", Kind::kReal, true}}},
      {"file", {{"path", Kind::kString, true}, {"normalize", Kind::kBool, false}}},
  };
  return rules;
}

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t line = 0;

  bool done() const { return pos >= text.size(); }
  char peek() const { return done() ? '\0' : text[pos]; }
  void skip_ws() {
    while (!done() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(what, line); }
  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }
};

bool is_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string parse_key(Cursor& cur) {
  cur.skip_ws();
  const std::size_t start = cur.pos;
  while (!cur.done() && is_key_char(cur.peek())) ++cur.pos;
  if (cur.pos == start) cur.fail("expected a key");
  return std::string(cur.text.substr(start, cur.pos - start));
}

std::string parse_string(Cursor& cur) {
  ++cur.pos;  // opening quote
  std::string out;
  while (true) {
    if (cur.done()) cur.fail("unterminated string");
    const char c = cur.text[cur.pos++];
    if (c == '"') return out;
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (cur.done()) cur.fail("unterminated escape");
    const char e = cur.text[cur.pos++];
    switch (e) {
      case '"': out.push_back('"'); break;
      case '\\': out.push_back('\\'); break;
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      default: cur.fail(std::string("unknown escape \\") + e);
    }
  }
}

// A bare token: number, boolean, or integer range a..b.
std::vector<Scalar> parse_bare(Cursor& cur, bool allow_range) {
  const std::size_t start = cur.pos;
  while (!cur.done()) {
    const char c = cur.peek();
    if (c == ',' || c == ']' || c == '#' || c == ' ' || c == '\t' || c == '\n' || c == '\r') break;
    ++cur.pos;
  }
  const std::string_view tok = cur.text.substr(start, cur.pos - start);
  if (tok.empty()) cur.fail("expected a value");
  if (tok == "true") return {Scalar{true}};
  if (tok == "false") return {Scalar{false}};

  auto as_int = [](std::string_view s) -> std::optional<std::int64_t> {
    std::int64_t v = 0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
  };

  if (const auto dots = tok.find(".."); dots != std::string_view::npos) {
    if (!allow_range) cur.fail("ranges are only allowed inside arrays");
    const auto lo = as_int(tok.substr(0, dots));
    const auto hi = as_int(tok.substr(dots + 2));
    if (!lo || !hi) cur.fail("malformed range '" + std::string(tok) + "'");
    if (*lo > *hi) cur.fail("empty range '" + std::string(tok) + "'");
    if (*hi - *lo > 1000000) cur.fail("range too long");
    std::vector<Scalar> out;
    for (std::int64_t v = *lo; v <= *hi; ++v) out.emplace_back(v);
    return out;
  }
  if (const auto v = as_int(tok)) return {Scalar{*v}};

  const std::string owned(tok);
  std::istringstream in(owned);
  in.imbue(std::locale::classic());
  double d = 0.0;
  in >> d;
  if (!in || in.peek() != std::char_traits<char>::eof()) {
    cur.fail("cannot parse value '" + owned + "'");
  }
  return {Scalar{d}};
}

std::vector<Scalar> parse_value(Cursor& cur, bool& was_array) {
  cur.skip_ws();
  was_array = false;
  if (cur.peek() == '"') return {Scalar{parse_string(cur)}};
  if (cur.peek() != '[') return parse_bare(cur, false);

  was_array = true;
  ++cur.pos;
  std::vector<Scalar> out;
  while (true) {
    cur.skip_ws();
    if (cur.peek() == ']') {
      ++cur.pos;
      return out;
    }
    if (cur.done() || cur.peek() == '\n') cur.fail("unterminated array (arrays are single-line)");
    if (cur.peek() == '"') {
      out.emplace_back(parse_string(cur));
    } else {
      auto part = parse_bare(cur, true);
      out.insert(out.end(), part.begin(), part.end());
    }
    cur.skip_ws();
    if (cur.peek() == ',') {
      ++cur.pos;
    } else if (cur.peek() != ']') {
      cur.fail("expected ',' or ']' in array");
    }
  }
}

void finish_line(Cursor& cur) {
  cur.skip_ws();
  if (cur.peek() == '#') {
    while (!cur.done() && cur.peek() != '\n') ++cur.pos;
  }
  if (!cur.done() && cur.peek() == '\r') ++cur.pos;
  if (!cur.done() && cur.peek() != '\n') cur.fail("unexpected text after value");
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::kInt: return "an integer";
    case Kind::kReal: return "a number";
    case Kind::kBool: return "a boolean";
    case Kind::kString: return "a string";
  }
  return "";
}

bool fits(const Scalar& s, Kind k) {
  switch (k) {
    case Kind::kInt: return std::holds_alternative<std::int64_t>(s);
    case Kind::kReal:
      return std::holds_alternative<double>(s) || std::holds_alternative<std::int64_t>(s);
    case Kind::kBool: return std::holds_alternative<bool>(s);
    case Kind::kString: return std::holds_alternative<std::string>(s);
  }
  return false;
}

double to_real(const Scalar& s) {
  if (const auto* i = std::get_if<std::int64_t>(&s)) return static_cast<double>(*i);
  return std::get<double>(s);
}

std::int64_t single_int(const std::vector<Scalar>& v, bool was_array, Cursor& cur,
                        const std::string& key) {
  if (was_array || v.size() != 1 || !std::holds_alternative<std::int64_t>(v[0])) {
    cur.fail("'" + key + "' must be a single integer");
  }
  return std::get<std::int64_t>(v[0]);
}

void validate_family(const FamilySpec& f) {
  if (f.generator.empty()) throw ConfigError("family without 'generator'", f.line);
  const auto it = generator_rules().find(f.generator);
  if (it == generator_rules().end()) {
    throw ConfigError("unknown generator '" + f.generator + "'", f.line);
  }
  std::set<std::string> known;
  for (const ParamRule& rule : it->second) {
    known.insert(rule.name);
    const auto p = f.params.find(rule.name);
    if (p == f.params.end()) {
      if (rule.required) {
        throw ConfigError("generator '" + f.generator + "' needs '" + rule.name + "'", f.line);
      }
      continue;
    }
    if (p->second.empty()) throw ConfigError("'" + rule.name + "' is an empty list", f.line);
    for (const Scalar& s : p->second) {
      if (!fits(s, rule.kind)) {
        throw ConfigError("'" + rule.name + "' must be " + kind_name(rule.kind), f.line);
      }
    }
  }
  for (const auto& [key, values] : f.params) {
    if (!known.contains(key)) {
      throw ConfigError("generator '" + f.generator + "' has no parameter '" + key + "'", f.line);
    }
  }
  if (f.seeds.empty()) throw ConfigError("family needs a nonempty 'seeds' list", f.line);
}

}  // namespace

const std::vector<std::string>& generator_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, rules] : generator_rules()) out.push_back(name);
    return out;
  }();
  return names;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "cheeger", "spectral_oracle", "product", "kway",      "drop",
      "pagerank", "walks",          "powering", "partition",
  };
  return names;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  config.text = std::string(text);
  enum class Section { kTop, kTolerances, kFamily } section = Section::kTop;
  std::set<std::string> seen_top, seen_tol, seen_family;
  bool have_suites = false;

  Cursor cur{text, 0, 0};
  while (!cur.done()) {
    ++cur.line;
    cur.skip_ws();
    const char c = cur.peek();
    if (c == '\n' || c == '\r' || c == '#' || cur.done()) {
      finish_line(cur);
      if (!cur.done()) ++cur.pos;
      continue;
    }
    if (c == '[') {
      ++cur.pos;
      const bool array_table = cur.peek() == '[';
      if (array_table) ++cur.pos;
      const std::string name = parse_key(cur);
      cur.expect(']');
      if (array_table) cur.expect(']');
      if (array_table && name == "family") {
        section = Section::kFamily;
        config.families.push_back(FamilySpec{});
        config.families.back().line = cur.line;
        seen_family.clear();
      } else if (!array_table && name == "tolerances") {
        if (!seen_top.insert("[tolerances]").second) cur.fail("duplicate [tolerances] table");
        section = Section::kTolerances;
      } else {
        cur.fail("unknown table '" + name + "'");
      }
      finish_line(cur);
      if (!cur.done()) ++cur.pos;
      continue;
    }

    const std::string key = parse_key(cur);
    cur.expect('=');
    bool was_array = false;
    std::vector<Scalar> value = parse_value(cur, was_array);
    finish_line(cur);

    switch (section) {
      case Section::kTop: {
        if (!seen_top.insert(key).second) cur.fail("duplicate key '" + key + "'");
        if (key == "output_dir") {
          if (was_array || !std::holds_alternative<std::string>(value[0])) {
            cur.fail("'output_dir' must be a string");
          }
          config.output_dir = std::get<std::string>(value[0]);
        } else if (key == "workers") {
          const std::int64_t w = single_int(value, was_array, cur, key);
          if (w < 0) cur.fail("'workers' must be >= 0");
          config.workers = static_cast<std::size_t>(w);
        } else if (key == "suites") {
          if (!was_array) cur.fail("'suites' must be an array of strings");
          for (const Scalar& s : value) {
            const auto* name = std::get_if<std::string>(&s);
            if (!name) cur.fail("'suites' must be an array of strings");
            if (std::find(suite_names().begin(), suite_names().end(), *name) ==
                suite_names().end()) {
              cur.fail("unknown suite '" + *name + "'");
            }
            if (std::find(config.suites.begin(), config.suites.end(), *name) ==
                config.suites.end()) {
              config.suites.push_back(*name);
            }
          }
          have_suites = true;
        } else {
          cur.fail("unknown key '" + key + "'");
        }
        break;
      }
      case Section::kTolerances: {
        if (!seen_tol.insert(key).second) cur.fail("duplicate key '" + key + "'");
        if (was_array || value.size() != 1 || !fits(value[0], Kind::kReal)) {
          cur.fail("tolerance '" + key + "' must be a number");
        }
        const double v = to_real(value[0]);
        if (!(v >= 0.0)) cur.fail("tolerance '" + key + "' must be >= 0");
        Tolerances& t = config.tolerances;
        if (key == "cheeger_relative") t.cheeger_relative = v;
        else if (key == "eigen_oracle") t.eigen_oracle = v;
        else if (key == "spectrum_mapping") t.spectrum_mapping = v;
        else if (key == "push_sandwich") t.push_sandwich = v;
        else if (key == "truncation_sandwich") t.truncation_sandwich = v;
        else cur.fail("unknown tolerance '" + key + "'");
        break;
      }
      case Section::kFamily: {
        FamilySpec& f = config.families.back();
        if (!seen_family.insert(key).second) cur.fail("duplicate key '" + key + "'");
        if (key == "generator") {
          if (was_array || !std::holds_alternative<std::string>(value[0])) {
            cur.fail("'generator' must be a string");
          }
          f.generator = std::get<std::string>(value[0]);
        } else if (key == "seeds") {
          for (const Scalar& s : value) {
            const auto* v = std::get_if<std::int64_t>(&s);
            if (!v || *v < 0) cur.fail("'seeds' must be nonnegative integers");
            f.seeds.push_back(static_cast<std::uint64_t>(*v));
          }
        } else {
          f.params[key] = std::move(value);
        }
        break;
      }
    }
    if (!cur.done()) ++cur.pos;
  }

  if (!have_suites) throw ConfigError("missing 'suites'", 0);
  for (const FamilySpec& f : config.families) validate_family(f);
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string(), 0);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace cheeger::harness
