#include "mmt/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mmt/expression.hpp"
#include "mmt/scenario.hpp"

namespace mmt {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

// ------------------------------------------------------------------ values

struct Value {
  enum class Type { Number, Word, String, List };
  Type type = Type::Word;
  double number = 0.0;
  std::string text;
  std::vector<Value> items;
};

class ValueParser {
 public:
  ValueParser(const std::string& text, std::size_t line) : s_(text), line_(line) {}

  Value parse() {
    Value v = value();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "' after value");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(msg + " (column " + std::to_string(pos_ + 1) + " of value)", line_);
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  static bool bare_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '+' ||
           c == '.';
  }

  Value value() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '(') return list();
    if (c == '"') return quoted();
    if (bare_char(c)) return bare();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Value list() {
    ++pos_;  // (
    Value v;
    v.type = Value::Type::List;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ')') {
      ++pos_;
      return v;
    }
    while (true) {
      v.items.push_back(value());
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated list");
      if (s_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (s_[pos_] == ')') {
        ++pos_;
        return v;
      }
      fail("expected ',' or ')' in list");
    }
  }

  Value quoted() {
    ++pos_;  // "
    Value v;
    v.type = Value::Type::String;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      v.text += s_[pos_++];
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return v;
  }

  Value bare() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && bare_char(s_[pos_])) ++pos_;
    Value v;
    v.text = s_.substr(start, pos_ - start);
    const char* first = v.text.data();
    const char* last = first + v.text.size();
    if (*first == '+') ++first;
    double x = 0.0;
    const auto res = std::from_chars(first, last, x);
    if (res.ec == std::errc() && res.ptr == last) {
      if (!std::isfinite(x)) fail("non-finite number '" + v.text + "'");
      v.type = Value::Type::Number;
      v.number = x;
    } else if (std::isdigit(static_cast<unsigned char>(v.text[0])) || v.text[0] == '.' ||
               ((v.text[0] == '-' || v.text[0] == '+') && v.text.size() > 1 &&
                (std::isdigit(static_cast<unsigned char>(v.text[1])) || v.text[1] == '.'))) {
      fail("malformed number '" + v.text + "'");
    } else {
      v.type = Value::Type::Word;
    }
    return v;
  }

  const std::string& s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

// ------------------------------------------------------------------ entries

struct Entry {
  Value value;
  std::size_t line;
};

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "scenario.name",
      "source.kind", "source.metric", "source.params", "source.diag", "source.signature",
      "source.x0", "source.v0", "source.congruence", "source.K", "source.b", "source.G",
      "source.n",
      "target.kind", "target.K", "target.b", "target.G", "target.n",
      "integration.h", "integration.tau_max",
      "transfer.T0",
      "verify.states",
      "tolerance.ode", "tolerance.mapping", "tolerance.factorization", "tolerance.norm_drift",
      "tolerance.frame_drift", "tolerance.symplectic_flag",
      "output.dir", "output.formats",
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::map<std::string, Entry> read_entries(const std::string& text) {
  std::map<std::string, Entry> out;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'section.key = value'", lineno);
    const std::string key = trim(line.substr(0, eq));
    const std::string rhs = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key before '='", lineno);
    if (key.find('.') == std::string::npos) {
      throw ConfigError("key '" + key + "' must have the form section.key", lineno);
    }
    if (!known_keys().count(key)) throw ConfigError("unknown key '" + key + "'", lineno);
    if (out.count(key)) {
      throw ConfigError("duplicate key '" + key + "' (first set on line " +
                            std::to_string(out.at(key).line) + ")",
                        lineno);
    }
    out.emplace(key, Entry{ValueParser(rhs, lineno).parse(), lineno});
  }
  return out;
}

// ------------------------------------------------------------------ typed access

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : e_(std::move(entries)) {}

  bool has(const std::string& key) const { return e_.count(key) > 0; }
  std::size_t line(const std::string& key) const { return has(key) ? e_.at(key).line : 0; }
  const std::map<std::string, std::size_t>& lines() {
    if (lines_.empty())
      for (const auto& [k, v] : e_) lines_[k] = v.line;
    return lines_;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(key + ": " + msg, line(key));
  }

  double number(const std::string& key) const {
    const Value& v = e_.at(key).value;
    if (v.type != Value::Type::Number) fail(key, "expected a number");
    return v.number;
  }

  std::size_t count(const std::string& key) const {
    const double x = number(key);
    if (x < 1 || x != std::floor(x) || x > 1e6) fail(key, "expected a positive integer");
    return static_cast<std::size_t>(x);
  }

  std::string word(const std::string& key) const {
    const Value& v = e_.at(key).value;
    if (v.type != Value::Type::Word && v.type != Value::Type::String)
      fail(key, "expected a name or a quoted string");
    return v.text;
  }

  /// A number or a flat list of numbers.
  std::vector<double> numbers(const std::string& key) const {
    const Value& v = e_.at(key).value;
    if (v.type == Value::Type::Number) return {v.number};
    if (v.type != Value::Type::List) fail(key, "expected a number or a list of numbers");
    return flat_numbers(key, v);
  }

  std::vector<double> flat_numbers(const std::string& key, const Value& v) const {
    std::vector<double> out;
    for (const Value& item : v.items) {
      if (item.type != Value::Type::Number) fail(key, "expected a list of numbers");
      out.push_back(item.number);
    }
    return out;
  }

  std::vector<std::string> strings(const std::string& key) const {
    const Value& v = e_.at(key).value;
    std::vector<std::string> out;
    if (v.type != Value::Type::List) {
      if (v.type == Value::Type::List) fail(key, "expected a list");
      out.push_back(v.text);
      return out;
    }
    for (const Value& item : v.items) {
      if (item.type == Value::Type::List) fail(key, "expected a flat list");
      out.push_back(item.text);
    }
    return out;
  }

  /// List of rows, each a list of numbers; a flat list is a single row.
  std::vector<std::vector<double>> number_rows(const std::string& key) const {
    const Value& v = e_.at(key).value;
    if (v.type != Value::Type::List) fail(key, "expected a list");
    if (!v.items.empty() && v.items.front().type != Value::Type::List)
      return {flat_numbers(key, v)};
    std::vector<std::vector<double>> rows;
    for (const Value& item : v.items) {
      if (item.type != Value::Type::List) fail(key, "expected a list of lists");
      rows.push_back(flat_numbers(key, item));
    }
    return rows;
  }

  std::vector<std::vector<std::string>> string_rows(const std::string& key) const {
    const Value& v = e_.at(key).value;
    if (v.type != Value::Type::List) {
      if (v.type == Value::Type::Number || v.type == Value::Type::String ||
          v.type == Value::Type::Word)
        return {{v.text}};
    }
    std::vector<std::vector<std::string>> rows;
    if (!v.items.empty() && v.items.front().type != Value::Type::List) fail(key, "expected rows");
    for (const Value& item : v.items) {
      if (item.type != Value::Type::List) fail(key, "expected a list of rows");
      std::vector<std::string> row;
      for (const Value& x : item.items) {
        if (x.type == Value::Type::List) fail(key, "matrix entries must be scalars");
        row.push_back(x.text);
      }
      rows.push_back(std::move(row));
    }
    return rows;
  }

  const Value& raw(const std::string& key) const { return e_.at(key).value; }

 private:
  std::map<std::string, Entry> e_;
  std::map<std::string, std::size_t> lines_;
};

const std::set<std::string> kSourceKinds = {"jacobi-second-order", "jacobi-first-order",
                                            "constant-curvature",  "metric-second-order",
                                            "metric-quadratic-form", "metric-first-order"};
const std::set<std::string> kTargetKinds = {"constant-curvature", "metric-second-order",
                                            "metric-quadratic-form", "metric-first-order"};

// Keys each kind may use (besides kind).
std::set<std::string> keys_for(const std::string& kind) {
  if (kind == "jacobi-second-order") return {"metric", "params", "diag", "signature", "x0", "v0"};
  if (kind == "jacobi-first-order") return {"congruence", "params"};
  if (kind == "constant-curvature") return {"K", "n"};
  return {"G", "b", "n"};
}

SideConfig read_side(Reader& r, const std::string& side) {
  SideConfig s;
  const std::string kind_key = side + ".kind";
  if (!r.has(kind_key)) throw ConfigError("missing required key '" + kind_key + "'", 0);
  s.kind = r.word(kind_key);
  const auto& kinds = side == "source" ? kSourceKinds : kTargetKinds;
  if (!kinds.count(s.kind)) {
    std::string list;
    for (const auto& k : kinds) list += (list.empty() ? "" : ", ") + k;
    r.fail(kind_key, "unknown kind '" + s.kind + "' (expected one of " + list + ")");
  }
  const std::set<std::string> allowed = keys_for(s.kind);
  for (const std::string& k : known_keys()) {
    if (k.rfind(side + ".", 0) != 0 || k == kind_key) continue;
    const std::string field = k.substr(side.size() + 1);
    if (r.has(k) && !allowed.count(field)) r.fail(k, "not used by kind '" + s.kind + "'");
  }

  const auto key = [&](const char* f) { return side + "." + f; };
  if (r.has(key("metric"))) s.metric = r.word(key("metric"));
  if (r.has(key("params"))) s.params = r.numbers(key("params"));
  if (r.has(key("diag"))) s.diag = r.strings(key("diag"));
  if (r.has(key("signature"))) {
    for (double x : r.numbers(key("signature"))) {
      if (x != 1.0 && x != -1.0) r.fail(key("signature"), "entries must be 1 or -1");
      s.signature.push_back(static_cast<int>(x));
    }
  }
  if (r.has(key("x0"))) s.x0 = r.numbers(key("x0"));
  if (r.has(key("v0"))) s.v0 = r.numbers(key("v0"));
  if (r.has(key("congruence"))) s.congruence = r.word(key("congruence"));
  if (r.has(key("K"))) s.K = r.numbers(key("K"));
  if (r.has(key("b"))) s.b = r.numbers(key("b"));
  if (r.has(key("G"))) s.G = r.string_rows(key("G"));
  if (r.has(key("n"))) s.n = r.count(key("n"));
  return s;
}

// ------------------------------------------------------------------ validation

class Validator {
 public:
  explicit Validator(const std::map<std::string, std::size_t>* lines) : lines_(lines) {}

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    std::size_t line = 0;
    if (lines_) {
      const auto it = lines_->find(key);
      if (it != lines_->end()) line = it->second;
    }
    throw ConfigError(key + ": " + msg, line);
  }

  void require(bool ok, const std::string& key, const std::string& msg) const {
    if (!ok) fail(key, msg);
  }

  // Resolves and checks one analytic side in place; returns its n.
  std::size_t analytic_side(SideConfig& s, const std::string& side,
                            std::optional<std::size_t> inherited) const {
    const auto key = [&](const char* f) { return side + "." + f; };
    std::optional<std::size_t> n = s.n;
    if (n && inherited && *n != *inherited) {
      fail(key("n"), "n = " + std::to_string(*n) + " but the source has n = " +
                         std::to_string(*inherited));
    }
    if (!n) n = inherited;

    const auto broadcast = [&](std::vector<double>& v, const char* f) {
      if (v.empty()) fail(key(f), "empty list");
      if (!n && v.size() > 1) n = v.size();
      if (!n) fail(key(f), "scalar value needs " + key("n") + " to fix the dimension");
      if (v.size() == 1) v.assign(*n, v.front());
      if (v.size() != *n) {
        fail(key(f), "has " + std::to_string(v.size()) + " entries, expected n = " +
                         std::to_string(*n));
      }
    };

    if (s.kind == "constant-curvature") {
      require(!s.K.empty(), key("K"), "required for kind constant-curvature");
      broadcast(s.K, "K");
    } else {
      require(s.G.empty() != s.b.empty(), key(s.G.empty() ? "b" : "G"),
              "exactly one of " + key("G") + " and " + key("b") + " is required");
      if (!s.b.empty()) {
        broadcast(s.b, "b");
      } else {
        const std::size_t rows = s.G.size();
        for (const auto& row : s.G)
          require(row.size() == rows, key("G"), "must be a square matrix given as rows");
        if (n && *n != rows) {
          fail(key("G"), "is " + std::to_string(rows) + "x" + std::to_string(rows) +
                             ", expected n = " + std::to_string(*n));
        }
        n = rows;
        for (const auto& row : s.G)
          for (const auto& e : row) {
            try {
              Expression(e, {"tau"});
            } catch (const Error& err) {
              fail(key("G"), err.what());
            }
          }
      }
    }
    s.n = n;
    return *n;
  }

  std::size_t geometric_side(const SideConfig& s) const {
    try {
      if (s.kind == "jacobi-first-order") {
        require(!s.congruence.empty(), "source.congruence", "required for kind jacobi-first-order");
        const auto c = build_congruence(s);
        return c.metric.dim - 1;
      }
      require(!s.metric.empty(), "source.metric", "required for kind jacobi-second-order");
      const Metric m = build_metric(s);
      require(s.x0.size() == m.dim, "source.x0",
              "has " + std::to_string(s.x0.size()) + " entries, metric dimension is " +
                  std::to_string(m.dim));
      require(s.v0.size() == m.dim, "source.v0",
              "has " + std::to_string(s.v0.size()) + " entries, metric dimension is " +
                  std::to_string(m.dim));
      try {
        normalize_timelike(m, Point(s.x0), Vec(s.v0));
      } catch (const SingularMetric& e) {
        fail("source.x0", e.what());
      } catch (const InvalidArgument& e) {
        fail("source.v0", e.what());
      }
      return m.dim - 1;
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      fail(s.kind == "jacobi-first-order" ? "source.congruence" : "source.metric", e.what());
    }
  }

  void run(ScenarioConfig& c) const {
    require(!c.name.empty(), "scenario.name", "must not be empty");
    for (char ch : c.name)
      require(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.',
              "scenario.name", "may contain only letters, digits, '-', '_' and '.'");
    require(std::isfinite(c.h) && c.h > 0.0, "integration.h", "must be positive");
    require(std::isfinite(c.tau_max) && c.tau_max > 0.0, "integration.tau_max",
            "must be positive");
    require(c.tau_max / c.h <= 1e7, "integration.tau_max", "more than 1e7 steps");

    std::size_t n = 0;
    if (c.source.kind == "jacobi-second-order" || c.source.kind == "jacobi-first-order") {
      n = geometric_side(c.source);
    } else {
      n = analytic_side(c.source, "source", std::nullopt);
    }
    const std::size_t target_n = analytic_side(c.target, "target", n);
    require(target_n == n, "target.kind", "dimension mismatch with the source");

    if (!c.T0.empty()) {
      require(c.T0.size() == 4 * n * n, "transfer.T0",
              "has " + std::to_string(c.T0.size()) + " entries, expected " +
                  std::to_string(4 * n * n) + " (2n x 2n, row-major)");
    }
    for (const auto& s : c.verify_states) {
      require(s.size() == 2 * n, "verify.states",
              "state of length " + std::to_string(s.size()) + ", expected 2n = " +
                  std::to_string(2 * n));
    }
    const Tolerances& t = c.tolerance;
    for (const auto& [k, v] : {std::pair{"tolerance.ode", t.ode},
                               {"tolerance.mapping", t.mapping},
                               {"tolerance.factorization", t.factorization},
                               {"tolerance.norm_drift", t.norm_drift},
                               {"tolerance.frame_drift", t.frame_drift},
                               {"tolerance.symplectic_flag", t.symplectic_flag}})
      require(std::isfinite(v) && v > 0.0, k, "must be positive");
    require(!c.formats.empty(), "output.formats", "must list at least one format");
    std::set<std::string> seen;
    for (const auto& f : c.formats) {
      require(f == "csv" || f == "json", "output.formats", "unknown format '" + f + "'");
      require(seen.insert(f).second, "output.formats", "duplicate format '" + f + "'");
    }
    if (c.output_dir) require(!c.output_dir->empty(), "output.dir", "must not be empty");
  }

 private:
  const std::map<std::string, std::size_t>* lines_;
};

// ------------------------------------------------------------------ echo

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string list(const std::vector<double>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_double(v[i]);
  return out + ")";
}

std::string list(const std::vector<int>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + std::to_string(v[i]);
  return out + ")";
}

std::string quoted_list(const std::vector<std::string>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + quote(v[i]);
  return out + ")";
}

void echo_side(std::ostringstream& o, const std::string& side, const SideConfig& s) {
  const auto line = [&](const char* k, const std::string& v) {
    o << side << '.' << k << " = " << v << '\n';
  };
  line("kind", s.kind);
  if (!s.metric.empty()) line("metric", s.metric);
  if (!s.congruence.empty()) line("congruence", s.congruence);
  if (!s.params.empty()) line("params", list(s.params));
  if (!s.diag.empty()) line("diag", quoted_list(s.diag));
  if (!s.signature.empty()) line("signature", list(s.signature));
  if (!s.x0.empty()) line("x0", list(s.x0));
  if (!s.v0.empty()) line("v0", list(s.v0));
  if (s.n) line("n", std::to_string(*s.n));
  if (!s.K.empty()) line("K", list(s.K));
  if (!s.b.empty()) line("b", list(s.b));
  if (!s.G.empty()) {
    std::string g = "(";
    for (std::size_t i = 0; i < s.G.size(); ++i) g += (i ? ", " : "") + quoted_list(s.G[i]);
    line("G", g + ")");
  }
}

}  // namespace

std::size_t ScenarioConfig::n() const {
  if (source.n) return *source.n;
  if (source.kind == "jacobi-first-order") return build_congruence(source).metric.dim - 1;
  return build_metric(source).dim - 1;
}

std::size_t ScenarioConfig::steps() const {
  return static_cast<std::size_t>(std::llround(tau_max / h));
}

void validate_config(const ScenarioConfig& c) {
  ScenarioConfig copy = c;
  Validator(nullptr).run(copy);
  if (!(copy == c)) throw ConfigError("configuration is not in resolved form", 0);
}

ScenarioConfig parse_config(const std::string& text) {
  Reader r(read_entries(text));
  ScenarioConfig c;
  if (r.has("scenario.name")) c.name = r.word("scenario.name");
  c.source = read_side(r, "source");
  c.target = read_side(r, "target");
  if (r.has("integration.h")) c.h = r.number("integration.h");
  if (!r.has("integration.tau_max"))
    throw ConfigError("missing required key 'integration.tau_max'", 0);
  c.tau_max = r.number("integration.tau_max");

  if (r.has("transfer.T0")) {
    const Value& v = r.raw("transfer.T0");
    if (v.type == Value::Type::Word) {
      if (v.text != "identity") r.fail("transfer.T0", "expected 'identity' or a list of entries");
    } else {
      for (const auto& row : r.number_rows("transfer.T0"))
        c.T0.insert(c.T0.end(), row.begin(), row.end());
      if (c.T0.empty()) r.fail("transfer.T0", "empty list");
    }
  }
  if (r.has("verify.states")) {
    c.verify_states = r.number_rows("verify.states");
    if (c.verify_states.empty()) r.fail("verify.states", "empty list");
  }

  const auto tol = [&](const char* k, double& field) {
    const std::string key = std::string("tolerance.") + k;
    if (r.has(key)) field = r.number(key);
  };
  tol("ode", c.tolerance.ode);
  tol("mapping", c.tolerance.mapping);
  tol("factorization", c.tolerance.factorization);
  tol("norm_drift", c.tolerance.norm_drift);
  tol("frame_drift", c.tolerance.frame_drift);
  tol("symplectic_flag", c.tolerance.symplectic_flag);

  if (r.has("output.dir")) c.output_dir = r.word("output.dir");
  if (r.has("output.formats")) c.formats = r.strings("output.formats");

  Validator(&r.lines()).run(c);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'", 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string echo_config(const ScenarioConfig& c) {
  std::ostringstream o;
  o << "scenario.name = " << quote(c.name) << '\n';
  echo_side(o, "source", c.source);
  echo_side(o, "target", c.target);
  o << "integration.h = " << format_double(c.h) << '\n';
  o << "integration.tau_max = " << format_double(c.tau_max) << '\n';
  o << "transfer.T0 = " << (c.T0.empty() ? "identity" : list(c.T0)) << '\n';
  if (!c.verify_states.empty()) {
    o << "verify.states = (";
    for (std::size_t i = 0; i < c.verify_states.size(); ++i)
      o << (i ? ", " : "") << list(c.verify_states[i]);
    o << ")\n";
  }
  const Tolerances& t = c.tolerance;
  o << "tolerance.ode = " << format_double(t.ode) << '\n';
  o << "tolerance.mapping = " << format_double(t.mapping) << '\n';
  o << "tolerance.factorization = " << format_double(t.factorization) << '\n';
  o << "tolerance.norm_drift = " << format_double(t.norm_drift) << '\n';
  o << "tolerance.frame_drift = " << format_double(t.frame_drift) << '\n';
  o << "tolerance.symplectic_flag = " << format_double(t.symplectic_flag) << '\n';
  if (c.output_dir) o << "output.dir = " << quote(*c.output_dir) << '\n';
  o << "output.formats = (";
  for (std::size_t i = 0; i < c.formats.size(); ++i) o << (i ? ", " : "") << c.formats[i];
  o << ")\n";
  return o.str();
}

}  // namespace mmt
