#include "padicrd/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace padicrd {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

class LineParser {
 public:
  LineParser(const std::string& text, int line) : s_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }

  std::string key() {
    skip_ws();
    std::string out;
    while (true) {
      const auto start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                  s_[pos_] == '-')) {
        ++pos_;
      }
      if (start == pos_) fail(line_, "expected a key");
      out += s_.substr(start, pos_ - start);
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '.') {
        out += '.';
        ++pos_;
        skip_ws();
        continue;
      }
      return out;
    }
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(line_, std::string("expected '") + c + "'");
    ++pos_;
  }

  ConfigValue value() {
    skip_ws();
    if (pos_ >= s_.size()) fail(line_, "expected a value");
    const char c = s_[pos_];
    if (c == '"') {
      ++pos_;
      std::string out;
      while (pos_ < s_.size() && s_[pos_] != '"') {
        if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) {
          const char e = s_[++pos_];
          out += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        } else {
          out += s_[pos_];
        }
        ++pos_;
      }
      if (pos_ >= s_.size()) fail(line_, "unterminated string");
      ++pos_;
      return {out, line_};
    }
    if (c == '[') {
      ++pos_;
      std::vector<ConfigValue> items;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == ']') {
        ++pos_;
        return {items, line_};
      }
      while (true) {
        items.push_back(value());
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ',') {
          ++pos_;
          skip_ws();
          if (pos_ < s_.size() && s_[pos_] == ']') {
            ++pos_;
            break;
          }
          continue;
        }
        expect(']');
        break;
      }
      return {items, line_};
    }
    const auto start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != ',' &&
           s_[pos_] != ']' && s_[pos_] != '#') {
      ++pos_;
    }
    const std::string tok = s_.substr(start, pos_ - start);
    if (tok == "true") return {true, line_};
    if (tok == "false") return {false, line_};
    std::string digits;
    for (char ch : tok) {
      if (ch != '_') digits += ch;
    }
    double x = 0.0;
    const char* first = digits.data();
    if (!digits.empty() && digits[0] == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, digits.data() + digits.size(), x);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
      fail(line_, "cannot parse value '" + tok + "'");
    }
    return {x, line_};
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
  int line_;
};

class Reader {
 public:
  explicit Reader(const ConfigTable& t) : t_(t) {}

  const ConfigValue* find(const std::string& key) {
    const auto it = t_.find(key);
    if (it == t_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }

  std::optional<double> number(const std::string& key) {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    if (const auto* x = std::get_if<double>(&v->data)) return *x;
    fail(v->line, "'" + key + "' must be a number");
  }

  std::optional<long long> integer(const std::string& key, long long lo = 0) {
    const auto x = number(key);
    if (!x) return std::nullopt;
    if (std::floor(*x) != *x || *x < static_cast<double>(lo) || *x > 9.0e15) {
      fail(t_.at(key).line, "'" + key + "' must be an integer >= " + std::to_string(lo));
    }
    return static_cast<long long>(*x);
  }

  std::optional<bool> boolean(const std::string& key) {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    if (const auto* x = std::get_if<bool>(&v->data)) return *x;
    fail(v->line, "'" + key + "' must be true or false");
  }

  std::optional<std::string> string(const std::string& key) {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    if (const auto* x = std::get_if<std::string>(&v->data)) return *x;
    fail(v->line, "'" + key + "' must be a string");
  }

  std::optional<std::vector<double>> numbers(const std::string& key) {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    const auto* arr = std::get_if<std::vector<ConfigValue>>(&v->data);
    if (!arr) fail(v->line, "'" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& item : *arr) {
      const auto* x = std::get_if<double>(&item.data);
      if (!x) fail(v->line, "'" + key + "' must be an array of numbers");
      out.push_back(*x);
    }
    return out;
  }

  void reject_unused() const {
    for (const auto& [key, value] : t_) {
      if (!used_.count(key)) fail(value.line, "unknown key '" + key + "'");
    }
  }

  const ConfigTable& table() const { return t_; }

 private:
  const ConfigTable& t_;
  std::set<std::string> used_;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

Perturbation::Kind perturbation_kind(const std::string& s) {
  if (s == "none") return Perturbation::Kind::none;
  if (s == "random" || s == "random_uniform") return Perturbation::Kind::random_uniform;
  if (s == "eigenmode") return Perturbation::Kind::eigenmode;
  if (s == "wavelet") return Perturbation::Kind::wavelet;
  if (s == "sampled") return Perturbation::Kind::sampled;
  throw ConfigError("unknown perturbation '" + s + "' (none|random|eigenmode|wavelet|sampled)");
}

}  // namespace

ConfigTable parse_toml(const std::string& text) {
  ConfigTable out;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    LineParser lp(raw, line);
    if (lp.at_end()) continue;
    const auto first = raw.find_first_not_of(" \t");
    if (raw[first] == '[') {
      const auto close = raw.find(']', first);
      if (close == std::string::npos) fail(line, "unterminated section header");
      LineParser hp(raw.substr(first + 1, close - first - 1), line);
      section = hp.key();
      if (!hp.at_end()) fail(line, "malformed section header");
      LineParser rest(raw.substr(close + 1), line);
      if (!rest.at_end()) fail(line, "trailing characters after section header");
      continue;
    }
    std::string key = lp.key();
    lp.expect('=');
    auto value = lp.value();
    if (!lp.at_end()) fail(line, "trailing characters after value");
    if (!section.empty()) key = section + "." + key;
    if (!out.emplace(key, std::move(value)).second) fail(line, "duplicate key '" + key + "'");
  }
  return out;
}

std::vector<unsigned> parse_level_list(const std::string& text) {
  std::vector<unsigned> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    unsigned m = 0;
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b == std::string::npos) throw ConfigError("empty entry in level list '" + text + "'");
    const auto [ptr, ec] = std::from_chars(item.data() + b, item.data() + e + 1, m);
    if (ec != std::errc() || ptr != item.data() + e + 1) {
      throw ConfigError("bad level '" + item + "' in list '" + text + "'");
    }
    out.push_back(m);
  }
  if (out.empty()) throw ConfigError("empty level list");
  return out;
}

RunConfig run_config_from_table(const ConfigTable& table) {
  Reader r(table);
  RunConfig c;
  c.graph = r.string("graph");
  if (auto p = r.integer("p", 2)) c.p = static_cast<unsigned>(*p);
  if (auto n = r.integer("N", 1)) c.N = static_cast<unsigned>(*n);
  if (auto m = r.string("model")) c.model = *m;
  require(c.model == "brusselator" || c.model == "cima" || c.model == "custom",
          "model must be brusselator, cima or custom");
  if (auto x = r.number("eps")) c.eps = *x;
  if (auto x = r.number("d")) c.d = *x;
  require(c.eps > 0.0 && c.d > 0.0, "eps and d must be > 0");
  if (auto ls = r.numbers("levels")) {
    for (double m : *ls) {
      require(m >= 0 && std::floor(m) == m, "levels must be non-negative integers");
      c.levels.push_back(static_cast<unsigned>(m));
    }
  }
  if (auto b = r.boolean("infinity")) c.include_infinity = *b;
  if (auto o = r.string("out")) c.out = *o;
  if (auto s = r.integer("seed")) c.sim.seed = static_cast<std::uint64_t>(*s);

  for (const auto& [key, value] : table) {
    const std::string prefix = "kinetics.params.";
    if (key.rfind(prefix, 0) == 0) c.params[key.substr(prefix.size())] = *r.number(key);
  }
  for (const char* name : {"A", "B", "C"}) {
    if (auto x = r.number(std::string("kinetics.") + name)) c.params[name] = *x;
  }
  if (auto f = r.string("kinetics.f")) c.f_text = *f;
  if (auto g = r.string("kinetics.g")) c.g_text = *g;
  if (auto gs = r.numbers("kinetics.guess")) {
    require(gs->size() == 2, "kinetics.guess must be [u, v]");
    c.guess = std::pair{(*gs)[0], (*gs)[1]};
  }
  if (auto bx = r.numbers("kinetics.box")) {
    require(bx->size() == 2 && (*bx)[0] < (*bx)[1], "kinetics.box must be [a, b] with a < b");
    c.box = ValidityBox{(*bx)[0], (*bx)[1]};
  }
  if (c.model == "custom") {
    require(!c.f_text.empty() && !c.g_text.empty(), "custom model needs kinetics.f and kinetics.g");
  } else {
    require(c.f_text.empty() && c.g_text.empty(), "kinetics.f/kinetics.g are only allowed with model = \"custom\"");
  }

  auto& s = c.sim;
  if (auto l = r.integer("simulate.level")) s.level = static_cast<unsigned>(*l);
  if (auto i = r.string("simulate.integrator")) {
    if (*i == "rk4") {
      s.integrator = Integrator::rk4;
    } else if (*i == "exponential_euler") {
      s.integrator = Integrator::exponential_euler;
    } else {
      throw ConfigError("simulate.integrator must be rk4 or exponential_euler");
    }
  }
  if (auto x = r.number("simulate.dt")) {
    require(*x > 0.0, "simulate.dt must be > 0");
    s.dt = *x;
  }
  if (auto x = r.number("simulate.t_end")) {
    require(*x >= 0.0, "simulate.t_end must be >= 0");
    s.t_end = *x;
  }
  if (auto x = r.integer("simulate.stride", 1)) s.stride = static_cast<std::size_t>(*x);
  if (auto x = r.number("simulate.blowup_norm")) s.blowup_norm = *x;
  if (auto x = r.boolean("simulate.enforce_box")) s.enforce_box = *x;
  auto& pert = s.perturbation;
  if (auto k = r.string("simulate.perturbation")) pert.kind = perturbation_kind(*k);
  if (auto x = r.number("simulate.delta")) {
    require(*x >= 0.0, "simulate.delta must be >= 0");
    pert.delta = *x;
  }
  if (auto x = r.number("simulate.amplitude")) pert.amplitude = *x;
  if (auto x = r.number("simulate.kappa")) pert.kappa = *x;
  if (auto x = r.integer("simulate.vertex")) pert.vertex = static_cast<int>(*x);
  if (auto x = r.integer("simulate.j", 1)) pert.j = static_cast<std::uint32_t>(*x);
  if (auto x = r.integer("simulate.wavelet_level", 1)) pert.wavelet_level = static_cast<unsigned>(*x);
  if (auto k = r.string("simulate.datum")) {
    if (*k == "digit_weight") {
      pert.datum.kind = ContinuousDatum::Kind::digit_weight;
    } else if (*k == "vertex_constant") {
      pert.datum.kind = ContinuousDatum::Kind::vertex_constant;
    } else {
      throw ConfigError("simulate.datum must be digit_weight or vertex_constant");
    }
  }
  if (auto x = r.number("simulate.datum_amplitude")) pert.datum.amplitude = *x;
  if (auto xs = r.numbers("simulate.vertex_values")) pert.datum.vertex_values = *xs;
  if (auto xs = r.numbers("replica.times")) {
    for (double t : *xs) require(t >= 0.0, "replica.times must be >= 0");
    c.replica_times = *xs;
  }
  r.reject_unused();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return run_config_from_table(parse_toml(ss.str()));
}

KineticsModel make_model(const RunConfig& config) {
  auto param = [&](const char* name, double fallback) {
    const auto it = config.params.find(name);
    return it == config.params.end() ? fallback : it->second;
  };
  KineticsModel m;
  if (config.model == "brusselator") {
    for (const auto& [k, v] : config.params) require(k == "A" || k == "B", "brusselator takes parameters A, B");
    m = brusselator(param("A", 2.0), param("B", 4.5));
  } else if (config.model == "cima") {
    for (const auto& [k, v] : config.params) {
      require(k == "A" || k == "B" || k == "C", "cima takes parameters A, B, C");
    }
    m = cima(param("A", 10.0), param("B", 2.0), param("C", 1.0));
  } else {
    return parse_kinetics(config.f_text, config.g_text, config.params, config.box, config.guess);
  }
  return config.box ? m.with_box(*config.box) : m;
}

}  // namespace padicrd
