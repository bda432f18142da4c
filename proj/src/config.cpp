#include "viscofrac/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace viscofrac {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Removes a trailing # comment that is not inside a string.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

class ValueParser {
 public:
  explicit ValueParser(const std::string& s) : s_(s) {}

  ConfigValue parse() {
    ConfigValue v = value();
    skip();
    if (pos_ != s_.size()) throw std::invalid_argument("trailing characters in value '" + s_ + "'");
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  ConfigValue value() {
    skip();
    if (pos_ >= s_.size()) throw std::invalid_argument("missing value");
    ConfigValue v;
    if (s_[pos_] == '"') {
      const auto end = s_.find('"', pos_ + 1);
      if (end == std::string::npos) throw std::invalid_argument("unterminated string in '" + s_ + "'");
      v.type = ConfigValue::Type::String;
      v.text = s_.substr(pos_ + 1, end - pos_ - 1);
      pos_ = end + 1;
      return v;
    }
    if (s_[pos_] == '[') {
      ++pos_;
      v.type = ConfigValue::Type::Array;
      skip();
      if (pos_ < s_.size() && s_[pos_] == ']') {
        ++pos_;
        return v;
      }
      for (;;) {
        v.items.push_back(value());
        skip();
        if (pos_ < s_.size() && s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (pos_ < s_.size() && s_[pos_] == ']') {
          ++pos_;
          return v;
        }
        throw std::invalid_argument("expected ',' or ']' in '" + s_ + "'");
      }
    }
    std::size_t end = pos_;
    while (end < s_.size() && s_[end] != ',' && s_[end] != ']') ++end;
    const std::string word = trim(s_.substr(pos_, end - pos_));
    pos_ = end;
    if (word == "true" || word == "false") {
      v.type = ConfigValue::Type::Bool;
      v.boolean = word == "true";
      return v;
    }
    std::size_t used = 0;
    try {
      v.number = std::stod(word, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != word.size() || word.empty()) throw std::invalid_argument("bad value '" + word + "'");
    v.type = ConfigValue::Type::Number;
    return v;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

const ConfigValue* find(const ConfigTable& t, const std::string& section, const std::string& key) {
  const auto s = t.find(section);
  if (s == t.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

[[noreturn]] void bad(const std::string& section, const std::string& key, const std::string& what) {
  throw std::invalid_argument("[" + section + "] " + key + ": " + what);
}

double number(const ConfigTable& t, const std::string& section, const std::string& key, double fallback) {
  const ConfigValue* v = find(t, section, key);
  if (!v) return fallback;
  if (v->type != ConfigValue::Type::Number) bad(section, key, "expected a number");
  return v->number;
}

int integer(const ConfigTable& t, const std::string& section, const std::string& key, int fallback) {
  const double x = number(t, section, key, fallback);
  if (x != std::floor(x)) bad(section, key, "expected an integer");
  return static_cast<int>(x);
}

bool boolean(const ConfigTable& t, const std::string& section, const std::string& key, bool fallback) {
  const ConfigValue* v = find(t, section, key);
  if (!v) return fallback;
  if (v->type != ConfigValue::Type::Bool) bad(section, key, "expected true or false");
  return v->boolean;
}

std::string text(const ConfigTable& t, const std::string& section, const std::string& key,
                 const std::string& fallback) {
  const ConfigValue* v = find(t, section, key);
  if (!v) return fallback;
  if (v->type != ConfigValue::Type::String) bad(section, key, "expected a string");
  return v->text;
}

Expression expression(const ConfigValue& v) {
  if (v.type == ConfigValue::Type::Number) return Expression::constant(v.number);
  if (v.type == ConfigValue::Type::String) return Expression::parse(v.text);
  throw std::invalid_argument("expected a number or an expression string");
}

// Scalar expression, or an array of `dim` expressions.
std::array<Expression, 2> vector_expression(const ConfigTable& t, const std::string& section,
                                            const std::string& key, int dim) {
  std::array<Expression, 2> out;
  const ConfigValue* v = find(t, section, key);
  if (!v) return out;
  if (v->type == ConfigValue::Type::Array && static_cast<int>(v->items.size()) != dim)
    bad(section, key, "expected " + std::to_string(dim) + " components");
  if (v->type != ConfigValue::Type::Array && dim != 1) bad(section, key, "expected an array of components");
  try {
    if (v->type == ConfigValue::Type::Array) {
      for (int i = 0; i < dim; ++i) out[i] = expression(v->items[i]);
    } else {
      out[0] = expression(*v);
    }
  } catch (const std::invalid_argument& e) {
    bad(section, key, e.what());
  }
  return out;
}

}  // namespace

ConfigValue ConfigValue::parse(const std::string& literal) { return ValueParser(literal).parse(); }

std::string ConfigValue::to_string() const {
  std::ostringstream os;
  switch (type) {
    case Type::Number: os.precision(17); os << number; break;
    case Type::Bool: os << (boolean ? "true" : "false"); break;
    case Type::String: os << '"' << text << '"'; break;
    case Type::Array:
      os << '[';
      for (std::size_t i = 0; i < items.size(); ++i) os << (i ? ", " : "") << items[i].to_string();
      os << ']';
      break;
  }
  return os.str();
}

ConfigTable parse_config_table(const std::string& content) {
  ConfigTable table;
  std::istringstream in(content);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw std::invalid_argument("line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      table[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    try {
      table[section][key] = ConfigValue::parse(line.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return table;
}

void apply_override(ConfigTable& table, const std::string& key, const std::string& literal) {
  ConfigValue value;
  try {
    value = ConfigValue::parse(literal);
  } catch (const std::invalid_argument&) {
    // Bare words on the command line are strings: output.dir=runs/a
    value.type = ConfigValue::Type::String;
    value.text = literal;
  }
  const auto dot = key.find('.');
  if (dot != std::string::npos) {
    table[key.substr(0, dot)][key.substr(dot + 1)] = value;
    return;
  }
  std::vector<std::string> owners;
  for (const auto& [section, entries] : table)
    if (entries.count(key)) owners.push_back(section);
  if (owners.size() > 1) throw std::invalid_argument("ambiguous parameter '" + key + "'; use section.key");
  if (owners.empty()) {
    // Law parameters may be omitted from the file.
    if (key == "n" || key == "p" || key == "a" || key == "alpha" || key == "eta" || key == "eps_pf" || key == "k") {
      table["model"][key] = value;
      return;
    }
    if (key == "dt" || key == "t_final") {
      table["time"][key] = value;
      return;
    }
    throw std::invalid_argument("unknown parameter '" + key + "'");
  }
  table[owners.front()][key] = value;
}

int SimConfig::steps() const {
  if (t_final <= 0.0) return 0;
  return static_cast<int>(std::llround(t_final / dt));
}

Grid SimConfig::make_grid() const {
  if (dim == 1) return Grid(1, {cells[0], 1}, {length[0] / cells[0], 1.0}, mask);
  return Grid(2, cells, {length[0] / cells[0], length[1] / cells[1]}, mask);
}

int SimConfig::hk_order() const { return k > 0 ? k : default_hk_order(dim); }

SimConfig config_from_table(const ConfigTable& t) {
  SimConfig c;
  const int sec = integer(t, "model", "section", 2);
  if (sec != 2 && sec != 3) bad("model", "section", "expected 2 or 3");
  c.section = sec == 2 ? Section::Two : Section::Three;
  const std::string law = text(t, "model", "law", sec == 2 ? "p_growth" : "regularized");
  if (law == "p_growth") {
    c.law = ConstitutiveLaw::p_growth(number(t, "model", "p", 2.0));
  } else if (law == "strain_limiting") {
    c.law = ConstitutiveLaw::strain_limiting(number(t, "model", "a", 1.0));
  } else if (law == "regularized") {
    c.law = ConstitutiveLaw::regularized(number(t, "model", "a", 1.0), integer(t, "model", "n", 100));
  } else {
    bad("model", "law", "expected p_growth, strain_limiting or regularized");
  }
  c.alpha = number(t, "model", "alpha", c.alpha);
  c.eta = number(t, "model", "eta", c.eta);
  c.eps_pf = number(t, "model", "eps_pf", c.eps_pf);
  c.k = integer(t, "model", "k", 0);
  if (!(c.alpha > 0.0)) bad("model", "alpha", "must be positive");
  if (!(c.eta > 0.0)) bad("model", "eta", "must be positive");
  if (!(c.eps_pf > 0.0)) bad("model", "eps_pf", "must be positive");
  if (c.k < 0 || c.k > 3) bad("model", "k", "expected 0 (default) to 3");

  c.dim = integer(t, "grid", "dim", 2);
  if (c.dim != 1 && c.dim != 2) bad("grid", "dim", "expected 1 or 2");
  if (const ConfigValue* v = find(t, "grid", "cells")) {
    if (v->type == ConfigValue::Type::Number) {
      c.cells = {static_cast<int>(v->number), static_cast<int>(v->number)};
    } else if (v->type == ConfigValue::Type::Array && static_cast<int>(v->items.size()) == c.dim) {
      for (int i = 0; i < c.dim; ++i) c.cells[i] = static_cast<int>(v->items[i].number);
    } else {
      bad("grid", "cells", "expected a number or one entry per axis");
    }
  }
  if (const ConfigValue* v = find(t, "grid", "length")) {
    if (v->type == ConfigValue::Type::Number) {
      c.length = {v->number, v->number};
    } else if (v->type == ConfigValue::Type::Array && static_cast<int>(v->items.size()) == c.dim) {
      for (int i = 0; i < c.dim; ++i) c.length[i] = v->items[i].number;
    } else {
      bad("grid", "length", "expected a number or one entry per axis");
    }
  }
  for (int i = 0; i < c.dim; ++i) {
    if (c.cells[i] < 2) bad("grid", "cells", "need at least 2 cells per axis");
    if (!(c.length[i] > 0.0)) bad("grid", "length", "must be positive");
  }
  if (const ConfigValue* v = find(t, "grid", "dirichlet")) {
    c.mask = FaceMask{};
    if (v->type != ConfigValue::Type::Array) bad("grid", "dirichlet", "expected an array of face names");
    for (const auto& item : v->items) c.mask.dirichlet[static_cast<int>(face_from_string(item.text))] = true;
  }

  c.dt = number(t, "time", "dt", c.dt);
  c.t_final = number(t, "time", "t_final", c.t_final);
  if (find(t, "time", "steps")) c.t_final = c.dt * integer(t, "time", "steps", 0);
  if (!(c.dt > 0.0)) bad("time", "dt", "must be positive");
  if (!(c.t_final >= 0.0)) bad("time", "t_final", "must be non-negative");

  c.u0 = vector_expression(t, "initial", "u0", c.dim);
  c.u1 = vector_expression(t, "initial", "u1", c.dim);
  if (const ConfigValue* v = find(t, "initial", "v0")) c.v0 = expression(*v);

  for (Face f : {Face::Left, Face::Right, Face::Bottom, Face::Top}) {
    const std::string key = "traction_" + to_string(f);
    if (find(t, "boundary", key)) c.traction[f] = vector_expression(t, "boundary", key, c.dim);
  }
  c.body_force = vector_expression(t, "boundary", "body_force", c.dim);
  c.ramp = boolean(t, "boundary", "ramp", true);

  c.newton.max_iters = integer(t, "solver", "max_iters", c.newton.max_iters);
  c.newton.abs_tol = number(t, "solver", "abs_tol", c.newton.abs_tol);
  c.newton.rel_tol = number(t, "solver", "rel_tol", c.newton.rel_tol);
  const std::string ls = text(t, "solver", "line_search", "backtracking");
  if (ls == "backtracking") c.newton.line_search = LineSearch::Backtracking;
  else if (ls == "none") c.newton.line_search = LineSearch::None;
  else bad("solver", "line_search", "expected backtracking or none");

  c.output_dir = text(t, "output", "dir", c.output_dir);
  c.cadence = integer(t, "output", "cadence", c.cadence);
  c.write_vtk = boolean(t, "output", "vtk", c.write_vtk);
  if (c.cadence < 1) bad("output", "cadence", "must be at least 1");
  return c;
}

SimConfig parse_config(const std::string& content) { return config_from_table(parse_config_table(content)); }

ConfigTable load_config_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_table(ss.str());
}

}  // namespace viscofrac
