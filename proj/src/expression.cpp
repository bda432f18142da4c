#include "viscofrac/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace viscofrac {

struct Expression::Node {
  enum class Kind { Number, Variable, Unary, Binary, Call1, Call2 } kind;
  double value = 0.0;
  int var = 0;  // 0 x, 1 y, 2 t, 3 nx, 4 ny
  char op = 0;
  double (*fn1)(double) = nullptr;
  double (*fn2)(double, double) = nullptr;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

double heaviside(double x) { return x >= 0.0 ? 1.0 : 0.0; }
double fmin2(double a, double b) { return std::fmin(a, b); }
double fmax2(double a, double b) { return std::fmax(a, b); }
double pow2(double a, double b) { return std::pow(a, b); }
double atan2_(double a, double b) { return std::atan2(a, b); }
double sin_(double x) { return std::sin(x); }
double cos_(double x) { return std::cos(x); }
double tan_(double x) { return std::tan(x); }
double exp_(double x) { return std::exp(x); }
double log_(double x) { return std::log(x); }
double sqrt_(double x) { return std::sqrt(x); }
double abs_(double x) { return std::fabs(x); }
double tanh_(double x) { return std::tanh(x); }

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << what << " at position " << pos_ << " in expression '" << s_ << "'";
    throw std::invalid_argument(msg.str());
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr make(Kind kind) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = kind;
    return n;
  }

  NodePtr binary(char op, NodePtr l, NodePtr r) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::Binary;
    n->op = op;
    n->args = {std::move(l), std::move(r)};
    return n;
  }

  NodePtr expr() {
    NodePtr l = term();
    for (;;) {
      if (accept('+')) l = binary('+', l, term());
      else if (accept('-')) l = binary('-', l, term());
      else return l;
    }
  }

  NodePtr term() {
    NodePtr l = unary();
    for (;;) {
      if (accept('*')) l = binary('*', l, unary());
      else if (accept('/')) l = binary('/', l, unary());
      else return l;
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::Unary;
      n->op = '-';
      n->args = {unary()};
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return binary('^', base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (accept('(')) {
      NodePtr n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::Number;
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (accept('(')) return call(id);
      return identifier(id);
    }
    fail("unexpected character");
  }

  NodePtr identifier(const std::string& id) {
    static const char* vars[] = {"x", "y", "t", "nx", "ny"};
    for (int i = 0; i < 5; ++i)
      if (id == vars[i]) {
        auto n = std::make_shared<Expression::Node>();
        n->kind = Kind::Variable;
        n->var = i;
        return n;
      }
    if (id == "pi") {
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::Number;
      n->value = std::numbers::pi;
      return n;
    }
    fail("unknown identifier '" + id + "'");
  }

  NodePtr call(const std::string& id) {
    std::vector<NodePtr> args;
    if (!accept(')')) {
      do args.push_back(expr());
      while (accept(','));
      if (!accept(')')) fail("expected ')'");
    }
    static const std::pair<const char*, double (*)(double)> one[] = {
        {"sin", sin_}, {"cos", cos_},   {"tan", tan_},   {"exp", exp_},          {"log", log_},
        {"sqrt", sqrt_}, {"abs", abs_}, {"tanh", tanh_}, {"heaviside", heaviside}};
    static const std::pair<const char*, double (*)(double, double)> two[] = {
        {"min", fmin2}, {"max", fmax2}, {"pow", pow2}, {"atan2", atan2_}};
    auto n = std::make_shared<Expression::Node>();
    n->args = std::move(args);
    for (const auto& [name, f] : one)
      if (id == name) {
        if (n->args.size() != 1) fail(id + " takes one argument");
        n->kind = Kind::Call1;
        n->fn1 = f;
        return n;
      }
    for (const auto& [name, f] : two)
      if (id == name) {
        if (n->args.size() != 2) fail(id + " takes two arguments");
        n->kind = Kind::Call2;
        n->fn2 = f;
        return n;
      }
    fail("unknown function '" + id + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval(const Expression::Node& n, const ExprVars& v) {
  switch (n.kind) {
    case Kind::Number: return n.value;
    case Kind::Variable: {
      const double vals[] = {v.x, v.y, v.t, v.nx, v.ny};
      return vals[n.var];
    }
    case Kind::Unary: return -eval(*n.args[0], v);
    case Kind::Binary: {
      const double a = eval(*n.args[0], v);
      const double b = eval(*n.args[1], v);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        case '^': return std::pow(a, b);
      }
      return 0.0;
    }
    case Kind::Call1: return n.fn1(eval(*n.args[0], v));
    case Kind::Call2: return n.fn2(eval(*n.args[0], v), eval(*n.args[1], v));
  }
  return 0.0;
}

bool uses_variables(const Expression::Node& n) {
  if (n.kind == Kind::Variable) return true;
  for (const auto& a : n.args)
    if (uses_variables(*a)) return true;
  return false;
}

}  // namespace

Expression::Expression() : source_("0") {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Number;
  root_ = n;
}

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.root_ = Parser(text).parse();
  e.source_ = text;
  return e;
}

Expression Expression::constant(double value) {
  Expression e;
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Number;
  n->value = value;
  e.root_ = n;
  std::ostringstream os;
  os.precision(17);
  os << value;
  e.source_ = os.str();
  return e;
}

double Expression::operator()(const ExprVars& vars) const { return eval(*root_, vars); }

bool Expression::is_constant() const { return !uses_variables(*root_); }

}  // namespace viscofrac
