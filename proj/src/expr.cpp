#include "polyco/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <Eigen/Dense>

#include "polyco/dual.hpp"

namespace polyco {

struct ExprNode {
  enum class Kind { number, variable, neg, add, sub, mul, div, pow, call } kind;
  double value = 0.0;
  int var = -1;
  std::string fn;
  std::vector<ExprPtr> kids;
};

namespace {

ExprPtr make(ExprNode::Kind k, std::vector<ExprPtr> kids = {}) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->kids = std::move(kids);
  return n;
}

ExprPtr number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::number;
  n->value = v;
  return n;
}

class Parser {
 public:
  Parser(const std::string& s, const std::vector<std::string>& vars) : s_(s), vars_(vars) {}

  ExprPtr run() {
    auto e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionError("expression \"" + s_ + "\" at " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool eat_pow() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == '^') return ++pos_, true;
    if (pos_ + 1 < s_.size() && s_[pos_] == '*' && s_[pos_ + 1] == '*') return pos_ += 2, true;
    return false;
  }

  ExprPtr expr() {
    auto lhs = term();
    for (;;) {
      if (eat('+'))
        lhs = make(ExprNode::Kind::add, {lhs, term()});
      else if (eat('-'))
        lhs = make(ExprNode::Kind::sub, {lhs, term()});
      else
        return lhs;
    }
  }
  ExprPtr term() {
    auto lhs = unary();
    for (;;) {
      skip();
      if (pos_ + 1 < s_.size() && s_[pos_] == '*' && s_[pos_ + 1] == '*') return lhs;
      if (eat('*'))
        lhs = make(ExprNode::Kind::mul, {lhs, unary()});
      else if (eat('/'))
        lhs = make(ExprNode::Kind::div, {lhs, unary()});
      else
        return lhs;
    }
  }
  ExprPtr unary() {
    if (eat('-')) return make(ExprNode::Kind::neg, {unary()});
    if (eat('+')) return unary();
    return power();
  }
  ExprPtr power() {
    auto base = primary();
    if (eat_pow()) return make(ExprNode::Kind::pow, {base, unary()});
    return base;
  }
  ExprPtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expr();
      if (!eat(')')) fail("missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return number(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == id) {
          auto n = std::make_shared<ExprNode>();
          n->kind = ExprNode::Kind::variable;
          n->var = static_cast<int>(i);
          return n;
        }
      if (eat('(')) {
        static const char* known[] = {"sin", "cos", "tan", "exp", "log", "sqrt"};
        if (std::find(std::begin(known), std::end(known), id) == std::end(known)) fail("unknown function " + id);
        auto arg = expr();
        if (!eat(')')) fail("missing ')'");
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::call;
        n->fn = id;
        n->kids = {arg};
        return n;
      }
      if (id == "pi") return number(std::numbers::pi);
      if (id == "e") return number(std::numbers::e);
      fail("unknown name " + id);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

bool integer_constant(const ExprNode& n, int& out) {
  if (n.kind == ExprNode::Kind::number && n.value == std::round(n.value) && std::abs(n.value) < 64) {
    out = static_cast<int>(n.value);
    return true;
  }
  if (n.kind == ExprNode::Kind::neg && integer_constant(*n.kids[0], out)) {
    out = -out;
    return true;
  }
  return false;
}

template <class T>
T eval(const ExprNode& n, std::span<const T> x) {
  using K = ExprNode::Kind;
  switch (n.kind) {
    case K::number: return T(n.value);
    case K::variable: return x[n.var];
    case K::neg: return -eval(*n.kids[0], x);
    case K::add: return eval(*n.kids[0], x) + eval(*n.kids[1], x);
    case K::sub: return eval(*n.kids[0], x) - eval(*n.kids[1], x);
    case K::mul: return eval(*n.kids[0], x) * eval(*n.kids[1], x);
    case K::div: return eval(*n.kids[0], x) / eval(*n.kids[1], x);
    case K::pow: {
      int p = 0;
      if (integer_constant(*n.kids[1], p)) return powi(eval(*n.kids[0], x), p);
      return exp(eval(*n.kids[1], x) * log(eval(*n.kids[0], x)));
    }
    case K::call: {
      T a = eval(*n.kids[0], x);
      if (n.fn == "sin") return sin(a);
      if (n.fn == "cos") return cos(a);
      if (n.fn == "tan") return sin(a) / cos(a);
      if (n.fn == "exp") return exp(a);
      if (n.fn == "log") return log(a);
      return sqrt(a);
    }
  }
  return T(0.0);
}

}  // namespace

ExprPtr parse_expression(const std::string& text, const std::vector<std::string>& vars) {
  return Parser(text, vars).run();
}

SmoothField compile_expression(const std::string& text, const std::vector<std::string>& vars) {
  ExprPtr root = parse_expression(text, vars);
  return SmoothField::make(
      static_cast<int>(vars.size()), 1,
      [root](auto x, auto y) {
        using T = std::remove_cvref_t<decltype(y[0])>;
        y[0] = eval<T>(*root, x);
      },
      kMaxLevels, text);
}

namespace {

void monomials(int n, int degree, std::vector<int>& cur, int var, int left, std::vector<std::vector<int>>& out) {
  if (var == n) {
    out.push_back(cur);
    return;
  }
  for (int e = 0; e <= left; ++e) {
    cur[var] = e;
    monomials(n, degree, cur, var + 1, left - e, out);
  }
  cur[var] = 0;
}

double monomial(const std::vector<int>& e, const Coords& x) {
  double v = 1.0;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (int k = 0; k < e[i]; ++k) v *= x[i];
  return v;
}

double snap(double c) {
  const double r = std::round(c * 1e9) / 1e9;
  return std::abs(c - r) < 1e-11 ? r : c;
}

}  // namespace

std::pair<Polynomial, double> fit_polynomial(const SmoothField& f, int output, int degree,
                                             const std::vector<Coords>& points, const std::vector<Coords>& check) {
  const int n = f.in_dim();
  std::vector<std::vector<int>> basis;
  std::vector<int> cur(n, 0);
  monomials(n, degree, cur, 0, degree, basis);
  // lowest total degree first, so the printed form reads naturally
  std::stable_sort(basis.begin(), basis.end(), [](const auto& a, const auto& b) {
    int da = 0, db = 0;
    for (int v : a) da += v;
    for (int v : b) db += v;
    return da < db;
  });
  Eigen::MatrixXd A(points.size(), basis.size());
  Eigen::VectorXd b(points.size());
  for (std::size_t r = 0; r < points.size(); ++r) {
    for (std::size_t c = 0; c < basis.size(); ++c) A(r, c) = monomial(basis[c], points[r]);
    b(r) = f.eval(points[r])[output];
  }
  Eigen::VectorXd coef = A.completeOrthogonalDecomposition().solve(b);
  Polynomial p;
  for (std::size_t c = 0; c < basis.size(); ++c) {
    const double v = snap(coef(c));
    if (std::abs(v) > 1e-11) p.terms.push_back({v, basis[c]});
  }
  double dev = 0.0;
  for (const auto& x : check) {
    double s = 0.0;
    for (const auto& [c, e] : p.terms) s += c * monomial(e, x);
    const double ref = f.eval(x)[output];
    dev = std::max(dev, std::abs(s - ref) / std::max(1.0, std::abs(ref)));
  }
  return {p, dev};
}

std::string format_polynomial(const Polynomial& p, const std::vector<std::string>& vars) {
  if (p.terms.empty()) return "0";
  std::string out;
  for (std::size_t t = 0; t < p.terms.size(); ++t) {
    double c = p.terms[t].first;
    const auto& e = p.terms[t].second;
    if (t == 0) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    c = std::abs(c);
    std::string factors;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!factors.empty()) factors += "*";
      factors += vars[i];
      if (e[i] > 1) factors += "^" + std::to_string(e[i]);
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", c);
    if (factors.empty())
      out += buf;
    else if (c == 1.0)
      out += factors;
    else
      out += std::string(buf) + "*" + factors;
  }
  return out;
}

}  // namespace polyco
