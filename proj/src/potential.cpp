#include "lambscat/potential.hpp"

#include "lambscat/errors.hpp"
#include "lambscat/jacobi_eigen.hpp"

#include <cctype>
#include <cmath>
#include <random>
#include <sstream>

namespace lambscat {

namespace {

void prune(Monomials& m) {
  std::erase_if(m, [](const auto& kv) { return kv.second == 0.0; });
}

Monomials constant(int n, double c) {
  Monomials m;
  if (c != 0.0) m[std::vector<int>(static_cast<std::size_t>(n), 0)] = c;
  return m;
}

Monomials add(Monomials a, const Monomials& b, double sign = 1.0) {
  for (const auto& [e, c] : b) a[e] += sign * c;
  prune(a);
  return a;
}

Monomials mul(const Monomials& a, const Monomials& b) {
  Monomials out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  }
  prune(out);
  return out;
}

bool is_constant(const Monomials& m, double& value) {
  value = 0.0;
  for (const auto& [e, c] : m) {
    for (int k : e)
      if (k != 0) return false;
    value = c;
  }
  return true;
}

int total_degree(const std::vector<int>& e) {
  int d = 0;
  for (int k : e) d += k;
  return d;
}

// recursive descent: expr := term (('+'|'-') term)*; term := unary (('*'|'/') unary)*;
// unary := '-' unary | '+' unary | power; power := primary ('^' integer)?
class Parser {
 public:
  Parser(const std::string& s, int n) : s_(s), n_(n) {}

  Monomials parse() {
    Monomials m = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return m;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "potential expression: " << what << " at offset " << pos_;
    throw Error(ErrorCode::ConfigError, os.str());
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

  Monomials expr() {
    Monomials m = term();
    for (;;) {
      if (accept('+')) m = add(std::move(m), term());
      else if (accept('-')) m = add(std::move(m), term(), -1.0);
      else return m;
    }
  }

  Monomials term() {
    Monomials m = unary();
    for (;;) {
      if (accept('*')) {
        m = mul(m, unary());
      } else if (accept('/')) {
        double d;
        if (!is_constant(unary(), d) || d == 0.0) fail("division only by nonzero constants");
        m = mul(m, constant(n_, 1.0 / d));
      } else {
        return m;
      }
    }
  }

  Monomials unary() {
    if (accept('-')) return mul(constant(n_, -1.0), unary());
    if (accept('+')) return unary();
    return power();
  }

  Monomials power() {
    Monomials base = primary();
    if (!accept('^')) return base;
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be a non-negative integer");
    const int k = std::stoi(s_.substr(start, pos_ - start));
    Monomials out = constant(n_, 1.0);
    for (int i = 0; i < k; ++i) out = mul(out, base);
    return out;
  }

  Monomials primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    if (accept('(')) {
      Monomials m = expr();
      if (!accept(')')) fail("missing ')'");
      return m;
    }
    const char c = s_[pos_];
    if (c == 'y') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("variable needs an index, e.g. y1");
      const int idx = std::stoi(s_.substr(start, pos_ - start));
      if (idx < 1 || idx > n_) fail("variable y" + std::to_string(idx) + " out of range 1.." + std::to_string(n_));
      std::vector<int> e(static_cast<std::size_t>(n_), 0);
      e[static_cast<std::size_t>(idx - 1)] = 1;
      return Monomials{{e, 1.0}};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return constant(n_, v);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

PolynomialPotential::PolynomialPotential(const std::string& expression, int n)
    : PolynomialPotential(Parser(expression, n).parse(), n) {
  expression_ = expression;
}

PolynomialPotential::PolynomialPotential(Monomials terms, int n) : n_(n), terms_(std::move(terms)) {
  if (n_ <= 0) throw Error(ErrorCode::ConfigError, "potential dimension must be positive");
  for (const auto& [e, c] : terms_)
    if (static_cast<int>(e.size()) != n_) throw Error(ErrorCode::ConfigError, "monomial has wrong arity");
  grad_.resize(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    for (const auto& [e, c] : terms_) {
      const int k = e[static_cast<std::size_t>(i)];
      if (k == 0) continue;
      auto d = e;
      d[static_cast<std::size_t>(i)] = k - 1;
      grad_[static_cast<std::size_t>(i)][d] += c * k;
    }
    prune(grad_[static_cast<std::size_t>(i)]);
  }
}

PolynomialPotential PolynomialPotential::harmonic(const Eigen::VectorXd& lambda) {
  const int n = static_cast<int>(lambda.size());
  Monomials m;
  std::ostringstream os;
  os.precision(17);
  for (int i = 0; i < n; ++i) {
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = 2;
    m[e] = -0.5 * lambda(i);
    os << (i ? " + " : "") << "(" << -0.5 * lambda(i) << ")*y" << i + 1 << "^2";
  }
  PolynomialPotential p(std::move(m), n);
  p.expression_ = os.str();
  return p;
}

double PolynomialPotential::eval(const Monomials& m, const Eigen::VectorXd& y) {
  double acc = 0.0;
  for (const auto& [e, c] : m) {
    double t = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) t *= y(static_cast<Eigen::Index>(i));
    acc += t;
  }
  return acc;
}

double PolynomialPotential::value(const Eigen::VectorXd& y) const { return eval(terms_, y); }

Eigen::VectorXd PolynomialPotential::gradient(const Eigen::VectorXd& y) const {
  Eigen::VectorXd g(n_);
  for (int i = 0; i < n_; ++i) g(i) = eval(grad_[static_cast<std::size_t>(i)], y);
  return g;
}

int PolynomialPotential::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

GrowthReport PolynomialPotential::growth_check() const {
  GrowthReport r;
  r.degree = degree();
  if (r.degree < 2 || r.degree % 2 == 1) {
    r.method = "leading degree " + std::to_string(r.degree) + " cannot dominate |y|^2";
    return r;
  }
  Monomials lead;
  for (const auto& [e, c] : terms_)
    if (total_degree(e) == r.degree) lead[e] = c;

  if (r.degree == 2) {
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n_, n_);
    for (const auto& [e, c] : lead) {
      std::vector<int> idx;
      for (int i = 0; i < n_; ++i)
        for (int k = 0; k < e[static_cast<std::size_t>(i)]; ++k) idx.push_back(i);
      if (idx[0] == idx[1]) q(idx[0], idx[0]) += c;
      else {
        q(idx[0], idx[1]) += 0.5 * c;
        q(idx[1], idx[0]) += 0.5 * c;
      }
    }
    const auto eig = jacobi_eigen(q);
    r.satisfied = eig.eigenvalues.minCoeff() > 0.0;
    r.method = "eigenvalues of the quadratic form";
    return r;
  }
  if (n_ == 1) {
    r.satisfied = lead.begin()->second > 0.0;
    r.method = "sign of the leading coefficient";
    return r;
  }
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> normal;
  double min_value = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 20000; ++s) {
    Eigen::VectorXd y(n_);
    for (int i = 0; i < n_; ++i) y(i) = normal(rng);
    y.normalize();
    min_value = std::min(min_value, eval(lead, y));
  }
  r.satisfied = min_value > 0.0;
  r.method = "leading form sampled on the unit sphere";
  return r;
}

}  // namespace lambscat
