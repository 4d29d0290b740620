#include "ward/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <Eigen/Eigenvalues>

namespace ward {

namespace {

constexpr double kTrimRel = 1e-14;      // trailing-coefficient trim, relative to max |c|
constexpr double kDeflateTol = 1e-10;   // absolute root-match tolerance in deflation tests
constexpr double kClusterRadius = 1e-6; // eigenvalue fuzz radius for multiple roots

double max_abs(const std::vector<Complex>& c) {
  double m = 0.0;
  for (const auto& z : c) m = std::max(m, std::abs(z));
  return m;
}

// Scale used by the deflation remainder test: generous bound for |p| near rho.
double eval_scale(const Polynomial& p, Complex rho) {
  const double r = std::max(1.0, std::abs(rho));
  double s = 0.0, rj = 1.0;
  for (const auto& z : p.c) {
    s += std::abs(z) * rj;
    rj *= r;
  }
  return 1.0 + s;
}

struct RootCluster {
  Complex rho;
  int mult;
};

std::vector<RootCluster> cluster_roots(std::vector<Complex> roots) {
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  std::vector<RootCluster> out;
  std::vector<int> used(roots.size(), 0);
  for (size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    Complex sum = roots[i];
    int count = 1;
    used[i] = 1;
    for (size_t j = i + 1; j < roots.size(); ++j) {
      if (used[j]) continue;
      const Complex centroid = sum / static_cast<double>(count);
      if (std::abs(roots[j] - centroid) < kClusterRadius * (1.0 + std::abs(centroid))) {
        sum += roots[j];
        ++count;
        used[j] = 1;
      }
    }
    // Centroid of a multiplicity-m eigenvalue cluster cancels the leading
    // perturbation term, recovering the root far beyond single-eigenvalue fuzz.
    out.push_back(RootCluster{sum / static_cast<double>(count), count});
  }
  return out;
}

// Synthetic division by (w - rho): returns quotient, remainder = p(rho).
std::pair<Polynomial, Complex> deflate_once(const Polynomial& p, Complex rho) {
  if (p.is_zero()) return {Polynomial{}, Complex(0.0)};
  const int d = p.degree();
  Polynomial q;
  q.c.assign(std::max(d, 0), Complex(0.0));
  Complex acc = p.c[d];
  for (int j = d - 1; j >= 0; --j) {
    q.c[j] = acc;
    acc = p.c[j] + rho * acc;
  }
  return {poly_trim(std::move(q)), acc};
}

int deflation_count(const Polynomial& p, Complex rho, int cap) {
  Polynomial cur = p;
  int m = 0;
  while (m < cap && !cur.is_zero()) {
    auto [q, rem] = deflate_once(cur, rho);
    if (std::abs(rem) > kDeflateTol * eval_scale(cur, rho)) break;
    cur = std::move(q);
    ++m;
  }
  return m;
}

Polynomial deflate_times(Polynomial p, Complex rho, int times) {
  for (int i = 0; i < times; ++i) p = deflate_once(p, rho).first;
  return p;
}

// Cancels shared root clusters of num against den (den_clusters describes den),
// then renders den monic.
RationalFunction reduce_hinted(Polynomial num, Polynomial den,
                               const std::vector<RootCluster>& den_clusters) {
  if (den.is_zero()) throw Error("rational: zero denominator");
  if (num.is_zero()) return RationalFunction{Polynomial{}, poly_const(1.0)};
  for (const auto& cl : den_clusters) {
    const int in_num = deflation_count(num, cl.rho, cl.mult);
    const int m = std::min(in_num, cl.mult);
    if (m > 0) {
      num = deflate_times(std::move(num), cl.rho, m);
      den = deflate_times(std::move(den), cl.rho, m);
    }
  }
  const Complex lead = den.c.back();
  for (auto& z : den.c) z /= lead;
  den.c.back() = Complex(1.0);  // pin exact monicity
  for (auto& z : num.c) z /= lead;
  return RationalFunction{poly_trim(std::move(num)), poly_trim(std::move(den))};
}

}  // namespace

Polynomial poly_trim(Polynomial p) {
  const double cut = kTrimRel * max_abs(p.c);
  while (!p.c.empty() && std::abs(p.c.back()) <= cut) p.c.pop_back();
  return p;
}

Polynomial poly_from(std::initializer_list<Complex> coeffs) {
  Polynomial p;
  p.c.assign(coeffs);
  return poly_trim(std::move(p));
}

Polynomial poly_const(Complex value) {
  Polynomial p;
  if (value != Complex(0.0)) p.c.push_back(value);
  return p;
}

Polynomial poly_add(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  r.c.assign(std::max(a.c.size(), b.c.size()), Complex(0.0));
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  return poly_trim(std::move(r));
}

Polynomial poly_sub(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  r.c.assign(std::max(a.c.size(), b.c.size()), Complex(0.0));
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
  return poly_trim(std::move(r));
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial{};
  Polynomial r;
  r.c.assign(a.c.size() + b.c.size() - 1, Complex(0.0));
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j)
      r.c[i + j] += a.c[i] * b.c[j];
  return poly_trim(std::move(r));
}

Polynomial poly_scale(const Polynomial& a, Complex s) {
  if (s == Complex(0.0)) return Polynomial{};
  Polynomial r = a;
  for (auto& z : r.c) z *= s;
  return poly_trim(std::move(r));
}

Polynomial poly_pow(const Polynomial& a, int k) {
  if (k < 0) throw Error("poly_pow: negative exponent");
  Polynomial r = poly_const(1.0);
  Polynomial base = a;
  while (k > 0) {
    if (k & 1) r = poly_mul(r, base);
    base = poly_mul(base, base);
    k >>= 1;
  }
  return r;
}

Polynomial poly_derivative(const Polynomial& a) {
  Polynomial r;
  if (a.c.size() <= 1) return r;
  r.c.resize(a.c.size() - 1);
  for (size_t j = 1; j < a.c.size(); ++j)
    r.c[j - 1] = a.c[j] * static_cast<double>(j);
  return poly_trim(std::move(r));
}

Complex poly_eval(const Polynomial& a, Complex w) {
  Complex acc(0.0);
  for (size_t j = a.c.size(); j-- > 0;) acc = acc * w + a.c[j];
  return acc;
}

std::pair<Polynomial, Polynomial> poly_divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw Error("poly_divmod: division by zero polynomial");
  Polynomial rem = a;
  const int db = b.degree();
  if (a.degree() < db) return {Polynomial{}, rem};
  Polynomial quo;
  quo.c.assign(a.degree() - db + 1, Complex(0.0));
  for (int j = a.degree(); j >= db; --j) {
    if (static_cast<size_t>(j) >= rem.c.size()) continue;
    const Complex f = rem.c[j] / b.c.back();
    if (f == Complex(0.0)) continue;
    quo.c[j - db] = f;
    for (int i = 0; i <= db; ++i) rem.c[j - db + i] -= f * b.c[i];
    rem.c[j] = Complex(0.0);  // pin exact cancellation of the leading term
  }
  return {poly_trim(std::move(quo)), poly_trim(std::move(rem))};
}

std::vector<Complex> poly_roots(const Polynomial& a) {
  Polynomial p = poly_trim(a);
  const int d = p.degree();
  if (d <= 0) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = Complex(1.0);
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -p.c[i] / p.c[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, /*computeEigenvectors=*/false);
  std::vector<Complex> roots(d);
  for (int i = 0; i < d; ++i) roots[i] = es.eigenvalues()(i);
  return roots;
}

RationalFunction rat_make(Polynomial num, Polynomial den) {
  num = poly_trim(std::move(num));
  den = poly_trim(std::move(den));
  if (den.is_zero()) throw Error("rational: zero denominator");
  if (den.degree() == 0) {
    const Complex s = den.c[0];
    Polynomial n = num;
    for (auto& z : n.c) z /= s;
    return RationalFunction{poly_trim(std::move(n)), poly_const(1.0)};
  }
  return reduce_hinted(std::move(num), den, cluster_roots(poly_roots(den)));
}

RationalFunction rat_const(Complex value) {
  return RationalFunction{poly_const(value), poly_const(1.0)};
}

RationalFunction rat_w() {
  return RationalFunction{poly_from({Complex(0.0), Complex(1.0)}), poly_const(1.0)};
}

RationalFunction rat_add(const RationalFunction& a, const RationalFunction& b) {
  return rat_make(poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den)),
                  poly_mul(a.den, b.den));
}

RationalFunction rat_sub(const RationalFunction& a, const RationalFunction& b) {
  return rat_make(poly_sub(poly_mul(a.num, b.den), poly_mul(b.num, a.den)),
                  poly_mul(a.den, b.den));
}

RationalFunction rat_mul(const RationalFunction& a, const RationalFunction& b) {
  return rat_make(poly_mul(a.num, b.num), poly_mul(a.den, b.den));
}

RationalFunction rat_div(const RationalFunction& a, const RationalFunction& b) {
  if (b.num.is_zero()) throw Error("rational: division by zero");
  return rat_make(poly_mul(a.num, b.den), poly_mul(a.den, b.num));
}

RationalFunction rat_scale(const RationalFunction& a, Complex s) {
  return RationalFunction{poly_scale(a.num, s), a.den};
}

RationalFunction rat_derivative(const RationalFunction& f, int m) {
  if (m < 0) throw Error("rat_derivative: negative order");
  if (m > kMaxOrder) throw OrderOverflow("rat_derivative: order beyond cap");
  if (m == 0) return f;
  // f^(m) = N_m / den^(m+1) with N_{j+1} = N_j' den - (j+1) N_j den'.
  // Exact recursion; the only reduction needed at the end is against den's own
  // roots, which are known accurately from the reduced input.
  const Polynomial dp = poly_derivative(f.den);
  Polynomial n = f.num;
  for (int j = 0; j < m; ++j) {
    n = poly_sub(poly_mul(poly_derivative(n), f.den),
                 poly_scale(poly_mul(n, dp), static_cast<double>(j + 1)));
  }
  if (f.den.degree() == 0) return rat_make(std::move(n), poly_const(1.0));
  auto clusters = cluster_roots(poly_roots(f.den));
  for (auto& cl : clusters) cl.mult *= (m + 1);
  return reduce_hinted(std::move(n), poly_pow(f.den, m + 1), clusters);
}

bool rat_near_pole(const RationalFunction& f, Complex w) {
  const int d = std::max(f.den.degree(), 0);
  return std::abs(poly_eval(f.den, w)) <= 1e-8 * std::pow(1.0 + std::abs(w), d);
}

Complex rat_eval(const RationalFunction& f, Complex w) {
  if (rat_near_pole(f, w)) throw PoleHit("rat_eval: masked denominator zero");
  return poly_eval(f.num, w) / poly_eval(f.den, w);
}

ScalarJet taylor_jet(const RationalFunction& f, Complex w0, int order) {
  if (order < 0) throw Error("taylor_jet: negative order");
  if (order > kMaxOrder) throw OrderOverflow("taylor_jet: order beyond cap");
  if (rat_near_pole(f, w0)) throw PoleHit("taylor_jet: expansion at masked pole");
  const int len = order + 1;
  // Taylor coefficients of num and den at w0 by repeated synthetic division.
  auto shift = [&](const Polynomial& p) {
    std::vector<Complex> out(len, Complex(0.0));
    Polynomial cur = p;
    for (int j = 0; j < len && !cur.is_zero(); ++j) {
      auto [q, rem] = deflate_once(cur, w0);
      out[j] = rem;
      cur = std::move(q);
    }
    return out;
  };
  const auto nn = shift(f.num);
  const auto dd = shift(f.den);
  ScalarJet jet{w0, std::vector<Complex>(len, Complex(0.0))};
  for (int j = 0; j < len; ++j) {
    Complex acc = nn[j];
    for (int l = 1; l <= j; ++l) acc -= dd[l] * jet.a[j - l];
    jet.a[j] = acc / dd[0];
  }
  return jet;
}

bool rat_equal(const RationalFunction& a, const RationalFunction& b, double tol) {
  if (a.num.degree() != b.num.degree() || a.den.degree() != b.den.degree()) return false;
  for (size_t i = 0; i < a.num.c.size(); ++i)
    if (std::abs(a.num.c[i] - b.num.c[i]) > tol) return false;
  for (size_t i = 0; i < a.den.c.size(); ++i)
    if (std::abs(a.den.c[i] - b.den.c[i]) > tol) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Expression parsing / printing

namespace {

struct Parser {
  std::string_view s;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw SyntaxError("expression: " + why + " at offset " + std::to_string(pos));
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  bool eat(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  RationalFunction parse_expr() {
    RationalFunction acc = parse_term();
    for (;;) {
      if (eat('+')) acc = rat_add(acc, parse_term());
      else if (eat('-')) acc = rat_sub(acc, parse_term());
      else return acc;
    }
  }

  RationalFunction parse_term() {
    RationalFunction acc = parse_factor();
    for (;;) {
      if (eat('*')) acc = rat_mul(acc, parse_factor());
      else if (eat('/')) acc = rat_div(acc, parse_factor());
      else return acc;
    }
  }

  RationalFunction parse_factor() {
    if (eat('-')) return rat_scale(parse_factor(), Complex(-1.0));
    RationalFunction base = parse_base();
    if (eat('^')) {
      skip_ws();
      const size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (pos == start) fail("expected nonnegative integer exponent");
      const int k = std::atoi(std::string(s.substr(start, pos - start)).c_str());
      return rat_make(poly_pow(base.num, k), poly_pow(base.den, k));
    }
    return base;
  }

  RationalFunction parse_base() {
    const char c = peek();
    if (c == '(') {
      ++pos;
      RationalFunction inner = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (c == 'w') {
      ++pos;
      return rat_w();
    }
    if (c == 'i') {
      ++pos;
      return rat_const(Complex(0.0, 1.0));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_literal();
    fail("expected 'w', a literal, or '('");
  }

  RationalFunction parse_literal() {
    skip_ws();
    const size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    if (pos == start || (pos == start + 1 && s[start] == '.')) fail("malformed number");
    const std::string text(s.substr(start, pos - start));
    const double value = std::strtod(text.c_str(), nullptr);
    if (pos < s.size() && s[pos] == 'i') {
      ++pos;
      return rat_const(Complex(0.0, value));
    }
    return rat_const(Complex(value));
  }
};

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  if (std::strtod(buf, nullptr) != x) std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// One polynomial term "c * w^j" in grammar form; sign split out for joining.
struct TermText {
  bool negative;
  std::string text;
};

TermText poly_term(Complex c, int j) {
  const double re = c.real(), im = c.imag();
  bool neg = false;
  std::string coeff;
  if (im == 0.0) {
    neg = re < 0.0;
    const double mag = std::abs(re);
    coeff = (mag == 1.0 && j > 0) ? "" : fmt_double(mag);
  } else if (re == 0.0) {
    neg = im < 0.0;
    const double mag = std::abs(im);
    coeff = (mag == 1.0) ? "i" : fmt_double(mag) + "i";
  } else {
    coeff = "(" + complex_print(c) + ")";
  }
  std::string var = j == 0 ? "" : (j == 1 ? "w" : "w^" + std::to_string(j));
  std::string text;
  if (var.empty()) text = coeff.empty() ? "1" : coeff;
  else if (coeff.empty()) text = var;
  else text = coeff + "*" + var;
  return TermText{neg, std::move(text)};
}

std::string poly_print(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int j = p.degree(); j >= 0; --j) {
    if (p.c[j] == Complex(0.0)) continue;
    TermText t = poly_term(p.c[j], j);
    if (out.empty()) out = (t.negative ? "-" : "") + t.text;
    else out += (t.negative ? " - " : " + ") + t.text;
  }
  return out;
}

}  // namespace

RationalFunction rat_parse(std::string_view text) {
  Parser p{text};
  RationalFunction f = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return f;
}

std::string rat_print(const RationalFunction& f) {
  if (f.num.is_zero()) return "0";
  if (f.den.degree() == 0) return poly_print(f.num);
  return "(" + poly_print(f.num) + ")/(" + poly_print(f.den) + ")";
}

Complex complex_parse(std::string_view text) {
  RationalFunction f = rat_parse(text);
  if (f.den.degree() != 0 || f.num.degree() > 0)
    throw SyntaxError("expected a complex constant");
  return f.num.is_zero() ? Complex(0.0) : f.num.c[0];
}

std::string complex_print(Complex z) {
  const double re = z.real(), im = z.imag();
  if (im == 0.0) return fmt_double(re);
  // always print the coefficient ("1i", not "i") so pole labels stay uniform
  std::string imag = fmt_double(std::abs(im)) + "i";
  if (re == 0.0) return (im < 0.0 ? "-" : "") + imag;
  return fmt_double(re) + (im < 0.0 ? "-" : "+") + imag;
}

// ---------------------------------------------------------------------------
// Truncated series helpers

std::vector<Complex> series_mul(const std::vector<Complex>& a, const std::vector<Complex>& b, int len) {
  std::vector<Complex> r(len, Complex(0.0));
  for (size_t i = 0; i < a.size() && static_cast<int>(i) < len; ++i) {
    if (a[i] == Complex(0.0)) continue;
    for (size_t j = 0; j < b.size() && static_cast<int>(i + j) < len; ++j)
      r[i + j] += a[i] * b[j];
  }
  return r;
}

std::vector<Complex> series_add(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  std::vector<Complex> r(std::max(a.size(), b.size()), Complex(0.0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

std::vector<Complex> series_compose(const std::vector<Complex>& outer,
                                    const std::vector<Complex>& inner, int len) {
  if (!inner.empty() && inner[0] != Complex(0.0))
    throw Error("series_compose: inner series must vanish at 0");
  std::vector<Complex> r(len, Complex(0.0));
  if (outer.empty()) return r;
  r[0] = outer.back();
  for (int j = static_cast<int>(outer.size()) - 2; j >= 0; --j) {
    r = series_mul(r, inner, len);
    r[0] += outer[j];
  }
  return r;
}

// ---------------------------------------------------------------------------
// Rational maps

namespace {

Polynomial poly_gcd_clustered(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return poly_const(1.0);
  const Polynomial& lower = a.degree() <= b.degree() ? a : b;
  const Polynomial& other = a.degree() <= b.degree() ? b : a;
  if (lower.degree() == 0) return poly_const(1.0);
  Polynomial g = poly_const(1.0);
  for (const auto& cl : cluster_roots(poly_roots(lower))) {
    const int m = std::min(deflation_count(lower, cl.rho, cl.mult),
                           deflation_count(other, cl.rho, lower.degree()));
    for (int i = 0; i < m; ++i)
      g = poly_mul(g, poly_from({-cl.rho, Complex(1.0)}));
  }
  return g;
}

Polynomial poly_lcm(const Polynomial& a, const Polynomial& b) {
  const Polynomial g = poly_gcd_clustered(a, b);
  auto [q, rem] = poly_divmod(b, g);
  (void)rem;  // shared factors divide exactly up to roundoff
  return poly_mul(a, q);
}

}  // namespace

RationalMap map_from_rationals(const std::vector<std::vector<RationalFunction>>& columns) {
  if (columns.empty() || columns[0].empty()) throw Error("map: empty data");
  const int n = static_cast<int>(columns[0].size());
  Polynomial den = poly_const(1.0);
  for (const auto& col : columns) {
    if (static_cast<int>(col.size()) != n) throw Error("map: ragged columns");
    for (const auto& f : col) den = poly_lcm(den, f.den);
  }
  // Monic common denominator.
  const Complex lead = den.c.back();
  for (auto& z : den.c) z /= lead;
  RationalMap v;
  v.n = n;
  v.den = den;
  for (const auto& col : columns) {
    std::vector<Polynomial> nums;
    nums.reserve(n);
    for (const auto& f : col) {
      auto [q, rem] = poly_divmod(den, f.den);
      (void)rem;
      nums.push_back(poly_mul(f.num, q));
    }
    v.cols.push_back(std::move(nums));
  }
  return v;
}

RationalMap map_parse(const std::vector<std::string>& components) {
  std::vector<RationalFunction> col;
  col.reserve(components.size());
  for (const auto& text : components) col.push_back(rat_parse(text));
  return map_from_rationals({col});
}

RationalFunction map_entry(const RationalMap& v, int row, int col) {
  return rat_make(v.cols.at(col).at(row), v.den);
}

CMatrix map_eval(const RationalMap& v, Complex w, bool cleared) {
  CMatrix m(v.n, v.ncols());
  Complex d(1.0);
  if (!cleared) {
    const int deg = std::max(v.den.degree(), 0);
    d = poly_eval(v.den, w);
    if (std::abs(d) <= 1e-8 * std::pow(1.0 + std::abs(w), deg))
      throw PoleHit("map_eval: masked denominator zero");
  }
  for (int c = 0; c < v.ncols(); ++c)
    for (int r = 0; r < v.n; ++r)
      m(r, c) = poly_eval(v.cols[c][r], w) / d;
  return m;
}

RationalMap map_derivative(const RationalMap& v, int m) {
  std::vector<std::vector<RationalFunction>> columns(v.ncols());
  for (int c = 0; c < v.ncols(); ++c) {
    columns[c].reserve(v.n);
    for (int r = 0; r < v.n; ++r)
      columns[c].push_back(rat_derivative(map_entry(v, r, c), m));
  }
  return map_from_rationals(columns);
}

RationalMap map_linear_combination(const std::vector<RationalMap>& maps,
                                   const std::vector<Complex>& weights) {
  if (maps.empty() || maps.size() != weights.size())
    throw Error("map_linear_combination: size mismatch");
  const int n = maps[0].n;
  std::vector<RationalFunction> col(n, rat_const(0.0));
  for (size_t i = 0; i < maps.size(); ++i) {
    if (maps[i].ncols() != 1 || maps[i].n != n)
      throw Error("map_linear_combination: expects single-column maps of equal size");
    for (int r = 0; r < n; ++r)
      col[r] = rat_add(col[r], rat_scale(map_entry(maps[i], r, 0), weights[i]));
  }
  return map_from_rationals({col});
}

}  // namespace ward
