#include "ward/laurent.hpp"

#include <algorithm>
#include <limits>

namespace ward {

namespace {

constexpr double kSamePole = 1e-12;  // pole-coincidence tolerance in lambda

int reliable_hi(const MatrixLaurentJet& a, const MatrixLaurentJet& b) {
  // Unknown coefficients of an inexact operand first pollute exponent
  // hi + 1 + other.lo, so the product is reliable through hi + other.lo.
  const int inf = std::numeric_limits<int>::max() / 4;
  const int from_a = a.exact ? inf : a.hi() + b.lo;
  const int from_b = b.exact ? inf : b.hi() + a.lo;
  return std::min(from_a, from_b);
}

}  // namespace

const CMatrix& MatrixLaurentJet::at(int exponent) const {
  static const CMatrix empty;
  const int idx = exponent - lo;
  if (idx < 0 || idx >= static_cast<int>(coeffs.size())) return empty;
  return coeffs[idx];
}

double MatrixLaurentJet::scale() const {
  double s = 0.0;
  for (const auto& m : coeffs) s = std::max(s, m.norm());
  return s;
}

MatrixLaurentJet jet_zero(Complex center, int n, int lo, int hi, bool exact) {
  MatrixLaurentJet j;
  j.center = center;
  j.lo = lo;
  j.exact = exact;
  j.coeffs.assign(std::max(hi - lo + 1, 1), CMatrix::Zero(n, n));
  return j;
}

MatrixLaurentJet jet_identity(Complex center, int n) {
  MatrixLaurentJet j = jet_zero(center, n, 0, 0, /*exact=*/true);
  j.coeffs[0] = CMatrix::Identity(n, n);
  return j;
}

MatrixLaurentJet jet_mul(const MatrixLaurentJet& a, const MatrixLaurentJet& b) {
  const int n = a.n();
  const int lo = a.lo + b.lo;
  int hi;
  bool exact;
  if (a.exact && b.exact) {
    hi = a.hi() + b.hi();
    exact = true;
  } else {
    hi = reliable_hi(a, b);
    exact = false;
    if (hi < lo) throw Error("jet_mul: empty reliability window");
  }
  MatrixLaurentJet r = jet_zero(a.center, n, lo, hi, exact);
  for (size_t i = 0; i < a.coeffs.size(); ++i) {
    const int ea = a.lo + static_cast<int>(i);
    for (size_t j = 0; j < b.coeffs.size(); ++j) {
      const int e = ea + b.lo + static_cast<int>(j);
      if (e > hi) break;
      r.coeffs[e - lo] += a.coeffs[i] * b.coeffs[j];
    }
  }
  return r;
}

MatrixLaurentJet jet_add(const MatrixLaurentJet& a, const MatrixLaurentJet& b) {
  const int inf = std::numeric_limits<int>::max() / 4;
  const int lo = std::min(a.lo, b.lo);
  const bool exact = a.exact && b.exact;
  int hi;
  if (exact) hi = std::max(a.hi(), b.hi());
  else hi = std::min(a.exact ? inf : a.hi(), b.exact ? inf : b.hi());
  if (hi < lo) throw Error("jet_add: empty reliability window");
  MatrixLaurentJet r = jet_zero(a.center, a.n(), lo, hi, exact);
  for (int e = lo; e <= hi; ++e) {
    CMatrix acc = CMatrix::Zero(a.n(), a.n());
    const CMatrix& ca = a.at(e);
    const CMatrix& cb = b.at(e);
    if (ca.size() > 0) acc += ca;
    if (cb.size() > 0) acc += cb;
    r.coeffs[e - lo] = std::move(acc);
  }
  return r;
}

MatrixLaurentJet jet_scale(const MatrixLaurentJet& a, Complex s) {
  MatrixLaurentJet r = a;
  for (auto& m : r.coeffs) m *= s;
  return r;
}

MatrixLaurentJet jet_shift(MatrixLaurentJet a, int m) {
  a.lo += m;
  return a;
}

MatrixLaurentJet jet_truncate(MatrixLaurentJet a, int order) {
  if (a.hi() <= order) return a;
  a.coeffs.resize(order - a.lo + 1);
  a.exact = false;
  return a;
}

MatrixLaurentJet jet_derivative(const MatrixLaurentJet& a, int m) {
  MatrixLaurentJet r = a;
  for (int iter = 0; iter < m; ++iter) {
    for (size_t i = 0; i < r.coeffs.size(); ++i)
      r.coeffs[i] *= Complex(static_cast<double>(r.lo + static_cast<int>(i)));
    r.lo -= 1;
  }
  return r;
}

CMatrix jet_eval(const MatrixLaurentJet& a, Complex lambda) {
  const Complex s = lambda - a.center;
  CMatrix acc = CMatrix::Zero(a.n(), a.n());
  // Horner over descending exponents, then multiply by s^lo.
  for (size_t i = a.coeffs.size(); i-- > 0;) acc = acc * s + a.coeffs[i];
  Complex slo(1.0);
  for (int i = 0; i < std::abs(a.lo); ++i) slo *= s;
  if (a.lo >= 0) return acc * slo;
  return acc / slo;
}

CMatrix holomorphic_value(const MatrixLaurentJet& a, double tol) {
  const double scale = std::max(a.scale(), 1e-300);
  for (int e = a.lo; e < 0; ++e) {
    const CMatrix& c = a.at(e);
    if (c.size() > 0 && c.norm() > tol * scale)
      throw NotHolomorphic("holomorphic_value: nonvanishing principal part");
  }
  if (!a.exact && a.hi() < 0)
    throw Error("holomorphic_value: window does not certify exponent 0");
  const CMatrix& v = a.at(0);
  if (v.size() == 0) return CMatrix::Zero(a.n(), a.n());
  return v;
}

namespace {

// Jet of I + b/(lambda - pole) * C about `center`.
MatrixLaurentJet simple_pole_jet(Complex pole, Complex b, const CMatrix& c,
                                 Complex center, int order) {
  const int n = static_cast<int>(c.rows());
  if (std::abs(pole - center) <= kSamePole) {
    MatrixLaurentJet j = jet_zero(center, n, -1, 0, /*exact=*/true);
    j.coeffs[0] = b * c;
    j.coeffs[1] = CMatrix::Identity(n, n);
    return j;
  }
  // 1/(lambda - pole) = sum_j (-1)^j s^j / (center - pole)^(j+1), s = lambda - center.
  MatrixLaurentJet j = jet_zero(center, n, 0, std::max(order, 0), /*exact=*/false);
  const Complex d = center - pole;
  Complex pw = 1.0 / d;
  for (int k = 0; k <= std::max(order, 0); ++k) {
    j.coeffs[k] = b * pw * c;
    if (k == 0) j.coeffs[k] += CMatrix::Identity(n, n);
    pw *= -1.0 / d;
  }
  return j;
}

}  // namespace

MatrixLaurentJet jet_of_simple_element(Complex z0, const Projector& p, Complex center, int order) {
  const CMatrix c = CMatrix::Identity(p.n(), p.n()) - p.mat;
  return simple_pole_jet(z0, z0 - std::conj(z0), c, center, order);
}

MatrixLaurentJet jet_of_simple_element_inverse(Complex z0, const Projector& p, Complex center, int order) {
  const CMatrix c = CMatrix::Identity(p.n(), p.n()) - p.mat;
  return simple_pole_jet(std::conj(z0), std::conj(z0) - z0, c, center, order);
}

MatrixLaurentJet jet_of_blaschke(Complex z0, int m, int n, Complex center, int order) {
  if (m < 0) throw Error("jet_of_blaschke: negative exponent");
  if (m == 0) return jet_identity(center, n);
  // Numerator (lambda - conj z0)^m = (d + s)^m, d = center - conj z0: exact binomial.
  MatrixLaurentJet num = jet_zero(center, n, 0, m, /*exact=*/true);
  const Complex d = center - std::conj(z0);
  std::vector<Complex> dp(m + 1);
  dp[0] = Complex(1.0);
  for (int j = 1; j <= m; ++j) dp[j] = dp[j - 1] * d;
  for (int j = 0; j <= m; ++j) {
    double binom = 1.0;
    for (int i = 0; i < j; ++i) binom *= static_cast<double>(m - i) / (i + 1);
    num.coeffs[j] = CMatrix::Identity(n, n) * (binom * dp[m - j]);
  }
  if (std::abs(z0 - center) <= kSamePole) {
    // (lambda - z0)^(-m) is an exact shift.
    return jet_shift(std::move(num), -m);
  }
  // Inverse factor via geometric series, powered m times.
  const int need = std::max(order, 0) + m;  // headroom for later truncation
  MatrixLaurentJet invpole = jet_zero(center, n, 0, need, /*exact=*/false);
  const Complex dd = center - z0;
  Complex pj = 1.0 / dd;
  for (int k = 0; k <= need; ++k) {
    invpole.coeffs[k] = CMatrix::Identity(n, n) * pj;
    pj *= -1.0 / dd;
  }
  MatrixLaurentJet acc = std::move(num);
  for (int i = 0; i < m; ++i) acc = jet_mul(acc, invpole);
  return jet_truncate(std::move(acc), std::max(order, 0));
}

}  // namespace ward
