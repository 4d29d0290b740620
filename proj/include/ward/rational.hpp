#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "ward/errors.hpp"
#include "ward/matrixkit.hpp"

namespace ward {

// Hard cap on symbolic derivative / jet order.
inline constexpr int kMaxOrder = 16;

// Coefficients ascending by power; empty vector is the zero polynomial.
// Invariant: the trailing (leading-power) coefficient is nonzero.
struct Polynomial {
  std::vector<Complex> c;

  int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c.empty(); }
};

Polynomial poly_from(std::initializer_list<Complex> coeffs);
Polynomial poly_const(Complex value);
Polynomial poly_trim(Polynomial p);
Polynomial poly_add(const Polynomial& a, const Polynomial& b);
Polynomial poly_sub(const Polynomial& a, const Polynomial& b);
Polynomial poly_mul(const Polynomial& a, const Polynomial& b);
Polynomial poly_scale(const Polynomial& a, Complex s);
Polynomial poly_pow(const Polynomial& a, int k);
Polynomial poly_derivative(const Polynomial& a);
Complex poly_eval(const Polynomial& a, Complex w);
// Quotient and remainder; b must be nonzero.
std::pair<Polynomial, Polynomial> poly_divmod(const Polynomial& a, const Polynomial& b);
// Roots via the companion matrix (with multiplicity, unordered).
std::vector<Complex> poly_roots(const Polynomial& a);

// Reduced fraction of polynomials.
// Normal form: den is monic, gcd(num, den) = 1, zero is 0/1.
struct RationalFunction {
  Polynomial num;
  Polynomial den;  // never the zero polynomial
};

// Normalizes: cancels shared roots (deflation-tested clustering, abs tol 1e-10),
// makes den monic. Throws Error if den is the zero polynomial.
RationalFunction rat_make(Polynomial num, Polynomial den);
RationalFunction rat_const(Complex value);
RationalFunction rat_w();  // the identity map w
RationalFunction rat_add(const RationalFunction& a, const RationalFunction& b);
RationalFunction rat_sub(const RationalFunction& a, const RationalFunction& b);
RationalFunction rat_mul(const RationalFunction& a, const RationalFunction& b);
RationalFunction rat_div(const RationalFunction& a, const RationalFunction& b);
RationalFunction rat_scale(const RationalFunction& a, Complex s);

// m-th symbolic derivative in normal form; m <= kMaxOrder (OrderOverflow).
RationalFunction rat_derivative(const RationalFunction& f, int m = 1);

// Pole mask: |den(w)| <= 1e-8 * (1 + |w|)^deg(den)  =>  PoleHit.
bool rat_near_pole(const RationalFunction& f, Complex w);
Complex rat_eval(const RationalFunction& f, Complex w);

// Truncated Taylor expansion: a[l] = f^(l)(w0) / l!.
struct ScalarJet {
  Complex center;
  std::vector<Complex> a;

  int order() const { return static_cast<int>(a.size()) - 1; }
};

// Series-division jet; PoleHit at masked denominators, OrderOverflow past the cap.
ScalarJet taylor_jet(const RationalFunction& f, Complex w0, int order);

// Structural equality of normal forms within an absolute coefficient tolerance.
bool rat_equal(const RationalFunction& a, const RationalFunction& b, double tol = 1e-9);

// Grammar (whitespace insignificant):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | base ('^' uint)?
//   base   := 'w' | literal | '(' expr ')'
//   literal:= decimal 'i'? | 'i'
RationalFunction rat_parse(std::string_view text);
// Emits the grammar above; rat_parse(rat_print(f)) == f.
std::string rat_print(const RationalFunction& f);

// Complex constant in "a", "bi", "a+bi" form (any constant expression works).
Complex complex_parse(std::string_view text);
std::string complex_print(Complex z);

// Truncated power-series helpers on coefficient vectors of fixed length L
// (exponents 0..L-1).
std::vector<Complex> series_mul(const std::vector<Complex>& a, const std::vector<Complex>& b, int len);
std::vector<Complex> series_add(const std::vector<Complex>& a, const std::vector<Complex>& b);
// Substitute inner (inner[0] must be 0) into the truncated series outer.
std::vector<Complex> series_compose(const std::vector<Complex>& outer, const std::vector<Complex>& inner, int len);

// Matrix-valued rational map of w: columns share one scalar denominator.
// cols[c][r] is the numerator polynomial of entry (r, c); den is monic.
struct RationalMap {
  int n = 0;  // rows
  std::vector<std::vector<Polynomial>> cols;
  Polynomial den;

  int ncols() const { return static_cast<int>(cols.size()); }
};

// Single-column map from component expressions.
RationalMap map_parse(const std::vector<std::string>& components);
// General map from per-entry rational functions (columns of length n).
RationalMap map_from_rationals(const std::vector<std::vector<RationalFunction>>& columns);
// Entry as a reduced rational function.
RationalFunction map_entry(const RationalMap& v, int row, int col);
// Evaluate all entries at w. cleared = true evaluates numerators only
// (denominator-cleared; keeps spans continuous across denominator zeros).
CMatrix map_eval(const RationalMap& v, Complex w, bool cleared);
// Componentwise m-th derivative, re-normalized onto a common denominator.
RationalMap map_derivative(const RationalMap& v, int m = 1);
// Sum_i weights[i] * maps[i] (all single-column, same n) on a common denominator.
RationalMap map_linear_combination(const std::vector<RationalMap>& maps,
                                   const std::vector<Complex>& weights);

}  // namespace ward
