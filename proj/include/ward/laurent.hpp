#pragma once

#include <vector>

#include "ward/matrixkit.hpp"

namespace ward {

// Truncated matrix Laurent expansion about `center`:
//   coeffs[j] multiplies (lambda - center)^(lo + j).
// `exact` marks finite Laurent polynomials (no truncation error above hi()).
// For inexact jets, coefficients with exponent > hi() are unknown, not zero.
struct MatrixLaurentJet {
  Complex center;
  int lo = 0;
  std::vector<CMatrix> coeffs;
  bool exact = false;

  int n() const { return coeffs.empty() ? 0 : static_cast<int>(coeffs[0].rows()); }
  int hi() const { return lo + static_cast<int>(coeffs.size()) - 1; }
  const CMatrix& at(int exponent) const;  // zero matrix reference outside range
  double scale() const;                   // max Frobenius norm over coefficients
};

MatrixLaurentJet jet_zero(Complex center, int n, int lo, int hi, bool exact = true);
MatrixLaurentJet jet_identity(Complex center, int n);

// Product with reliability-window tracking: the result keeps only exponents
// both operands can certify; exact * exact stays exact and untruncated.
MatrixLaurentJet jet_mul(const MatrixLaurentJet& a, const MatrixLaurentJet& b);
MatrixLaurentJet jet_add(const MatrixLaurentJet& a, const MatrixLaurentJet& b);
MatrixLaurentJet jet_scale(const MatrixLaurentJet& a, Complex s);
// Multiply by (lambda - center)^m.
MatrixLaurentJet jet_shift(MatrixLaurentJet a, int m);
// Drop coefficients above `order` (keeps exactness only if nothing was dropped).
MatrixLaurentJet jet_truncate(MatrixLaurentJet a, int order);

// Termwise lambda-derivative of order m.
MatrixLaurentJet jet_derivative(const MatrixLaurentJet& a, int m = 1);

// Evaluate the truncated series at lambda (tests / diagnostics).
CMatrix jet_eval(const MatrixLaurentJet& a, Complex lambda);

// Coefficient at exponent 0 after certifying the principal part vanishes:
// every coefficient with exponent < 0 must satisfy ||c|| <= tol * scale.
// Throws NotHolomorphic otherwise.
CMatrix holomorphic_value(const MatrixLaurentJet& a, double tol = 1e-9);

// Jet of the simple factor I + (z0 - conj z0)/(lambda - z0) * C  (C = P-complement)
// about `center`, to truncation order `order`; exact (finite) when z0 == center.
MatrixLaurentJet jet_of_simple_element(Complex z0, const Projector& p, Complex center, int order);
// Jet of its inverse I + (conj z0 - z0)/(lambda - conj z0) * C; exact when
// conj z0 == center.
MatrixLaurentJet jet_of_simple_element_inverse(Complex z0, const Projector& p, Complex center, int order);
// Jet of the scalar ((lambda - conj z0)/(lambda - z0))^m times the identity.
MatrixLaurentJet jet_of_blaschke(Complex z0, int m, int n, Complex center, int order);

}  // namespace ward
