#pragma once

#include <complex>
#include <vector>
#include <Eigen/Dense>

#include "ward/errors.hpp"

namespace ward {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kRankRelTol = 1e-9;  // singular values below tol*sigma_max are rank-deficient

// Hermitian idempotent with a cached orthonormal basis of its image.
// Invariants: mat = mat*, mat^2 = mat (to roundoff), basis is n x rank with
// orthonormal columns spanning the image, mat = basis * basis^*.
struct Projector {
  CMatrix mat;
  CMatrix basis;
  int rank = 0;

  int n() const { return static_cast<int>(mat.rows()); }
};

// Orthogonal projector onto the column span of `columns`.
// Rank decided by singular values relative to the largest (kRankRelTol).
// Throws ZeroSpan if every column is numerically zero.
Projector projector_from_span(const CMatrix& columns, double rel_tol = kRankRelTol);

// Projector with prescribed image {0}; useful as a reduction sentinel.
Projector zero_projector(int n);

// I - P, rank n - rank(P).
Projector complement(const Projector& p);

// Orthonormal basis (n x d) of the intersection of col(a) and col(b);
// d = 0 gives an n x 0 matrix. Any spanning sets work; they are
// re-orthonormalized internally.
CMatrix subspace_intersect(const CMatrix& a, const CMatrix& b, double rel_tol = kRankRelTol);

// Orthonormal basis of the common intersection of several spans.
CMatrix subspace_intersect_many(const std::vector<CMatrix>& spans, double rel_tol = kRankRelTol);

// Orthonormal basis of the kernel of m (right null space).
CMatrix null_basis(const CMatrix& m, double rel_tol = kRankRelTol);

// Inverse via full-pivot LU; throws Singular when numerically rank-deficient.
CMatrix solve_inverse(const CMatrix& m);

// Frobenius distance between the images of two projectors.
double projector_distance(const Projector& a, const Projector& b);

// ||(I - P) v|| / ||v||: how far v sticks out of Im(P); 0 when v lies inside.
double membership_defect(const Projector& p, const CVector& v);

// Numerical rank of an arbitrary matrix.
int numerical_rank(const CMatrix& m, double rel_tol = kRankRelTol);

}  // namespace ward
