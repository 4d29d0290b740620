#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ward/matrixkit.hpp"

using namespace ward;

namespace {

CMatrix rand_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> N(0, 1);
  CMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = Complex(N(rng), N(rng));
  return m;
}

void check_projector_invariants(const Projector& p) {
  CHECK((p.mat - p.mat.adjoint()).norm() < 1e-12);
  CHECK((p.mat * p.mat - p.mat).norm() < 1e-12);
  CHECK((p.basis.adjoint() * p.basis - CMatrix::Identity(p.rank, p.rank)).norm() < 1e-12);
  CHECK((p.basis * p.basis.adjoint() - p.mat).norm() < 1e-12);
}

}  // namespace

TEST_CASE("projector onto coordinate and diagonal spans") {
  CMatrix e1(2, 1);
  e1 << Complex(1, 0), Complex(0, 0);
  Projector p = projector_from_span(e1);
  CHECK(p.rank == 1);
  CHECK(std::abs(p.mat(0, 0) - Complex(1, 0)) < 1e-14);
  CHECK(std::abs(p.mat(1, 1)) < 1e-14);

  CMatrix d(2, 1);
  d << Complex(1, 0), Complex(1, 0);
  Projector q = projector_from_span(d);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) CHECK(std::abs(q.mat(r, c) - Complex(0.5, 0)) < 1e-14);

  check_projector_invariants(p);
  check_projector_invariants(q);
}

TEST_CASE("span rank is decided by relative singular values") {
  std::mt19937_64 rng(5);
  CMatrix cols(4, 3);
  cols.col(0) = rand_matrix(rng, 4, 1);
  cols.col(1) = rand_matrix(rng, 4, 1);
  cols.col(2) = cols.col(0) + cols.col(1);  // dependent
  Projector p = projector_from_span(cols);
  CHECK(p.rank == 2);
  check_projector_invariants(p);

  CMatrix zero = CMatrix::Zero(3, 2);
  CHECK_THROWS_AS(projector_from_span(zero), ZeroSpan);
}

TEST_CASE("complement") {
  CMatrix e1(2, 1);
  e1 << Complex(1, 0), Complex(0, 0);
  Projector p = projector_from_span(e1);
  Projector c = complement(p);
  CHECK(std::abs(c.mat(0, 0)) < 1e-14);
  CHECK(std::abs(c.mat(1, 1) - Complex(1, 0)) < 1e-14);

  std::mt19937_64 rng(6);
  Projector q = projector_from_span(rand_matrix(rng, 5, 2));
  CHECK(q.rank + complement(q).rank == 5);
  CHECK(projector_distance(complement(complement(q)), q) < 1e-12);
  check_projector_invariants(complement(q));
}

TEST_CASE("subspace intersections") {
  std::mt19937_64 rng(7);

  // identical spans intersect in themselves
  CMatrix a = rand_matrix(rng, 4, 2);
  CMatrix self = subspace_intersect(a, a);
  CHECK(self.cols() == 2);

  // orthogonal spans meet trivially
  CMatrix e1(3, 1), e2(3, 1);
  e1 << 1, 0, 0;
  e2 << 0, 1, 0;
  CHECK(subspace_intersect(e1, e2).cols() == 0);

  // engineered one-dimensional overlap in C^4
  CMatrix shared = rand_matrix(rng, 4, 1);
  CMatrix sa(4, 2), sb(4, 2);
  sa.col(0) = shared;
  sa.col(1) = rand_matrix(rng, 4, 1);
  sb.col(0) = 3.0 * shared;  // same line, different basis scale
  sb.col(1) = rand_matrix(rng, 4, 1);
  CMatrix meet = subspace_intersect(sa, sb);
  REQUIRE(meet.cols() == 1);
  Projector line = projector_from_span(shared);
  CHECK(membership_defect(line, meet.col(0)) < 1e-9);

  CMatrix many = subspace_intersect_many({sa, sb, sa});
  REQUIRE(many.cols() == 1);
  CHECK(membership_defect(line, many.col(0)) < 1e-9);
}

TEST_CASE("null space basis") {
  CMatrix m(2, 3);
  m << 1, 0, 1,
       0, 1, 0;
  CMatrix k = null_basis(m);
  REQUIRE(k.cols() == 1);
  CHECK((m * k).norm() < 1e-12);
  CHECK(std::abs(k.col(0).norm() - 1.0) < 1e-12);
}

TEST_CASE("inverse") {
  CHECK((solve_inverse(CMatrix::Identity(3, 3)) - CMatrix::Identity(3, 3)).norm() < 1e-14);

  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = Complex(2, 0);
  d(1, 1) = Complex(0, 1);
  CMatrix di = solve_inverse(d);
  CHECK(std::abs(di(0, 0) - Complex(0.5, 0)) < 1e-14);
  CHECK(std::abs(di(1, 1) - Complex(0, -1)) < 1e-14);

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    CMatrix m = rand_matrix(rng, 4, 4) + 3.0 * CMatrix::Identity(4, 4);
    CMatrix mi = solve_inverse(m);
    CHECK((m * mi - CMatrix::Identity(4, 4)).norm() < 1e-10);
  }

  CMatrix sing(2, 2);
  sing << 1, 1, 1, 1;
  CHECK_THROWS_AS(solve_inverse(sing), Singular);
}

TEST_CASE("membership defect and rank") {
  std::mt19937_64 rng(9);
  CMatrix span = rand_matrix(rng, 4, 2);
  Projector p = projector_from_span(span);
  CVector inside = span.col(0) + Complex(0, 2) * span.col(1);
  CHECK(membership_defect(p, inside) < 1e-12);

  CVector outside = rand_matrix(rng, 4, 1).col(0);
  CHECK(membership_defect(p, outside) > 1e-3);

  CMatrix m = rand_matrix(rng, 5, 3);
  m.col(2) = m.col(0) - m.col(1);
  CHECK(numerical_rank(m) == 2);
  CHECK(numerical_rank(CMatrix::Zero(4, 4)) == 0);
}
