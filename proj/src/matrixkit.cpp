#include "ward/matrixkit.hpp"

#include <Eigen/SVD>
#include <Eigen/LU>

namespace ward {

namespace {

Eigen::JacobiSVD<CMatrix> thin_svd(const CMatrix& m) {
  return Eigen::JacobiSVD<CMatrix>(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

}  // namespace

Projector projector_from_span(const CMatrix& columns, double rel_tol) {
  if (columns.cols() == 0) throw ZeroSpan("projector_from_span: no columns");
  auto svd = thin_svd(columns);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) throw ZeroSpan("projector_from_span: zero span");
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++rank;
  if (rank == 0) throw ZeroSpan("projector_from_span: zero span");
  CMatrix basis = svd.matrixU().leftCols(rank);
  CMatrix p = basis * basis.adjoint();
  p = ((p + p.adjoint()) / 2.0).eval();  // pin Hermiticity against roundoff
  return Projector{std::move(p), std::move(basis), rank};
}

Projector zero_projector(int n) {
  return Projector{CMatrix::Zero(n, n), CMatrix::Zero(n, 0), 0};
}

Projector complement(const Projector& p) {
  const int n = p.n();
  CMatrix q = CMatrix::Identity(n, n) - p.mat;
  q = ((q + q.adjoint()) / 2.0).eval();
  if (p.rank == n) return Projector{std::move(q), CMatrix::Zero(n, 0), 0};
  // Image of the complement = kernel of p.mat's image projector.
  auto svd = thin_svd(q);
  CMatrix basis = svd.matrixU().leftCols(n - p.rank);
  return Projector{std::move(q), std::move(basis), n - p.rank};
}

CMatrix subspace_intersect(const CMatrix& a, const CMatrix& b, double rel_tol) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() == 0 || b.cols() == 0) return CMatrix::Zero(n, 0);
  Projector pa = projector_from_span(a, rel_tol);
  Projector pb = projector_from_span(b, rel_tol);
  // v in both images  <=>  (Pa Pb) v = v on the unit sphere; use the kernel of
  // [I - Pa; I - Pb] stacked, which is numerically cleaner.
  CMatrix stacked(2 * n, n);
  stacked.topRows(n) = CMatrix::Identity(n, n) - pa.mat;
  stacked.bottomRows(n) = CMatrix::Identity(n, n) - pb.mat;
  auto svd = Eigen::JacobiSVD<CMatrix>(stacked, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  // Kernel vectors have singular value ~0 on an absolute scale: the stacked
  // operator has norm <= 2, so compare against a fixed threshold.
  const double cut = std::max(rel_tol, 1e-9) * 2.0 * std::sqrt(2.0);
  int null_dim = 0;
  for (int i = static_cast<int>(sv.size()) - 1; i >= 0; --i) {
    if (sv(i) < cut) ++null_dim; else break;
  }
  if (null_dim == 0) return CMatrix::Zero(n, 0);
  return svd.matrixV().rightCols(null_dim);
}

CMatrix subspace_intersect_many(const std::vector<CMatrix>& spans, double rel_tol) {
  if (spans.empty()) throw Error("subspace_intersect_many: empty input");
  CMatrix acc = spans.front();
  for (size_t i = 1; i < spans.size() && acc.cols() > 0; ++i)
    acc = subspace_intersect(acc, spans[i], rel_tol);
  return acc;
}

CMatrix null_basis(const CMatrix& m, double rel_tol) {
  auto svd = Eigen::JacobiSVD<CMatrix>(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const int cols = static_cast<int>(m.cols());
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * std::max(smax, 1e-300)) ++rank;
  if (rank == cols) return CMatrix::Zero(cols, 0);
  return svd.matrixV().rightCols(cols - rank);
}

CMatrix solve_inverse(const CMatrix& m) {
  if (m.rows() != m.cols()) throw Error("solve_inverse: non-square");
  Eigen::FullPivLU<CMatrix> lu(m);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) throw Singular("solve_inverse: numerically singular");
  return lu.inverse();
}

double projector_distance(const Projector& a, const Projector& b) {
  return (a.mat - b.mat).norm();
}

double membership_defect(const Projector& p, const CVector& v) {
  const double nv = v.norm();
  if (nv == 0.0) return 0.0;
  return ((v - p.mat * v).norm()) / nv;
}

int numerical_rank(const CMatrix& m, double rel_tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  auto svd = Eigen::JacobiSVD<CMatrix>(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++rank;
  return rank;
}

}  // namespace ward
