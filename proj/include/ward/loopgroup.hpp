#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "ward/laurent.hpp"
#include "ward/matrixkit.hpp"
#include "ward/rational.hpp"

namespace ward {

struct SpacetimePoint {
  double x = 0.0, y = 0.0, t = 0.0;

  double u() const { return (t + y) / 2.0; }
  double v() const { return (t - y) / 2.0; }
};

// w = x + z u + v / z, the invariant plane coordinate attached to pole z.
Complex plane_coordinate(const SpacetimePoint& p, Complex z);

// Deterministic pseudo-random probe points in the box [-2,2]^3.
std::vector<SpacetimePoint> probe_points(int count, std::uint64_t seed);

// Bit-exact spacetime coordinates, the memoization key: FD stencils and grid
// loops revisit identical doubles.
struct PointBits {
  std::uint64_t x = 0, y = 0, t = 0;
  bool operator==(const PointBits&) const = default;
};
struct PointBitsHash {
  std::size_t operator()(const PointBits& k) const;
};
PointBits point_bits(const SpacetimePoint& p);

// Rule producing a projector of fixed generic rank at each regular point.
// Immutable; evaluation is memoized and internally synchronized, so values
// behave as pure functions of the point.
class ProjectorField {
 public:
  using Rule = std::function<Projector(const SpacetimePoint&)>;

  ProjectorField(int n, int rank, std::string kind, Rule rule);

  // Throws Degenerate when the computed rank differs from the generic rank;
  // propagates PoleHit/ZeroSpan from the rule at singular points.
  Projector at(const SpacetimePoint& p) const;

  int n() const { return n_; }
  int rank() const { return rank_; }
  const std::string& kind() const { return kind_; }

 private:
  int n_;
  int rank_;
  std::string kind_;
  Rule rule_;
  mutable std::mutex mu_;
  mutable std::unordered_map<PointBits, Projector, PointBitsHash> memo_;
};

using ProjectorFieldPtr = std::shared_ptr<const ProjectorField>;

// pi(p) = projector onto the span of the denominator-cleared columns of V
// at w = x + z u + v/z. Generic rank calibrated on probe points.
ProjectorFieldPtr span_field(Complex z, RationalMap v);
ProjectorFieldPtr constant_field(Projector p);
ProjectorFieldPtr derived_field(int n, int rank, std::string kind, ProjectorField::Rule rule);
// pointwise orthogonal complement of a field
ProjectorFieldPtr complement_field(const ProjectorFieldPtr& pi);

// Scalar ((lambda - conj z)/(lambda - z))^m.
struct Blaschke {
  Complex z;
  int m = 1;
};

// g_{z,pi}(lambda) = I + (z - conj z)/(lambda - z) * pi_perp; Im z != 0.
struct SimpleElementField {
  Complex z;
  ProjectorFieldPtr pi;
};

CMatrix simple_element(Complex z, const Projector& p, Complex lambda);
CMatrix simple_element_inverse(Complex z, const Projector& p, Complex lambda);

struct PoleEntry {
  Complex z;
  int mult = 0;
};

struct PoleData {
  std::vector<PoleEntry> poles;  // sorted by (Re, Im)

  int degree() const {
    int d = 0;
    for (const auto& p : poles) d += p.mult;
    return d;
  }
};

// Rational unitary loop: prefactor scalars times simple-element factors.
// factors[0] is applied first (rightmost in the matrix product).
// Immutable after construction; evaluation is read-only and thread-safe.
struct ExtendedSolution {
  int n = 0;
  std::vector<Blaschke> prefactor;
  std::vector<SimpleElementField> factors;
  std::string provenance;
};

// Single simple-element solution from pole z and column-span data V.
ExtendedSolution one_soliton(Complex z, RationalMap v);

// Product of prefactors and factors at lambda; unitary for real lambda.
// Throws NearPole when lambda is within 1e-6 of a pole, PoleHit/Degenerate
// at singular points of a projector field.
CMatrix eval(const ExtendedSolution& psi, const SpacetimePoint& p, Complex lambda);
// Limit lambda -> infinity (identity: every factor is I + O(1/lambda)).
CMatrix eval_at_infinity(const ExtendedSolution& psi, const SpacetimePoint& p);
// ||psi(conj lambda)^* psi(lambda) - I||, the reality-condition defect.
double reality_defect(const ExtendedSolution& psi, const SpacetimePoint& p, Complex lambda);

// J = psi(p, 0)^{-1}; with normalize_su, scaled by the principal n-th root of
// 1/det J so det = 1.
CMatrix ward_map(const ExtendedSolution& psi, const SpacetimePoint& p, bool normalize_su = false);

// Merged pole data of stored factors and prefactors.
PoleData pole_data(const ExtendedSolution& psi);

// Travelling-lump velocity attached to pole z = r e^{i theta}:
//   ( -2 r cos(theta)/(1+r^2), (1-r^2)/(1+r^2) ).
std::array<double, 2> velocity(Complex z);

// Laurent jet of psi about z at point p, reliable through `order`.
MatrixLaurentJet laurent_expand(const ExtendedSolution& psi, const SpacetimePoint& p,
                                Complex z, int order);

// Reorders g_{~z1} g_{z2} = g_{~z2} g_{z1} (returned as (g2~, g1~)):
//   Im pi1~ = g_{z2,pi2}(z1) Im pi1,  Im pi2~ = g_{z1,pi1}(z2) Im pi2.
// Throws ForbiddenPolePair when z1 is z2 or conj z2.
std::pair<SimpleElementField, SimpleElementField> permute(const SimpleElementField& g1,
                                                          const SimpleElementField& g2);

// Pointwise minimal factorization of a same-pole product (chain[0] applied
// first): returns Blaschke exponent m and reduced projectors tau_1..tau_l with
// product = B^m g_{z,tau_l} ... g_{z,tau_1}, consecutive images satisfying
// Im tau_{j+1} and Im tau_j^perp intersecting trivially.
struct PointFactorization {
  int prefactor_exponent = 0;
  std::vector<Projector> chain;
};
PointFactorization minimal_factorize(Complex z, const std::vector<Projector>& chain);
// Field evaluation of the above for a same-pole solution.
PointFactorization minimal_factorize(const ExtendedSolution& psi, const SpacetimePoint& p);

// Same-pole solution rebuilt on minimal derived fields (level count and
// prefactor exponent calibrated on probe points).
ExtendedSolution reduce_same_pole(const ExtendedSolution& psi);

// Moves every pole into the upper half plane via g_{z,pi} -> g_{conj z, pi_perp}
// and absorbs lower-half prefactors; returns the unit-modulus phase f(0)
// relating the Ward maps (J_new = J_old / phase).
std::pair<ExtendedSolution, Complex> normalize_upper(const ExtendedSolution& psi);

// Ranks of a same-pole minimal chain; asserts monotone non-increase and the
// kernel law: Ker(pi_k^perp ... pi_1^perp) = Im pi_1 (subspace distance < 1e-8).
// Throws MinimalityViolated on failure.
std::vector<int> ranks(const ExtendedSolution& chain);

// True when all factors share one pole (within 1e-12); that pole is stored in *z.
bool same_pole(const ExtendedSolution& psi, Complex* z = nullptr);

}  // namespace ward
