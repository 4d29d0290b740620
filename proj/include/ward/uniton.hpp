#pragma once

#include <array>
#include <vector>

#include "ward/limiting.hpp"
#include "ward/loopgroup.hpp"

namespace ward {

// Stationary construction data at pole i.  maps[i] holds a_{i,0}..a_{i,k-1}
// for partition index i; partition entries r_i are positive and sum to the
// rank of the top level.  extra_spanners are appended to level 1's span.
struct UnitonSpec {
  int n = 0;
  int k = 1;
  std::vector<int> partition;
  std::vector<ColumnSequence> maps;
  std::vector<RationalMap> extra_spanners;
};

struct StationarityReport {
  double max_t_drift = 0.0;  // max_t ||J(x,y,t) - J(x,y,0)||_F over the grid

  struct Violation {
    int level = 0;   // chain level p
    int order = 0;   // power of t in the witness expansion
    double defect = 0.0;
  };
  std::vector<Violation> violated_constraints;

  bool pass(double tol = 1e-8) const {
    return max_t_drift < tol && violated_constraints.empty();
  }
};

// Builds g_{i,pi_k} ... g_{i,pi_1}: level p spans the derivative families
//   D^(l) v_{ip} = sum_{j<p} (2i)^j P_{p-1,j} a_{i,j}^(l)(w),  w = x + iy,
// over 0 <= l <= r_i + k - p - 1 (extra_spanners join level 1).  The result
// is t-independent by construction and minimally factored.  Throws
// RankCollapse when a level's span degenerates to 0 or the full space at all
// probe points, ConstraintViolated when the top-level family is dependent or
// the next derivative D^(r_i) v_{ik} stays inside the top span (the declared
// partition overstates the jet length), MinimalityViolated when consecutive
// levels fail the trivial-intersection law.
ExtendedSolution uniton_build(const UnitonSpec& spec);

// Drift of the Ward map over grid x t_samples against t = 0.  With a chain
// attached, also fits each witness column's t-expansion over t_samples and
// reports every coefficient of t, t^2, ... escaping its level's span.
StationarityReport stationarity_check(const ExtendedSolution& psi,
                                      const std::vector<double>& t_samples,
                                      const std::vector<std::array<double, 2>>& grid,
                                      const HatChain* witnesses = nullptr);

// Ranks of a minimal chain at pole i, asserting the strict decrease that
// holds when Im pi_1 meets the constant vectors trivially; that hypothesis
// is checked first (common subspace of Im pi_1 across probe points).
// Throws StrictDecreaseViolated when the ranks merely tie.
std::vector<int> validate_rank_law(const ExtendedSolution& chain);

// E(p, xi) = psi(p, lambda)^{-1} with lambda = i(1+xi)/(1-xi); E(-1) is the
// harmonic map J.  xi = 1 (lambda = infinity) is rejected; xi near 0 hits
// the pole and raises NearPole.
CMatrix harmonic_extended(const ExtendedSolution& psi, const SpacetimePoint& p, Complex xi);

}  // namespace ward
