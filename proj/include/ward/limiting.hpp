#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "ward/loopgroup.hpp"
#include "ward/rational.hpp"

namespace ward {

// One generating sequence a_0, a_1, ...: single-column rational maps of w.
// Entries past the stored length act as zero maps.
using ColumnSequence = std::vector<RationalMap>;

struct LimitingData {
  Complex z;                            // pole, Im z != 0
  std::vector<ColumnSequence> columns;  // s generating sequences
  int k = 1;                            // target multiplicity
  std::vector<int> rank_data;           // optional witness counts n_1 >= ... >= n_k
};

// The level fields of one constructed chain plus raw witness access.
// witnesses(j, p), 1 <= j <= levels.size(), returns the un-normalized
// vectors spanning level j at p, one per active sequence.
struct HatChain {
  Complex z;
  std::vector<ProjectorFieldPtr> levels;
  std::function<std::vector<CVector>(int, const SpacetimePoint&)> witnesses;
};

// epsilon-Taylor coefficients c_0..c_k at p of the moving-pole column
// sum_j eps^j a_j(w_eps), where w_eps = x + (z+eps)u + v/(z+eps); computed
// by composing each a_j's Taylor jet at w with the series of w_eps - w.
// Throws PoleHit when p sits on a singular line of some a_j.
std::vector<CVector> epsilon_coeffs(const ColumnSequence& seq, Complex z,
                                    const SpacetimePoint& p, int k);

// Builds pi^_1..pi^_k level by level and returns them with the solution
// g_{z,pi^_k} ... g_{z,pi^_1}.  Level j projects onto the span of
//   v_j^(i) = sum_{m=0}^{j-1} (z - conj z)^m P_{j-1,m} c_m^(i)
// over the n_j active sequences, where P_{l,m} sums the descending products
// of m complements drawn from levels 1..l.  Witness vectors are normalized
// before span formation.  Throws RankCollapse when some level cannot realize
// its witness count at any probe point.
std::pair<HatChain, ExtendedSolution> build_chain(const LimitingData& data);

// Level ranks; asserts monotone non-increase (MinimalityViolated).
std::vector<int> rank_data_of(const HatChain& chain);

// The genuine one-step transformation at the displaced pole z+eps whose
// eps -> 0 limit is the chain's top level: the (k-1)-level chain dressed at
// z+eps with the span of the combined columns sum_j eps^j a_{i,j}(w_eps).
ExtendedSolution perturbed_chain(const LimitingData& data, double eps);

}  // namespace ward
