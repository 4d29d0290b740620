#pragma once

#include <vector>

#include "ward/loopgroup.hpp"

namespace ward {

// Record of one dressing step.  Invariant at every regular point:
//   Im transformed_pi(p) = parent(p, z) . Im source_pi(p)
// (subspace distance < 1e-8).
struct BTRecord {
  Complex z;
  ProjectorFieldPtr source_pi;
  ProjectorFieldPtr transformed_pi;
  ExtendedSolution parent;
};

// Left-multiplies psi by g_{z,pi~} with Im pi~(p) = psi(p,z) Im pi(p).
// Adds exactly one to the degree.  Throws PoleClash when z is already a pole
// of psi, Degenerate when psi(p,z) is singular at a probe point, Error when
// z is real.  On success *record (if given) describes the step.
ExtendedSolution bt_apply(const ExtendedSolution& psi, Complex z, ProjectorFieldPtr pi,
                          BTRecord* record = nullptr);

// Composes a single-pole solution phi (pole z, multiplicity k) onto psi.
// phi is first reduced to its minimal chain pi_1..pi_k; the transformed
// chain is built by the recursion
//   Im pi~_j = psi~_{j-1}(z) Im pi_j,
//   psi~_j   = g_{z,pi~_j} psi~_{j-1} g_{z,pi_j}^{-1}
// with psi~_j evaluated through Laurent-jet propagation (each step is
// holomorphic at z; the finite value feeds the next level).  The result is
// g_{z,pi~_k} ... g_{z,pi~_1} psi, of degree deg(psi) + k.
// Throws PoleClash when the pole sets of phi and psi meet or are conjugate;
// NotHolomorphic propagates from jet extraction when the recursion state is
// inconsistent.
ExtendedSolution gbt_apply(const ExtendedSolution& phi, const ExtendedSolution& psi);

// Folds gbt_apply over single-pole parts with pairwise distinct,
// non-conjugate poles: parts[r-1] * ( ... * (parts[1] * parts[0]) ... ).
// A single part is returned unchanged.
ExtendedSolution compose_multi(const std::vector<ExtendedSolution>& parts);

}  // namespace ward
