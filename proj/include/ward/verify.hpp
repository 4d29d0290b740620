#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ward/loopgroup.hpp"

namespace ward {

// Tolerances and sampling policy for the certification suite.  Algebraic
// identities are held to 1e-9, FD residuals to 1e-4/1e-5, fits to 1e-7.
struct VerifyConfig {
  double fd_step = 1e-4;  // central-difference step, within [1e-6, 1e-2]
  std::uint64_t sample_seed = 0xcafef00d;
  int reality_samples = 50;
  int lambda_samples = 5;
  int circle_samples = 48;

  double tol_algebraic = 1e-9;
  double tol_pde = 1e-4;
  double tol_lax = 1e-5;
  double tol_fit = 1e-7;

  double quad_radius = 40.0;
  double quad_rel = 1e-3;
  double tail_fraction = 0.05;

  int fit_degree = 12;
};

struct CheckReport {
  std::string name;
  double max_residual = 0.0;
  int samples = 0;
  bool pass = false;
  std::optional<double> convergence_order;
  std::string note;  // auxiliary flags ("flat", "det 9.98e-01", ...)
};

using MapEvaluator = std::function<CMatrix(const SpacetimePoint&)>;
using LineEvaluator = std::function<Complex(double)>;

// J(p) = ward_map(psi, p) as a reusable evaluator.
MapEvaluator ward_evaluator(const ExtendedSolution& psi);

// Copy of psi with factor `index`'s projector field smoothly perturbed by
// `magnitude`; negative control for the residual checks.
ExtendedSolution corrupt_factor(const ExtendedSolution& psi, size_t index, double magnitude,
                                std::uint64_t seed = 0xbadf00d);

// Frobenius norm of (J^-1 J_t)_t - (J^-1 J_x)_x - (J^-1 J_y)_y
//                  - [J^-1 J_t, J^-1 J_y]
// from nested second-order central differences at p; convergence_order is
// the log2 ratio of residuals at a coarse step pair (1e-2, 5e-3), where
// truncation dominates roundoff.
CheckReport ward_residual(const MapEvaluator& J, const SpacetimePoint& p,
                          const VerifyConfig& cfg = {});

// Max pairwise deviation of A(lambda) = (lambda psi_x - psi_u) psi^-1 and
// B(lambda) = (lambda psi_v - psi_x) psi^-1 across the lambda samples.
CheckReport lax_independence(const ExtendedSolution& psi, const SpacetimePoint& p,
                             const std::vector<Complex>& lambdas, const VerifyConfig& cfg = {});

// 1/2 (||J^-1 J_t||^2 + ||J^-1 J_x||^2 + ||J^-1 J_y||^2) at p, with
// ||xi||^2 = -tr(xi^2), derivatives by central differences of step h.
double energy_density(const MapEvaluator& J, const SpacetimePoint& p, double h);

// E(t) = 1/2 integral of ||J^-1 J_t||^2 + ||J^-1 J_x||^2 + ||J^-1 J_y||^2
// over [-R, R]^2, refined until the relative change drops below quad_rel.
// Throws NonDecaying when the boundary ring holds more than tail_fraction
// of the total.
std::vector<std::pair<double, double>> energy_series(const MapEvaluator& J,
                                                     const std::vector<double>& times,
                                                     const VerifyConfig& cfg = {});

// Fit of log||J - J0|| against log r over the sampled circles; J0 is the
// average over the largest circle.  Passes when the slope sits in
// [-1.5, -0.7], or trivially (note "flat") when J barely moves at all.
CheckReport boundary_decay(const MapEvaluator& J, double t, const std::vector<double>& radii,
                           const VerifyConfig& cfg = {});

// Residual of the analytic transformation system for the inserted projector:
//   pi_perp (z pi_x - pi_u - A pi) = 0,   pi_perp (z pi_v - pi_x - B pi) = 0
// with A, B the Lax matrices of the base solution psi.
CheckReport analytic_bt_residual(const ExtendedSolution& psi, Complex z,
                                 const ProjectorFieldPtr& pi, const SpacetimePoint& p,
                                 const VerifyConfig& cfg = {});

// Residual of z V_x - V_u - A V = 0 and z V_v - V_x - B V = 0 for
// V = psi(., z), A and B taken at a different lambda; note carries |det V|.
// Throws PoleClash when z lies in the pole data.
CheckReport fundamental_residual(const ExtendedSolution& psi, Complex z, const SpacetimePoint& p,
                                 const VerifyConfig& cfg = {});

// Lax-independence report for every proper prefix of the factor chain.
std::vector<CheckReport> tail_check(const ExtendedSolution& psi, const VerifyConfig& cfg = {});

// Total-least-squares fit of a degree-(d, d) rational function to the line
// samples (Chebyshev nodes on [-25, 25]); residual is the smallest relative
// singular value.  Throws Error when fewer than 2d+3 regular samples remain.
CheckReport rationality_fit(const LineEvaluator& line, int degree_budget,
                            const VerifyConfig& cfg = {});

// max ||psi(conj lambda)^* psi(lambda) - I|| over seeded random (p, lambda).
CheckReport reality_check(const ExtendedSolution& psi, const VerifyConfig& cfg = {});

// The certification battery every constructed solution must pass:
// reality, lax_independence, ward_residual, boundary_decay, rationality_fit.
std::vector<CheckReport> full_suite(const ExtendedSolution& psi, const VerifyConfig& cfg = {});

// One line per check: "name <max_residual %.2e> pass|fail".
std::string render_report(const std::vector<CheckReport>& reports);

// || P_wbar + [P, P*] || with P = 1/2 s^-1 s_w by central differences: the
// harmonicity defect of a smooth unitary-valued map s(w).
double harmonic_residual(const std::function<CMatrix(Complex)>& s, Complex w0, double h = 1e-4);

}  // namespace ward
