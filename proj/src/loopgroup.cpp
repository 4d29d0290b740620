#include "ward/loopgroup.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

namespace ward {

namespace {

constexpr double kSamePole = 1e-12;
constexpr double kNearPoleRadius = 1e-6;
constexpr std::uint64_t kProbeSeed = 0x5eedbead;
constexpr int kProbeCount = 7;
constexpr size_t kMemoCap = 1 << 16;

std::uint64_t double_bits(double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, sizeof bits);
  return bits;
}

bool near(Complex a, Complex b) { return std::abs(a - b) <= kSamePole; }

Complex blaschke_scalar(const Blaschke& b, Complex lambda) {
  Complex r(1.0);
  const Complex one = (lambda - std::conj(b.z)) / (lambda - b.z);
  for (int i = 0; i < b.m; ++i) r *= one;
  return r;
}

}  // namespace

Complex plane_coordinate(const SpacetimePoint& p, Complex z) {
  return Complex(p.x) + z * p.u() + Complex(p.v()) / z;
}

std::vector<SpacetimePoint> probe_points(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  std::vector<SpacetimePoint> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    SpacetimePoint p;
    p.x = box(rng);
    p.y = box(rng);
    p.t = box(rng);
    pts.push_back(p);
  }
  return pts;
}

std::size_t PointBitsHash::operator()(const PointBits& k) const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::uint64_t bits : {k.x, k.y, k.t}) {
    h ^= bits;
    h *= 0x100000001b3ull;
  }
  return static_cast<std::size_t>(h);
}

PointBits point_bits(const SpacetimePoint& p) {
  return PointBits{double_bits(p.x), double_bits(p.y), double_bits(p.t)};
}

ProjectorField::ProjectorField(int n, int rank, std::string kind, Rule rule)
    : n_(n), rank_(rank), kind_(std::move(kind)), rule_(std::move(rule)) {}

Projector ProjectorField::at(const SpacetimePoint& p) const {
  const PointBits key = point_bits(p);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  Projector value = rule_(p);  // may recurse into other fields; no lock held
  if (value.rank != rank_)
    throw Degenerate("projector field: rank drop at point (generic " +
                     std::to_string(rank_) + ", got " + std::to_string(value.rank) + ")");
  std::lock_guard<std::mutex> lock(mu_);
  if (memo_.size() >= kMemoCap) memo_.clear();
  memo_.emplace(key, value);
  return value;
}

ProjectorFieldPtr span_field(Complex z, RationalMap v) {
  if (std::abs(z.imag()) == 0.0) throw Error("span_field: pole must be non-real");
  const int n = v.n;
  auto rule = [z, v](const SpacetimePoint& p) {
    return projector_from_span(map_eval(v, plane_coordinate(p, z), /*cleared=*/true));
  };
  // Calibrate the generic rank on probe points (singular probes skipped).
  int rank = -1;
  bool seen = false;
  for (const auto& p : probe_points(kProbeCount, kProbeSeed)) {
    try {
      const Projector pr = rule(p);
      rank = std::max(rank, pr.rank);
      seen = true;
    } catch (const Error&) {
    }
  }
  if (!seen) throw Degenerate("span_field: singular at every probe point");
  return std::make_shared<ProjectorField>(n, rank, "span", std::move(rule));
}

ProjectorFieldPtr constant_field(Projector p) {
  const int n = p.n();
  const int rank = p.rank;
  return std::make_shared<ProjectorField>(
      n, rank, "constant", [p = std::move(p)](const SpacetimePoint&) { return p; });
}

ProjectorFieldPtr derived_field(int n, int rank, std::string kind, ProjectorField::Rule rule) {
  return std::make_shared<ProjectorField>(n, rank, std::move(kind), std::move(rule));
}

ProjectorFieldPtr complement_field(const ProjectorFieldPtr& pi) {
  return std::make_shared<ProjectorField>(
      pi->n(), pi->n() - pi->rank(), "complement",
      [pi](const SpacetimePoint& p) { return complement(pi->at(p)); });
}

CMatrix simple_element(Complex z, const Projector& p, Complex lambda) {
  const int n = p.n();
  const Complex c = (z - std::conj(z)) / (lambda - z);
  return CMatrix::Identity(n, n) + c * (CMatrix::Identity(n, n) - p.mat);
}

CMatrix simple_element_inverse(Complex z, const Projector& p, Complex lambda) {
  const int n = p.n();
  const Complex c = (std::conj(z) - z) / (lambda - std::conj(z));
  return CMatrix::Identity(n, n) + c * (CMatrix::Identity(n, n) - p.mat);
}

ExtendedSolution one_soliton(Complex z, RationalMap v) {
  ExtendedSolution psi;
  psi.n = v.n;
  psi.factors.push_back(SimpleElementField{z, span_field(z, std::move(v))});
  psi.provenance = "one_soliton";
  return psi;
}

CMatrix eval(const ExtendedSolution& psi, const SpacetimePoint& p, Complex lambda) {
  for (const auto& f : psi.factors)
    if (std::abs(lambda - f.z) < kNearPoleRadius)
      throw NearPole("eval: lambda within 1e-6 of a factor pole");
  for (const auto& b : psi.prefactor)
    if (std::abs(lambda - b.z) < kNearPoleRadius)
      throw NearPole("eval: lambda within 1e-6 of a prefactor pole");
  Complex scalar(1.0);
  for (const auto& b : psi.prefactor) scalar *= blaschke_scalar(b, lambda);
  CMatrix m = scalar * CMatrix::Identity(psi.n, psi.n);
  for (const auto& f : psi.factors) m = simple_element(f.z, f.pi->at(p), lambda) * m;
  return m;
}

CMatrix eval_at_infinity(const ExtendedSolution& psi, const SpacetimePoint&) {
  return CMatrix::Identity(psi.n, psi.n);
}

double reality_defect(const ExtendedSolution& psi, const SpacetimePoint& p, Complex lambda) {
  const CMatrix a = eval(psi, p, std::conj(lambda));
  const CMatrix b = eval(psi, p, lambda);
  return (a.adjoint() * b - CMatrix::Identity(psi.n, psi.n)).norm();
}

CMatrix ward_map(const ExtendedSolution& psi, const SpacetimePoint& p, bool normalize_su) {
  // psi(0)^{-1} assembled from exact factor inverses at lambda = 0:
  // g_{z,pi}(0)^{-1} = pi + (z/conj z) pi_perp.
  CMatrix j = CMatrix::Identity(psi.n, psi.n);
  for (const auto& f : psi.factors) {
    const Projector pr = f.pi->at(p);
    const Complex r = f.z / std::conj(f.z);
    j = j * (pr.mat + r * (CMatrix::Identity(psi.n, psi.n) - pr.mat));
  }
  Complex scalar(1.0);
  for (const auto& b : psi.prefactor) scalar *= blaschke_scalar(b, Complex(0.0));
  j /= scalar;
  if (normalize_su) {
    Complex det = j.determinant();
    if (std::abs(det) < 1e-12) throw Singular("ward_map: vanishing determinant");
    // For poles on the imaginary axis det is real and can sit exactly on the
    // branch cut of the log; roundoff in its imaginary part would then flip
    // the n-th root's sign from one point to the next.  Snap to the principal
    // value so the normalization is a continuous scalar field.
    if (std::abs(det.imag()) < 1e-9 * std::abs(det)) det = Complex(det.real(), 0.0);
    j *= std::exp(-std::log(det) / static_cast<double>(psi.n));
  }
  return j;
}

PoleData pole_data(const ExtendedSolution& psi) {
  std::vector<PoleEntry> poles;
  auto add = [&poles](Complex z, int m) {
    for (auto& e : poles) {
      if (near(e.z, z)) {
        e.mult += m;
        return;
      }
    }
    poles.push_back(PoleEntry{z, m});
  };
  for (const auto& f : psi.factors) add(f.z, 1);
  for (const auto& b : psi.prefactor) add(b.z, b.m);
  std::sort(poles.begin(), poles.end(), [](const PoleEntry& a, const PoleEntry& b) {
    if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
    return a.z.imag() < b.z.imag();
  });
  return PoleData{std::move(poles)};
}

std::array<double, 2> velocity(Complex z) {
  if (z.imag() == 0.0) throw Error("velocity: real pole rejected");
  const double r2 = std::norm(z);
  return {-2.0 * z.real() / (1.0 + r2), (1.0 - r2) / (1.0 + r2)};
}

MatrixLaurentJet laurent_expand(const ExtendedSolution& psi, const SpacetimePoint& p,
                                Complex z, int order) {
  int total_neg = 0;
  for (const auto& f : psi.factors)
    if (near(f.z, z)) ++total_neg;
  for (const auto& b : psi.prefactor)
    if (near(b.z, z)) total_neg += b.m;
  const int need = order + total_neg;
  MatrixLaurentJet acc = jet_identity(z, psi.n);
  for (const auto& b : psi.prefactor)
    acc = jet_mul(jet_of_blaschke(b.z, b.m, psi.n, z, need), acc);
  for (const auto& f : psi.factors)
    acc = jet_mul(jet_of_simple_element(f.z, f.pi->at(p), z, need), acc);
  return jet_truncate(std::move(acc), order);
}

std::pair<SimpleElementField, SimpleElementField> permute(const SimpleElementField& g1,
                                                          const SimpleElementField& g2) {
  const Complex z1 = g1.z, z2 = g2.z;
  if (near(z1, z2) || near(z1, std::conj(z2)))
    throw ForbiddenPolePair("permute: poles equal or conjugate");
  auto pi1 = g1.pi;
  auto pi2 = g2.pi;
  auto tilde1 = derived_field(pi1->n(), pi1->rank(), "permuted",
                              [z1, z2, pi1, pi2](const SpacetimePoint& p) {
                                const Projector p1 = pi1->at(p);
                                const Projector p2 = pi2->at(p);
                                return projector_from_span(simple_element(z2, p2, z1) * p1.basis);
                              });
  auto tilde2 = derived_field(pi2->n(), pi2->rank(), "permuted",
                              [z1, z2, pi1, pi2](const SpacetimePoint& p) {
                                const Projector p1 = pi1->at(p);
                                const Projector p2 = pi2->at(p);
                                return projector_from_span(simple_element(z1, p1, z2) * p2.basis);
                              });
  return {SimpleElementField{z2, std::move(tilde2)}, SimpleElementField{z1, std::move(tilde1)}};
}

namespace {

// Pushes pi onto the left of an already-minimal chain (chain[0] applied first);
// returns the Blaschke exponent shed by rank reductions. Terminates by the
// lexicographic measure (chain length, rank of pushed projector).
int push_factor(std::vector<Projector>& chain, Projector pi, int n) {
  if (pi.rank == n) return 0;  // complement vanishes: the factor is I
  if (pi.rank == 0) return 1;  // g_{z,0} = Blaschke * I
  if (chain.empty()) {
    chain.push_back(std::move(pi));
    return 0;
  }
  const Projector tau = chain.back();
  const Projector tau_perp = complement(tau);
  const CMatrix inter = subspace_intersect(pi.basis, tau_perp.basis);
  if (inter.cols() == 0) {
    chain.push_back(std::move(pi));
    return 0;
  }
  // Swap: tau' spans Im tau + inter; pi' spans Im pi with inter removed.
  CMatrix grown(n, tau.rank + inter.cols());
  grown.leftCols(tau.rank) = tau.basis;
  grown.rightCols(inter.cols()) = inter;
  Projector tau2 = projector_from_span(grown);
  const CMatrix reduced =
      (CMatrix::Identity(n, n) - inter * inter.adjoint()) * pi.basis;
  // the shrink can annihilate pi entirely; judge that against the scale of the
  // orthonormal input columns, not relative to the residual's own largest
  // singular value (the relative rank of a zero matrix is meaningless)
  Projector pi2 = reduced.norm() < kRankRelTol * std::sqrt(static_cast<double>(pi.rank))
                      ? zero_projector(n)
                      : projector_from_span(reduced);
  chain.pop_back();
  int m = push_factor(chain, std::move(tau2), n);
  m += push_factor(chain, std::move(pi2), n);
  return m;
}

}  // namespace

PointFactorization minimal_factorize(Complex z, const std::vector<Projector>& factors) {
  (void)z;
  PointFactorization out;
  if (factors.empty()) return out;
  const int n = factors.front().n();
  for (const auto& pi : factors) out.prefactor_exponent += push_factor(out.chain, pi, n);
  return out;
}

PointFactorization minimal_factorize(const ExtendedSolution& psi, const SpacetimePoint& p) {
  Complex z;
  if (!same_pole(psi, &z)) throw Error("minimal_factorize: factors must share one pole");
  std::vector<Projector> values;
  values.reserve(psi.factors.size());
  for (const auto& f : psi.factors) values.push_back(f.pi->at(p));
  return minimal_factorize(z, values);
}

bool same_pole(const ExtendedSolution& psi, Complex* z) {
  if (psi.factors.empty()) return false;
  const Complex z0 = psi.factors.front().z;
  for (const auto& f : psi.factors)
    if (!near(f.z, z0)) return false;
  for (const auto& b : psi.prefactor)
    if (!near(b.z, z0)) return false;
  if (z) *z = z0;
  return true;
}

ExtendedSolution reduce_same_pole(const ExtendedSolution& psi) {
  Complex z;
  if (!same_pole(psi, &z)) throw Error("reduce_same_pole: factors must share one pole");
  // Calibrate level count, exponent, and ranks on probe points.
  int levels = -1, exponent = -1;
  std::vector<int> level_ranks;
  bool seen = false;
  for (const auto& p : probe_points(kProbeCount, kProbeSeed)) {
    PointFactorization f;
    try {
      f = minimal_factorize(psi, p);
    } catch (const Error&) {
      continue;
    }
    if (!seen) {
      levels = static_cast<int>(f.chain.size());
      exponent = f.prefactor_exponent;
      for (const auto& pr : f.chain) level_ranks.push_back(pr.rank);
      seen = true;
    } else if (levels != static_cast<int>(f.chain.size()) || exponent != f.prefactor_exponent) {
      throw Degenerate("reduce_same_pole: factorization shape varies across probes");
    }
  }
  if (!seen) throw Degenerate("reduce_same_pole: singular at every probe point");
  ExtendedSolution out;
  out.n = psi.n;
  out.provenance = psi.provenance;
  out.prefactor = psi.prefactor;
  if (exponent > 0) {
    bool merged = false;
    for (auto& b : out.prefactor) {
      if (near(b.z, z)) {
        b.m += exponent;
        merged = true;
        break;
      }
    }
    if (!merged) out.prefactor.push_back(Blaschke{z, exponent});
  }
  const ExtendedSolution parent = psi;  // value copy shares immutable fields
  const int want_levels = levels;
  for (int j = 0; j < levels; ++j) {
    auto rule = [parent, want_levels, j](const SpacetimePoint& p) {
      PointFactorization f = minimal_factorize(parent, p);
      if (static_cast<int>(f.chain.size()) != want_levels)
        throw Degenerate("reduced chain: level count varies at point");
      return f.chain[j];
    };
    out.factors.push_back(SimpleElementField{
        z, derived_field(psi.n, level_ranks[j], "reduced", std::move(rule))});
  }
  return out;
}

std::pair<ExtendedSolution, Complex> normalize_upper(const ExtendedSolution& psi) {
  ExtendedSolution out;
  out.n = psi.n;
  out.provenance = psi.provenance;
  Complex phase(1.0);
  for (const auto& b : psi.prefactor) {
    if (b.z.imag() >= 0.0) {
      out.prefactor.push_back(b);
    } else {
      // ((l - conj z)/(l - z))^m * ((l - z)/(l - conj z))^m = 1; f picks up (z/conj z)^m at 0.
      for (int i = 0; i < b.m; ++i) phase *= b.z / std::conj(b.z);
    }
  }
  for (const auto& f : psi.factors) {
    if (f.z.imag() >= 0.0) {
      out.factors.push_back(f);
    } else {
      out.factors.push_back(SimpleElementField{std::conj(f.z), complement_field(f.pi)});
      phase *= f.z / std::conj(f.z);
    }
  }
  return {std::move(out), phase};
}

std::vector<int> ranks(const ExtendedSolution& chain) {
  Complex z;
  if (!same_pole(chain, &z)) throw Error("ranks: factors must share one pole");
  std::vector<int> out;
  for (const auto& f : chain.factors) out.push_back(f.pi->rank());
  for (size_t j = 1; j < out.size(); ++j)
    if (out[j] > out[j - 1])
      throw MinimalityViolated("ranks: chain ranks increase along the product");
  // Kernel law at probe points: Ker(product of complements) = Im pi_1.
  const int n = chain.n;
  int checked = 0;
  for (const auto& p : probe_points(kProbeCount, kProbeSeed)) {
    std::vector<Projector> values;
    try {
      for (const auto& f : chain.factors) values.push_back(f.pi->at(p));
    } catch (const Error&) {
      continue;
    }
    CMatrix m = CMatrix::Identity(n, n);
    for (const auto& pr : values) m = (CMatrix::Identity(n, n) - pr.mat) * m;
    const CMatrix kernel = null_basis(m);
    if (kernel.cols() != values.front().rank)
      throw MinimalityViolated("ranks: kernel dimension differs from leading rank");
    const Projector pk = projector_from_span(kernel);
    if (projector_distance(pk, values.front()) > 1e-8)
      throw MinimalityViolated("ranks: kernel of composed complements is not Im pi_1");
    ++checked;
  }
  if (checked == 0) throw Degenerate("ranks: singular at every probe point");
  return out;
}

}  // namespace ward
