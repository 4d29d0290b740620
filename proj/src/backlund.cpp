#include "ward/backlund.hpp"

#include <cmath>
#include <mutex>
#include <unordered_map>
#include <utility>

#include "ward/errors.hpp"
#include "ward/laurent.hpp"
#include "ward/matrixkit.hpp"
#include "ward/rational.hpp"

namespace ward {

namespace {

constexpr double kSamePole = 1e-12;
constexpr double kJetTol = 1e-8;
constexpr std::uint64_t kProbeSeed = 0xba5eba11;
constexpr int kProbeCount = 5;
constexpr size_t kMemoCap = 1 << 16;

void require_nonreal(Complex z, const char* who) {
  if (z.imag() == 0.0) throw Error(std::string(who) + ": pole must be non-real");
}

// Shared state of one generalized transformation: all transformed levels at a
// point are produced by a single pass of the recursion, so the per-level
// fields draw from one memo instead of re-running lower levels.
struct GbtRecursion {
  ExtendedSolution base;
  Complex z;
  std::vector<ProjectorFieldPtr> source;  // chain, [0] applied first
  int order;

  mutable std::mutex mu;
  mutable std::unordered_map<PointBits, std::vector<Projector>, PointBitsHash> memo;

  std::vector<Projector> levels(const SpacetimePoint& p) const {
    const PointBits key = point_bits(p);
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
    }

    const int k = static_cast<int>(source.size());
    std::vector<Projector> out;
    out.reserve(k);
    MatrixLaurentJet cur = laurent_expand(base, p, z, order);
    for (int j = 0; j < k; ++j) {
      const CMatrix value = holomorphic_value(cur, kJetTol);
      const Projector src = source[static_cast<size_t>(j)]->at(p);
      Projector tilde = projector_from_span(value * src.basis);
      if (tilde.rank != src.rank)
        throw Degenerate("gbt: transformed projector dropped rank at a point");
      out.push_back(tilde);
      if (j + 1 < k) {
        MatrixLaurentJet left = jet_of_simple_element(z, tilde, z, order);
        MatrixLaurentJet right = jet_of_simple_element_inverse(z, src, z, order);
        cur = jet_mul(std::move(left), jet_mul(std::move(cur), std::move(right)));
      }
    }

    std::lock_guard<std::mutex> lock(mu);
    if (memo.size() >= kMemoCap) memo.clear();
    memo.emplace(key, out);
    return out;
  }
};

}  // namespace

ExtendedSolution bt_apply(const ExtendedSolution& psi, Complex z, ProjectorFieldPtr pi,
                          BTRecord* record) {
  require_nonreal(z, "bt_apply");
  if (!pi) throw Error("bt_apply: null projector field");
  if (psi.n != 0 && pi->n() != psi.n)
    throw Error("bt_apply: dimension mismatch between solution and projector field");

  for (const auto& entry : pole_data(psi).poles)
    if (std::abs(entry.z - z) <= kSamePole)
      throw PoleClash("bt_apply: pole already present; use the generalized transformation");

  // Construction-time degeneracy screen: the dressing step needs psi(.,z) invertible.
  for (const auto& p : probe_points(kProbeCount, kProbeSeed)) {
    const CMatrix m = eval(psi, p, z);
    if (numerical_rank(m) < pi->n())
      throw Degenerate("bt_apply: base solution singular at lambda = z at a probe point");
  }

  ExtendedSolution parent = psi;
  parent.n = pi->n();
  auto tilde = derived_field(pi->n(), pi->rank(), "bt",
                             [parent, z, pi](const SpacetimePoint& p) {
                               const CMatrix m = eval(parent, p, z);
                               return projector_from_span(m * pi->at(p).basis);
                             });

  ExtendedSolution out = parent;
  out.factors.push_back(SimpleElementField{z, tilde});
  out.provenance = "bt";
  if (record) *record = BTRecord{z, pi, tilde, parent};
  return out;
}

ExtendedSolution gbt_apply(const ExtendedSolution& phi, const ExtendedSolution& psi) {
  if (phi.n != psi.n && psi.n != 0 && phi.n != 0)
    throw Error("gbt_apply: dimension mismatch");

  const PoleData donor = pole_data(phi);
  if (donor.poles.size() != 1)
    throw Error("gbt_apply: donor must carry a single pole");
  const Complex z = donor.poles.front().z;
  require_nonreal(z, "gbt_apply");

  for (const auto& entry : pole_data(psi).poles) {
    if (std::abs(entry.z - z) <= kSamePole || std::abs(entry.z - std::conj(z)) <= kSamePole)
      throw PoleClash("gbt_apply: pole sets must be disjoint and non-conjugate");
  }

  ExtendedSolution reduced = reduce_same_pole(phi);
  const int k = static_cast<int>(reduced.factors.size());

  ExtendedSolution out = psi;
  out.n = phi.n != 0 ? phi.n : psi.n;
  out.prefactor.insert(out.prefactor.end(), reduced.prefactor.begin(), reduced.prefactor.end());
  if (k == 0) {  // pure scalar donor: commutes through, nothing to transform
    out.provenance = "gbt";
    return out;
  }

  const int order = k + 2;
  if (order > kMaxOrder) throw OrderOverflow("gbt_apply: jet budget exceeds supported order");

  auto rec = std::make_shared<GbtRecursion>();
  rec->base = psi;
  rec->base.n = out.n;
  rec->z = z;
  rec->order = order;
  rec->source.reserve(k);
  for (const auto& f : reduced.factors) rec->source.push_back(f.pi);

  for (int j = 0; j < k; ++j) {
    auto field = derived_field(out.n, reduced.factors[static_cast<size_t>(j)].pi->rank(), "gbt",
                               [rec, j](const SpacetimePoint& p) {
                                 return rec->levels(p)[static_cast<size_t>(j)];
                               });
    out.factors.push_back(SimpleElementField{z, field});
  }

  // Surface Degenerate / NotHolomorphic now, deterministically, not later
  // during grid sampling.
  for (const auto& p : probe_points(kProbeCount, kProbeSeed)) rec->levels(p);

  out.provenance = "gbt";
  return out;
}

ExtendedSolution compose_multi(const std::vector<ExtendedSolution>& parts) {
  if (parts.empty()) throw Error("compose_multi: no parts");
  for (const auto& part : parts)
    if (pole_data(part).poles.size() != 1)
      throw Error("compose_multi: every part must carry a single pole");
  if (parts.size() == 1) return parts.front();

  ExtendedSolution acc = parts.front();
  for (size_t i = 1; i < parts.size(); ++i) acc = gbt_apply(parts[i], acc);
  return acc;
}

}  // namespace ward
