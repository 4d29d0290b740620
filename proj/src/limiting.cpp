#include "ward/limiting.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "ward/backlund.hpp"
#include "ward/errors.hpp"
#include "ward/matrixkit.hpp"

namespace ward {

namespace {

constexpr std::uint64_t kProbeSeed = 0x11717ed5;
constexpr int kProbeCount = 7;
constexpr size_t kMemoCap = 1 << 16;

// Reduced rational entries of one sequence, fixed once per construction so
// per-point evaluation never re-runs gcd reduction.
struct SeqEntries {
  std::vector<std::vector<RationalFunction>> maps;  // [j][row]
};

SeqEntries reduce_sequence(const ColumnSequence& seq, int n) {
  SeqEntries out;
  out.maps.reserve(seq.size());
  for (const auto& a : seq) {
    std::vector<RationalFunction> rows;
    rows.reserve(n);
    for (int r = 0; r < n; ++r) rows.push_back(map_entry(a, r, 0));
    out.maps.push_back(std::move(rows));
  }
  return out;
}

// Series of w_eps - w in eps (zero constant term), truncated to `len`.
std::vector<Complex> displacement_series(Complex z, const SpacetimePoint& p, int len) {
  std::vector<Complex> delta(static_cast<size_t>(len), Complex(0.0));
  if (len > 1) delta[1] = Complex(p.u()) - Complex(p.v()) / (z * z);
  Complex zpow = z * z;  // z^{l+1} for l = 1
  for (int l = 2; l < len; ++l) {
    zpow *= z;
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    delta[static_cast<size_t>(l)] = sign * Complex(p.v()) / zpow;
  }
  return delta;
}

std::vector<CVector> coeffs_from_entries(const SeqEntries& se, int n, Complex z,
                                         const SpacetimePoint& p, int k) {
  const Complex w = plane_coordinate(p, z);
  const std::vector<Complex> delta = displacement_series(z, p, k + 1);
  std::vector<CVector> c(static_cast<size_t>(k) + 1, CVector::Zero(n));
  for (size_t j = 0; j < se.maps.size() && static_cast<int>(j) <= k; ++j) {
    const int rem = k - static_cast<int>(j);
    for (int r = 0; r < n; ++r) {
      const ScalarJet jet = taylor_jet(se.maps[j][static_cast<size_t>(r)], w, rem);
      const std::vector<Complex> comp = series_compose(jet.a, delta, rem + 1);
      for (int l = 0; l <= rem; ++l) c[j + static_cast<size_t>(l)](r) += comp[static_cast<size_t>(l)];
    }
  }
  return c;
}

struct Plan {
  Complex z;
  int n = 0;
  int k = 0;
  std::vector<int> counts;  // witnesses per level
};

Plan validate(const LimitingData& data) {
  Plan plan;
  plan.z = data.z;
  plan.k = data.k;
  if (data.k < 1) throw Error("limiting: multiplicity must be positive");
  if (data.z.imag() == 0.0) throw Error("limiting: pole must be non-real");
  if (data.k + 2 > kMaxOrder) throw OrderOverflow("limiting: multiplicity exceeds supported order");
  if (data.columns.empty()) throw Error("limiting: no generating sequences");
  for (const auto& seq : data.columns) {
    if (seq.empty()) throw Error("limiting: empty generating sequence");
    for (const auto& a : seq) {
      if (a.ncols() != 1) throw Error("limiting: sequence entries must be single-column maps");
      if (plan.n == 0) plan.n = a.n;
      if (a.n != plan.n) throw Error("limiting: sequences must share one ambient dimension");
    }
  }
  const int s = static_cast<int>(data.columns.size());
  if (data.rank_data.empty()) {
    plan.counts.assign(static_cast<size_t>(data.k), s);
  } else {
    if (static_cast<int>(data.rank_data.size()) != data.k)
      throw Error("limiting: rank data length must equal the multiplicity");
    int prev = s;
    for (int nj : data.rank_data) {
      if (nj < 1 || nj > s) throw Error("limiting: rank data entries must lie in [1, sequence count]");
      if (nj > prev) throw Error("limiting: rank data must be non-increasing");
      prev = nj;
    }
    plan.counts = data.rank_data;
  }
  if (plan.counts.front() >= plan.n)
    throw Error("limiting: leading rank must be below the ambient dimension");
  return plan;
}

// Shared per-construction state: one pass per point yields every level's
// projector and raw witnesses, consumed by all level fields.
struct LimRecursion {
  Complex z;
  int n = 0, k = 0;
  std::vector<int> counts;
  std::vector<SeqEntries> seqs;

  struct PointState {
    std::vector<Projector> levels;
    std::vector<std::vector<CVector>> wits;
  };
  mutable std::mutex mu;
  mutable std::unordered_map<PointBits, PointState, PointBitsHash> memo;

  PointState state(const SpacetimePoint& p) const {
    const PointBits key = point_bits(p);
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
    }

    std::vector<std::vector<CVector>> c(seqs.size());
    for (size_t i = 0; i < seqs.size(); ++i)
      c[i] = coeffs_from_entries(seqs[i], n, z, p, k - 1);

    const Complex beta = z - std::conj(z);
    PointState st;
    std::vector<CMatrix> table{CMatrix::Identity(n, n)};  // P_{j-1,m}, m = 0..j-1
    for (int j = 1; j <= k; ++j) {
      const int nj = counts[static_cast<size_t>(j) - 1];
      CMatrix span(n, nj);
      std::vector<CVector> raw;
      raw.reserve(nj);
      for (int i = 0; i < nj; ++i) {
        CVector v = CVector::Zero(n);
        Complex bm(1.0);
        for (int m = 0; m < j; ++m) {
          v += bm * (table[static_cast<size_t>(m)] * c[static_cast<size_t>(i)][static_cast<size_t>(m)]);
          bm *= beta;
        }
        const double norm = v.norm();
        span.col(i) = norm > 0.0 ? CVector(v / norm) : v;
        raw.push_back(std::move(v));
      }
      Projector pj = projector_from_span(span);
      const CMatrix comp = CMatrix::Identity(n, n) - pj.mat;
      st.levels.push_back(std::move(pj));
      st.wits.push_back(std::move(raw));

      std::vector<CMatrix> next(static_cast<size_t>(j) + 1);
      for (int m = 0; m <= j; ++m) {
        CMatrix acc = m < j ? table[static_cast<size_t>(m)] : CMatrix(CMatrix::Zero(n, n));
        if (m >= 1) acc += comp * table[static_cast<size_t>(m) - 1];
        next[static_cast<size_t>(m)] = std::move(acc);
      }
      table = std::move(next);
    }

    std::lock_guard<std::mutex> lock(mu);
    if (memo.size() >= kMemoCap) memo.clear();
    memo.emplace(key, st);
    return st;
  }
};

}  // namespace

std::vector<CVector> epsilon_coeffs(const ColumnSequence& seq, Complex z,
                                    const SpacetimePoint& p, int k) {
  if (z.imag() == 0.0) throw Error("epsilon_coeffs: pole must be non-real");
  if (k < 0) throw Error("epsilon_coeffs: negative order");
  if (k > kMaxOrder) throw OrderOverflow("epsilon_coeffs: order exceeds the cap");
  if (seq.empty()) throw Error("epsilon_coeffs: empty sequence");
  const int n = seq.front().n;
  for (const auto& a : seq) {
    if (a.ncols() != 1 || a.n != n)
      throw Error("epsilon_coeffs: entries must be single-column maps of one dimension");
  }
  return coeffs_from_entries(reduce_sequence(seq, n), n, z, p, k);
}

std::pair<HatChain, ExtendedSolution> build_chain(const LimitingData& data) {
  const Plan plan = validate(data);

  auto rec = std::make_shared<LimRecursion>();
  rec->z = plan.z;
  rec->n = plan.n;
  rec->k = plan.k;
  rec->counts = plan.counts;
  rec->seqs.reserve(data.columns.size());
  for (const auto& seq : data.columns) rec->seqs.push_back(reduce_sequence(seq, plan.n));

  // A construction is viable when at least one probe realizes every requested
  // rank; isolated failures are just singular points, masked downstream.
  int complete = 0;
  int worst_level = 0;
  for (const auto& p : probe_points(kProbeCount, kProbeSeed)) {
    try {
      const auto st = rec->state(p);
      bool ok = true;
      for (int j = 0; j < plan.k; ++j) {
        if (st.levels[static_cast<size_t>(j)].rank != plan.counts[static_cast<size_t>(j)]) {
          worst_level = std::max(worst_level, j + 1);
          ok = false;
          break;
        }
      }
      if (ok) ++complete;
    } catch (const Error&) {
      // singular probe; inconclusive
    }
  }
  if (complete == 0)
    throw RankCollapse("limiting: level " + std::to_string(worst_level == 0 ? 1 : worst_level) +
                       " cannot realize its witness count at any probe point");

  HatChain chain;
  chain.z = plan.z;
  ExtendedSolution sol;
  sol.n = plan.n;
  sol.provenance = "limiting";
  for (int j = 0; j < plan.k; ++j) {
    auto field = derived_field(plan.n, plan.counts[static_cast<size_t>(j)], "limiting",
                               [rec, j](const SpacetimePoint& p) {
                                 return rec->state(p).levels[static_cast<size_t>(j)];
                               });
    chain.levels.push_back(field);
    sol.factors.push_back(SimpleElementField{plan.z, field});
  }
  chain.witnesses = [rec](int j, const SpacetimePoint& p) {
    if (j < 1 || j > rec->k) throw Error("witnesses: level out of range");
    return rec->state(p).wits[static_cast<size_t>(j) - 1];
  };
  return {std::move(chain), std::move(sol)};
}

std::vector<int> rank_data_of(const HatChain& chain) {
  std::vector<int> out;
  out.reserve(chain.levels.size());
  int prev = chain.levels.empty() ? 0 : chain.levels.front()->n();
  for (const auto& level : chain.levels) {
    const int r = level->rank();
    if (r > prev)
      throw MinimalityViolated("rank data must be non-increasing across levels");
    out.push_back(r);
    prev = r;
  }
  return out;
}

ExtendedSolution perturbed_chain(const LimitingData& data, double eps) {
  const Plan plan = validate(data);
  if (eps == 0.0) throw Error("perturbed_chain: displacement must be nonzero");

  ExtendedSolution base;
  base.n = plan.n;
  if (plan.k > 1) {
    LimitingData head = data;
    head.k = plan.k - 1;
    if (!head.rank_data.empty()) head.rank_data.resize(static_cast<size_t>(plan.k) - 1);
    base = build_chain(head).second;
  }

  const Complex zp = plan.z + eps;
  const int nk = plan.counts.back();
  auto seqs = std::make_shared<std::vector<SeqEntries>>();
  for (int i = 0; i < nk; ++i)
    seqs->push_back(reduce_sequence(data.columns[static_cast<size_t>(i)], plan.n));

  const int n = plan.n;
  auto pi = derived_field(
      n, nk, "limiting_perturbed", [seqs, zp, eps, n, nk](const SpacetimePoint& p) {
        const Complex w = plane_coordinate(p, zp);
        CMatrix span(n, nk);
        for (int i = 0; i < nk; ++i) {
          CVector v = CVector::Zero(n);
          Complex ej(1.0);
          for (const auto& rows : (*seqs)[static_cast<size_t>(i)].maps) {
            for (int r = 0; r < n; ++r) v(r) += ej * rat_eval(rows[static_cast<size_t>(r)], w);
            ej *= eps;
          }
          const double norm = v.norm();
          span.col(i) = norm > 0.0 ? CVector(v / norm) : v;
        }
        return projector_from_span(span);
      });
  return bt_apply(base, zp, pi);
}

}  // namespace ward
