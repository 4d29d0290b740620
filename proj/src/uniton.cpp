#include "ward/uniton.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "ward/errors.hpp"
#include "ward/matrixkit.hpp"

namespace ward {

namespace {

constexpr std::uint64_t kProbeSeed = 0x5ca1ab1e;
constexpr int kProbeCount = 7;
constexpr double kMembershipTol = 1e-8;
constexpr size_t kMemoCap = 1 << 16;
const Complex kPole(0.0, 1.0);

std::vector<RationalFunction> reduce_rows(const RationalMap& a, int n) {
  std::vector<RationalFunction> rows;
  rows.reserve(n);
  for (int r = 0; r < n; ++r) rows.push_back(map_entry(a, r, 0));
  return rows;
}

struct Validated {
  int n = 0, k = 0, s = 0, mk = 0;
  std::vector<int> part;
  std::vector<int> max_order;  // derivative budget per sequence
};

Validated validate(const UnitonSpec& spec) {
  Validated v;
  v.n = spec.n;
  v.k = spec.k;
  if (spec.n < 2) throw Error("uniton: ambient dimension must be at least 2");
  if (spec.k < 1) throw Error("uniton: factor count must be positive");
  if (spec.k > spec.n - 1)
    throw Error("uniton: a normalized chain admits at most n-1 factors");
  if (spec.partition.empty()) throw Error("uniton: empty partition");
  if (spec.maps.size() != spec.partition.size())
    throw Error("uniton: one generating sequence per partition entry");
  v.s = static_cast<int>(spec.partition.size());
  for (int r : spec.partition) {
    if (r < 1) throw Error("uniton: partition entries must be positive");
    v.mk += r;
  }
  if (v.mk > spec.n - 1)
    throw Error("uniton: partition sum must stay below the ambient dimension");
  v.part = spec.partition;
  for (const auto& seq : spec.maps) {
    if (seq.empty()) throw Error("uniton: empty generating sequence");
    for (const auto& a : seq) {
      if (a.ncols() != 1) throw Error("uniton: sequence entries must be single-column maps");
      if (a.n != spec.n) throw Error("uniton: sequence dimension mismatch");
    }
  }
  for (const auto& b : spec.extra_spanners) {
    if (b.ncols() != 1 || b.n != spec.n)
      throw Error("uniton: extra spanners must be single-column maps of the ambient dimension");
  }
  for (int i = 0; i < v.s; ++i) {
    const int lmax = std::max(v.part[static_cast<size_t>(i)] + spec.k - 2,
                              v.part[static_cast<size_t>(i)]);
    if (lmax > kMaxOrder) throw OrderOverflow("uniton: derivative budget exceeds the cap");
    v.max_order.push_back(lmax);
  }
  return v;
}

// Everything depends on w = x + iy only, so state is keyed on (x, y) with
// t zeroed: the built chain is t-independent to the last bit.
struct UniRecursion {
  int n = 0, k = 0, s = 0;
  std::vector<int> part;
  std::vector<int> max_order;
  std::vector<std::vector<std::vector<RationalFunction>>> seq_rows;  // [i][j][row]
  std::vector<std::vector<RationalFunction>> extra_rows;             // [e][row]

  struct PointState {
    std::vector<Projector> levels;
    std::vector<double> cond3;  // membership defect of D^(r_i) v_{ik} in the top span
  };
  mutable std::mutex mu;
  mutable std::unordered_map<PointBits, PointState, PointBitsHash> memo;

  PointState state(const SpacetimePoint& where) const {
    SpacetimePoint p;  // canonical stationary point
    p.x = where.x;
    p.y = where.y;
    p.t = 0.0;
    const PointBits key = point_bits(p);
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
    }

    const Complex w(p.x, p.y);
    // derivative table: derivs[i][j].col(l) = a_{i,j}^(l)(w)
    std::vector<std::vector<CMatrix>> derivs(static_cast<size_t>(s));
    for (int i = 0; i < s; ++i) {
      const int lmax = max_order[static_cast<size_t>(i)];
      std::vector<double> fact(static_cast<size_t>(lmax) + 1, 1.0);
      for (int l = 1; l <= lmax; ++l)
        fact[static_cast<size_t>(l)] = fact[static_cast<size_t>(l) - 1] * l;
      for (const auto& rows : seq_rows[static_cast<size_t>(i)]) {
        CMatrix d = CMatrix::Zero(n, lmax + 1);
        for (int r = 0; r < n; ++r) {
          const ScalarJet jet = taylor_jet(rows[static_cast<size_t>(r)], w, lmax);
          for (int l = 0; l <= lmax; ++l)
            d(r, l) = jet.a[static_cast<size_t>(l)] * fact[static_cast<size_t>(l)];
        }
        derivs[static_cast<size_t>(i)].push_back(std::move(d));
      }
    }

    PointState st;
    const Complex two_i(0.0, 2.0);
    std::vector<CMatrix> table{CMatrix::Identity(n, n)};  // P_{p-1,m}
    for (int p_level = 1; p_level <= k; ++p_level) {
      std::vector<CVector> cols;
      for (int i = 0; i < s; ++i) {
        const int top = part[static_cast<size_t>(i)] + k - p_level - 1;
        for (int l = 0; l <= top; ++l) {
          CVector v = CVector::Zero(n);
          Complex coef(1.0);
          for (int j = 0; j < p_level; ++j) {
            if (j < static_cast<int>(derivs[static_cast<size_t>(i)].size()))
              v += coef * (table[static_cast<size_t>(j)] *
                           derivs[static_cast<size_t>(i)][static_cast<size_t>(j)].col(l));
            coef *= two_i;
          }
          cols.push_back(std::move(v));
        }
      }
      if (p_level == 1) {
        for (const auto& rows : extra_rows) {
          CVector v(n);
          for (int r = 0; r < n; ++r) v(r) = rat_eval(rows[static_cast<size_t>(r)], w);
          cols.push_back(std::move(v));
        }
      }
      CMatrix span(n, static_cast<int>(cols.size()));
      for (size_t c = 0; c < cols.size(); ++c) {
        const double norm = cols[c].norm();
        span.col(static_cast<int>(c)) = norm > 0.0 ? CVector(cols[c] / norm) : cols[c];
      }
      Projector pj = projector_from_span(span);
      const CMatrix comp = CMatrix::Identity(n, n) - pj.mat;

      if (p_level == k) {
        for (int i = 0; i < s; ++i) {
          const int ri = part[static_cast<size_t>(i)];
          CVector v = CVector::Zero(n);
          Complex coef(1.0);
          for (int j = 0; j < k; ++j) {
            if (j < static_cast<int>(derivs[static_cast<size_t>(i)].size()))
              v += coef * (table[static_cast<size_t>(j)] *
                           derivs[static_cast<size_t>(i)][static_cast<size_t>(j)].col(ri));
            coef *= two_i;
          }
          st.cond3.push_back(membership_defect(pj, v));
        }
      }

      st.levels.push_back(std::move(pj));
      std::vector<CMatrix> next(static_cast<size_t>(p_level) + 1);
      for (int m = 0; m <= p_level; ++m) {
        CMatrix acc = m < p_level ? table[static_cast<size_t>(m)] : CMatrix(CMatrix::Zero(n, n));
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

ExtendedSolution uniton_build(const UnitonSpec& spec) {
  const Validated v = validate(spec);

  auto rec = std::make_shared<UniRecursion>();
  rec->n = v.n;
  rec->k = v.k;
  rec->s = v.s;
  rec->part = v.part;
  rec->max_order = v.max_order;
  rec->seq_rows.resize(static_cast<size_t>(v.s));
  for (int i = 0; i < v.s; ++i) {
    const auto& seq = spec.maps[static_cast<size_t>(i)];
    const size_t take = std::min(seq.size(), static_cast<size_t>(v.k));
    for (size_t j = 0; j < take; ++j)
      rec->seq_rows[static_cast<size_t>(i)].push_back(reduce_rows(seq[j], v.n));
  }
  for (const auto& b : spec.extra_spanners) rec->extra_rows.push_back(reduce_rows(b, v.n));

  // Probe, calibrate generic ranks, and reject structurally bad data.
  std::vector<UniRecursion::PointState> states;
  for (const auto& p : probe_points(kProbeCount, kProbeSeed)) {
    try {
      states.push_back(rec->state(p));
    } catch (const Error&) {
      // singular probe; inconclusive
    }
  }
  if (states.empty()) throw RankCollapse("uniton: every probe point is singular");

  std::vector<int> generic(static_cast<size_t>(v.k), 0);
  for (const auto& st : states)
    for (int j = 0; j < v.k; ++j)
      generic[static_cast<size_t>(j)] =
          std::max(generic[static_cast<size_t>(j)], st.levels[static_cast<size_t>(j)].rank);
  for (int j = 0; j < v.k; ++j) {
    const int r = generic[static_cast<size_t>(j)];
    if (r == 0)
      throw RankCollapse("uniton: level " + std::to_string(j + 1) + " spans nothing");
    if (r == v.n)
      throw RankCollapse("uniton: level " + std::to_string(j + 1) + " spans the whole space");
  }
  if (v.k >= 2 || spec.extra_spanners.empty()) {
    if (generic[static_cast<size_t>(v.k) - 1] != v.mk)
      throw ConstraintViolated("uniton: level " + std::to_string(v.k) +
                               " family is dependent; the partition overstates its rank");
  }
  for (int i = 0; i < v.s; ++i) {
    double best = 0.0;
    for (const auto& st : states) best = std::max(best, st.cond3[static_cast<size_t>(i)]);
    if (best < kMembershipTol)
      throw ConstraintViolated(
          "uniton: level " + std::to_string(v.k) + ", order " +
          std::to_string(v.part[static_cast<size_t>(i)]) +
          ": next derivative stays inside the top span (defect " + std::to_string(best) +
          "); the partition overstates the jet length");
  }
  for (int j = 1; j < v.k; ++j) {
    bool trivial_somewhere = false;
    for (const auto& st : states) {
      const Projector comp = complement(st.levels[static_cast<size_t>(j) - 1]);
      if (subspace_intersect(st.levels[static_cast<size_t>(j)].basis, comp.basis).cols() == 0) {
        trivial_somewhere = true;
        break;
      }
    }
    if (!trivial_somewhere)
      throw MinimalityViolated("uniton: level " + std::to_string(j + 1) +
                               " meets the previous complement nontrivially");
  }

  ExtendedSolution sol;
  sol.n = v.n;
  sol.provenance = "uniton";
  for (int j = 0; j < v.k; ++j) {
    auto field = derived_field(v.n, generic[static_cast<size_t>(j)], "uniton",
                               [rec, j](const SpacetimePoint& p) {
                                 return rec->state(p).levels[static_cast<size_t>(j)];
                               });
    sol.factors.push_back(SimpleElementField{kPole, field});
  }
  return sol;
}

StationarityReport stationarity_check(const ExtendedSolution& psi,
                                      const std::vector<double>& t_samples,
                                      const std::vector<std::array<double, 2>>& grid,
                                      const HatChain* witnesses) {
  StationarityReport rep;
  for (const auto& xy : grid) {
    CMatrix base;
    try {
      base = ward_map(psi, SpacetimePoint{xy[0], xy[1], 0.0});
    } catch (const Error&) {
      continue;
    }
    for (double t : t_samples) {
      try {
        const CMatrix jt = ward_map(psi, SpacetimePoint{xy[0], xy[1], t});
        rep.max_t_drift = std::max(rep.max_t_drift, (jt - base).norm());
      } catch (const Error&) {
      }
    }
  }

  if (witnesses && t_samples.size() >= 2) {
    const int m = static_cast<int>(t_samples.size());
    Eigen::MatrixXd vand(m, m);
    for (int r = 0; r < m; ++r) {
      double pw = 1.0;
      for (int c = 0; c < m; ++c) {
        vand(r, c) = pw;
        pw *= t_samples[static_cast<size_t>(r)];
      }
    }
    const auto solver = vand.colPivHouseholderQr();

    const int levels = static_cast<int>(witnesses->levels.size());
    std::unordered_map<long long, double> worst;  // (level, order) -> defect
    for (const auto& xy : grid) {
      for (int j = 1; j <= levels; ++j) {
        std::vector<std::vector<CVector>> samples;
        Projector at0;
        try {
          at0 = witnesses->levels[static_cast<size_t>(j) - 1]->at(
              SpacetimePoint{xy[0], xy[1], 0.0});
          for (double t : t_samples)
            samples.push_back(witnesses->witnesses(j, SpacetimePoint{xy[0], xy[1], t}));
        } catch (const Error&) {
          continue;
        }
        const size_t cols = samples.front().size();
        for (size_t c = 0; c < cols; ++c) {
          const int n = static_cast<int>(samples.front()[c].size());
          Eigen::MatrixXcd rhs(m, n);
          for (int r = 0; r < m; ++r) rhs.row(r) = samples[static_cast<size_t>(r)][c].transpose();
          Eigen::MatrixXcd coef(m, n);
          coef.real() = solver.solve(rhs.real());
          coef.imag() = solver.solve(rhs.imag());
          const double scale = std::max(coef.row(0).norm(), 1e-300);
          for (int d = 1; d < m; ++d) {
            const CVector u = coef.row(d).transpose();
            const double defect = ((CMatrix::Identity(n, n) - at0.mat) * u).norm() / scale;
            const long long slot = static_cast<long long>(j) * 1000 + d;
            auto it = worst.find(slot);
            if (it == worst.end() || it->second < defect) worst[slot] = defect;
          }
        }
      }
    }
    for (const auto& [slot, defect] : worst) {
      if (defect > kMembershipTol)
        rep.violated_constraints.push_back(
            {static_cast<int>(slot / 1000), static_cast<int>(slot % 1000), defect});
    }
    std::sort(rep.violated_constraints.begin(), rep.violated_constraints.end(),
              [](const auto& a, const auto& b) {
                return a.level != b.level ? a.level < b.level : a.order < b.order;
              });
  }
  return rep;
}

std::vector<int> validate_rank_law(const ExtendedSolution& chain) {
  if (chain.factors.empty()) throw Error("validate_rank_law: empty chain");
  for (const auto& f : chain.factors)
    if (std::abs(f.z - kPole) > 1e-12)
      throw Error("validate_rank_law: every factor must sit at pole i");

  std::vector<CMatrix> spans;
  for (const auto& p : probe_points(kProbeCount, kProbeSeed)) {
    try {
      spans.push_back(chain.factors.front().pi->at(p).basis);
    } catch (const Error&) {
    }
  }
  if (spans.size() < 2)
    throw Error("validate_rank_law: too few regular probe points to test constancy");
  if (subspace_intersect_many(spans).cols() > 0)
    throw Error("validate_rank_law: Im pi_1 holds constant vectors; reduce the constant factor first");

  std::vector<int> out;
  int prev = chain.n + 1;
  for (const auto& f : chain.factors) {
    const int r = f.pi->rank();
    if (r >= prev)
      throw StrictDecreaseViolated("rank data must decrease strictly along a normalized chain");
    out.push_back(r);
    prev = r;
  }
  return out;
}

CMatrix harmonic_extended(const ExtendedSolution& psi, const SpacetimePoint& p, Complex xi) {
  if (std::abs(xi - Complex(1.0)) <= 1e-12)
    throw Error("harmonic_extended: xi = 1 corresponds to lambda at infinity");
  const Complex lambda = kPole * (Complex(1.0) + xi) / (Complex(1.0) - xi);
  return solve_inverse(eval(psi, p, lambda));
}

}  // namespace ward
