#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "ward/backlund.hpp"
#include "ward/limiting.hpp"
#include "ward/verify.hpp"

using namespace ward;

namespace {

ExtendedSolution empty_solution(int n) {
  ExtendedSolution psi;
  psi.n = n;
  psi.provenance = "test";
  return psi;
}

ExtendedSolution chain_product(Complex z, const std::vector<Projector>& ps) {
  ExtendedSolution psi;
  psi.n = ps[0].n();
  for (const auto& p : ps) psi.factors.push_back({z, constant_field(p)});
  psi.provenance = "test";
  return psi;
}

std::vector<Complex> safe_lambdas(const ExtendedSolution& psi, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-2, 2);
  PoleData pd = pole_data(psi);
  std::vector<Complex> out;
  while (static_cast<int>(out.size()) < count) {
    Complex lam(U(rng), U(rng));
    bool ok = true;
    for (const auto& pe : pd.poles)
      if (std::abs(lam - pe.z) < 0.3 || std::abs(lam - std::conj(pe.z)) < 0.3) ok = false;
    if (ok) out.push_back(lam);
  }
  return out;
}

}  // namespace

TEST_CASE("bt on the empty product returns the simple element") {
  Complex z(0.6, 1.1);
  auto pi = span_field(z, map_parse({"1", "w"}));
  BTRecord rec;
  ExtendedSolution out = bt_apply(empty_solution(2), z, pi, &rec);
  REQUIRE(out.factors.size() == 1);
  SpacetimePoint p{0.4, -0.1, 0.8};
  CHECK(projector_distance(rec.transformed_pi->at(p), pi->at(p)) < 1e-10);
  ExtendedSolution direct = one_soliton(z, map_parse({"1", "w"}));
  CHECK((eval(out, p, Complex(0.3, 0)) - eval(direct, p, Complex(0.3, 0))).norm() < 1e-12);
}

TEST_CASE("two-soliton: transformed line and record invariant") {
  Complex z1(0, 1), z2(0.8, 1.4);
  RationalFunction f1 = rat_parse("w"), f2 = rat_parse("w^2");
  ExtendedSolution base = one_soliton(z1, map_parse({"1", "w"}));

  BTRecord rec;
  ExtendedSolution two = bt_apply(base, z2, span_field(z2, map_parse({"1", "w^2"})), &rec);
  CHECK(pole_data(two).degree() == 2);

  for (const auto& p : probe_points(50, 91)) {
    Complex w1 = plane_coordinate(p, z1), w2 = plane_coordinate(p, z2);
    Complex f1w = rat_eval(f1, w1), f2w = rat_eval(f2, w2);
    Complex A = 1.0 + std::conj(f1w) * f2w;
    Complex B = (z2 - std::conj(z1)) / (z2 - z1) * (f1w - f2w);
    CVector v(2);
    v << A + B * std::conj(f1w), A * f1w - B;
    Projector got = rec.transformed_pi->at(p);
    CHECK(got.rank == 1);
    CHECK(membership_defect(got, v) < 1e-9);

    // definition: the transformed image is psi(p, z2) applied to the source
    CVector pushed = eval(base, p, z2) * rec.source_pi->at(p).basis.col(0);
    CHECK(membership_defect(got, pushed) < 1e-9);
  }
}

TEST_CASE("bt steps with distinct poles commute") {
  Complex z1(0.5, 0.9), z2(-0.7, 1.2);
  auto pi1 = span_field(z1, map_parse({"1", "w"}));
  auto pi2 = span_field(z2, map_parse({"1", "w-1"}));

  ExtendedSolution ab = bt_apply(bt_apply(empty_solution(2), z1, pi1), z2, pi2);
  ExtendedSolution ba = bt_apply(bt_apply(empty_solution(2), z2, pi2), z1, pi1);

  auto pts = probe_points(5, 17);
  for (const auto& p : pts)
    for (Complex lam : safe_lambdas(ab, 5, 23))
      CHECK((eval(ab, p, lam) - eval(ba, p, lam)).norm() < 1e-9);
}

TEST_CASE("bt rejects clashing and degenerate poles") {
  Complex z(0.4, 1.0);
  ExtendedSolution base = one_soliton(z, map_parse({"1", "w"}));
  auto pi = span_field(z, map_parse({"1", "w+1"}));
  CHECK_THROWS_AS(bt_apply(base, z, pi), PoleClash);
  // psi is singular at the conjugate pole: det g = Blaschke power
  auto pic = span_field(std::conj(z), map_parse({"1", "w+1"}));
  CHECK_THROWS_AS(bt_apply(base, std::conj(z), pic), Degenerate);
  auto pir = span_field(Complex(0, 1), map_parse({"1", "w"}));
  CHECK_THROWS_AS(bt_apply(base, Complex(2.0, 0.0), pir), Error);
}

TEST_CASE("new factorization is holomorphic at z and conj z") {
  // thm: g_{z,pi~} psi = psi~ g_{z,pi} with psi~ regular at both z, conj z
  Complex z1(0, 1), z2(0.9, -1.3);
  ExtendedSolution base = one_soliton(z1, map_parse({"1", "w"}));
  auto pi = span_field(z2, map_parse({"1", "w^2-1"}));
  BTRecord rec;
  ExtendedSolution out = bt_apply(base, z2, pi, &rec);

  SpacetimePoint p{-0.3, 0.6, 0.2};
  for (Complex c : {z2, std::conj(z2)}) {
    MatrixLaurentJet num = laurent_expand(out, p, c, 2);
    MatrixLaurentJet den = jet_of_simple_element_inverse(z2, pi->at(p), c, 4);
    CHECK_NOTHROW(holomorphic_value(jet_mul(num, den), 1e-8));
  }
}

TEST_CASE("gbt with a simple pole reduces to bt") {
  Complex z1(0, 1), z2(1.1, 0.8);
  ExtendedSolution base = one_soliton(z1, map_parse({"1", "w"}));
  ExtendedSolution phi = one_soliton(z2, map_parse({"1", "w+2i"}));

  ExtendedSolution via_gbt = gbt_apply(phi, base);
  ExtendedSolution via_bt = bt_apply(base, z2, span_field(z2, map_parse({"1", "w+2i"})));
  auto pts = probe_points(5, 31);
  for (const auto& p : pts)
    for (Complex lam : safe_lambdas(via_gbt, 5, 37))
      CHECK((eval(via_gbt, p, lam) - eval(via_bt, p, lam)).norm() < 1e-9);
}

TEST_CASE("double-double: recursion value matches the residue closed form") {
  Complex z1(0.6, 0.8), z2(-0.3, 1.1);
  LimitingData da{z1, {{map_parse({"1", "w"}), map_parse({"0", "1+w"})}}, 2, {}};
  LimitingData db{z2, {{map_parse({"1", "w-1"}), map_parse({"0", "w^2"})}}, 2, {}};
  auto [ca, psi] = build_chain(da);   // base psi = g_{z1,tau2} g_{z1,tau1}
  auto [cb, phi] = build_chain(db);   // phi = g_{z2,pi2} g_{z2,pi1}

  ExtendedSolution four = gbt_apply(phi, psi);
  REQUIRE(four.factors.size() == 4);
  CHECK(pole_data(four).degree() == 4);

  RationalFunction b0 = rat_parse("w-1"), b1 = rat_parse("w^2");
  for (const auto& p : probe_points(10, 47)) {
    // pi1 of the generating chain and its transform pi~1 = psi(z2) Im pi1
    CVector v1(2);
    Complex w2 = plane_coordinate(p, z2);
    v1 << 1.0, rat_eval(b0, w2);
    CMatrix psi_z2 = eval(psi, p, z2);
    Projector pi1 = cb.levels[0]->at(p);
    Projector pit1 = projector_from_span(psi_z2 * v1);
    CHECK(projector_distance(four.factors[2].pi->at(p), pit1) < 1e-9);

    // psi~1(z2) = psi(z2) pi1 + pi~1-perp (psi(z2) + (z2 - conj z2) psi'(z2) pi1)
    MatrixLaurentJet taylor = laurent_expand(psi, p, z2, 1);
    CMatrix dpsi = taylor.at(1);
    CMatrix psit1 = psi_z2 * pi1.mat +
                    complement(pit1).mat *
                        (psi_z2 + (z2 - std::conj(z2)) * dpsi * pi1.mat);

    // second transformed line: psi~1(z2) v2, with v2 the level-2 witness
    Complex q = (p.u() - p.v() / (z2 * z2)) * rat_eval(rat_derivative(b0), w2) + rat_eval(b1, w2);
    CVector c1(2);
    c1 << 0.0, q;
    CVector v2 = v1 + (z2 - std::conj(z2)) * (complement(pi1).mat * c1);
    Projector pit2 = projector_from_span(psit1 * v2);
    CHECK(projector_distance(four.factors[3].pi->at(p), pit2) < 1e-9);
  }

  // pole data is the union with multiplicities, and the result stays a solution
  PoleData pd = pole_data(four);
  REQUIRE(pd.poles.size() == 2);
  CHECK(pd.poles[0].mult == 2);
  CHECK(pd.poles[1].mult == 2);

  SpacetimePoint p0{0.2, -0.4, 0.6};
  CHECK(lax_independence(four, p0, safe_lambdas(four, 5, 53)).pass);
  for (const auto& p : probe_points(20, 59)) CHECK(reality_defect(four, p, Complex(0.4, 0.2)) < 1e-9);
}

TEST_CASE("gbt accepts any same-product chain presentation") {
  // a non-minimal presentation of phi and its minimal form give the same output
  Complex z(0.4, 1.2), z1(0, 1);
  CMatrix v1(3, 1), v2(3, 2), t1(3, 2), t2(3, 1);
  v1 << 1, 0, 0;
  v2 << 1, 0, 1, 0, 0, 1;
  t1 << 1, 0, 0, 0, 0, 1;
  t2 << 1, 1, 0;
  ExtendedSolution phi_raw = chain_product(z, {projector_from_span(v1), projector_from_span(v2)});
  ExtendedSolution phi_min = chain_product(z, {projector_from_span(t1), projector_from_span(t2)});

  ExtendedSolution base = one_soliton(z1, map_parse({"1", "w", "w^2"}));
  ExtendedSolution a = gbt_apply(phi_raw, base);
  ExtendedSolution b = gbt_apply(phi_min, base);
  auto pts = probe_points(4, 61);
  for (const auto& p : pts)
    for (Complex lam : safe_lambdas(a, 4, 67))
      CHECK((eval(a, p, lam) - eval(b, p, lam)).norm() < 1e-8);
}

TEST_CASE("compose_multi") {
  Complex z1(0, 1), z2(0.8, 1.4), z3(-0.9, 0.7);
  ExtendedSolution s1 = one_soliton(z1, map_parse({"1", "w"}));
  ExtendedSolution s2 = one_soliton(z2, map_parse({"1", "w^2"}));
  ExtendedSolution s3 = one_soliton(z3, map_parse({"1", "w-2"}));

  ExtendedSolution alone = compose_multi({s1});
  SpacetimePoint p0{0.3, 0.1, -0.5};
  CHECK((eval(alone, p0, Complex(0.2, 0)) - eval(s1, p0, Complex(0.2, 0))).norm() < 1e-14);

  // two parts reproduce the bt construction
  ExtendedSolution pair = compose_multi({s1, s2});
  ExtendedSolution via_bt = bt_apply(s1, z2, span_field(z2, map_parse({"1", "w^2"})));
  for (Complex lam : safe_lambdas(pair, 5, 71))
    CHECK((eval(pair, p0, lam) - eval(via_bt, p0, lam)).norm() < 1e-9);

  // order permutation leaves the composition unchanged
  ExtendedSolution abc = compose_multi({s1, s2, s3});
  ExtendedSolution cba = compose_multi({s3, s2, s1});
  ExtendedSolution bac = compose_multi({s2, s1, s3});
  CHECK(pole_data(abc).degree() == 3);
  auto pts = probe_points(5, 73);
  for (const auto& p : pts)
    for (Complex lam : safe_lambdas(abc, 5, 79)) {
      CHECK((eval(abc, p, lam) - eval(cba, p, lam)).norm() < 1e-8);
      CHECK((eval(abc, p, lam) - eval(bac, p, lam)).norm() < 1e-8);
    }

  CHECK_THROWS_AS(compose_multi({s1, one_soliton(std::conj(z1), map_parse({"1", "w"}))}),
                  PoleClash);
}
