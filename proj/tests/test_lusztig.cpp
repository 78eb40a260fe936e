#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <hecke/lusztig.hpp>

#include <random>

using namespace hecke;

namespace {

LusztigCtxPtr deg_ctx_q(std::vector<long> residues) {
  auto Q = FieldSpec::rationals();
  auto fl = HeckeFlavor::degenerate(Q);
  return make_lusztig_context(fl, orbit_of(ResidueTuple(fl.e(), std::move(residues))));
}

LusztigCtxPtr deg_ctx_fp(long p, std::vector<long> residues) {
  auto F = FieldSpec::prime_field(p);
  auto fl = HeckeFlavor::degenerate(F);
  return make_lusztig_context(fl, orbit_of(ResidueTuple(fl.e(), std::move(residues))));
}

LusztigCtxPtr nondeg_ctx_q(long q, std::vector<long> residues) {
  auto Q = FieldSpec::rationals();
  auto fl = HeckeFlavor::nondegenerate(FieldElem::from_int(Q, q));
  return make_lusztig_context(fl, orbit_of(ResidueTuple(fl.e(), std::move(residues))));
}

LusztigCtxPtr nondeg_ctx_zeta(long m, std::vector<long> residues) {
  auto C = FieldSpec::cyclotomic(m);
  auto fl = HeckeFlavor::nondegenerate(FieldElem::zeta(C));
  return make_lusztig_context(fl, orbit_of(ResidueTuple(fl.e(), std::move(residues))));
}

RatFunc random_poly(std::mt19937_64& rng, int n, const FieldSpecPtr& spec) {
  MultiPoly p = MultiPoly::zero(n, spec);
  for (int t = 0; t < 4; ++t) {
    Expo e(n, 0);
    for (int s = 0; s < n; ++s) e[s] = int(rng() % 3);
    long c = long(rng() % 9) - 4;
    p.add_term(e, FieldElem::from_int(spec, c));
  }
  return RatFunc(p);
}

}  // namespace

TEST_CASE("affine Hecke relations hold in normal form (degenerate)") {
  auto ctx = deg_ctx_q({0, 1, 2});
  auto T1 = LusztigElem::generator_T(ctx, 1);
  auto T2 = LusztigElem::generator_T(ctx, 2);
  auto X1 = LusztigElem::generator_X(ctx, 1);
  auto X2 = LusztigElem::generator_X(ctx, 2);
  auto X3 = LusztigElem::generator_X(ctx, 3);
  auto one = LusztigElem::one(ctx);

  CHECK(T1 * T1 == one);
  CHECK(T2 * T2 == one);
  CHECK(T1 * T2 * T1 == T2 * T1 * T2);
  // T_r X_{r+1} = X_r T_r + 1.
  CHECK(T1 * X2 == X1 * T1 + one);
  CHECK(T2 * X3 == X2 * T2 + one);
  // X's commute, and T_1 commutes with X_3.
  CHECK(X1 * X2 == X2 * X1);
  CHECK(T1 * X3 == X3 * T1);
}

TEST_CASE("affine Hecke relations hold in normal form (non-degenerate)") {
  auto ctx = nondeg_ctx_q(2, {0, 1, 2});
  auto q = LusztigElem::poly(ctx, ctx->rat_int(2));
  auto T1 = LusztigElem::generator_T(ctx, 1);
  auto T2 = LusztigElem::generator_T(ctx, 2);
  auto X1 = LusztigElem::generator_X(ctx, 1);
  auto X2 = LusztigElem::generator_X(ctx, 2);
  auto one = LusztigElem::one(ctx);

  // T_r^2 = (q-1)T_r + q.
  CHECK(T1 * T1 == q * T1 - T1 + q);
  CHECK(T1 * T2 * T1 == T2 * T1 * T2);
  // T_1 X_1 T_1 = q X_2.
  CHECK(T1 * X1 * T1 == q * X2);
  // Laurent generators: X_1 X_1^{-1} = 1.
  CHECK(X1 * LusztigElem::generator_X(ctx, 1, -1) == one);
}

TEST_CASE("idempotent relations") {
  auto ctx = deg_ctx_fp(3, {0, 1});
  auto one = LusztigElem::one(ctx);
  LusztigElem sum = LusztigElem::zero(ctx);
  for (const auto& i : ctx->orbit().members()) {
    auto ei = LusztigElem::eps(ctx, i);
    CHECK(ei * ei == ei);
    sum = sum + ei;
    for (const auto& j : ctx->orbit().members()) {
      if (i == j) continue;
      CHECK((LusztigElem::eps(ctx, i) * LusztigElem::eps(ctx, j)).is_zero());
    }
    // X_r eps(i) = eps(i) X_r.
    auto X1 = LusztigElem::generator_X(ctx, 1);
    CHECK(X1 * ei == ei * X1);
  }
  CHECK(sum == one);
}

TEST_CASE("epsilon-pushing rule for T_r") {
  for (auto ctx : {deg_ctx_q({0, 2}), nondeg_ctx_q(3, {0, 2})}) {
    auto T1 = LusztigElem::generator_T(ctx, 1);
    Perm s = Perm::sigma(2, 1);
    auto c = LusztigElem::poly(ctx, ctx->eps_corr(1));
    for (const auto& i : ctx->orbit().members()) {
      auto ei = LusztigElem::eps(ctx, i);
      auto esi = LusztigElem::eps(ctx, i.acted_by(s));
      CHECK(T1 * ei == esi * T1 + c * (esi - ei));
    }
  }
}

TEST_CASE("intertwiner kappa: commutation, square, braid") {
  std::mt19937_64 rng(777);
  SUBCASE("degenerate") {
    auto ctx = deg_ctx_q({0, 1, 3});
    auto k1 = kappa(ctx, 1);
    auto k2 = kappa(ctx, 2);
    // kappa_r f = sigma_r(f) kappa_r for random f.
    for (int t = 0; t < 5; ++t) {
      RatFunc f = random_poly(rng, 3, ctx->spec());
      CHECK(k1 * LusztigElem::poly(ctx, f) ==
            LusztigElem::poly(ctx, f.applied(Perm::sigma(3, 1))) * k1);
    }
    // kappa_1^2 = 1 - 1/(X_1 - X_2)^2.
    RatFunc d = ctx->xvar(1) - ctx->xvar(2);
    CHECK(k1 * k1 ==
          LusztigElem::poly(ctx, RatFunc::one(3, ctx->spec()) - (d * d).inv()));
    CHECK(k1 * k2 * k1 == k2 * k1 * k2);
  }
  SUBCASE("non-degenerate") {
    auto ctx = nondeg_ctx_q(2, {0, 1, 3});
    auto k1 = kappa(ctx, 1);
    auto k2 = kappa(ctx, 2);
    // kappa_1^2 = q - (q-1)^2 X_1 X_2 / (X_1 - X_2)^2.
    RatFunc q = ctx->rat_int(2);
    RatFunc d = ctx->xvar(1) - ctx->xvar(2);
    RatFunc rhs = q - (q - ctx->rat_int(1)) * (q - ctx->rat_int(1)) * ctx->xvar(1) *
                          ctx->xvar(2) / (d * d);
    CHECK(k1 * k1 == LusztigElem::poly(ctx, rhs));
    CHECK(k1 * k2 * k1 == k2 * k1 * k2);
    // kappa eps(i) = eps(sigma_r i) kappa.
    Perm s = Perm::sigma(3, 1);
    for (const auto& i : ctx->orbit().members())
      CHECK(k1 * LusztigElem::eps(ctx, i) ==
            LusztigElem::eps(ctx, i.acted_by(s)) * k1);
  }
}

TEST_CASE("kappa_w spans: products of distinct reduced words agree") {
  auto ctx = deg_ctx_q({0, 1, 2});
  Perm w0({2, 1, 0});
  // w0 = s1 s2 s1 = s2 s1 s2.
  auto a = kappa(ctx, 1) * kappa(ctx, 2) * kappa(ctx, 1);
  auto b = kappa(ctx, 2) * kappa(ctx, 1) * kappa(ctx, 2);
  CHECK(a == b);
  CHECK(kappa_w(ctx, w0) == a);
}

TEST_CASE("theta relations") {
  for (auto ctx : {deg_ctx_fp(3, {0, 1, 2}), nondeg_ctx_zeta(3, {0, 1, 2})}) {
    auto th1 = theta(ctx, 1);
    auto th2 = theta(ctx, 2);
    Perm s1 = Perm::sigma(3, 1);
    // theta_r eps(i) = eps(sigma_r i) theta_r.
    for (const auto& i : ctx->orbit().members())
      CHECK(th1 * LusztigElem::eps(ctx, i) ==
            LusztigElem::eps(ctx, i.acted_by(s1)) * th1);
    // Braid relation.
    CHECK(th1 * th2 * th1 == th2 * th1 * th2);
    // theta_r y_s = y_{sigma_r(s)} theta_r.
    CHECK(th1 * y_elem(ctx, 1) == y_elem(ctx, 2) * th1);
    CHECK(th1 * y_elem(ctx, 3) == y_elem(ctx, 3) * th1);
  }
}

TEST_CASE("theta squared matches the case table") {
  // theta_r^2 eps(i) per branch, values translated to X-coordinates per block.
  auto check_theta2 = [](const LusztigCtxPtr& ctx) {
    auto th = theta(ctx, 1);
    auto th2 = th * th;
    long e = ctx->flavor().e();
    for (const auto& i : ctx->orbit().members()) {
      auto lhs = th2 * LusztigElem::eps(ctx, i);
      RatFunc yr = ctx->y_on(1, i), yr1 = ctx->y_on(2, i);
      RatFunc one = RatFunc::one(ctx->n(), ctx->spec());
      RatFunc val = one;
      long gap = ((i[1] - i[2]) % (e == 0 ? 1 : e) + (e == 0 ? 0 : e)) % (e == 0 ? 1 : e);
      switch (residue_gap(i, 1)) {
        case ResidueGap::Equal:
          val = -((yr1 - yr) * (yr1 - yr)).inv();
          break;
        case ResidueGap::PlusOne:
          val = yr - yr1;
          break;
        case ResidueGap::MinusOne:
          val = yr1 - yr;
          break;
        case ResidueGap::PlusOneE2:
          val = (yr - yr1) * (yr1 - yr);
          break;
        case ResidueGap::Generic:
          val = one;
          break;
      }
      (void)gap;
      CHECK(lhs == LusztigElem::eps(ctx, i).scaled(val));
    }
  };
  check_theta2(deg_ctx_q({0, 0}));       // equal branch
  check_theta2(deg_ctx_q({0, 1}));       // +-1 branches, e = 0
  check_theta2(deg_ctx_q({0, 2}));       // generic branch
  check_theta2(deg_ctx_fp(2, {0, 1}));   // e = 2 branch
  check_theta2(nondeg_ctx_q(2, {0, 1}));
  check_theta2(nondeg_ctx_q(-1, {0, 1}));  // e = 2, non-degenerate
  check_theta2(nondeg_ctx_zeta(3, {0, 2}));
}

TEST_CASE("psi squared matches the KLR case table") {
  auto check_psi2 = [](const LusztigCtxPtr& ctx) {
    auto ps = psi(ctx, 1);
    auto ps2 = ps * ps;
    for (const auto& i : ctx->orbit().members()) {
      auto lhs = ps2 * LusztigElem::eps(ctx, i);
      RatFunc yr = ctx->y_on(1, i), yr1 = ctx->y_on(2, i);
      RatFunc one = RatFunc::one(ctx->n(), ctx->spec());
      switch (residue_gap(i, 1)) {
        case ResidueGap::Equal:
          CHECK(lhs.is_zero());
          break;
        case ResidueGap::PlusOne:
          CHECK(lhs == LusztigElem::eps(ctx, i).scaled(yr - yr1));
          break;
        case ResidueGap::MinusOne:
          CHECK(lhs == LusztigElem::eps(ctx, i).scaled(yr1 - yr));
          break;
        case ResidueGap::PlusOneE2:
          CHECK(lhs == LusztigElem::eps(ctx, i).scaled(-((yr - yr1) * (yr - yr1))));
          break;
        case ResidueGap::Generic:
          CHECK(lhs == LusztigElem::eps(ctx, i).scaled(one));
          break;
      }
    }
  };
  check_psi2(deg_ctx_q({0, 0}));
  check_psi2(deg_ctx_q({0, 1}));
  check_psi2(deg_ctx_q({0, 2}));
  check_psi2(deg_ctx_fp(2, {0, 1}));
  check_psi2(deg_ctx_fp(3, {0, 1}));
  check_psi2(nondeg_ctx_q(2, {0, 1}));
  check_psi2(nondeg_ctx_q(2, {0, 0}));
  check_psi2(nondeg_ctx_q(-1, {0, 1}));
  check_psi2(nondeg_ctx_zeta(3, {0, 1}));
  check_psi2(nondeg_ctx_zeta(3, {0, 0}));
}

TEST_CASE("psi braid defect matches the KLR case table") {
  auto check_psi3 = [](const LusztigCtxPtr& ctx) {
    auto p1 = psi(ctx, 1);
    auto p2 = psi(ctx, 2);
    auto diff = p1 * p2 * p1 - p2 * p1 * p2;
    long e = ctx->flavor().e();
    for (const auto& i : ctx->orbit().members()) {
      auto lhs = diff * LusztigElem::eps(ctx, i);
      bool wrap = (i[3] == i[1]);
      auto ei = LusztigElem::eps(ctx, i);
      if (wrap && residue_gap(i, 1) == ResidueGap::PlusOne && e != 2) {
        CHECK(lhs == -ei);
      } else if (wrap && residue_gap(i, 1) == ResidueGap::MinusOne && e != 2) {
        CHECK(lhs == ei);
      } else if (wrap && residue_gap(i, 1) == ResidueGap::PlusOneE2) {
        // (y_r + y_{r+2} - 2y_{r+1}) eps(i), the sign following the paper's own
        // derivation (the two signs coincide in the degenerate case, char 2).
        RatFunc v = ctx->y_on(1, i) + ctx->y_on(3, i) - ctx->y_on(2, i) - ctx->y_on(2, i);
        CHECK(lhs == ei.scaled(v));
      } else {
        CHECK(lhs.is_zero());
      }
    }
  };
  check_psi3(deg_ctx_q({0, 1, 0}));
  check_psi3(deg_ctx_q({0, 0, 1}));
  check_psi3(deg_ctx_fp(2, {0, 1, 0}));
  check_psi3(deg_ctx_fp(3, {0, 1, 0}));
  check_psi3(nondeg_ctx_zeta(3, {0, 1, 0}));
  check_psi3(nondeg_ctx_q(-1, {0, 1, 0}));
}

TEST_CASE("psi commutes with y up to the Demazure correction") {
  // psi_r y_s = y_{sigma_r(s)} psi_r + sum_{i_r = i_{r+1}} d_r(y_s) eps(i).
  for (auto ctx : {deg_ctx_fp(3, {0, 0, 1}), nondeg_ctx_zeta(3, {0, 0, 1})}) {
    auto p1 = psi(ctx, 1);
    Perm s1 = Perm::sigma(3, 1);
    for (int s = 1; s <= 3; ++s) {
      int ss = (s == 1) ? 2 : (s == 2 ? 1 : 3);
      // The Demazure correction lives in the y-variables: d_1(y_s) is -1, +1, 0
      // for s = 1, 2, 3 respectively, regardless of flavor.
      auto corr = LusztigElem::diagonal(ctx, [&](const ResidueTuple& i) {
        if (i[1] != i[2]) return RatFunc::zero(3, ctx->spec());
        return (ctx->y_on(ss, i) - ctx->y_on(s, i)) /
               (ctx->y_on(1, i) - ctx->y_on(2, i));
      });
      CHECK(p1 * y_elem(ctx, s) == y_elem(ctx, ss) * p1 + corr);
    }
    (void)s1;
  }
}

TEST_CASE("psi and theta agree on blocks with distinct residues") {
  auto ctx = deg_ctx_q({0, 2});
  auto p = psi(ctx, 1);
  auto th = theta(ctx, 1);
  for (const auto& i : ctx->orbit().members())
    CHECK(p * LusztigElem::eps(ctx, i) == th * LusztigElem::eps(ctx, i));
}

TEST_CASE("psi generator formulas from the affine Hecke side") {
  // Equal residues: psi_r eps(i) = (T_r + 1) Q_r^{-1}(i) eps(i), both flavors.
  auto check_equal = [](const LusztigCtxPtr& ctx) {
    auto p = psi(ctx, 1);
    auto T1 = LusztigElem::generator_T(ctx, 1);
    auto one = LusztigElem::one(ctx);
    for (const auto& i : ctx->orbit().members()) {
      if (i[1] != i[2]) continue;
      auto ei = LusztigElem::eps(ctx, i);
      auto rhs = (T1 + one) * LusztigElem::poly(ctx, q_factor_inv(ctx, 1, i)) * ei;
      CHECK(p * ei == rhs);
    }
  };
  check_equal(deg_ctx_q({0, 0}));
  check_equal(nondeg_ctx_q(2, {0, 0}));
  check_equal(nondeg_ctx_zeta(3, {0, 0, 1}));

  // Distinct residues (degenerate): psi_r eps(i)
  //   = (T_r + 1/(X_r - X_{r+1})) Q_r^{-1}(i) eps(i).
  auto ctx = deg_ctx_q({0, 1, 3});
  auto p = psi(ctx, 1);
  auto T1 = LusztigElem::generator_T(ctx, 1);
  for (const auto& i : ctx->orbit().members()) {
    if (i[1] == i[2]) continue;
    auto ei = LusztigElem::eps(ctx, i);
    auto c = LusztigElem::poly(ctx, (ctx->xvar(1) - ctx->xvar(2)).inv());
    auto rhs = (T1 + c) * LusztigElem::poly(ctx, q_factor_inv(ctx, 1, i)) * ei;
    CHECK(p * ei == rhs);
  }
}

TEST_CASE("non-degenerate combined formula on equal residues") {
  // psi_r eps(i) = q^{i_r} (T_r + 1) (X_r - q X_{r+1})^{-1} eps(i).
  for (auto ctx : {nondeg_ctx_q(2, {0, 0}), nondeg_ctx_q(5, {1, 1}),
                   nondeg_ctx_zeta(3, {2, 2})}) {
    auto p = psi(ctx, 1);
    auto T1 = LusztigElem::generator_T(ctx, 1);
    auto one = LusztigElem::one(ctx);
    const FieldElem& q = ctx->flavor().q();
    for (const auto& i : ctx->orbit().members()) {
      auto ei = LusztigElem::eps(ctx, i);
      RatFunc g = (ctx->xvar(1) - ctx->rat_const(q) * ctx->xvar(2)).inv();
      auto rhs = ((T1 + one) * LusztigElem::poly(ctx, g) * ei).scaled(
          RatFunc::constant(2, q.pow(i[1])));
      CHECK(p * ei == rhs);
    }
  }
}

TEST_CASE("semi-rationalization membership") {
  auto ctx = deg_ctx_q({0, 0, 1});
  // psi_r eps(i) always lies in the semi-rationalization...
  for (int r = 1; r <= 2; ++r)
    for (const auto& i : ctx->orbit().members())
      CHECK((psi(ctx, r) * LusztigElem::eps(ctx, i)).in_semirationalization());
  // ...but kappa_1 eps(i) has a pole on blocks with i_1 = i_2.
  ResidueTuple bad(0, {0, 0, 1});
  CHECK_FALSE((kappa(ctx, 1) * LusztigElem::eps(ctx, bad)).in_semirationalization());
  ResidueTuple good(0, {0, 1, 0});
  CHECK((kappa(ctx, 1) * LusztigElem::eps(ctx, good)).in_semirationalization());
}

TEST_CASE("y elements and coordinates") {
  for (auto ctx : {deg_ctx_fp(3, {0, 1}), nondeg_ctx_zeta(3, {0, 1})}) {
    auto y1 = y_elem(ctx, 1);
    auto y2 = y_elem(ctx, 2);
    CHECK(y1 * y2 == y2 * y1);
    CHECK(y1 * y_inv(ctx, 1) == LusztigElem::one(ctx));
    // In y-coordinates the coefficient of y_1 is the bare first variable.
    for (const auto& [k, f] : y1.to_y_coordinates())
      CHECK(f == RatFunc::variable(2, ctx->spec(), 1));
  }
}

TEST_CASE("psi_w products over longest element agree across reduced words") {
  auto ctx = deg_ctx_fp(3, {0, 1, 2});
  auto p1 = psi(ctx, 1);
  auto p2 = psi(ctx, 2);
  // The braid defect vanishes on this orbit (no i has i_3 = i_1 adjacent gaps),
  // so the two reduced words of w0 give the same product.
  CHECK(p1 * p2 * p1 == p2 * p1 * p2);
  CHECK(psi_w(ctx, Perm({2, 1, 0})) == p1 * p2 * p1);
}

TEST_CASE("flavor and orbit mismatches are rejected") {
  auto a = LusztigElem::one(deg_ctx_q({0, 1}));
  auto b = LusztigElem::one(nondeg_ctx_q(2, {0, 1}));
  CHECK_THROWS_AS(a * b, FlavorMismatch);
  auto c = LusztigElem::one(deg_ctx_q({0, 2}));
  CHECK_THROWS_AS(a + c, OrbitMismatch);
}
