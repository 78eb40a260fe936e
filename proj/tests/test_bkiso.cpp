#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <hecke/bkiso.hpp>

using namespace hecke;

namespace {

CycloParams deg_params(const FieldSpecPtr& spec, int n, std::map<long, int> lambda) {
  CycloParams p;
  p.flavor = HeckeFlavor::degenerate(spec);
  p.n = n;
  p.lambda = std::move(lambda);
  return p;
}

CycloParams nondeg_params(FieldElem q, int n, std::map<long, int> lambda) {
  CycloParams p;
  p.flavor = HeckeFlavor::nondegenerate(std::move(q));
  p.n = n;
  p.lambda = std::move(lambda);
  return p;
}

bool has_verdict(const BKReport& r, const std::string& rel, const std::string& branch) {
  for (const auto& v : r.verdicts)
    if (v.relation == rel && v.branch == branch) return true;
  return false;
}

void dump_failures(const BKReport& r) {
  for (const auto& v : r.verdicts)
    if (!v.pass) MESSAGE("FAILED: " << v.relation << " [" << v.branch << "]");
}

}  // namespace

TEST_CASE("BK end-to-end: degenerate n=2, e=2, Lambda_0, orbit (0,1)") {
  auto p = deg_params(FieldSpec::prime_field(2), 2, {{0, 1}});
  auto rep = bk_check(p, orbit_of(ResidueTuple(2, {0, 1})));
  dump_failures(rep);
  CHECK(rep.all_passed());
  // The whole 2-dimensional algebra is this block.
  CHECK(rep.block_dim == 2);
  CHECK(rep.closure_dim == 2);
  // e=2 with adjacent residues exercises the doubled-root psi^2 branch.
  CHECK(has_verdict(rep, "psi-squared", "r=1,plus-one-e2"));
  CHECK(rep.certification == "isomorphism certified modulo paper's injectivity argument");
}

TEST_CASE("BK end-to-end: degenerate n=3, e=3, Lambda_0, orbit (0,1,2)") {
  auto p = deg_params(FieldSpec::prime_field(3), 3, {{0, 1}});
  auto rep = bk_check(p, orbit_of(ResidueTuple(3, {0, 1, 2})));
  dump_failures(rep);
  CHECK(rep.all_passed());
  CHECK(rep.block_dim == rep.closure_dim);
  CHECK(rep.block_dim > 0);
  // n=3 exercises the braid-defect table.
  bool braid = false;
  for (const auto& v : rep.verdicts)
    if (v.relation == "psi-braid-defect") braid = true;
  CHECK(braid);
}

TEST_CASE("BK end-to-end: nondegenerate n=2, q=zeta_3, Lambda_0, orbit (0,1)") {
  auto C3 = FieldSpec::cyclotomic(3);
  auto p = nondeg_params(FieldElem::zeta(C3), 2, {{0, 1}});
  auto rep = bk_check(p, orbit_of(ResidueTuple(3, {0, 1})));
  dump_failures(rep);
  CHECK(rep.all_passed());
  CHECK(rep.block_dim == rep.closure_dim);
  CHECK(rep.block_dim > 0);
}

TEST_CASE("BK end-to-end: nondegenerate n=2, q=2 over Q (e=0), Lambda_0, orbit (0,1)") {
  auto Q = FieldSpec::rationals();
  auto p = nondeg_params(FieldElem::from_int(Q, 2), 2, {{0, 1}});
  auto rep = bk_check(p, orbit_of(ResidueTuple(0, {0, 1})));
  dump_failures(rep);
  CHECK(rep.all_passed());
  CHECK(rep.block_dim == rep.closure_dim);
  CHECK(rep.block_dim > 0);
}

TEST_CASE("zero block is reported and trivially passes") {
  // Residue tuple (0,0) never occurs for n=2, level 1, Lambda = {0 -> 1}.
  auto p = deg_params(FieldSpec::prime_field(2), 2, {{0, 1}});
  auto rep = bk_check(p, orbit_of(ResidueTuple(2, {0, 0})));
  CHECK(rep.all_passed());
  CHECK(rep.block_dim == 0);
  CHECK(rep.closure_dim == 0);
  CHECK(has_verdict(rep, "surjectivity", "zero-block"));
}

TEST_CASE("images satisfy the stated invariants directly") {
  auto p = deg_params(FieldSpec::prime_field(3), 2, {{0, 1}, {1, 1}});
  auto alg = build_algebra(p);
  auto sys = compute_idempotents(alg);
  Orbit orb = orbit_of(ResidueTuple(3, {0, 1}));
  auto im = build_images(alg, sys, orb);
  REQUIRE(!im.zero_block());
  // y_r image = sum_i (X_r - i_r) e(i).
  for (int r = 1; r <= 2; ++r) {
    CycloElem expect = alg->zero_elem();
    for (const auto& [i, ei] : im.eps) {
      MultiPoly x = MultiPoly::variable(2, alg->spec(), r) -
                    MultiPoly::constant(2, residue_embed(i[r], alg->spec(), alg->flavor()));
      expect = expect + alg->from_poly(x) * ei;
    }
    CHECK(im.y[size_t(r) - 1] == expect);
  }
  // psi_r lies in the block on both sides.
  for (const auto& ps : im.psi) {
    CHECK(im.ec * ps == ps);
    CHECK(ps * im.ec == ps);
  }
  // Partial reports individually pass.
  CHECK(check_klr_presentation(im).all_passed());
  auto surj = check_surjectivity(im);
  CHECK(surj.all_passed());
  CHECK(surj.block_dim == surj.closure_dim);
  CHECK(check_roundtrip(im).all_passed());
}

TEST_CASE("reports are deterministic and branch coverage is recorded") {
  auto p = deg_params(FieldSpec::prime_field(2), 2, {{0, 1}});
  Orbit orb = orbit_of(ResidueTuple(2, {0, 1}));
  auto r1 = bk_check(p, orb, 7);
  auto r2 = bk_check(p, orb, 7);
  REQUIRE(r1.verdicts.size() == r2.verdicts.size());
  for (size_t k = 0; k < r1.verdicts.size(); ++k) {
    CHECK(r1.verdicts[k].relation == r2.verdicts[k].relation);
    CHECK(r1.verdicts[k].branch == r2.verdicts[k].branch);
    CHECK(r1.verdicts[k].pass == r2.verdicts[k].pass);
  }
  // The (0,1)/(1,0) orbit at e=2 cannot exercise the generic psi^2 branch.
  bool noted = false;
  for (const auto& s : r1.not_exercised)
    if (s == "psi-squared/generic") noted = true;
  CHECK(noted);
}
