#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <hecke/suites.hpp>

#include <set>

using namespace hecke;

namespace {

SuiteConfig cfg_deg_fp(long p, int n, std::vector<long> rep, int trials = 8) {
  SuiteConfig c;
  c.flavor = HeckeFlavor::degenerate(FieldSpec::prime_field(p));
  c.n = n;
  c.orbit = orbit_of(ResidueTuple(c.flavor.e(), std::move(rep)));
  c.trials = trials;
  c.seed = 42;
  return c;
}

SuiteConfig cfg_deg_q(int n, std::vector<long> rep, int trials = 8) {
  SuiteConfig c;
  c.flavor = HeckeFlavor::degenerate(FieldSpec::rationals());
  c.n = n;
  c.orbit = orbit_of(ResidueTuple(0, std::move(rep)));
  c.trials = trials;
  c.seed = 42;
  return c;
}

SuiteConfig cfg_nondeg(FieldElem q, int n, std::vector<long> rep, int trials = 8) {
  SuiteConfig c;
  c.flavor = HeckeFlavor::nondegenerate(std::move(q));
  c.n = n;
  c.orbit = orbit_of(ResidueTuple(c.flavor.e(), std::move(rep)));
  c.trials = trials;
  c.seed = 42;
  return c;
}

std::set<std::string> branches_of(const SuiteReport& r, const std::string& id) {
  std::set<std::string> out;
  for (const auto& it : r.items)
    if (it.name == id) out.insert(it.branch);
  return out;
}

}  // namespace

TEST_CASE("demazure suite passes over the rationals and F_5") {
  for (auto spec : {FieldSpec::rationals(), FieldSpec::prime_field(5)}) {
    SuiteConfig c;
    c.flavor = HeckeFlavor::degenerate(spec);
    c.n = 3;
    c.trials = 20;
    c.seed = 7;
    auto rep = verify_relation_suite("demazure", c);
    CHECK(rep.all_passed());
    CHECK(rep.items.size() == 4);
  }
}

TEST_CASE("hecke suite passes in both flavors") {
  auto r1 = verify_relation_suite("hecke", cfg_deg_fp(3, 3, {0, 1, 2}));
  CHECK(r1.all_passed());
  auto Q = FieldSpec::rationals();
  SuiteConfig c = cfg_nondeg(FieldElem::from_int(Q, 2), 3, {0, 1, 2});
  auto r2 = verify_relation_suite("hecke", c);
  CHECK(r2.all_passed());
  // Default orbit kicks in when none is supplied.
  c.orbit.reset();
  CHECK(verify_relation_suite("hecke", c).all_passed());
}

TEST_CASE("intertwiner suite passes in both flavors") {
  CHECK(verify_relation_suite("intertwiner", cfg_deg_q(3, {0, 1, 3}, 5)).all_passed());
  auto C3 = FieldSpec::cyclotomic(3);
  CHECK(verify_relation_suite("intertwiner",
                              cfg_nondeg(FieldElem::zeta(C3), 3, {0, 1, 2}, 5))
            .all_passed());
}

TEST_CASE("qsym suite covers all five branches per flavor") {
  // Degenerate: e=5 covers equal/plus/minus/generic; e=2 covers its branch.
  std::set<std::string> seen;
  for (auto c : {cfg_deg_fp(5, 2, {0, 0}), cfg_deg_fp(5, 2, {0, 1}),
                 cfg_deg_fp(5, 2, {0, 2}), cfg_deg_fp(2, 2, {0, 1})}) {
    auto r = verify_relation_suite("qsym", c);
    CHECK(r.all_passed());
    for (const auto& b : branches_of(r, "q-symmetric-product")) seen.insert(b);
  }
  CHECK(seen == std::set<std::string>{"r=1,equal", "r=1,plus-one", "r=1,minus-one",
                                      "r=1,generic", "r=1,plus-one-e2"});
  // Non-degenerate.
  auto C5 = FieldSpec::cyclotomic(5);
  auto C3 = FieldSpec::cyclotomic(3);
  auto Q = FieldSpec::rationals();
  seen.clear();
  for (auto c : {cfg_nondeg(FieldElem::zeta(C5), 2, {0, 0}),
                 cfg_nondeg(FieldElem::zeta(C5), 2, {0, 1}),
                 cfg_nondeg(FieldElem::zeta(C5), 2, {0, 2}),
                 cfg_nondeg(FieldElem::from_int(Q, -1), 2, {0, 1}),
                 cfg_nondeg(FieldElem::zeta(C3), 2, {1, 2})}) {
    auto r = verify_relation_suite("qsym", c);
    CHECK(r.all_passed());
    for (const auto& b : branches_of(r, "q-symmetric-product")) seen.insert(b);
  }
  CHECK(seen.count("r=1,equal"));
  CHECK(seen.count("r=1,plus-one"));
  CHECK(seen.count("r=1,minus-one"));
  CHECK(seen.count("r=1,generic"));
  CHECK(seen.count("r=1,plus-one-e2"));
}

TEST_CASE("theta suite: generic branch at n=2, degenerate e=5") {
  auto r = verify_relation_suite("theta", cfg_deg_fp(5, 2, {0, 2}, 5));
  CHECK(r.all_passed());
  CHECK(branches_of(r, "theta-squared").count("r=1,generic"));
}

TEST_CASE("theta suite passes at n=3 in both flavors") {
  CHECK(verify_relation_suite("theta", cfg_deg_fp(3, 3, {0, 1, 2}, 4)).all_passed());
  auto C3 = FieldSpec::cyclotomic(3);
  CHECK(verify_relation_suite("theta", cfg_nondeg(FieldElem::zeta(C3), 3, {0, 1, 2}, 4))
            .all_passed());
}

TEST_CASE("klr suite: e=2 braid-defect branch per the spec example") {
  auto r = verify_relation_suite("klr", cfg_deg_fp(2, 3, {0, 1, 0}, 4));
  CHECK(r.all_passed());
  CHECK(branches_of(r, "psi-braid-defect").count("r=1,wrap-e2"));
}

TEST_CASE("klr suite passes across flavors") {
  CHECK(verify_relation_suite("klr", cfg_deg_fp(3, 3, {0, 0, 1}, 4)).all_passed());
  CHECK(verify_relation_suite("klr", cfg_deg_q(3, {0, 1, 0}, 4)).all_passed());
  auto Q = FieldSpec::rationals();
  CHECK(verify_relation_suite("klr", cfg_nondeg(FieldElem::from_int(Q, 2), 2, {0, 0}, 4))
            .all_passed());
  auto C3 = FieldSpec::cyclotomic(3);
  CHECK(verify_relation_suite("klr", cfg_nondeg(FieldElem::zeta(C3), 3, {0, 1, 0}, 4))
            .all_passed());
}

TEST_CASE("unknown suite is rejected; report ordering is deterministic") {
  auto c = cfg_deg_fp(3, 2, {0, 1});
  CHECK_THROWS_AS(verify_relation_suite("nope", c), SuiteUnknown);
  auto r1 = verify_relation_suite("klr", c);
  auto r2 = verify_relation_suite("klr", c);
  REQUIRE(r1.items.size() == r2.items.size());
  for (size_t k = 0; k < r1.items.size(); ++k) {
    CHECK(r1.items[k].name == r2.items[k].name);
    CHECK(r1.items[k].branch == r2.items[k].branch);
    CHECK(r1.items[k].residual_zero == r2.items[k].residual_zero);
  }
  for (size_t k = 1; k < r1.items.size(); ++k) {
    bool ordered = r1.items[k - 1].name < r1.items[k].name ||
                   (r1.items[k - 1].name == r1.items[k].name &&
                    r1.items[k - 1].branch <= r1.items[k].branch);
    CHECK(ordered);
  }
}
