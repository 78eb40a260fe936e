#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <hecke/field.hpp>

#include <random>

using namespace hecke;

TEST_CASE("prime field basics") {
  auto f5 = FieldSpec::prime_field(5);
  auto two = FieldElem::from_int(f5, 2);
  CHECK(two.inv() == FieldElem::from_int(f5, 3));
  CHECK((two * two.inv()).is_one());
  CHECK_THROWS_AS(FieldSpec::prime_field(4), FieldError);
  CHECK_THROWS_AS(FieldElem::zero(f5).inv(), DivisionByZero);
}

TEST_CASE("rational arithmetic") {
  auto Q = FieldSpec::rationals();
  auto half = FieldElem::from_rational(Q, mpq_class(1, 2));
  auto third = FieldElem::from_rational(Q, mpq_class(1, 3));
  CHECK(half + third == FieldElem::from_rational(Q, mpq_class(5, 6)));
  CHECK((half - half).is_zero());
}

TEST_CASE("cyclotomic polynomials by exact division") {
  auto phi = [](long m) {
    auto p = cyclotomic_polynomial(m);
    return p;
  };
  CHECK(phi(1) == detail::QPoly{mpq_class(-1), mpq_class(1)});
  CHECK(phi(2) == detail::QPoly{mpq_class(1), mpq_class(1)});
  CHECK(phi(4) == detail::QPoly{mpq_class(1), mpq_class(0), mpq_class(1)});
  CHECK(phi(6) == detail::QPoly{mpq_class(1), mpq_class(-1), mpq_class(1)});
  // Phi_m divides t^m - 1 and is monic.
  for (long m : {1, 2, 3, 4, 5, 6, 8, 12}) {
    auto p = phi(m);
    CHECK(p.back() == 1);
    detail::QPoly tm(m + 1, mpq_class(0));
    tm[0] = -1;
    tm[m] = 1;
    CHECK(detail::qpoly_mod(tm, p).empty());
  }
}

TEST_CASE("cyclotomic field: zeta_4 squares to -1") {
  auto C4 = FieldSpec::cyclotomic(4);
  auto z = FieldElem::zeta(C4);
  CHECK(z * z == -FieldElem::one(C4));
  CHECK((z * z.inv()).is_one());
}

TEST_CASE("field axioms on random elements") {
  std::mt19937_64 rng(12345);
  auto sample_int = [&](long lo, long hi) {
    return lo + long(rng() % uint64_t(hi - lo + 1));
  };
  std::vector<FieldSpecPtr> fields = {FieldSpec::rationals(),
                                      FieldSpec::prime_field(5),
                                      FieldSpec::cyclotomic(3)};
  for (const auto& f : fields) {
    auto sample = [&]() {
      // Denominators coprime to every configured characteristic.
      FieldElem v = FieldElem::from_rational(
          f, mpq_class(sample_int(-20, 20), sample_int(1, 4)));
      if (f->kind() == FieldSpec::Kind::Cyclotomic && (rng() & 1))
        v = v + FieldElem::zeta(f) * FieldElem::from_int(f, sample_int(-3, 3));
      return v;
    };
    for (int t = 0; t < 200; ++t) {
      auto a = sample(), b = sample(), c = sample();
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      if (!a.is_zero()) CHECK((a * a.inv()).is_one());
    }
  }
}

TEST_CASE("quantum characteristic matches brute-force summation") {
  auto Q = FieldSpec::rationals();
  auto q2 = HeckeFlavor::nondegenerate(FieldElem::from_int(Q, 2));
  CHECK(q2.e() == 0);
  auto qm1 = HeckeFlavor::nondegenerate(FieldElem::from_int(Q, -1));
  CHECK(qm1.e() == 2);
  auto C3 = FieldSpec::cyclotomic(3);
  auto qz = HeckeFlavor::nondegenerate(FieldElem::zeta(C3));
  CHECK(qz.e() == 3);
  auto C5 = FieldSpec::cyclotomic(5);
  CHECK(HeckeFlavor::nondegenerate(FieldElem::zeta(C5)).e() == 5);
  // Brute force cross-check up to 50.
  for (const auto& fl : {q2, qm1, qz}) {
    FieldElem sum = FieldElem::zero(fl.spec());
    long first = 0;
    for (long k = 1; k <= 50; ++k) {
      sum = sum + fl.q().pow(k - 1);
      if (sum.is_zero()) { first = k; break; }
    }
    CHECK(first == fl.e());
  }
}

TEST_CASE("residue embedding") {
  auto F3 = FieldSpec::prime_field(3);
  auto deg = HeckeFlavor::degenerate(F3);
  CHECK(deg.e() == 3);
  CHECK(residue_embed(3, F3, deg).is_zero());
  auto Q = FieldSpec::rationals();
  auto nd = HeckeFlavor::nondegenerate(FieldElem::from_int(Q, 2));
  CHECK(residue_embed(2, Q, nd) == FieldElem::from_int(Q, 4));
  auto C3 = FieldSpec::cyclotomic(3);
  auto ndz = HeckeFlavor::nondegenerate(FieldElem::zeta(C3));
  CHECK(residue_embed(1, C3, ndz) == FieldElem::zeta(C3));
  // Injectivity on 0..e-1 when e > 0.
  for (long a = 0; a < ndz.e(); ++a)
    for (long b = a + 1; b < ndz.e(); ++b)
      CHECK(residue_embed(a, C3, ndz) != residue_embed(b, C3, ndz));
  auto F5 = FieldSpec::prime_field(5);
  auto deg5 = HeckeFlavor::degenerate(F5);
  for (long a = 0; a < 5; ++a)
    for (long b = a + 1; b < 5; ++b)
      CHECK(residue_embed(a, F5, deg5) != residue_embed(b, F5, deg5));
}

TEST_CASE("field spec parsing") {
  CHECK(parse_field_spec("rat")->kind() == FieldSpec::Kind::Rationals);
  CHECK(parse_field_spec("fp:5")->p() == 5);
  CHECK(parse_field_spec("cyclo:3")->m() == 3);
  CHECK_THROWS(parse_field_spec("fp:4"));
  CHECK_THROWS(parse_field_spec("float"));
}
