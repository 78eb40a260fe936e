/**
 * @file field.hpp
 * @brief Exact arithmetic over a configurable ground field: the rationals,
 *        a prime field F_p, or a cyclotomic field Q(zeta_m).
 *
 * Every coefficient in the engine is a FieldElem.  Canonical forms are
 * unique, so equality is representation equality.  No floating point.
 */
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace hecke {

struct FieldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DivisionByZero : FieldError {
  DivisionByZero() : FieldError("division by zero") {}
};
struct FieldMismatch : FieldError {
  FieldMismatch() : FieldError("operands belong to different fields") {}
};

namespace detail {

inline bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Univariate integer/rational polynomials as coefficient vectors, low degree
// first.  Used for cyclotomic moduli and CRT projectors.
using QPoly = std::vector<mpq_class>;

inline void qpoly_trim(QPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline QPoly qpoly_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly c(a.size() + b.size() - 1, mpq_class(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  qpoly_trim(c);
  return c;
}

// Exact division; throws if the division leaves a remainder.
inline QPoly qpoly_divexact(QPoly a, const QPoly& b) {
  qpoly_trim(a);
  if (b.empty()) throw DivisionByZero();
  QPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, mpq_class(0));
  while (a.size() >= b.size()) {
    mpq_class c = a.back() / b.back();
    size_t shift = a.size() - b.size();
    q[shift] = c;
    for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
    qpoly_trim(a);
    if (!a.empty() && a.size() < b.size())
      throw FieldError("inexact polynomial division");
  }
  if (!a.empty()) throw FieldError("inexact polynomial division");
  qpoly_trim(q);
  return q;
}

// Remainder of a modulo b (monic-leading division over Q).
inline QPoly qpoly_mod(QPoly a, const QPoly& b) {
  qpoly_trim(a);
  if (b.empty()) throw DivisionByZero();
  while (a.size() >= b.size()) {
    mpq_class c = a.back() / b.back();
    size_t shift = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
    qpoly_trim(a);
  }
  return a;
}

}  // namespace detail

/// Phi_m, the m-th cyclotomic polynomial, by exact division:
/// Phi_m = (t^m - 1) / prod_{d | m, d < m} Phi_d.
inline detail::QPoly cyclotomic_polynomial(long m) {
  if (m < 1) throw FieldError("cyclotomic index must be >= 1");
  static std::map<long, detail::QPoly> cache;
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  detail::QPoly num(m + 1, mpq_class(0));
  num[0] = -1;
  num[m] = 1;
  detail::QPoly den{mpq_class(1)};
  for (long d = 1; d < m; ++d)
    if (m % d == 0) den = detail::qpoly_mul(den, cyclotomic_polynomial(d));
  auto phi = detail::qpoly_divexact(num, den);
  cache[m] = phi;
  return phi;
}

/// Which exact field the engine runs over.
class FieldSpec {
 public:
  enum class Kind { Rationals, PrimeField, Cyclotomic };

  static std::shared_ptr<const FieldSpec> rationals() {
    static auto s = std::shared_ptr<const FieldSpec>(new FieldSpec(Kind::Rationals, 0, 0));
    return s;
  }
  static std::shared_ptr<const FieldSpec> prime_field(long p) {
    if (!detail::is_prime(p))
      throw FieldError(std::to_string(p) + " is not prime");
    return std::shared_ptr<const FieldSpec>(new FieldSpec(Kind::PrimeField, p, 0));
  }
  static std::shared_ptr<const FieldSpec> cyclotomic(long m) {
    if (m < 1) throw FieldError("cyclotomic index must be >= 1");
    auto s = std::shared_ptr<FieldSpec>(new FieldSpec(Kind::Cyclotomic, 0, m));
    s->modulus_ = cyclotomic_polynomial(m);
    return s;
  }

  Kind kind() const { return kind_; }
  long p() const { return p_; }
  long m() const { return m_; }
  const detail::QPoly& modulus() const { return modulus_; }
  long degree() const { return long(modulus_.size()) - 1; }
  long characteristic() const { return kind_ == Kind::PrimeField ? p_ : 0; }

  bool same(const FieldSpec& o) const {
    return kind_ == o.kind_ && p_ == o.p_ && m_ == o.m_;
  }

  std::string name() const {
    switch (kind_) {
      case Kind::Rationals: return "rat";
      case Kind::PrimeField: return "fp:" + std::to_string(p_);
      case Kind::Cyclotomic: return "cyclo:" + std::to_string(m_);
    }
    return "?";
  }

 private:
  FieldSpec(Kind k, long p, long m) : kind_(k), p_(p), m_(m) {}
  Kind kind_;
  long p_;
  long m_;
  detail::QPoly modulus_;
};

using FieldSpecPtr = std::shared_ptr<const FieldSpec>;

/// One element of the configured field, always in canonical form.
class FieldElem {
 public:
  FieldElem() = default;

  static FieldElem zero(const FieldSpecPtr& spec) { return from_int(spec, 0); }
  static FieldElem one(const FieldSpecPtr& spec) { return from_int(spec, 1); }

  static FieldElem from_int(const FieldSpecPtr& spec, long v) {
    return from_rational(spec, mpq_class(v));
  }

  static FieldElem from_rational(const FieldSpecPtr& spec, const mpq_class& raw) {
    mpq_class v = raw;
    v.canonicalize();
    FieldElem e;
    e.spec_ = spec;
    switch (spec->kind()) {
      case FieldSpec::Kind::Rationals:
        e.value_ = v;
        break;
      case FieldSpec::Kind::PrimeField: {
        // v = a/b with b invertible mod p.
        long p = spec->p();
        long num = mpz_fdiv_ui(v.get_num().get_mpz_t(), p);
        long den = mpz_fdiv_ui(v.get_den().get_mpz_t(), p);
        if (den == 0) throw DivisionByZero();
        e.value_ = mod_mul(num, mod_inv(den, p), p);
        break;
      }
      case FieldSpec::Kind::Cyclotomic: {
        detail::QPoly c;
        if (v != 0) c.push_back(v);
        e.value_ = c;
        break;
      }
    }
    return e;
  }

  /// The primitive m-th root of unity generating a cyclotomic field.
  static FieldElem zeta(const FieldSpecPtr& spec) {
    if (spec->kind() != FieldSpec::Kind::Cyclotomic)
      throw FieldError("zeta requires a cyclotomic field");
    FieldElem e;
    e.spec_ = spec;
    detail::QPoly t{mpq_class(0), mpq_class(1)};
    e.value_ = detail::qpoly_mod(t, spec->modulus());
    return e;
  }

  const FieldSpecPtr& spec() const { return spec_; }

  bool is_zero() const {
    if (!spec_) return true;
    switch (spec_->kind()) {
      case FieldSpec::Kind::Rationals: return std::get<mpq_class>(value_) == 0;
      case FieldSpec::Kind::PrimeField: return std::get<long>(value_) == 0;
      case FieldSpec::Kind::Cyclotomic: return std::get<detail::QPoly>(value_).empty();
    }
    return true;
  }
  bool is_one() const { return *this == one(spec_); }

  friend bool operator==(const FieldElem& a, const FieldElem& b) {
    a.check(b);
    return a.value_ == b.value_;
  }
  friend bool operator!=(const FieldElem& a, const FieldElem& b) { return !(a == b); }
  // Arbitrary total order on canonical representations, for map keys.
  friend bool operator<(const FieldElem& a, const FieldElem& b) {
    a.check(b);
    return a.value_ < b.value_;
  }

  friend FieldElem operator+(const FieldElem& a, const FieldElem& b) {
    a.check(b);
    FieldElem r;
    r.spec_ = a.spec_;
    switch (a.spec_->kind()) {
      case FieldSpec::Kind::Rationals:
        r.value_ = mpq_class(std::get<mpq_class>(a.value_) + std::get<mpq_class>(b.value_));
        break;
      case FieldSpec::Kind::PrimeField:
        r.value_ = (std::get<long>(a.value_) + std::get<long>(b.value_)) % a.spec_->p();
        break;
      case FieldSpec::Kind::Cyclotomic: {
        const auto& x = std::get<detail::QPoly>(a.value_);
        const auto& y = std::get<detail::QPoly>(b.value_);
        detail::QPoly c(std::max(x.size(), y.size()), mpq_class(0));
        for (size_t i = 0; i < x.size(); ++i) c[i] += x[i];
        for (size_t i = 0; i < y.size(); ++i) c[i] += y[i];
        detail::qpoly_trim(c);
        r.value_ = c;
        break;
      }
    }
    return r;
  }

  friend FieldElem operator-(const FieldElem& a) {
    FieldElem r;
    r.spec_ = a.spec_;
    switch (a.spec_->kind()) {
      case FieldSpec::Kind::Rationals:
        r.value_ = mpq_class(-std::get<mpq_class>(a.value_));
        break;
      case FieldSpec::Kind::PrimeField: {
        long v = std::get<long>(a.value_);
        r.value_ = v == 0 ? 0L : a.spec_->p() - v;
        break;
      }
      case FieldSpec::Kind::Cyclotomic: {
        detail::QPoly c = std::get<detail::QPoly>(a.value_);
        for (auto& x : c) x = -x;
        r.value_ = c;
        break;
      }
    }
    return r;
  }

  friend FieldElem operator-(const FieldElem& a, const FieldElem& b) { return a + (-b); }

  friend FieldElem operator*(const FieldElem& a, const FieldElem& b) {
    a.check(b);
    FieldElem r;
    r.spec_ = a.spec_;
    switch (a.spec_->kind()) {
      case FieldSpec::Kind::Rationals:
        r.value_ = mpq_class(std::get<mpq_class>(a.value_) * std::get<mpq_class>(b.value_));
        break;
      case FieldSpec::Kind::PrimeField:
        r.value_ = mod_mul(std::get<long>(a.value_), std::get<long>(b.value_), a.spec_->p());
        break;
      case FieldSpec::Kind::Cyclotomic: {
        auto c = detail::qpoly_mul(std::get<detail::QPoly>(a.value_),
                                   std::get<detail::QPoly>(b.value_));
        r.value_ = detail::qpoly_mod(c, a.spec_->modulus());
        break;
      }
    }
    return r;
  }

  FieldElem inv() const {
    if (is_zero()) throw DivisionByZero();
    FieldElem r;
    r.spec_ = spec_;
    switch (spec_->kind()) {
      case FieldSpec::Kind::Rationals:
        r.value_ = mpq_class(1 / std::get<mpq_class>(value_));
        break;
      case FieldSpec::Kind::PrimeField:
        r.value_ = mod_inv(std::get<long>(value_), spec_->p());
        break;
      case FieldSpec::Kind::Cyclotomic:
        r.value_ = qpoly_inv_mod(std::get<detail::QPoly>(value_), spec_->modulus());
        break;
    }
    return r;
  }

  friend FieldElem operator/(const FieldElem& a, const FieldElem& b) { return a * b.inv(); }

  FieldElem pow(long k) const {
    if (k < 0) return inv().pow(-k);
    FieldElem r = one(spec_);
    FieldElem base = *this;
    while (k > 0) {
      if (k & 1) r = r * base;
      base = base * base;
      k >>= 1;
    }
    return r;
  }

  std::string to_string() const {
    std::ostringstream os;
    switch (spec_->kind()) {
      case FieldSpec::Kind::Rationals:
        os << std::get<mpq_class>(value_);
        break;
      case FieldSpec::Kind::PrimeField:
        os << std::get<long>(value_);
        break;
      case FieldSpec::Kind::Cyclotomic: {
        const auto& c = std::get<detail::QPoly>(value_);
        if (c.empty()) { os << "0"; break; }
        bool first = true;
        for (size_t i = 0; i < c.size(); ++i) {
          if (c[i] == 0) continue;
          if (!first) os << "+";
          first = false;
          if (i == 0) os << c[i];
          else if (c[i] == 1) os << "zeta" << (i > 1 ? "^" + std::to_string(i) : "");
          else os << c[i] << "*zeta" << (i > 1 ? "^" + std::to_string(i) : "");
        }
        break;
      }
    }
    return os.str();
  }

  size_t hash() const {
    std::hash<std::string> h;
    return h(to_string());
  }

 private:
  void check(const FieldElem& o) const {
    if (!spec_ || !o.spec_ || !spec_->same(*o.spec_)) throw FieldMismatch();
  }

  static long mod_mul(long a, long b, long p) {
    return long((__int128(a) * b) % p);
  }
  static long mod_inv(long a, long p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) throw DivisionByZero();
    long t = 0, newt = 1, r = p, newr = a;
    while (newr != 0) {
      long q = r / newr;
      std::swap(t -= q * newt, newt);
      std::swap(r -= q * newr, newr);
    }
    return t < 0 ? t + p : t;
  }

  static detail::QPoly qpoly_inv_mod(const detail::QPoly& a, const detail::QPoly& mod) {
    // Extended Euclid over Q[t].
    detail::QPoly r0 = mod, r1 = a;
    detail::QPoly s0{}, s1{mpq_class(1)};
    while (!r1.empty()) {
      // r0 = q*r1 + r2
      detail::QPoly r2 = r0, q;
      detail::qpoly_trim(r2);
      q.assign(r2.size() >= r1.size() ? r2.size() - r1.size() + 1 : 0, mpq_class(0));
      while (r2.size() >= r1.size() && !r2.empty()) {
        mpq_class c = r2.back() / r1.back();
        size_t shift = r2.size() - r1.size();
        q[shift] = c;
        for (size_t i = 0; i < r1.size(); ++i) r2[shift + i] -= c * r1[i];
        detail::qpoly_trim(r2);
      }
      detail::QPoly s2 = s0;
      {
        auto qs = detail::qpoly_mul(q, s1);
        detail::QPoly d(std::max(s2.size(), qs.size()), mpq_class(0));
        for (size_t i = 0; i < s2.size(); ++i) d[i] += s2[i];
        for (size_t i = 0; i < qs.size(); ++i) d[i] -= qs[i];
        detail::qpoly_trim(d);
        s2 = d;
      }
      r0 = r1; r1 = r2;
      s0 = s1; s1 = s2;
    }
    if (r0.size() != 1) throw FieldError("element not invertible modulo cyclotomic polynomial");
    mpq_class lead = r0[0];
    for (auto& c : s0) c /= lead;
    detail::qpoly_trim(s0);
    return s0;
  }

  FieldSpecPtr spec_;
  std::variant<mpq_class, long, detail::QPoly> value_;
};

/// Degenerate vs non-degenerate flavor, carrying the quantum characteristic e.
class HeckeFlavor {
 public:
  static HeckeFlavor degenerate(const FieldSpecPtr& spec) {
    HeckeFlavor f;
    f.spec_ = spec;
    f.degenerate_ = true;
    f.e_ = spec->characteristic();
    return f;
  }

  /// e is the least k with 1+q+...+q^{k-1} = 0, or 0 if none up to `bound`.
  static HeckeFlavor nondegenerate(const FieldElem& q, long bound = 50) {
    if (q.is_zero() || q.is_one())
      throw FieldError("non-degenerate flavor requires q != 0, 1");
    HeckeFlavor f;
    f.spec_ = q.spec();
    f.degenerate_ = false;
    f.q_ = q;
    f.e_ = 0;
    FieldElem sum = FieldElem::one(q.spec());
    FieldElem pw = q;
    for (long k = 2; k <= bound; ++k) {
      sum = sum + pw;
      pw = pw * q;
      if (sum.is_zero()) { f.e_ = k; break; }
    }
    return f;
  }

  bool is_degenerate() const { return degenerate_; }
  long e() const { return e_; }
  const FieldSpecPtr& spec() const { return spec_; }
  const FieldElem& q() const {
    if (degenerate_) throw FieldError("degenerate flavor has no q");
    return q_;
  }

 private:
  FieldSpecPtr spec_;
  bool degenerate_ = true;
  FieldElem q_;
  long e_ = 0;
};

/// The image of a residue i in the field: i*1 (degenerate) or q^i.
inline FieldElem residue_embed(long i, const FieldSpecPtr& spec, const HeckeFlavor& flavor) {
  if (flavor.is_degenerate()) return FieldElem::from_int(spec, i);
  return flavor.q().pow(i);
}

/// Parses "rat", "fp:5", "cyclo:3".
inline FieldSpecPtr parse_field_spec(const std::string& s) {
  if (s == "rat") return FieldSpec::rationals();
  if (s.rfind("fp:", 0) == 0) return FieldSpec::prime_field(std::stol(s.substr(3)));
  if (s.rfind("cyclo:", 0) == 0) return FieldSpec::cyclotomic(std::stol(s.substr(6)));
  throw FieldError("unknown field spec '" + s + "'");
}

/// Parses a q literal: "2", "-1", "1/2" or "zeta".
inline FieldElem parse_q_literal(const std::string& s, const FieldSpecPtr& spec) {
  if (s == "zeta") return FieldElem::zeta(spec);
  mpq_class v(s);
  v.canonicalize();
  return FieldElem::from_rational(spec, v);
}

}  // namespace hecke
