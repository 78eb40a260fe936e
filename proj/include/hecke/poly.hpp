/**
 * @file poly.hpp
 * @brief Multivariate (Laurent-capable) polynomials and reduced rational
 *        functions in X_1..X_n over the configured field, with the S_n
 *        action, Demazure operators, residue-point evaluation, and a
 *        round-tripping parser/printer.
 *
 * Fractions are kept reduced eagerly via a primitive-PRS multivariate gcd,
 * so RatFunc equality is representation equality.
 */
#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "field.hpp"
#include "perm.hpp"
#include "residue.hpp"

namespace hecke {

struct PolyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PoleAtResidue : PolyError {
  PoleAtResidue() : PolyError("denominator vanishes at the residue point") {}
};
struct InternalError : PolyError {
  using PolyError::PolyError;
};

using Expo = std::vector<int>;

/// Graded-lexicographic term order (negative exponents allowed).
struct GrlexLess {
  bool operator()(const Expo& a, const Expo& b) const {
    long da = 0, db = 0;
    for (int v : a) da += v;
    for (int v : b) db += v;
    if (da != db) return da < db;
    return a < b;
  }
};

class MultiPoly {
 public:
  MultiPoly() = default;
  MultiPoly(int n, FieldSpecPtr spec) : n_(n), spec_(std::move(spec)) {}

  static MultiPoly zero(int n, const FieldSpecPtr& spec) { return MultiPoly(n, spec); }
  static MultiPoly constant(int n, const FieldElem& c) {
    MultiPoly p(n, c.spec());
    if (!c.is_zero()) p.terms_[Expo(n, 0)] = c;
    return p;
  }
  static MultiPoly one(int n, const FieldSpecPtr& spec) {
    return constant(n, FieldElem::one(spec));
  }
  /// X_r^k (1-based r; k may be negative in Laurent contexts).
  static MultiPoly variable(int n, const FieldSpecPtr& spec, int r, int k = 1) {
    if (r < 1 || r > n) throw PolyError("variable index out of range");
    MultiPoly p(n, spec);
    if (k != 0) {
      Expo e(n, 0);
      e[r - 1] = k;
      p.terms_[e] = FieldElem::one(spec);
    } else {
      return one(n, spec);
    }
    return p;
  }
  static MultiPoly monomial(int n, const Expo& e, const FieldElem& c) {
    MultiPoly p(n, c.spec());
    if (!c.is_zero()) p.terms_[e] = c;
    return p;
  }

  int n() const { return n_; }
  const FieldSpecPtr& spec() const { return spec_; }
  const std::map<Expo, FieldElem, GrlexLess>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 && terms_.begin()->first == Expo(n_, 0));
  }
  FieldElem constant_value() const {
    if (terms_.empty()) return FieldElem::zero(spec_);
    return terms_.begin()->second;
  }
  bool is_one() const { return is_constant() && constant_value().is_one(); }

  bool has_negative_exponent() const {
    for (const auto& [e, c] : terms_)
      for (int v : e)
        if (v < 0) return true;
    return false;
  }

  /// Total degree in variable r (1-based); 0 for the zero polynomial.
  int degree_in(int r) const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[r - 1]);
    return d;
  }
  int min_exponent_in(int r) const {
    int d = 0;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (first || e[r - 1] < d) d = e[r - 1];
      first = false;
    }
    return d;
  }

  const std::pair<const Expo, FieldElem>& leading_term() const {
    if (terms_.empty()) throw PolyError("leading term of zero polynomial");
    return *terms_.rbegin();
  }

  void add_term(const Expo& e, const FieldElem& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    a.check(b);
    MultiPoly r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
  }
  friend MultiPoly operator-(const MultiPoly& a) {
    MultiPoly r(a.n_, a.spec_);
    for (const auto& [e, c] : a.terms_) r.terms_.emplace(e, -c);
    return r;
  }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return a + (-b); }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.check(b);
    MultiPoly r(a.n_, a.spec_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Expo e(a.n_);
        for (int i = 0; i < a.n_; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  MultiPoly scaled(const FieldElem& c) const {
    MultiPoly r(n_, spec_);
    if (c.is_zero()) return r;
    for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
    return r;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    a.check(b);
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }
  friend bool operator<(const MultiPoly& a, const MultiPoly& b) {
    if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size();
    auto ia = a.terms_.begin();
    auto ib = b.terms_.begin();
    GrlexLess less;
    for (; ia != a.terms_.end(); ++ia, ++ib) {
      if (less(ia->first, ib->first)) return true;
      if (less(ib->first, ia->first)) return false;
      if (ia->second < ib->second) return true;
      if (ib->second < ia->second) return false;
    }
    return false;
  }

  /// Variable permutation X_s -> X_{w(s)}.
  MultiPoly applied(const Perm& w) const {
    if (w.n() != n_) throw PolyError("permutation size mismatch");
    MultiPoly r(n_, spec_);
    for (const auto& [e, c] : terms_) {
      Expo f(n_);
      for (int s = 0; s < n_; ++s) f[w.images0()[s]] = e[s];
      r.terms_.emplace(std::move(f), c);
    }
    return r;
  }

  /// Evaluation over any commutative ring value type with +,*,inv().
  template <class V>
  V eval_with(const std::vector<V>& args, const V& zero_v, const V& one_v) const {
    V acc = zero_v;
    for (const auto& [e, c] : terms_) {
      V t = one_v;
      for (int s = 0; s < n_; ++s) {
        int k = e[s];
        V base = k < 0 ? args[s].inv() : args[s];
        for (int j = 0; j < std::abs(k); ++j) t = t * base;
      }
      t = t * V::scalar_like(one_v, c);
      acc = acc + t;
    }
    return acc;
  }

  /// Exact evaluation at field points (Laurent exponents need nonzero points).
  FieldElem eval(const std::vector<FieldElem>& pt) const {
    FieldElem acc = FieldElem::zero(spec_);
    for (const auto& [e, c] : terms_) {
      FieldElem t = c;
      for (int s = 0; s < n_; ++s)
        if (e[s] != 0) t = t * pt[s].pow(e[s]);
      acc = acc + t;
    }
    return acc;
  }

  std::string to_string() const;

 private:
  void check(const MultiPoly& o) const {
    if (n_ != o.n_ || !spec_ || !o.spec_ || !spec_->same(*o.spec_))
      throw PolyError("polynomial ring mismatch");
  }

  int n_ = 0;
  FieldSpecPtr spec_;
  std::map<Expo, FieldElem, GrlexLess> terms_;
};

/// Exact division of polynomials (no negative exponents); throws on failure.
inline MultiPoly divexact(const MultiPoly& a, const MultiPoly& b) {
  if (b.is_zero()) throw DivisionByZero();
  MultiPoly rem = a;
  MultiPoly q(a.n(), a.spec());
  const auto& [eb, cb] = b.leading_term();
  while (!rem.is_zero()) {
    const auto& [ea, ca] = rem.leading_term();
    Expo e(a.n());
    for (int i = 0; i < a.n(); ++i) {
      e[i] = ea[i] - eb[i];
      if (e[i] < 0) throw PolyError("inexact multivariate division");
    }
    FieldElem c = ca / cb;
    MultiPoly piece = MultiPoly::monomial(a.n(), e, c);
    q = q + piece;
    rem = rem - piece * b;
  }
  return q;
}

namespace detail_gcd {

// Univariate view in variable k (1-based): degree -> coefficient polynomial.
inline std::map<int, MultiPoly> split_by(const MultiPoly& p, int k) {
  std::map<int, MultiPoly> out;
  for (const auto& [e, c] : p.terms()) {
    Expo f = e;
    int d = f[k - 1];
    f[k - 1] = 0;
    auto it = out.find(d);
    if (it == out.end()) it = out.emplace(d, MultiPoly::zero(p.n(), p.spec())).first;
    it->second.add_term(f, c);
  }
  return out;
}

inline MultiPoly join(const std::map<int, MultiPoly>& parts, int k, int n,
                      const FieldSpecPtr& spec) {
  MultiPoly p(n, spec);
  for (const auto& [d, coeff] : parts)
    p = p + coeff * MultiPoly::variable(n, spec, k, d);
  return p;
}

}  // namespace detail_gcd

MultiPoly multipoly_gcd(const MultiPoly& a, const MultiPoly& b);

namespace detail_gcd {

inline MultiPoly content_in(const MultiPoly& p, int k) {
  auto parts = split_by(p, k);
  MultiPoly g = MultiPoly::zero(p.n(), p.spec());
  for (const auto& [d, coeff] : parts) g = multipoly_gcd(g, coeff);
  return g;
}

// prem(a, b) in variable k: the classical pseudo-remainder
// lc(b)^(deg a - deg b + 1) * a  mod  b.
inline MultiPoly pseudo_rem(MultiPoly a, const MultiPoly& b, int k) {
  int db = b.degree_in(k);
  int da0 = a.degree_in(k);
  auto bparts = split_by(b, k);
  const MultiPoly& lb = bparts.rbegin()->second;
  int steps = 0;
  while (!a.is_zero() && a.degree_in(k) >= db) {
    auto aparts = split_by(a, k);
    int da = aparts.rbegin()->first;
    const MultiPoly& la = aparts.rbegin()->second;
    MultiPoly shift = MultiPoly::variable(a.n(), a.spec(), k, da - db);
    a = a * lb - la * shift * b;
    ++steps;
  }
  for (int j = steps; j < da0 - db + 1; ++j) a = a * lb;
  return a;
}

}  // namespace detail_gcd

/// Monic (leading coefficient 1 under grlex) greatest common divisor of
/// true polynomials, via primitive polynomial remainder sequences.
inline MultiPoly multipoly_gcd(const MultiPoly& a, const MultiPoly& b) {
  auto monic = [](const MultiPoly& p) {
    if (p.is_zero()) return p;
    return p.scaled(p.leading_term().second.inv());
  };
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  if (a.has_negative_exponent() || b.has_negative_exponent())
    throw PolyError("gcd requires non-negative exponents");
  // Main variable: the largest index appearing in either input.
  int k = 0;
  for (int r = a.n(); r >= 1; --r)
    if (a.degree_in(r) > 0 || b.degree_in(r) > 0) { k = r; break; }
  if (k == 0) return MultiPoly::one(a.n(), a.spec());  // both constants
  MultiPoly ca = detail_gcd::content_in(a, k);
  MultiPoly cb = detail_gcd::content_in(b, k);
  MultiPoly pa = divexact(a, ca);
  MultiPoly pb = divexact(b, cb);
  MultiPoly cont = multipoly_gcd(ca, cb);
  if (pa.degree_in(k) < pb.degree_in(k)) std::swap(pa, pb);
  // Subresultant PRS: pseudo-remainders divided by the Collins factors,
  // which keeps coefficient growth polynomial without recursive content
  // gcds at every step.
  MultiPoly one = MultiPoly::one(a.n(), a.spec());
  MultiPoly g = one, h = one;
  while (!pb.is_zero() && pb.degree_in(k) > 0) {
    int d = pa.degree_in(k) - pb.degree_in(k);
    MultiPoly r = detail_gcd::pseudo_rem(pa, pb, k);
    pa = pb;
    if (r.is_zero()) {
      pb = r;
      break;
    }
    MultiPoly divisor = g;
    for (int j = 0; j < d; ++j) divisor = divisor * h;
    pb = divexact(r, divisor);
    g = detail_gcd::split_by(pa, k).rbegin()->second;  // lc in k
    if (d > 0) {
      MultiPoly gd = one;
      for (int j = 0; j < d; ++j) gd = gd * g;
      MultiPoly hd = one;
      for (int j = 0; j < d - 1; ++j) hd = hd * h;
      h = divexact(gd, hd);
    }
  }
  if (!pb.is_zero()) return monic(cont);  // last remainder constant in k
  MultiPoly prim = divexact(pa, detail_gcd::content_in(pa, k));
  return monic(cont * prim);
}

/// A reduced fraction of polynomials; denominator monic, gcd trivial.
class RatFunc {
 public:
  RatFunc() = default;
  RatFunc(MultiPoly num, MultiPoly den) : num_(std::move(num)), den_(std::move(den)) {
    reduce();
  }
  /* implicit */ RatFunc(const MultiPoly& p)
      : num_(p), den_(MultiPoly::one(p.n(), p.spec())) {
    reduce();
  }

  static RatFunc zero(int n, const FieldSpecPtr& spec) {
    return RatFunc(MultiPoly::zero(n, spec));
  }
  static RatFunc one(int n, const FieldSpecPtr& spec) {
    return RatFunc(MultiPoly::one(n, spec));
  }
  static RatFunc constant(int n, const FieldElem& c) {
    return RatFunc(MultiPoly::constant(n, c));
  }
  static RatFunc variable(int n, const FieldSpecPtr& spec, int r, int k = 1) {
    if (k >= 0) return RatFunc(MultiPoly::variable(n, spec, r, k));
    return RatFunc(MultiPoly::one(n, spec), MultiPoly::variable(n, spec, r, -k));
  }
  static RatFunc scalar_like(const RatFunc& proto, const FieldElem& c) {
    return constant(proto.n(), c);
  }

  const MultiPoly& num() const { return num_; }
  const MultiPoly& den() const { return den_; }
  int n() const { return num_.n(); }
  const FieldSpecPtr& spec() const { return num_.spec(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator-(const RatFunc& a) {
    RatFunc r = a;
    r.num_ = -r.num_;
    return r;
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero()) throw DivisionByZero();
    return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
  }
  RatFunc inv() const {
    if (is_zero()) throw DivisionByZero();
    return RatFunc(den_, num_);
  }
  RatFunc scaled(const FieldElem& c) const {
    if (c.is_zero()) return zero(n(), spec());
    RatFunc r = *this;
    r.num_ = r.num_.scaled(c);
    r.reduce();
    return r;
  }
  RatFunc pow(int k) const {
    if (k < 0) return inv().pow(-k);
    RatFunc r = one(n(), spec());
    for (int j = 0; j < k; ++j) r = r * *this;
    return r;
  }

  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }
  friend bool operator<(const RatFunc& a, const RatFunc& b) {
    if (a.num_ < b.num_) return true;
    if (b.num_ < a.num_) return false;
    return a.den_ < b.den_;
  }

  RatFunc applied(const Perm& w) const {
    RatFunc r;
    r.num_ = num_.applied(w);
    r.den_ = den_.applied(w);
    r.reduce();
    return r;
  }

  std::string to_string() const {
    if (den_.is_one()) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
  }

 private:
  void reduce() {
    if (den_.is_zero()) throw DivisionByZero();
    if (num_.is_zero()) {
      den_ = MultiPoly::one(num_.n(), num_.spec());
      return;
    }
    // Clear Laurent monomials into ordinary polynomials first.
    Expo shift(num_.n(), 0);
    bool need = false;
    for (int r = 1; r <= num_.n(); ++r) {
      int m = std::min(num_.min_exponent_in(r), den_.min_exponent_in(r));
      if (m < 0) {
        shift[r - 1] = -m;
        need = true;
      }
    }
    if (need) {
      MultiPoly mono =
          MultiPoly::monomial(num_.n(), shift, FieldElem::one(num_.spec()));
      num_ = num_ * mono;
      den_ = den_ * mono;
    }
    MultiPoly g = multipoly_gcd(num_, den_);
    if (!g.is_one()) {
      num_ = divexact(num_, g);
      den_ = divexact(den_, g);
    }
    FieldElem lc = den_.leading_term().second;
    if (!lc.is_one()) {
      FieldElem s = lc.inv();
      num_ = num_.scaled(s);
      den_ = den_.scaled(s);
    }
  }

  MultiPoly num_;
  MultiPoly den_;
};

/// sigma_r action and Demazure operator on rational functions.
inline RatFunc apply_perm(const Perm& w, const RatFunc& f) { return f.applied(w); }

inline RatFunc demazure(int r, const RatFunc& f) {
  int n = f.n();
  if (r < 1 || r >= n) throw PolyError("demazure index out of range");
  Perm s = Perm::sigma(n, r);
  RatFunc diff = f.applied(s) - f;
  RatFunc den = RatFunc(MultiPoly::variable(n, f.spec(), r) -
                        MultiPoly::variable(n, f.spec(), r + 1));
  RatFunc out = diff / den;
  if (f.is_polynomial() && !out.is_polynomial())
    throw InternalError("Demazure of a polynomial failed to divide exactly");
  return out;
}

/// The residue point (i_1,...) resp. (q^{i_1},...) of a tuple.
inline std::vector<FieldElem> residue_point(const ResidueTuple& i,
                                            const FieldSpecPtr& spec,
                                            const HeckeFlavor& flavor) {
  std::vector<FieldElem> pt;
  pt.reserve(i.n());
  for (int r = 1; r <= i.n(); ++r) pt.push_back(residue_embed(i[r], spec, flavor));
  return pt;
}

/// Exact value f(i) resp. f(q^i); throws PoleAtResidue when the denominator
/// vanishes at the point.
inline FieldElem eval_at_residues(const RatFunc& f, const ResidueTuple& i,
                                  const HeckeFlavor& flavor) {
  auto pt = residue_point(i, f.spec(), flavor);
  FieldElem dv = f.den().eval(pt);
  if (dv.is_zero()) throw PoleAtResidue();
  return f.num().eval(pt) / dv;
}

// ---------------------------------------------------------------------------
// Printing

inline std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Descending grlex for readability and a stable canonical form.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    if (!first) os << " + ";
    first = false;
    bool anyvar = false;
    for (int v : e) anyvar |= (v != 0);
    std::string cs = c.to_string();
    bool needs_parens = cs.find('+') != std::string::npos ||
                        cs.find('/') != std::string::npos ||
                        (cs.find('-', 1) != std::string::npos);
    if (!anyvar) {
      os << (needs_parens ? "(" + cs + ")" : cs);
      continue;
    }
    bool printed = false;
    if (!c.is_one()) {
      os << (needs_parens ? "(" + cs + ")" : cs);
      printed = true;
    }
    for (int s = 0; s < n_; ++s) {
      if (e[s] == 0) continue;
      if (printed) os << "*";
      os << "X" << (s + 1);
      if (e[s] != 1) os << "^" << e[s];
      printed = true;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Parsing: numbers, X<k>, zeta, q (via a constants table), + - * / ^ ( ).

class RatFuncParser {
 public:
  RatFuncParser(std::string text, int n, FieldSpecPtr spec,
                std::map<std::string, FieldElem> consts = {})
      : text_(std::move(text)), n_(n), spec_(std::move(spec)),
        consts_(std::move(consts)) {}

  RatFunc parse() {
    RatFunc v = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) throw PolyError("trailing input in expression");
    return v;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(uint8_t(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  RatFunc parse_expr() {
    RatFunc v = eat('-') ? -parse_term() : (eat('+'), parse_term());
    while (true) {
      if (eat('+')) v = v + parse_term();
      else if (eat('-')) v = v - parse_term();
      else return v;
    }
  }

  RatFunc parse_term() {
    RatFunc v = parse_factor();
    while (true) {
      if (eat('*')) v = v * parse_factor();
      else if (eat('/')) v = v / parse_factor();
      else return v;
    }
  }

  RatFunc parse_factor() {
    RatFunc v = parse_primary();
    if (eat('^')) {
      bool neg = eat('-');
      long k = parse_integer();
      v = v.pow(int(neg ? -k : k));
    }
    return v;
  }

  long parse_integer() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(uint8_t(text_[pos_]))) ++pos_;
    if (start == pos_) throw PolyError("expected integer");
    return std::stol(text_.substr(start, pos_ - start));
  }

  RatFunc parse_primary() {
    skip_ws();
    if (eat('(')) {
      RatFunc v = parse_expr();
      if (!eat(')')) throw PolyError("expected ')'");
      return v;
    }
    if (eat('-')) return -parse_primary();
    char c = peek();
    if (std::isdigit(uint8_t(c))) {
      long v = parse_integer();
      return RatFunc::constant(n_, FieldElem::from_int(spec_, v));
    }
    if (c == 'X' || c == 'x') {
      ++pos_;
      long r = parse_integer();
      if (r < 1 || r > n_) throw PolyError("variable index out of range");
      return RatFunc::variable(n_, spec_, int(r));
    }
    if (std::isalpha(uint8_t(c))) {
      size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(uint8_t(text_[pos_]))) ++pos_;
      std::string name = text_.substr(start, pos_ - start);
      if (name == "zeta" && spec_->kind() == FieldSpec::Kind::Cyclotomic)
        return RatFunc::constant(n_, FieldElem::zeta(spec_));
      auto it = consts_.find(name);
      if (it != consts_.end()) return RatFunc::constant(n_, it->second);
      throw PolyError("unknown symbol '" + name + "'");
    }
    throw PolyError("unexpected character in expression");
  }

  std::string text_;
  size_t pos_ = 0;
  int n_;
  FieldSpecPtr spec_;
  std::map<std::string, FieldElem> consts_;
};

inline RatFunc parse_ratfunc(const std::string& s, int n, const FieldSpecPtr& spec,
                             std::map<std::string, FieldElem> consts = {}) {
  return RatFuncParser(s, n, spec, std::move(consts)).parse();
}

}  // namespace hecke
