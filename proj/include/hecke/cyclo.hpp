/**
 * @file cyclo.hpp
 * @brief The finite-dimensional cyclotomic quotient H(Λ) / H_q(Λ): normal-form
 *        basis {X^a T_w : 0 ≤ a_r < ℓ}, terminating rewriting, idempotents
 *        e(i) via minimal-polynomial CRT projectors, the central idempotent
 *        e(𝒞), and Neumann-series local inverses.
 *
 * Rewriting rules:
 *   (A) push X's leftward through T's (polynomial Demazure corrections),
 *   (B) X_1^ℓ  ->  X_1^ℓ − c(X_1) with c(t) = Π_i (t − v_i)^{Λ_i},
 *   (C) X_s^ℓ  ->  T_{s-1} X_{s-1} T_{s-1} X_s^{ℓ-1} + T_{s-1} X_s^{ℓ-1}
 *       (degenerate; non-degenerate: q^{-1} T_{s-1} X_{s-1} T_{s-1} X_s^{ℓ-1}),
 *       precomputed bottom-up in the variable index so each reduction of X_s
 *       only ever requests normal forms of strictly smaller variables.
 */
#pragma once

#include <cstdlib>
#include <memory>
#include <sstream>

#include "linalg.hpp"
#include "suites.hpp"

namespace hecke {

struct CycloError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FuelExhausted : CycloError {
  FuelExhausted() : CycloError("rewriting fuel exhausted (implementation bug)") {}
};
struct CapExceeded : CycloError {
  explicit CapExceeded(const std::string& m) : CycloError(m) {}
};
struct DimensionMismatch : CycloError {
  explicit DimensionMismatch(const std::string& m) : CycloError(m) {}
};
struct UnexpectedEigenvalue : CycloError {
  explicit UnexpectedEigenvalue(const std::string& m) : CycloError(m) {}
};
struct VerificationFailed : CycloError {
  explicit VerificationFailed(const std::string& m) : CycloError(m) {}
};

// ---------------------------------------------------------------------------
// Univariate polynomials over the configured field (dense, low-to-high).

namespace detail_upoly {

using UPoly = std::vector<FieldElem>;

inline void trim(UPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}
inline int deg(const UPoly& p) { return int(p.size()) - 1; }

inline UPoly add(const UPoly& a, const UPoly& b) {
  UPoly r = a;
  if (r.size() < b.size()) r.resize(b.size(), FieldElem::zero(b[0].spec()));
  for (size_t k = 0; k < b.size(); ++k) r[k] = r[k] + b[k];
  trim(r);
  return r;
}

inline UPoly scale(const UPoly& a, const FieldElem& c) {
  if (c.is_zero()) return {};
  UPoly r = a;
  for (auto& x : r) x = x * c;
  return r;
}

inline UPoly mul(const UPoly& a, const UPoly& b, const FieldSpecPtr& spec) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, FieldElem::zero(spec));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  trim(r);
  return r;
}

/// Remainder of a by b (lead of b must be invertible).
inline UPoly mod(UPoly a, const UPoly& b) {
  if (b.empty()) throw DivisionByZero();
  FieldElem li = b.back().inv();
  while (int(a.size()) >= int(b.size())) {
    FieldElem c = a.back() * li;
    size_t off = a.size() - b.size();
    for (size_t k = 0; k < b.size(); ++k) a[off + k] = a[off + k] - c * b[k];
    trim(a);
  }
  return a;
}

inline FieldElem eval(const UPoly& p, const FieldElem& x) {
  FieldElem v = FieldElem::zero(x.spec());
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
  return v;
}

/// Bezout coefficient u with u*a ≡ 1 (mod m), for gcd(a, m) = 1.
inline UPoly inverse_mod(const UPoly& a, const UPoly& m, const FieldSpecPtr& spec) {
  // Extended Euclid on (m, a).
  UPoly r0 = m, r1 = mod(a, m);
  UPoly t0 = {}, t1 = {FieldElem::one(spec)};
  while (!r1.empty()) {
    // r0 = q*r1 + r2
    UPoly q(std::max<int>(0, deg(r0) - deg(r1)) + 1, FieldElem::zero(spec));
    UPoly rem = r0;
    FieldElem li = r1.back().inv();
    while (int(rem.size()) >= int(r1.size())) {
      FieldElem c = rem.back() * li;
      size_t off = rem.size() - r1.size();
      q[off] = q[off] + c;
      for (size_t k = 0; k < r1.size(); ++k) rem[off + k] = rem[off + k] - c * r1[k];
      trim(rem);
    }
    trim(q);
    UPoly t2 = add(t0, scale(mul(q, t1, spec), -FieldElem::one(spec)));
    r0 = std::move(r1);
    r1 = std::move(rem);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (deg(r0) != 0) throw CycloError("inverse_mod: inputs not coprime");
  return mod(scale(t0, r0[0].inv()), m);
}

}  // namespace detail_upoly

// ---------------------------------------------------------------------------

struct CycloParams {
  HeckeFlavor flavor;
  int n = 1;
  std::map<long, int> lambda;  // residue -> multiplicity Λ_i > 0

  int level() const {
    int l = 0;
    for (const auto& [i, m] : lambda) {
      if (m < 0) throw CycloError("negative multiplicity in lambda");
      l += m;
    }
    return l;
  }
  int multiplicity(long residue) const {
    long e = flavor.e();
    if (e > 0) residue = ((residue % e) + e) % e;
    auto it = lambda.find(residue);
    return it == lambda.end() ? 0 : it->second;
  }
};

class CycloElem;

class CycloAlgebra : public std::enable_shared_from_this<CycloAlgebra> {
 public:
  using TermMap = std::map<Perm, MultiPoly>;

  friend std::shared_ptr<const CycloAlgebra> build_algebra(const CycloParams&, long);

  const CycloParams& params() const { return params_; }
  const HeckeFlavor& flavor() const { return params_.flavor; }
  const FieldSpecPtr& spec() const { return params_.flavor.spec(); }
  int n() const { return params_.n; }
  int level() const { return level_; }
  size_t dim() const { return size_t(expo_count_) * perms_.size(); }
  const std::vector<Perm>& perms() const { return perms_; }

  /// The defining cyclotomic polynomial c(t) = Π (t - v_i)^{Λ_i}.
  const detail_upoly::UPoly& defining_polynomial() const { return cyclo_; }

  // -- element factories (defined after CycloElem) --
  CycloElem zero_elem() const;
  CycloElem one_elem() const;
  CycloElem gen_T(int r) const;
  CycloElem gen_X(int r, int power = 1) const;
  CycloElem from_poly(const MultiPoly& f) const;
  CycloElem from_terms(TermMap m) const;

  /// Dense coordinates of a normalized term map over the basis {X^a T_w}.
  std::vector<FieldElem> coords(const TermMap& m) const {
    std::vector<FieldElem> v(dim(), FieldElem::zero(spec()));
    for (const auto& [w, f] : m) {
      int wi = perm_index_.at(w);
      for (const auto& [e, c] : f.terms()) {
        long rank = 0, mult = 1;
        for (int r = 0; r < params_.n; ++r) {
          if (e[r] < 0 || e[r] >= level_)
            throw CycloError("coords: term map not in normal form");
          rank += e[r] * mult;
          mult *= level_;
        }
        v[size_t(rank) * perms_.size() + size_t(wi)] = c;
      }
    }
    return v;
  }

  // -- rewriting core (public: CycloElem delegates here) --

  TermMap mul_terms(const TermMap& a, const TermMap& b) const {
    TermMap out;
    for (const auto& [v, g] : b) {
      TermMap t;
      for (const auto& [w, f] : a)
        for (const auto& [u, h] : push_poly(w, g)) add_into(t, u, f * h);
      for (int r : v.reduced_word()) t = mul_right_T(t, r);
      for (auto& [w, f] : t) add_into(out, w, f);
    }
    prune(out);
    normalize(out, params_.n);
    return out;
  }

  void normalize(TermMap& m, int max_var) const {
    long fuel = fuel_;
    for (;;) {
      prune(m);
      int s = 0;
      for (int v = max_var; v >= 1; --v) {
        for (const auto& [w, f] : m) {
          if (f.has_negative_exponent())
            throw CycloError("negative exponent reached the rewriting core");
          if (f.degree_in(v) >= level_) {
            s = v;
            break;
          }
        }
        if (s) break;
      }
      if (!s) return;
      if (!nf_ready_[size_t(s)])
        throw CycloError("normal form for this variable not yet available");
      TermMap out;
      for (const auto& [w, f] : m) {
        MultiPoly keep = MultiPoly::zero(params_.n, spec());
        for (const auto& [e, c] : f.terms()) {
          if (--fuel <= 0) throw FuelExhausted();
          if (e[s - 1] < level_) {
            keep.add_term(e, c);
            continue;
          }
          Expo base = e;
          base[s - 1] -= level_;
          MultiPoly mono = MultiPoly::monomial(params_.n, base, c);
          TermMap t;
          for (const auto& [u, p] : nf_xl_[size_t(s)]) add_into(t, u, mono * p);
          for (int r : w.reduced_word()) t = mul_right_T(t, r);
          for (auto& [u, p] : t) add_into(out, u, p);
        }
        add_into(out, w, keep);
      }
      m = std::move(out);
    }
  }

  TermMap mul_right_T(const TermMap& a, int r) const {
    TermMap out;
    Perm s = Perm::sigma(params_.n, r);
    bool deg = flavor().is_degenerate();
    for (const auto& [w, f] : a) {
      Perm ws = w * s;
      if (!w.descent(r)) {
        add_into(out, ws, f);
      } else if (deg) {
        add_into(out, ws, f);
      } else {
        const FieldElem& q = flavor().q();
        add_into(out, w, f.scaled(q - FieldElem::one(spec())));
        add_into(out, ws, f.scaled(q));
      }
    }
    prune(out);
    return out;
  }

  TermMap mul_left_T(int r, const TermMap& a) const {
    TermMap out;
    Perm s = Perm::sigma(params_.n, r);
    bool deg = flavor().is_degenerate();
    for (const auto& [w, f] : a) {
      MultiPoly sf = f.applied(s);
      Perm sw = s * w;
      if (!w.left_descent(r)) {
        add_into(out, sw, sf);
      } else if (deg) {
        add_into(out, sw, sf);
      } else {
        const FieldElem& q = flavor().q();
        add_into(out, w, sf.scaled(q - FieldElem::one(spec())));
        add_into(out, sw, sf.scaled(q));
      }
      add_into(out, w, poly_corr(r, f));
    }
    prune(out);
    return out;
  }

  /// T_w · f as sum of h_v T_v (no cyclotomic reduction).
  TermMap push_poly(const Perm& w, const MultiPoly& f) const {
    TermMap out;
    if (w.is_identity()) {
      if (!f.is_zero()) out.emplace(w, f);
      return out;
    }
    auto word = w.reduced_word();
    int r = word.back();
    Perm s = Perm::sigma(params_.n, r);
    Perm u = w * s;
    TermMap head = push_poly(u, f.applied(s));
    for (const auto& [v, h] : head) {
      Perm vs = v * s;
      if (!v.descent(r)) {
        add_into(out, vs, h);
      } else if (flavor().is_degenerate()) {
        add_into(out, vs, h);
      } else {
        const FieldElem& q = flavor().q();
        add_into(out, v, h.scaled(q - FieldElem::one(spec())));
        add_into(out, vs, h.scaled(q));
      }
    }
    MultiPoly corr = poly_corr(r, f);
    if (!corr.is_zero())
      for (const auto& [v, h] : push_poly(u, corr)) add_into(out, v, h);
    prune(out);
    return out;
  }

  MultiPoly poly_demazure(int r, const MultiPoly& f) const {
    Perm s = Perm::sigma(params_.n, r);
    MultiPoly diff = f.applied(s) - f;
    if (diff.is_zero()) return diff;
    MultiPoly den = MultiPoly::variable(params_.n, spec(), r) -
                    MultiPoly::variable(params_.n, spec(), r + 1);
    return divexact(diff, den);
  }

  MultiPoly poly_corr(int r, const MultiPoly& f) const {
    MultiPoly d = poly_demazure(r, f);
    if (flavor().is_degenerate()) return d;
    MultiPoly x = MultiPoly::variable(params_.n, spec(), r + 1);
    return (x * d).scaled(flavor().q() - FieldElem::one(spec()));
  }

  static void add_into(TermMap& m, const Perm& w, const MultiPoly& f) {
    if (f.is_zero()) return;
    auto it = m.find(w);
    if (it == m.end())
      m.emplace(w, f);
    else
      it->second = it->second + f;
  }

  static void prune(TermMap& m) {
    for (auto it = m.begin(); it != m.end();)
      it = it->second.is_zero() ? m.erase(it) : std::next(it);
  }

  const TermMap& nf_x_inverse(int r) const {
    if (flavor().is_degenerate())
      throw CycloError("X inverses require the non-degenerate flavor");
    return nf_xinv_[size_t(r)];
  }

 private:
  explicit CycloAlgebra(CycloParams p) : params_(std::move(p)) {
    level_ = params_.level();
    if (level_ < 1) throw CycloError("level must be at least 1");
    const char* env = std::getenv("HECKE_FUEL");
    fuel_ = env ? std::atol(env) : 1000000L;
    if (fuel_ <= 0) fuel_ = 1000000L;
    perms_ = enumerate_group(params_.n);
    for (size_t k = 0; k < perms_.size(); ++k) perm_index_[perms_[k]] = int(k);
    expo_count_ = 1;
    for (int r = 0; r < params_.n; ++r) expo_count_ *= level_;
    build_cyclotomic();
    build_nf_tables();
  }

  void build_cyclotomic() {
    const auto& sp = spec();
    cyclo_ = {FieldElem::one(sp)};
    for (const auto& [i, mult] : params_.lambda) {
      FieldElem v = residue_embed(i, sp, flavor());
      detail_upoly::UPoly lin = {-v, FieldElem::one(sp)};
      for (int k = 0; k < mult; ++k) cyclo_ = detail_upoly::mul(cyclo_, lin, sp);
    }
  }

  void build_nf_tables() {
    int n = params_.n;
    nf_xl_.assign(size_t(n) + 1, TermMap{});
    nf_ready_.assign(size_t(n) + 1, 0);
    // Variable 1: X_1^l = X_1^l - c(X_1).
    MultiPoly low = MultiPoly::zero(n, spec());
    for (int k = 0; k < level_; ++k) {
      Expo e(n, 0);
      e[0] = k;
      low.add_term(e, -cyclo_[size_t(k)]);
    }
    if (!low.is_zero()) nf_xl_[1].emplace(Perm::identity(n), low);
    nf_ready_[1] = 1;
    // Variables 2..n, bottom-up.
    for (int s = 2; s <= n; ++s) {
      Expo e(n, 0);
      e[s - 1] = level_ - 1;
      TermMap base;
      base.emplace(Perm::identity(n),
                   MultiPoly::monomial(n, e, FieldElem::one(spec())));
      TermMap A = mul_left_T(s - 1, base);
      normalize(A, s - 1);
      TermMap B;
      MultiPoly xs1 = MultiPoly::variable(n, spec(), s - 1);
      for (const auto& [w, f] : A) add_into(B, w, xs1 * f);
      normalize(B, s - 1);
      TermMap C = mul_left_T(s - 1, B);
      normalize(C, s - 1);
      TermMap nf;
      if (flavor().is_degenerate()) {
        nf = C;
        for (const auto& [w, f] : A) add_into(nf, w, f);
      } else {
        for (const auto& [w, f] : C) add_into(nf, w, f.scaled(flavor().q().inv()));
      }
      prune(nf);
      normalize(nf, s - 1);
      for (const auto& [w, f] : nf) {
        for (int v = 1; v <= n; ++v) {
          if (f.degree_in(v) >= level_ || (v > s && f.degree_in(v) > 0))
            throw CycloError("rule (C) produced an out-of-range normal form");
        }
      }
      nf_xl_[size_t(s)] = std::move(nf);
      nf_ready_[size_t(s)] = 1;
    }
    // Laurent inverses (non-degenerate only).
    if (!flavor().is_degenerate()) {
      nf_xinv_.assign(size_t(n) + 1, TermMap{});
      const FieldElem c0 = cyclo_[0];
      if (c0.is_zero()) throw CycloError("defining polynomial has zero constant term");
      MultiPoly p = MultiPoly::zero(n, spec());
      for (int k = 1; k <= level_; ++k) {
        Expo e(n, 0);
        e[0] = k - 1;
        p.add_term(e, -(cyclo_[size_t(k)] / c0));
      }
      nf_xinv_[1].emplace(Perm::identity(n), p);
      const FieldElem& q = flavor().q();
      FieldElem qm1 = q - FieldElem::one(spec());
      for (int s = 2; s <= n; ++s) {
        // X_s^{-1} = q T_{s-1}^{-1} X_{s-1}^{-1} T_{s-1}^{-1},
        // T_r^{-1} = q^{-1}(T_r - (q-1)).
        const TermMap& prev = nf_xinv_[size_t(s - 1)];
        TermMap L = mul_left_T(s - 1, prev);
        for (const auto& [w, f] : prev) add_into(L, w, f.scaled(-qm1));
        TermMap R = mul_right_T(L, s - 1);
        for (const auto& [w, f] : L) add_into(R, w, f.scaled(-qm1));
        for (auto& [w, f] : R) f = f.scaled(q.inv());
        prune(R);
        normalize(R, params_.n);
        nf_xinv_[size_t(s)] = std::move(R);
      }
    }
  }

  CycloParams params_;
  int level_ = 0;
  long expo_count_ = 1;
  long fuel_ = 1000000;
  detail_upoly::UPoly cyclo_;
  std::vector<Perm> perms_;
  std::map<Perm, int> perm_index_;
  std::vector<char> nf_ready_;
  std::vector<TermMap> nf_xl_;    // nf_xl_[s] = NF(X_s^l)
  std::vector<TermMap> nf_xinv_;  // nf_xinv_[s] = NF(X_s^{-1})
};

using CycloAlgPtr = std::shared_ptr<const CycloAlgebra>;

class CycloElem {
 public:
  CycloElem() = default;
  CycloElem(CycloAlgPtr alg, CycloAlgebra::TermMap terms)
      : alg_(std::move(alg)), terms_(std::move(terms)) {}

  const CycloAlgPtr& alg() const { return alg_; }
  const CycloAlgebra::TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::vector<FieldElem> coords() const { return alg_->coords(terms_); }

  friend CycloElem operator+(const CycloElem& a, const CycloElem& b) {
    a.check(b);
    auto m = a.terms_;
    for (const auto& [w, f] : b.terms_) CycloAlgebra::add_into(m, w, f);
    CycloAlgebra::prune(m);
    return CycloElem(a.alg_, std::move(m));
  }
  friend CycloElem operator-(const CycloElem& a) {
    auto m = a.terms_;
    for (auto& [w, f] : m) f = -f;
    return CycloElem(a.alg_, std::move(m));
  }
  friend CycloElem operator-(const CycloElem& a, const CycloElem& b) {
    return a + (-b);
  }
  friend CycloElem operator*(const CycloElem& a, const CycloElem& b) {
    a.check(b);
    return CycloElem(a.alg_, a.alg_->mul_terms(a.terms_, b.terms_));
  }
  CycloElem scaled(const FieldElem& c) const {
    auto m = terms_;
    for (auto& [w, f] : m) f = f.scaled(c);
    CycloAlgebra::prune(m);
    return CycloElem(alg_, std::move(m));
  }
  friend bool operator==(const CycloElem& a, const CycloElem& b) {
    a.check(b);
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const CycloElem& a, const CycloElem& b) { return !(a == b); }

  CycloElem pow(int k) const {
    CycloElem r = alg_->one_elem();
    for (int j = 0; j < k; ++j) r = r * *this;
    return r;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [w, f] : terms_) {
      if (!s.empty()) s += "  +  ";
      s += "(" + f.to_string() + ")*T" + w.to_string();
    }
    return s;
  }

 private:
  void check(const CycloElem& b) const {
    if (!alg_ || !b.alg_) throw CycloError("uninitialized element");
    if (alg_ != b.alg_) throw CycloError("elements from different algebras");
  }

  CycloAlgPtr alg_;
  CycloAlgebra::TermMap terms_;
};

inline CycloElem CycloAlgebra::zero_elem() const {
  return CycloElem(shared_from_this(), {});
}
inline CycloElem CycloAlgebra::one_elem() const {
  TermMap m;
  m.emplace(Perm::identity(params_.n), MultiPoly::one(params_.n, spec()));
  return CycloElem(shared_from_this(), std::move(m));
}
inline CycloElem CycloAlgebra::gen_T(int r) const {
  TermMap m;
  m.emplace(Perm::sigma(params_.n, r), MultiPoly::one(params_.n, spec()));
  return CycloElem(shared_from_this(), std::move(m));
}
inline CycloElem CycloAlgebra::from_poly(const MultiPoly& f) const {
  if (f.has_negative_exponent())
    throw CycloError("use gen_X with a negative power for Laurent atoms");
  TermMap m;
  m.emplace(Perm::identity(params_.n), f);
  normalize(m, params_.n);
  return CycloElem(shared_from_this(), std::move(m));
}
inline CycloElem CycloAlgebra::from_terms(TermMap m) const {
  normalize(m, params_.n);
  return CycloElem(shared_from_this(), std::move(m));
}
inline CycloElem CycloAlgebra::gen_X(int r, int power) const {
  if (power >= 0)
    return from_poly(MultiPoly::variable(params_.n, spec(), r, power));
  CycloElem inv(shared_from_this(), nf_x_inverse(r));
  CycloElem out = one_elem();
  for (int k = 0; k < -power; ++k) out = out * inv;
  return out;
}

inline std::shared_ptr<const CycloAlgebra> build_algebra(const CycloParams& params,
                                                         long cap = 5000) {
  CycloParams p = params;
  long lvl = p.level();
  long d = 1;
  for (int r = 0; r < p.n; ++r) d *= lvl;
  for (int r = 2; r <= p.n; ++r) d *= r;
  if (d > cap)
    throw CapExceeded("dimension " + std::to_string(d) + " exceeds cap " +
                      std::to_string(cap));
  std::shared_ptr<CycloAlgebra> alg(new CycloAlgebra(p));
  // Span-closure certificate: the unit must generate the full basis under
  // left multiplication by the generators.
  EchelonSpan span(alg->spec());
  std::vector<CycloElem> frontier = {alg->one_elem()};
  span.insert(frontier[0].coords());
  std::vector<CycloElem> gens;
  for (int r = 1; r < alg->n(); ++r) gens.push_back(alg->gen_T(r));
  for (int r = 1; r <= alg->n(); ++r) gens.push_back(alg->gen_X(r));
  while (!frontier.empty() && span.dimension() < alg->dim()) {
    std::vector<CycloElem> next;
    for (const auto& v : frontier)
      for (const auto& g : gens) {
        CycloElem u = g * v;
        if (!u.is_zero() && span.insert(u.coords())) next.push_back(u);
      }
    frontier = std::move(next);
  }
  if (span.dimension() != alg->dim())
    throw DimensionMismatch("span closure reached " +
                            std::to_string(span.dimension()) + " of " +
                            std::to_string(alg->dim()));
  return alg;
}

/// All level^n * n! monomial basis elements X^a T_w, in basis order.
inline std::vector<CycloElem> monomial_basis(const CycloAlgPtr& alg) {
  std::vector<CycloElem> out;
  int n = alg->n(), l = alg->level();
  std::vector<int> a(size_t(n), 0);
  for (;;) {
    CycloElem xs = alg->one_elem();
    for (int r = 1; r <= n; ++r) xs = xs * alg->gen_X(r, a[size_t(r) - 1]);
    for (const auto& w : alg->perms()) {
      CycloElem t = xs;
      for (int r : w.reduced_word()) t = t * alg->gen_T(r);
      out.push_back(t);
    }
    int r = 0;
    while (r < n && ++a[size_t(r)] == l) a[size_t(r++)] = 0;
    if (r == n) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Word reduction (the CLI / test entry point for raw generator words).

inline CycloElem reduce_word(const CycloAlgPtr& alg, const std::string& word) {
  CycloElem out = alg->one_elem();
  size_t pos = 0;
  auto skip = [&] {
    while (pos < word.size() &&
           (std::isspace(uint8_t(word[pos])) || word[pos] == '*'))
      ++pos;
  };
  auto read_int = [&]() {
    bool neg = false;
    if (pos < word.size() && (word[pos] == '-' || word[pos] == '+'))
      neg = word[pos++] == '-';
    if (pos >= word.size() || !std::isdigit(uint8_t(word[pos])))
      throw CycloError("expected an integer in generator word");
    long v = 0;
    while (pos < word.size() && std::isdigit(uint8_t(word[pos])))
      v = v * 10 + (word[pos++] - '0');
    return neg ? -v : v;
  };
  skip();
  while (pos < word.size()) {
    char c = word[pos++];
    if (c == 'T') {
      out = out * alg->gen_T(int(read_int()));
    } else if (c == 'X') {
      int idx = int(read_int());
      int pw = 1;
      if (pos < word.size() && word[pos] == '^') {
        ++pos;
        pw = int(read_int());
      }
      out = out * alg->gen_X(idx, pw);
    } else {
      throw CycloError(std::string("unexpected character '") + c +
                       "' in generator word");
    }
    skip();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Idempotents.

struct IdempotentSystem {
  CycloAlgPtr alg;
  std::map<ResidueTuple, CycloElem> eps;  // nonzero e(i) only
  std::vector<std::map<long, int>> root_mult;  // per r (1-based): residue -> multiplicity

  CycloElem e_of(const ResidueTuple& i) const {
    auto it = eps.find(i);
    return it == eps.end() ? alg->zero_elem() : it->second;
  }
  CycloElem e_of_orbit(const Orbit& orbit) const {
    CycloElem s = alg->zero_elem();
    for (const auto& [i, e] : eps)
      if (orbit.contains(i)) s = s + e;
    return s;
  }
};

inline IdempotentSystem compute_idempotents(const CycloAlgPtr& alg) {
  using detail_upoly::UPoly;
  const auto& sp = alg->spec();
  const auto& fl = alg->flavor();
  int n = alg->n();
  long e = fl.e();

  IdempotentSystem sys;
  sys.alg = alg;
  sys.root_mult.assign(size_t(n) + 1, {});

  std::vector<std::vector<long>> residues_per_var(size_t(n) + 1);
  std::vector<std::map<long, CycloElem>> projector(size_t(n) + 1);

  std::vector<long> candidates;
  if (e > 0)
    for (long c = 0; c < e; ++c) candidates.push_back(c);
  else
    for (long c = -kResidueWindow; c <= kResidueWindow; ++c) candidates.push_back(c);

  for (int r = 1; r <= n; ++r) {
    CycloElem X = alg->gen_X(r);
    // Minimal polynomial by Krylov iteration on the regular representation.
    EchelonSpan span(sp);
    UPoly minpoly;
    CycloElem p = alg->one_elem();
    for (size_t k = 0;; ++k) {
      std::vector<FieldElem> aug(k + 1, FieldElem::zero(sp));
      aug[k] = FieldElem::one(sp);
      std::vector<FieldElem> dep;
      if (!span.insert(p.coords(), aug, &dep)) {
        minpoly = dep;
        detail_upoly::trim(minpoly);
        break;
      }
      p = X * p;
      if (k > alg->dim()) throw CycloError("minimal polynomial search overran");
    }
    // Factor over the allowed residue values.
    UPoly rest = minpoly;
    std::map<long, int> mult;
    for (long c : candidates) {
      FieldElem v = residue_embed(c, sp, fl);
      while (detail_upoly::deg(rest) > 0 && detail_upoly::eval(rest, v).is_zero()) {
        // synthetic division rest / (t - v)
        UPoly quo(rest.size() - 1, FieldElem::zero(sp));
        FieldElem carry = FieldElem::zero(sp);
        for (int k = detail_upoly::deg(rest); k >= 1; --k) {
          carry = rest[size_t(k)] + carry;
          quo[size_t(k) - 1] = carry;
          carry = carry * v;
        }
        rest = quo;
        detail_upoly::trim(rest);
        ++mult[c];
      }
    }
    if (detail_upoly::deg(rest) > 0)
      throw UnexpectedEigenvalue(
          "minimal polynomial of X_" + std::to_string(r) +
          " has a root outside the residue values");
    sys.root_mult[size_t(r)] = mult;
    // CRT projectors u ≡ 1 mod (t-v)^k, u ≡ 0 mod the complement.
    UPoly m = {FieldElem::one(sp)};
    for (const auto& [c, k] : mult) {
      FieldElem v = residue_embed(c, sp, fl);
      UPoly lin = {-v, FieldElem::one(sp)};
      for (int j = 0; j < k; ++j) m = detail_upoly::mul(m, lin, sp);
    }
    for (const auto& [c, k] : mult) {
      FieldElem v = residue_embed(c, sp, fl);
      UPoly a = {FieldElem::one(sp)};
      UPoly lin = {-v, FieldElem::one(sp)};
      for (int j = 0; j < k; ++j) a = detail_upoly::mul(a, lin, sp);
      // complement b = m / (t-v)^k by repeated synthetic division
      UPoly b = m;
      for (int j = 0; j < k; ++j) {
        UPoly quo(b.size() - 1, FieldElem::zero(sp));
        FieldElem carry = FieldElem::zero(sp);
        for (int t = detail_upoly::deg(b); t >= 1; --t) {
          carry = b[size_t(t)] + carry;
          quo[size_t(t) - 1] = carry;
          carry = carry * v;
        }
        b = quo;
        detail_upoly::trim(b);
      }
      UPoly u = detail_upoly::inverse_mod(b, a, sp);
      UPoly proj = detail_upoly::mod(detail_upoly::mul(u, b, sp), m);
      // Evaluate proj at the element X_r (Horner).
      CycloElem val = alg->zero_elem();
      for (auto it = proj.rbegin(); it != proj.rend(); ++it)
        val = val * X + alg->one_elem().scaled(*it);
      projector[size_t(r)].emplace(c, val);
      residues_per_var[size_t(r)].push_back(c);
    }
  }

  // Cartesian product of per-variable residues; keep nonzero products.
  std::vector<long> idx(size_t(n), 0);
  for (;;) {
    std::vector<long> entries(size_t(n), 0);
    for (int r = 0; r < n; ++r)
      entries[size_t(r)] = residues_per_var[size_t(r) + 1][size_t(idx[size_t(r)])];
    CycloElem prod = alg->one_elem();
    for (int r = 1; r <= n; ++r)
      prod = prod * projector[size_t(r)].at(entries[size_t(r) - 1]);
    if (!prod.is_zero()) sys.eps.emplace(ResidueTuple(e, entries), prod);
    int r = 0;
    while (r < n) {
      if (++idx[size_t(r)] < long(residues_per_var[size_t(r) + 1].size())) break;
      idx[size_t(r)] = 0;
      ++r;
    }
    if (r == n) break;
  }
  return sys;
}

// ---------------------------------------------------------------------------
// Local inverses by Neumann series.

inline CycloElem local_inverse(const MultiPoly& f, const ResidueTuple& i,
                               const IdempotentSystem& sys) {
  const auto& alg = sys.alg;
  FieldElem c = f.eval(residue_point(i, alg->spec(), alg->flavor()));
  if (c.is_zero()) throw PoleAtResidue();
  CycloElem ei = sys.e_of(i);
  if (ei.is_zero()) return alg->zero_elem();
  CycloElem g = ei - alg->from_poly(f).scaled(c.inv()) * ei;
  CycloElem term = ei, acc = ei;
  for (size_t k = 0; k <= alg->dim() && !term.is_zero(); ++k) {
    term = g * term;
    acc = acc + term;
  }
  if (!term.is_zero())
    throw VerificationFailed("Neumann series failed to terminate");
  CycloElem u = acc.scaled(c.inv());
  if (alg->from_poly(f) * u != ei)
    throw VerificationFailed("local inverse does not invert f on the block");
  return u;
}

// ---------------------------------------------------------------------------
// Lemma suites on the block side.

inline SuiteReport verify_commutation_lemma(const IdempotentSystem& sys,
                                            const Orbit& orbit) {
  const auto& alg = sys.alg;
  SuiteReport rep;
  rep.suite = "commutation-lemma";
  rep.params = {
      {"flavor", alg->flavor().is_degenerate() ? "degenerate" : "nondegenerate"},
      {"field", alg->spec()->name()},
      {"n", std::to_string(alg->n())},
      {"level", std::to_string(alg->level())},
      {"orbit", orbit.members().front().to_string()},
  };
  int n = alg->n();
  const auto& sp = alg->spec();
  for (int r = 1; r < n; ++r) {
    CycloElem T = alg->gen_T(r);
    Perm s = Perm::sigma(n, r);
    for (const auto& [i, ei] : sys.eps) {
      if (i[r] == i[r + 1]) {
        rep.add("T-e-commutation", "r=" + std::to_string(r) + ",equal",
                T * ei == ei * T);
        continue;
      }
      ResidueTuple si = i.acted_by(s);
      CycloElem esi = sys.e_of(si);
      MultiPoly xr = MultiPoly::variable(n, sp, r);
      MultiPoly xr1 = MultiPoly::variable(n, sp, r + 1);
      CycloElem rhs = alg->zero_elem();
      if (alg->flavor().is_degenerate()) {
        MultiPoly d = xr - xr1;
        rhs = esi * T + local_inverse(d, si, sys) - local_inverse(d, i, sys);
      } else {
        MultiPoly d = xr1 - xr;
        FieldElem oneminusq = FieldElem::one(sp) - alg->flavor().q();
        CycloElem x1 = alg->from_poly(xr1);
        rhs = esi * T + (x1 * local_inverse(d, si, sys) -
                         x1 * local_inverse(d, i, sys))
                            .scaled(oneminusq);
      }
      rep.add("T-e-commutation", "r=" + std::to_string(r) + ",distinct",
              T * ei == rhs);
    }
  }
  // e(C) is central.
  CycloElem ec = sys.e_of_orbit(orbit);
  bool central = true;
  for (int r = 1; r < n; ++r)
    central = central && (alg->gen_T(r) * ec == ec * alg->gen_T(r));
  for (int r = 1; r <= n; ++r)
    central = central && (alg->gen_X(r) * ec == ec * alg->gen_X(r));
  rep.add("orbit-idempotent-central", "-", central);
  rep.add("orbit-idempotent-idempotent", "-", ec * ec == ec);
  rep.finalize();
  return rep;
}

inline SuiteReport verify_ideal_equality(const IdempotentSystem& sys,
                                         const Orbit& orbit) {
  const auto& alg = sys.alg;
  SuiteReport rep;
  rep.suite = "ideal-equality";
  rep.params = {
      {"flavor", alg->flavor().is_degenerate() ? "degenerate" : "nondegenerate"},
      {"field", alg->spec()->name()},
      {"n", std::to_string(alg->n())},
      {"level", std::to_string(alg->level())},
      {"orbit", orbit.members().front().to_string()},
  };
  int n = alg->n();
  const auto& sp = alg->spec();
  // (a) The defining polynomial evaluated at X_1 vanishes.
  MultiPoly cpoly = MultiPoly::zero(n, sp);
  const auto& c = alg->defining_polynomial();
  for (size_t k = 0; k < c.size(); ++k) {
    Expo ex(n, 0);
    ex[0] = int(k);
    cpoly.add_term(ex, c[k]);
  }
  rep.add("defining-polynomial-vanishes", "-", alg->from_poly(cpoly).is_zero());
  // (b) (X_1 - v_{i_1})^{Λ_{i_1}} e(i) = 0 for every i in the orbit.
  for (const auto& i : orbit.members()) {
    int mult = alg->params().multiplicity(i[1]);
    CycloElem ei = sys.e_of(i);
    if (mult == 0) {
      rep.add("vanishing-multiplicity-kills-block", "-", ei.is_zero());
      continue;
    }
    MultiPoly lin = MultiPoly::variable(n, sp, 1) -
                    MultiPoly::constant(n, residue_embed(i[1], sp, alg->flavor()));
    MultiPoly powp = MultiPoly::one(n, sp);
    for (int k = 0; k < mult; ++k) powp = powp * lin;
    rep.add("cyclotomic-y-relation", "-", (alg->from_poly(powp) * ei).is_zero());
  }
  rep.finalize();
  return rep;
}

}  // namespace hecke
