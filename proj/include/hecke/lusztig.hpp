/**
 * @file lusztig.hpp
 * @brief Normal-form elements of the Lusztig extension of the (degenerate or
 *        non-degenerate) affine Hecke algebra with rational coefficients and
 *        orbit idempotents, together with the kappa, y, Q, theta and psi
 *        constructors.
 *
 * Elements are stored as  sum over (i, w) of  eps(i) * f_{i,w}(X) * T_w,
 * idempotent and coefficient on the left of T_w.  All products are folded
 * back into this normal form through the generator rewriting rules:
 *
 *   T_r f      = sigma_r(f) T_r + d_r(f)                (degenerate)
 *   T_r f      = sigma_r(f) T_r + (q-1) X_{r+1} d_r(f)  (non-degenerate)
 *   T_r eps(i) = eps(s_r i) T_r + c_r (eps(s_r i) - eps(i))
 *   T_r^2      = 1            resp.  (q-1) T_r + q
 *
 * with c_r = 1/(X_r - X_{r+1}) resp. (q-1) X_{r+1}/(X_r - X_{r+1}).
 */
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "poly.hpp"

namespace hecke {

struct LusztigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FlavorMismatch : LusztigError {
  FlavorMismatch() : LusztigError("elements live over different flavors") {}
};
struct OrbitMismatch : LusztigError {
  OrbitMismatch() : LusztigError("elements live over different orbits") {}
};

/// Shared immutable context: flavor, orbit, and cached group data.
class LusztigContext {
 public:
  LusztigContext(HeckeFlavor flavor, Orbit orbit)
      : flavor_(std::move(flavor)), orbit_(std::move(orbit)) {
    if (flavor_.e() != orbit_.e())
      throw LusztigError("orbit quantum characteristic does not match flavor");
  }

  const HeckeFlavor& flavor() const { return flavor_; }
  const Orbit& orbit() const { return orbit_; }
  int n() const { return orbit_.n(); }
  const FieldSpecPtr& spec() const { return flavor_.spec(); }

  RatFunc xvar(int r) const { return RatFunc::variable(n(), spec(), r); }
  RatFunc rat_const(const FieldElem& c) const { return RatFunc::constant(n(), c); }
  RatFunc rat_int(long v) const {
    return RatFunc::constant(n(), FieldElem::from_int(spec(), v));
  }

  /// The epsilon-pushing coefficient c_r.
  RatFunc eps_corr(int r) const {
    RatFunc den = xvar(r) - xvar(r + 1);
    if (flavor_.is_degenerate()) return RatFunc::one(n(), spec()) / den;
    RatFunc qm1 = rat_const(flavor_.q() - FieldElem::one(spec()));
    return qm1 * xvar(r + 1) / den;
  }

  /// The polynomial-pushing correction of (fT): T_r f = sigma_r(f) T_r + corr.
  RatFunc poly_corr(int r, const RatFunc& f) const {
    RatFunc d = demazure(r, f);
    if (flavor_.is_degenerate()) return d;
    RatFunc qm1 = rat_const(flavor_.q() - FieldElem::one(spec()));
    return qm1 * xvar(r + 1) * d;
  }

  /// y_r on the idempotent block i, written in X-coordinates.
  RatFunc y_on(int r, const ResidueTuple& i) const {
    if (flavor_.is_degenerate())
      return xvar(r) - rat_const(residue_embed(i[r], spec(), flavor_));
    // 1 - q^{-i_r} X_r
    FieldElem qinv = flavor_.q().pow(-i[r]);
    return rat_int(1) - rat_const(qinv) * xvar(r);
  }

  /// Per-idempotent inverse substitution X_s -> y-coordinates:
  /// X_s = y_s + i_s resp. q^{i_s}(1 - y_s), as a RatFunc in y-variables.
  RatFunc x_in_y(int s, const ResidueTuple& i) const {
    RatFunc ys = RatFunc::variable(n(), spec(), s);
    if (flavor_.is_degenerate())
      return ys + rat_const(residue_embed(i[s], spec(), flavor_));
    return rat_const(flavor_.q().pow(i[s])) * (rat_int(1) - ys);
  }

 private:
  HeckeFlavor flavor_;
  Orbit orbit_;
};

using LusztigCtxPtr = std::shared_ptr<const LusztigContext>;

inline LusztigCtxPtr make_lusztig_context(const HeckeFlavor& flavor, const Orbit& orbit) {
  return std::make_shared<LusztigContext>(flavor, orbit);
}

class LusztigElem {
 public:
  using Key = std::pair<ResidueTuple, Perm>;

  LusztigElem() = default;
  explicit LusztigElem(LusztigCtxPtr ctx) : ctx_(std::move(ctx)) {}

  static LusztigElem zero(const LusztigCtxPtr& ctx) { return LusztigElem(ctx); }

  /// The identity: sum of eps(i) over the orbit.
  static LusztigElem one(const LusztigCtxPtr& ctx) {
    LusztigElem a(ctx);
    Perm id = Perm::identity(ctx->n());
    for (const auto& i : ctx->orbit().members())
      a.coeffs_[{i, id}] = RatFunc::one(ctx->n(), ctx->spec());
    return a;
  }

  static LusztigElem eps(const LusztigCtxPtr& ctx, const ResidueTuple& i) {
    if (!ctx->orbit().contains(i)) throw LusztigError("tuple outside the orbit");
    LusztigElem a(ctx);
    a.coeffs_[{i, Perm::identity(ctx->n())}] = RatFunc::one(ctx->n(), ctx->spec());
    return a;
  }

  /// A diagonal element: per-idempotent rational coefficients.
  static LusztigElem diagonal(const LusztigCtxPtr& ctx,
                              const std::function<RatFunc(const ResidueTuple&)>& f) {
    LusztigElem a(ctx);
    Perm id = Perm::identity(ctx->n());
    for (const auto& i : ctx->orbit().members()) a.add(i, id, f(i));
    return a;
  }

  static LusztigElem generator_T(const LusztigCtxPtr& ctx, int r) {
    LusztigElem a(ctx);
    Perm s = Perm::sigma(ctx->n(), r);
    for (const auto& i : ctx->orbit().members())
      a.coeffs_[{i, s}] = RatFunc::one(ctx->n(), ctx->spec());
    return a;
  }

  static LusztigElem poly(const LusztigCtxPtr& ctx, const RatFunc& f) {
    return diagonal(ctx, [&](const ResidueTuple&) { return f; });
  }

  static LusztigElem generator_X(const LusztigCtxPtr& ctx, int r, int k = 1) {
    if (k < 0 && ctx->flavor().is_degenerate())
      throw LusztigError("X inverse requires the non-degenerate flavor");
    return poly(ctx, RatFunc::variable(ctx->n(), ctx->spec(), r, k));
  }

  const LusztigCtxPtr& ctx() const { return ctx_; }
  const std::map<Key, RatFunc>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  void add(const ResidueTuple& i, const Perm& w, const RatFunc& f) {
    if (f.is_zero()) return;
    Key k{i, w};
    auto it = coeffs_.find(k);
    if (it == coeffs_.end()) {
      coeffs_.emplace(std::move(k), f);
    } else {
      it->second = it->second + f;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }

  friend LusztigElem operator+(const LusztigElem& a, const LusztigElem& b) {
    a.check(b);
    LusztigElem r = a;
    for (const auto& [k, f] : b.coeffs_) r.add(k.first, k.second, f);
    return r;
  }
  friend LusztigElem operator-(const LusztigElem& a) {
    LusztigElem r(a.ctx_);
    for (const auto& [k, f] : a.coeffs_) r.coeffs_.emplace(k, -f);
    return r;
  }
  friend LusztigElem operator-(const LusztigElem& a, const LusztigElem& b) {
    return a + (-b);
  }
  friend bool operator==(const LusztigElem& a, const LusztigElem& b) {
    a.check(b);
    return a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const LusztigElem& a, const LusztigElem& b) {
    return !(a == b);
  }

  LusztigElem scaled(const RatFunc& g) const {
    LusztigElem r(ctx_);
    for (const auto& [k, f] : coeffs_) r.add(k.first, k.second, g * f);
    return r;
  }

  /// Right multiplication by T_r.
  LusztigElem mul_right_T(int r) const {
    LusztigElem out(ctx_);
    Perm s = Perm::sigma(ctx_->n(), r);
    bool deg = ctx_->flavor().is_degenerate();
    for (const auto& [k, f] : coeffs_) {
      const auto& [i, w] = k;
      Perm ws = w * s;
      if (!w.descent(r)) {
        out.add(i, ws, f);
      } else if (deg) {
        out.add(i, ws, f);  // T_w T_r = T_{w s_r} via T_r^2 = 1
      } else {
        const FieldElem& q = ctx_->flavor().q();
        out.add(i, w, f.scaled(q - FieldElem::one(ctx_->spec())));
        out.add(i, ws, f.scaled(q));
      }
    }
    return out;
  }

  /// Right multiplication by a rational coefficient: pushes it leftward
  /// through every T_w along the reduced word.
  LusztigElem mul_right_poly(const RatFunc& g) const {
    LusztigElem out(ctx_);
    for (const auto& [k, f] : coeffs_) {
      const auto& [i, w] = k;
      for (const auto& [v, h] : push_poly(w, g)) out.add(i, v, f * h);
    }
    return out;
  }

  /// Right multiplication by eps(j).
  LusztigElem mul_right_eps(const ResidueTuple& j) const {
    LusztigElem out(ctx_);
    std::map<Perm, LusztigElem> cache;
    for (const auto& [k, f] : coeffs_) {
      const auto& [i, w] = k;
      auto it = cache.find(w);
      if (it == cache.end()) it = cache.emplace(w, t_word_times_eps(w, j)).first;
      for (const auto& [k2, h] : it->second.coeffs_) {
        if (k2.first == i) out.add(i, k2.second, f * h);
      }
    }
    return out;
  }

  /// Left multiplication by T_r (used for pushing idempotents leftward).
  LusztigElem left_mul_T(int r) const {
    LusztigElem out(ctx_);
    Perm s = Perm::sigma(ctx_->n(), r);
    bool deg = ctx_->flavor().is_degenerate();
    RatFunc c = ctx_->eps_corr(r);
    for (const auto& [k, f] : coeffs_) {
      const auto& [i, w] = k;
      ResidueTuple si = i.acted_by(s);
      // T_r eps(i) f T_w
      //   = eps(s_r i) sigma_r(f) (T_r T_w) + eps(s_r i) corr_r(f) T_w
      //   + c_r eps(s_r i) f T_w - c_r eps(i) f T_w
      RatFunc sf = f.applied(s);
      Perm sw = s * w;
      if (!w.left_descent(r)) {
        out.add(si, sw, sf);
      } else if (deg) {
        out.add(si, sw, sf);
      } else {
        const FieldElem& q = ctx_->flavor().q();
        out.add(si, w, sf.scaled(q - FieldElem::one(ctx_->spec())));
        out.add(si, sw, sf.scaled(q));
      }
      out.add(si, w, ctx_->poly_corr(r, f));
      out.add(si, w, c * f);
      out.add(i, w, -(c * f));
    }
    return out;
  }

  friend LusztigElem operator*(const LusztigElem& a, const LusztigElem& b) {
    a.check(b);
    LusztigElem out(a.ctx_);
    for (const auto& [k, g] : b.coeffs_) {
      const auto& [j, v] = k;
      LusztigElem c = a.mul_right_eps(j).mul_right_poly(g);
      for (int r : v.reduced_word()) c = c.mul_right_T(r);
      out = out + c;
    }
    return out;
  }

  /// Per-idempotent coefficients rewritten in y-coordinates.
  std::map<Key, RatFunc> to_y_coordinates() const {
    std::map<Key, RatFunc> out;
    int n = ctx_->n();
    for (const auto& [k, f] : coeffs_) {
      const auto& i = k.first;
      std::vector<RatFunc> sub;
      sub.reserve(n);
      for (int s = 1; s <= n; ++s) sub.push_back(ctx_->x_in_y(s, i));
      RatFunc zero = RatFunc::zero(n, ctx_->spec());
      RatFunc one = RatFunc::one(n, ctx_->spec());
      RatFunc num = f.num().eval_with(sub, zero, one);
      RatFunc den = f.den().eval_with(sub, zero, one);
      out.emplace(k, num / den);
    }
    return out;
  }

  /// True iff every coefficient's denominator is nonvanishing at its residue
  /// point, i.e. the element lies in the semi-rationalization.
  bool in_semirationalization() const {
    for (const auto& [k, f] : coeffs_) {
      auto pt = residue_point(k.first, ctx_->spec(), ctx_->flavor());
      if (f.den().eval(pt).is_zero()) return false;
    }
    return true;
  }

  std::string to_string() const {
    if (coeffs_.empty()) return "0";
    std::string s;
    for (const auto& [k, f] : coeffs_) {
      if (!s.empty()) s += "  +  ";
      s += "eps(" + k.first.to_string() + ")*(" + f.to_string() + ")*T" +
           k.second.to_string();
    }
    return s;
  }

 private:
  void check(const LusztigElem& b) const {
    if (!ctx_ || !b.ctx_) throw LusztigError("uninitialized element");
    if (ctx_ == b.ctx_) return;
    const auto& fa = ctx_->flavor();
    const auto& fb = b.ctx_->flavor();
    if (fa.is_degenerate() != fb.is_degenerate() || fa.e() != fb.e() ||
        !fa.spec()->same(*fb.spec()))
      throw FlavorMismatch();
    if (!(ctx_->orbit() == b.ctx_->orbit())) throw OrbitMismatch();
  }

  /// T_w * f as a sum of h_v T_v, recursing along the reduced word.
  std::map<Perm, RatFunc> push_poly(const Perm& w, const RatFunc& f) const {
    std::map<Perm, RatFunc> out;
    if (w.is_identity()) {
      if (!f.is_zero()) out.emplace(w, f);
      return out;
    }
    auto word = w.reduced_word();
    int r = word.back();
    Perm s = Perm::sigma(ctx_->n(), r);
    Perm u = w * s;
    auto add_to = [&out](const Perm& v, const RatFunc& h) {
      if (h.is_zero()) return;
      auto it = out.find(v);
      if (it == out.end()) {
        out.emplace(v, h);
      } else {
        it->second = it->second + h;
        if (it->second.is_zero()) out.erase(it);
      }
    };
    // T_w f = T_u (sigma_r(f) T_r + corr_r(f))
    for (const auto& [v, h] : push_poly(u, f.applied(s))) {
      Perm vs = v * s;
      if (!v.descent(r)) {
        add_to(vs, h);
      } else if (ctx_->flavor().is_degenerate()) {
        add_to(vs, h);
      } else {
        const FieldElem& q = ctx_->flavor().q();
        add_to(v, h.scaled(q - FieldElem::one(ctx_->spec())));
        add_to(vs, h.scaled(q));
      }
    }
    RatFunc corr = ctx_->poly_corr(r, f);
    if (!corr.is_zero())
      for (const auto& [v, h] : push_poly(u, corr)) add_to(v, h);
    return out;
  }

  /// T_w * eps(j) in normal form.
  LusztigElem t_word_times_eps(const Perm& w, const ResidueTuple& j) const {
    LusztigElem e = LusztigElem::eps(ctx_, j);
    auto word = w.reduced_word();
    for (auto it = word.rbegin(); it != word.rend(); ++it) e = e.left_mul_T(*it);
    return e;
  }

  LusztigCtxPtr ctx_;
  std::map<Key, RatFunc> coeffs_;
};

// ---------------------------------------------------------------------------
// Named constructors from the theory.

/// kappa_r = T_r + 1/(X_r - X_{r+1})  resp.  T_r + (q-1)X_{r+1}/(X_r - X_{r+1}).
inline LusztigElem kappa(const LusztigCtxPtr& ctx, int r) {
  return LusztigElem::generator_T(ctx, r) + LusztigElem::poly(ctx, ctx->eps_corr(r));
}

inline LusztigElem kappa_w(const LusztigCtxPtr& ctx, const Perm& w) {
  LusztigElem a = LusztigElem::one(ctx);
  for (int r : w.reduced_word()) a = a * kappa(ctx, r);
  return a;
}

/// y_r = sum_i (X_r - i_r) eps(i)  resp.  sum_i (1 - q^{-i_r} X_r) eps(i).
inline LusztigElem y_elem(const LusztigCtxPtr& ctx, int r) {
  return LusztigElem::diagonal(ctx, [&](const ResidueTuple& i) { return ctx->y_on(r, i); });
}

inline LusztigElem y_inv(const LusztigCtxPtr& ctx, int r) {
  return LusztigElem::diagonal(ctx,
                               [&](const ResidueTuple& i) { return ctx->y_on(r, i).inv(); });
}

/// The Brundan-Kleshchev case-split factor Q_r(i), written in X-coordinates.
inline RatFunc q_factor(const LusztigCtxPtr& ctx, int r, const ResidueTuple& i) {
  auto gap = residue_gap(i, r);
  RatFunc yr = ctx->y_on(r, i);
  RatFunc yr1 = ctx->y_on(r + 1, i);
  RatFunc one = RatFunc::one(ctx->n(), ctx->spec());
  if (ctx->flavor().is_degenerate()) {
    switch (gap) {
      case ResidueGap::Equal:
        return one + yr1 - yr;
      case ResidueGap::PlusOne:
        return one;
      case ResidueGap::MinusOne: {
        RatFunc b = one + yr1 - yr;
        return (ctx->rat_int(2) + yr1 - yr) / (b * b);
      }
      case ResidueGap::PlusOneE2:
        return one / (one + yr1 - yr);
      case ResidueGap::Generic: {
        FieldElem gap_val = residue_embed(i[r], ctx->spec(), ctx->flavor()) -
                            residue_embed(i[r + 1], ctx->spec(), ctx->flavor());
        return one - one / (yr - yr1 + ctx->rat_const(gap_val));
      }
    }
  } else {
    const FieldElem& q = ctx->flavor().q();
    RatFunc qr = ctx->rat_const(q);
    switch (gap) {
      case ResidueGap::Equal:
        return one - qr + qr * yr1 - yr;
      case ResidueGap::PlusOne:
        return ctx->rat_const(q.pow(i[r]));
      case ResidueGap::MinusOne: {
        RatFunc b = one - qr + qr * yr1 - yr;
        return (one - qr * qr + qr * qr * yr1 - yr) /
               (ctx->rat_const(q.pow(i[r])) * b * b);
      }
      case ResidueGap::PlusOneE2:
        return one / (one - qr + qr * yr1 - yr);
      case ResidueGap::Generic: {
        RatFunc qd = ctx->rat_const(q.pow(i[r] - i[r + 1]));
        RatFunc u = qd * (one - yr);
        return (u - qr * (one - yr1)) / (u - (one - yr1));
      }
    }
  }
  throw LusztigError("unreachable");
}

inline RatFunc q_factor_inv(const LusztigCtxPtr& ctx, int r, const ResidueTuple& i) {
  return q_factor(ctx, r, i).inv();
}

/// theta_r = kappa_r sum_i Q_r^{-1}(i) eps(i).
inline LusztigElem theta(const LusztigCtxPtr& ctx, int r) {
  LusztigElem qinv = LusztigElem::diagonal(
      ctx, [&](const ResidueTuple& i) { return q_factor_inv(ctx, r, i); });
  return kappa(ctx, r) * qinv;
}

/// psi_r = sum_i [theta_r - delta_{i_r, i_{r+1}} / (y_r - y_{r+1})] eps(i).
inline LusztigElem psi(const LusztigCtxPtr& ctx, int r) {
  LusztigElem corr = LusztigElem::diagonal(ctx, [&](const ResidueTuple& i) {
    if (i[r] != i[r + 1]) return RatFunc::zero(ctx->n(), ctx->spec());
    return (ctx->y_on(r, i) - ctx->y_on(r + 1, i)).inv();
  });
  return theta(ctx, r) - corr;
}

inline LusztigElem psi_w(const LusztigCtxPtr& ctx, const Perm& w) {
  LusztigElem a = LusztigElem::one(ctx);
  for (int r : w.reduced_word()) a = a * psi(ctx, r);
  return a;
}

}  // namespace hecke
