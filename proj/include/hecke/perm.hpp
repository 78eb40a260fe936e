/**
 * @file perm.hpp
 * @brief Symmetric group S_n: composition, length, canonical reduced words,
 *        descents, enumeration, and the place-permutation action on tuples.
 */
#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace hecke {

struct PermError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A permutation of {1..n}, stored as 0-based images: images[s] = w(s+1)-1.
class Perm {
 public:
  Perm() = default;
  explicit Perm(int n) : images_(n) { std::iota(images_.begin(), images_.end(), 0); }
  explicit Perm(std::vector<int> zero_based_images) : images_(std::move(zero_based_images)) {
    std::vector<bool> seen(images_.size(), false);
    for (int v : images_) {
      if (v < 0 || v >= int(images_.size()) || seen[v])
        throw PermError("not a permutation");
      seen[v] = true;
    }
  }

  static Perm identity(int n) { return Perm(n); }

  /// The basic transposition sigma_r swapping r and r+1 (1-based r).
  static Perm sigma(int n, int r) {
    if (r < 1 || r >= n) throw PermError("transposition index out of range");
    Perm w(n);
    std::swap(w.images_[r - 1], w.images_[r]);
    return w;
  }

  int n() const { return int(images_.size()); }

  /// w(s), both 1-based.
  int operator()(int s) const { return images_[s - 1] + 1; }

  friend bool operator==(const Perm& a, const Perm& b) { return a.images_ == b.images_; }
  friend bool operator!=(const Perm& a, const Perm& b) { return !(a == b); }
  friend bool operator<(const Perm& a, const Perm& b) { return a.images_ < b.images_; }

  /// Composition as functions: (v*w)(s) = v(w(s)).
  friend Perm operator*(const Perm& v, const Perm& w) {
    if (v.n() != w.n()) throw PermError("size mismatch");
    std::vector<int> im(v.n());
    for (int s = 0; s < v.n(); ++s) im[s] = v.images_[w.images_[s]];
    return Perm(std::move(im));
  }

  Perm inverse() const {
    std::vector<int> im(n());
    for (int s = 0; s < n(); ++s) im[images_[s]] = s;
    return Perm(std::move(im));
  }

  bool is_identity() const {
    for (int s = 0; s < n(); ++s)
      if (images_[s] != s) return false;
    return true;
  }

  /// Coxeter length = inversion number.
  int length() const {
    int inv = 0;
    for (int a = 0; a < n(); ++a)
      for (int b = a + 1; b < n(); ++b)
        if (images_[a] > images_[b]) ++inv;
    return inv;
  }

  /// Right descent: l(w*sigma_r) < l(w).  1-based r.
  bool descent(int r) const {
    if (r < 1 || r >= n()) throw PermError("descent index out of range");
    return images_[r - 1] > images_[r];
  }

  /// Left descent: l(sigma_r*w) < l(w).
  bool left_descent(int r) const { return inverse().descent(r); }

  /// The lexicographically smallest reduced word, as 1-based indices.
  /// Deterministic: greedily peel the smallest left descent.
  std::vector<int> reduced_word() const {
    std::vector<int> word;
    Perm w = *this;
    while (!w.is_identity()) {
      int r = 1;
      while (!w.left_descent(r)) ++r;
      word.push_back(r);
      w = Perm::sigma(n(), r) * w;
    }
    return word;
  }

  /// Place permutation on a tuple: w(t)_s = t_{w^{-1}(s)}.
  template <class T>
  std::vector<T> act_on_tuple(const std::vector<T>& t) const {
    if (int(t.size()) != n()) throw PermError("tuple length mismatch");
    std::vector<T> out(t.size());
    for (int s = 0; s < n(); ++s) out[images_[s]] = t[s];
    return out;
  }

  /// One-line notation "[2,1,3]".
  std::string to_string() const {
    std::string s = "[";
    for (int i = 0; i < n(); ++i) {
      if (i) s += ",";
      s += std::to_string(images_[i] + 1);
    }
    return s + "]";
  }

  const std::vector<int>& images0() const { return images_; }

 private:
  std::vector<int> images_;
};

/// All n! elements, in lexicographic one-line order.  Bounded to keep desk scale.
inline std::vector<Perm> enumerate_group(int n, int bound = 6) {
  if (n > bound) throw PermError("group enumeration bound exceeded");
  std::vector<int> im(n);
  std::iota(im.begin(), im.end(), 0);
  std::vector<Perm> all;
  do {
    all.emplace_back(im);
  } while (std::next_permutation(im.begin(), im.end()));
  return all;
}

}  // namespace hecke
