/**
 * @file residue.hpp
 * @brief The index set I = Z/eZ (or Z when e = 0), residue tuples and their
 *        S_n-orbits, and the five-way gap classifier behind the Q_r tables.
 */
#pragma once

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "perm.hpp"

namespace hecke {

struct ResidueError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Entry window for e = 0 so orbits stay finite and enumerable.
inline constexpr long kResidueWindow = 10;

/// A tuple i in I^n, entries canonical in 0..e-1 (arbitrary ints when e = 0).
class ResidueTuple {
 public:
  ResidueTuple() = default;
  ResidueTuple(long e, std::vector<long> entries) : e_(e), entries_(std::move(entries)) {
    if (e_ < 0 || e_ == 1) throw ResidueError("quantum characteristic must be 0 or >= 2");
    for (auto& v : entries_) {
      if (e_ > 0) {
        v %= e_;
        if (v < 0) v += e_;
      } else if (v < -kResidueWindow || v > kResidueWindow) {
        throw ResidueError("residue entry outside configured window for e = 0");
      }
    }
  }

  long e() const { return e_; }
  int n() const { return int(entries_.size()); }
  long operator[](int r) const { return entries_[r - 1]; }  // 1-based
  const std::vector<long>& entries() const { return entries_; }

  friend bool operator==(const ResidueTuple& a, const ResidueTuple& b) {
    return a.e_ == b.e_ && a.entries_ == b.entries_;
  }
  friend bool operator<(const ResidueTuple& a, const ResidueTuple& b) {
    return a.entries_ < b.entries_;
  }

  ResidueTuple acted_by(const Perm& w) const {
    return ResidueTuple(e_, w.act_on_tuple(entries_));
  }

  std::string to_string() const {
    std::ostringstream os;
    for (int i = 0; i < n(); ++i) {
      if (i) os << ",";
      os << entries_[i];
    }
    return os.str();
  }

  static ResidueTuple parse(const std::string& s, long e) {
    std::vector<long> v;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) v.push_back(std::stol(tok));
    return ResidueTuple(e, v);
  }

 private:
  long e_ = 0;
  std::vector<long> entries_;
};

/// One S_n-orbit of I^n: all distinct rearrangements of a content multiset.
class Orbit {
 public:
  Orbit() = default;
  explicit Orbit(const ResidueTuple& rep) : e_(rep.e()), n_(rep.n()) {
    std::vector<long> sorted = rep.entries();
    std::sort(sorted.begin(), sorted.end());
    do {
      members_.emplace_back(e_, sorted);
    } while (std::next_permutation(sorted.begin(), sorted.end()));
  }

  long e() const { return e_; }
  int n() const { return n_; }
  const std::vector<ResidueTuple>& members() const { return members_; }
  size_t size() const { return members_.size(); }

  bool contains(const ResidueTuple& i) const {
    return std::binary_search(members_.begin(), members_.end(), i);
  }

  friend bool operator==(const Orbit& a, const Orbit& b) {
    return a.e_ == b.e_ && a.members_ == b.members_;
  }

 private:
  long e_ = 0;
  int n_ = 0;
  std::vector<ResidueTuple> members_;  // lexicographically sorted
};

inline Orbit orbit_of(const ResidueTuple& i) { return Orbit(i); }

/// The case split of the Q_r(i) tables, driven by i_r - i_{r+1} mod e.
enum class ResidueGap { Equal, PlusOne, MinusOne, PlusOneE2, Generic };

inline ResidueGap residue_gap(const ResidueTuple& i, int r) {
  if (r < 1 || r >= i.n()) throw ResidueError("gap index out of range");
  long e = i.e();
  long d = i[r] - i[r + 1];
  if (e > 0) {
    d %= e;
    if (d < 0) d += e;
  }
  if (d == 0) return ResidueGap::Equal;
  if (e == 2) return ResidueGap::PlusOneE2;  // +1 and -1 coincide mod 2
  if (e > 0) {
    if (d == 1) return ResidueGap::PlusOne;
    if (d == e - 1) return ResidueGap::MinusOne;
  } else {
    if (d == 1) return ResidueGap::PlusOne;
    if (d == -1) return ResidueGap::MinusOne;
  }
  return ResidueGap::Generic;
}

inline std::string gap_name(ResidueGap g) {
  switch (g) {
    case ResidueGap::Equal: return "equal";
    case ResidueGap::PlusOne: return "plus-one";
    case ResidueGap::MinusOne: return "minus-one";
    case ResidueGap::PlusOneE2: return "plus-one-e2";
    case ResidueGap::Generic: return "generic";
  }
  return "?";
}

}  // namespace hecke
