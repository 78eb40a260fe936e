/**
 * @file linalg.hpp
 * @brief Exact dense linear algebra over a configured field: incremental
 *        row-echelon spans (for span closures and linear-dependence search).
 */
#pragma once

#include <utility>
#include <vector>

#include "field.hpp"

namespace hecke {

/// An incrementally built reduced row-echelon span of vectors over 𝕜.
/// Optionally carries an augmented block used to express each inserted row as
/// a combination of the original inputs (for minimal-polynomial extraction).
class EchelonSpan {
 public:
  explicit EchelonSpan(FieldSpecPtr spec) : spec_(std::move(spec)) {}

  size_t dimension() const { return rows_.size(); }

  /// Reduces `v` (with optional augmentation `aug`) against the span.
  /// If the reduced vector is nonzero it is inserted and true is returned;
  /// otherwise false is returned and, when `out_aug` is non-null, the
  /// augmentation of the *dependency* (v = combination of prior inserts) is
  /// stored there.
  bool insert(std::vector<FieldElem> v, std::vector<FieldElem> aug = {},
              std::vector<FieldElem>* out_aug = nullptr) {
    reduce_in_place(v, aug);
    int p = pivot_of(v);
    if (p < 0) {
      if (out_aug) *out_aug = std::move(aug);
      return false;
    }
    FieldElem inv = v[size_t(p)].inv();
    for (auto& x : v) x = x * inv;
    for (auto& x : aug) x = x * inv;
    // Back-substitute into existing rows to keep the echelon reduced.
    for (size_t k = 0; k < rows_.size(); ++k) {
      const FieldElem& c = rows_[k][size_t(p)];
      if (c.is_zero()) continue;
      FieldElem cc = c;  // copy: the row mutates below
      for (size_t j = 0; j < rows_[k].size(); ++j)
        rows_[k][j] = rows_[k][j] - cc * v[j];
      if (augs_[k].size() < aug.size())
        augs_[k].resize(aug.size(), FieldElem::zero(spec_));
      for (size_t j = 0; j < aug.size(); ++j)
        augs_[k][j] = augs_[k][j] - cc * aug[j];
    }
    size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
    rows_.insert(rows_.begin() + pos, std::move(v));
    augs_.insert(augs_.begin() + pos, std::move(aug));
    pivots_.insert(pivots_.begin() + pos, p);
    return true;
  }

  /// True iff v lies in the current span.
  bool contains(std::vector<FieldElem> v) const {
    std::vector<FieldElem> aug;
    reduce_in_place(v, aug);
    return pivot_of(v) < 0;
  }

 private:
  static int pivot_of(const std::vector<FieldElem>& v) {
    for (size_t j = 0; j < v.size(); ++j)
      if (!v[j].is_zero()) return int(j);
    return -1;
  }

  void reduce_in_place(std::vector<FieldElem>& v, std::vector<FieldElem>& aug) const {
    for (size_t k = 0; k < rows_.size(); ++k) {
      const FieldElem& c = v[size_t(pivots_[k])];
      if (c.is_zero()) continue;
      FieldElem cc = c;  // copy: v mutates below
      for (size_t j = 0; j < v.size(); ++j) v[j] = v[j] - cc * rows_[k][j];
      if (!augs_[k].empty()) {
        if (aug.size() < augs_[k].size()) aug.resize(augs_[k].size(), FieldElem::zero(spec_));
        for (size_t j = 0; j < augs_[k].size(); ++j)
          aug[j] = aug[j] - cc * augs_[k][j];
      }
    }
  }

  FieldSpecPtr spec_;
  std::vector<std::vector<FieldElem>> rows_;
  std::vector<std::vector<FieldElem>> augs_;
  std::vector<int> pivots_;
};

}  // namespace hecke
