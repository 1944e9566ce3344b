#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>

namespace lsadvect {

struct Term {
  int di = 0;
  int dj = 0;
  double coef = 0.0;
};

/// Offset -> coefficient map with a small fixed capacity.  Adding an offset
/// that is already present accumulates into the existing entry.
class TermList {
 public:
  static constexpr std::size_t kCapacity = 16;

  void add(int di, int dj, double coef) {
    for (std::size_t k = 0; k < size_; ++k) {
      if (terms_[k].di == di && terms_[k].dj == dj) {
        terms_[k].coef += coef;
        return;
      }
    }
    if (size_ == kCapacity) throw std::length_error("stencil row capacity exceeded");
    terms_[size_++] = {di, dj, coef};
  }

  double at(int di, int dj) const {
    for (std::size_t k = 0; k < size_; ++k) {
      if (terms_[k].di == di && terms_[k].dj == dj) return terms_[k].coef;
    }
    return 0.0;
  }

  bool contains(int di, int dj) const {
    for (std::size_t k = 0; k < size_; ++k) {
      if (terms_[k].di == di && terms_[k].dj == dj) return true;
    }
    return false;
  }

  void scale(double s) {
    for (std::size_t k = 0; k < size_; ++k) terms_[k].coef *= s;
  }

  /// Drops entries whose coefficient is exactly zero.
  void prune() {
    std::size_t out = 0;
    for (std::size_t k = 0; k < size_; ++k) {
      if (terms_[k].coef != 0.0) terms_[out++] = terms_[k];
    }
    size_ = out;
  }

  double sum() const {
    double s = 0.0;
    for (std::size_t k = 0; k < size_; ++k) s += terms_[k].coef;
    return s;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  const Term* begin() const { return terms_.data(); }
  const Term* end() const { return terms_.data() + size_; }

 private:
  std::array<Term, kCapacity> terms_{};
  std::size_t size_ = 0;
};

/// One time-step equation at a node in offset form:
///
///   sum_implicit a_k U^{n+1}_{p+k} = sum_explicit b_k U^n_{p+k} + rhs_extra
///
/// The implicit list includes the unit diagonal contribution.
struct StencilRow {
  TermList implicit_terms;
  TermList explicit_terms;
  double rhs_extra = 0.0;

  double diagonal() const { return implicit_terms.at(0, 0); }

  void prune() {
    implicit_terms.prune();
    explicit_terms.prune();
  }
};

/// Row for U^{n+1} = U^n.
inline StencilRow identity_row() {
  StencilRow row;
  row.implicit_terms.add(0, 0, 1.0);
  row.explicit_terms.add(0, 0, 1.0);
  return row;
}

}  // namespace lsadvect
