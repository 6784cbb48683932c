#ifndef XQZ_RREF_HPP
#define XQZ_RREF_HPP

#include <cstddef>
#include <vector>

#include "xqz/bits.hpp"

namespace xqz::gf2 {

// Incrementally maintained reduced row-echelon form of an augmented
// GF(2) system with n_vars unknowns. Rows are stored fully reduced:
// each kept row has a 1 at its own pivot column and 0 at every other
// row's pivot column, so consistency checks and solves cost O(rank).
class RrefState {
 public:
  explicit RrefState(std::size_t n_vars) : n_vars_(n_vars) {}

  std::size_t n_vars() const { return n_vars_; }
  std::size_t rank() const { return pivot_cols_.size(); }

  // Reduces (row | rhs) against the current pivots and admits it when
  // doing so keeps the system consistent. Returns false on a conflict,
  // in which case the state is untouched. A row that reduces to 0 = 0
  // is redundant: accepted, rank unchanged.
  bool append(const BitVector& row, bool rhs);

  // A solution with every free variable set to 0. With no constraints
  // this is the all-zero vector.
  BitVector solve() const;

  const std::vector<std::size_t>& pivot_cols() const { return pivot_cols_; }

 private:
  std::size_t n_vars_;
  std::vector<std::size_t> pivot_cols_;  // strictly increasing
  std::vector<BitVector> rows_;          // augmented, length n_vars_ + 1
};

}  // namespace xqz::gf2

#endif  // XQZ_RREF_HPP
