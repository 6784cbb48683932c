#include "xqz/rref.hpp"

#include <algorithm>
#include <stdexcept>

namespace xqz::gf2 {

bool RrefState::append(const BitVector& row, bool rhs) {
  if (row.size() != n_vars_) {
    throw std::invalid_argument("RrefState::append: row length != n_vars");
  }

  BitVector reduced(n_vars_ + 1);
  reduced.splice(0, row);
  reduced.set(n_vars_, rhs);

  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (reduced.get(pivot_cols_[i])) reduced ^= rows_[i];
  }

  std::size_t pivot = reduced.find_first();
  if (pivot >= n_vars_) {
    // Variable part vanished: either redundant (rhs 0) or a conflict.
    return !reduced.get(n_vars_);
  }

  // Back-substitute so existing rows stay clear of the new pivot column.
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].get(pivot)) rows_[i] ^= reduced;
  }

  auto pos = std::lower_bound(pivot_cols_.begin(), pivot_cols_.end(), pivot);
  std::size_t idx = static_cast<std::size_t>(pos - pivot_cols_.begin());
  pivot_cols_.insert(pos, pivot);
  rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(idx),
               std::move(reduced));
  return true;
}

BitVector RrefState::solve() const {
  BitVector x(n_vars_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    x.set(pivot_cols_[i], rows_[i].get(n_vars_));
  }
  return x;
}

}  // namespace xqz::gf2
