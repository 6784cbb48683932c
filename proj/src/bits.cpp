#include "xqz/bits.hpp"

#include <bit>
#include <stdexcept>

namespace xqz::gf2 {

BitVector BitVector::from_string(const std::string& bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i, true);
    } else if (bits[i] != '0') {
      throw std::invalid_argument("BitVector::from_string: bad character");
    }
  }
  return v;
}

std::size_t BitVector::popcount() const {
  std::size_t n = 0;
  for (Word w : words_) n += std::popcount(w);
  return n;
}

bool BitVector::dot(const BitVector& other) const {
  if (size_ != other.size_) {
    throw std::invalid_argument("BitVector::dot: length mismatch");
  }
  Word acc = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    acc ^= words_[i] & other.words_[i];
  }
  return std::popcount(acc) & 1u;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (size_ != other.size_) {
    throw std::invalid_argument("BitVector::operator^=: length mismatch");
  }
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

BitVector& BitVector::operator&=(const BitVector& other) {
  if (size_ != other.size_) {
    throw std::invalid_argument("BitVector::operator&=: length mismatch");
  }
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

BitVector BitVector::operator^(const BitVector& other) const {
  BitVector r = *this;
  r ^= other;
  return r;
}

BitVector BitVector::operator&(const BitVector& other) const {
  BitVector r = *this;
  r &= other;
  return r;
}

BitVector BitVector::operator~() const {
  BitVector r = *this;
  for (auto& w : r.words_) w = ~w;
  r.clear_tail();
  return r;
}

std::size_t BitVector::find_first(std::size_t from) const {
  if (from >= size_) return size_;
  std::size_t wi = from / kWordBits;
  Word w = words_[wi] & (~Word(0) << (from % kWordBits));
  while (true) {
    if (w != 0) {
      std::size_t bit = wi * kWordBits + std::countr_zero(w);
      return bit < size_ ? bit : size_;
    }
    if (++wi == words_.size()) return size_;
    w = words_[wi];
  }
}

BitVector BitVector::slice(std::size_t begin, std::size_t len) const {
  BitVector out(len);
  for (std::size_t i = 0; i < len; i += kWordBits) {
    std::size_t src = begin + i;
    Word w = 0;
    if (src < size_) {
      std::size_t wi = src / kWordBits;
      std::size_t off = src % kWordBits;
      w = words_[wi] >> off;
      if (off != 0 && wi + 1 < words_.size()) {
        w |= words_[wi + 1] << (kWordBits - off);
      }
    }
    out.words_[i / kWordBits] = w;
  }
  out.clear_tail();
  return out;
}

void BitVector::splice(std::size_t begin, const BitVector& src) {
  if (begin + src.size_ > size_) {
    throw std::invalid_argument("BitVector::splice: out of range");
  }
  for (std::size_t i = 0; i < src.size_; ++i) set(begin + i, src.get(i));
}

std::uint64_t BitVector::to_u64() const {
  if (words_.empty()) return 0;
  if (size_ >= kWordBits) return words_[0];
  return words_[0] & ((Word(1) << size_) - 1);
}

void BitVector::set_word(std::size_t i, Word w) {
  words_[i] = w;
  if (i + 1 == words_.size()) clear_tail();
}

std::string BitVector::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (get(i)) s[i] = '1';
  }
  return s;
}

void BitVector::clear_tail() {
  std::size_t used = size_ % kWordBits;
  if (used != 0 && !words_.empty()) {
    words_.back() &= (Word(1) << used) - 1;
  }
}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BitVector BitMatrix::column(std::size_t c) const {
  BitVector col(rows());
  for (std::size_t r = 0; r < rows(); ++r) col.set(r, rows_[r].get(c));
  return col;
}

BitVector matvec(const BitMatrix& m, const BitVector& v) {
  if (v.size() != m.cols()) {
    throw std::invalid_argument("matvec: vector length != matrix cols");
  }
  BitVector y(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    y.set(r, m.row(r).dot(v));
  }
  return y;
}

}  // namespace xqz::gf2
