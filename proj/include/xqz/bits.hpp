#ifndef XQZ_BITS_HPP
#define XQZ_BITS_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace xqz::gf2 {

// Dense bit vector packed into 64-bit words, bit 0 = LSB of word 0.
// Bits past size() are kept zero so whole-word ops (xor, popcount,
// dot) never need per-bit masking.
class BitVector {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitVector() = default;
  explicit BitVector(std::size_t size)
      : size_(size), words_((size + kWordBits - 1) / kWordBits, 0) {}

  // Bits are taken from `bits` as characters '0'/'1', position 0 first.
  static BitVector from_string(const std::string& bits);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool get(std::size_t i) const {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1u;
  }
  void set(std::size_t i, bool v) {
    Word mask = Word(1) << (i % kWordBits);
    if (v) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }
  bool operator[](std::size_t i) const { return get(i); }

  std::size_t popcount() const;

  // Parity of the AND of two equal-length vectors (GF(2) inner product).
  bool dot(const BitVector& other) const;

  BitVector& operator^=(const BitVector& other);
  BitVector& operator&=(const BitVector& other);
  BitVector operator^(const BitVector& other) const;
  BitVector operator&(const BitVector& other) const;
  BitVector operator~() const;  // complement within size()

  bool operator==(const BitVector& other) const = default;

  // Index of the first set bit at or after `from`, or size() if none.
  std::size_t find_first(std::size_t from = 0) const;

  // Copies `len` bits starting at `begin` into a fresh vector.
  // Reads past size() yield zeros.
  BitVector slice(std::size_t begin, std::size_t len) const;

  // Overwrites bits [begin, begin+src.size()) with src. Must fit.
  void splice(std::size_t begin, const BitVector& src);

  // Numeric value of the first min(size, 64) bits, bit 0 = LSB.
  std::uint64_t to_u64() const;

  std::size_t word_count() const { return words_.size(); }
  Word word(std::size_t i) const { return words_[i]; }
  void set_word(std::size_t i, Word w);

  std::string to_string() const;

 private:
  void clear_tail();

  std::size_t size_ = 0;
  std::vector<Word> words_;
};

// Row-major dense GF(2) matrix; every row has length cols().
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : cols_(cols), rows_(rows, BitVector(cols)) {}

  static BitMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }

  const BitVector& row(std::size_t i) const { return rows_[i]; }
  BitVector& row(std::size_t i) { return rows_[i]; }

  bool get(std::size_t r, std::size_t c) const { return rows_[r].get(c); }
  void set(std::size_t r, std::size_t c, bool v) { rows_[r].set(c, v); }

  // Column c as a rows()-long vector.
  BitVector column(std::size_t c) const;

  bool operator==(const BitMatrix& other) const = default;

 private:
  std::size_t cols_ = 0;
  std::vector<BitVector> rows_;
};

// y[i] = parity(M.row(i) & v). Throws std::invalid_argument on a
// dimension mismatch.
BitVector matvec(const BitMatrix& m, const BitVector& v);

}  // namespace xqz::gf2

#endif  // XQZ_BITS_HPP
