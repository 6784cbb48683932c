#ifndef XQZ_BITSTREAM_HPP
#define XQZ_BITSTREAM_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "xqz/errors.hpp"

namespace xqz {

// Append-only bitstream, LSB-first within each byte. Multi-bit fields
// are written least significant bit first, so a field never straddles
// byte boundaries in a surprising order.
class BitWriter {
 public:
  void put_bit(bool b) {
    if (bit_pos_ == 0) bytes_.push_back(0);
    if (b) bytes_.back() |= std::uint8_t(1) << bit_pos_;
    bit_pos_ = (bit_pos_ + 1) % 8;
  }

  void put_bits(std::uint64_t value, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) put_bit((value >> i) & 1u);
  }

  // Byte-aligned little-endian integer; requires current alignment.
  void put_u8(std::uint8_t v) { put_bits(v, 8); }
  void put_u16(std::uint16_t v) { put_bits(v, 16); }
  void put_u32(std::uint32_t v) { put_bits(v, 32); }
  void put_u64(std::uint64_t v) { put_bits(v, 64); }

  std::size_t bit_count() const {
    return bytes_.size() * 8 - (bit_pos_ == 0 ? 0 : 8 - bit_pos_);
  }

  // Remaining bits in the last byte stay zero.
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bit_pos_ = 0;  // next free bit within bytes_.back()
};

// Matching reader. Throws CorruptStreamError (with the byte offset of
// the failure) on reads past the end.
class BitReader {
 public:
  BitReader(const std::uint8_t* data, std::size_t size)
      : data_(data), size_(size) {}

  bool get_bit() {
    if (bit_cursor_ >= size_ * 8) {
      throw CorruptStreamError("unexpected end of stream", byte_offset());
    }
    bool b = (data_[bit_cursor_ / 8] >> (bit_cursor_ % 8)) & 1u;
    ++bit_cursor_;
    return b;
  }

  std::uint64_t get_bits(std::size_t n) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (get_bit()) v |= std::uint64_t(1) << i;
    }
    return v;
  }

  std::uint8_t get_u8() { return static_cast<std::uint8_t>(get_bits(8)); }
  std::uint16_t get_u16() { return static_cast<std::uint16_t>(get_bits(16)); }
  std::uint32_t get_u32() { return static_cast<std::uint32_t>(get_bits(32)); }
  std::uint64_t get_u64() { return get_bits(64); }

  std::size_t bit_cursor() const { return bit_cursor_; }
  std::size_t byte_offset() const { return bit_cursor_ / 8; }
  std::size_t bits_left() const { return size_ * 8 - bit_cursor_; }

 private:
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t bit_cursor_ = 0;
};

}  // namespace xqz

#endif  // XQZ_BITSTREAM_HPP
