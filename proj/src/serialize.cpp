#include <algorithm>
#include <stdexcept>

#include "xqz/bitstream.hpp"
#include "xqz/errors.hpp"
#include "xqz/tensor.hpp"

namespace xqz::tensor {

namespace {

constexpr char kXqzMagic[4] = {'X', 'Q', 'Z', '1'};
constexpr char kQmatMagic[4] = {'Q', 'M', 'A', 'T'};
constexpr std::uint8_t kQmatVersion = 1;

void put_bitvector(BitWriter& w, const gf2::BitVector& v) {
  for (std::size_t i = 0; i < v.word_count(); ++i) {
    std::size_t n = std::min<std::size_t>(64, v.size() - i * 64);
    w.put_bits(v.word(i), n);
  }
}

gf2::BitVector get_bitvector(BitReader& r, std::size_t size) {
  gf2::BitVector v(size);
  for (std::size_t i = 0; i * 64 < size; ++i) {
    std::size_t n = std::min<std::size_t>(64, size - i * 64);
    v.set_word(i, r.get_bits(n));
  }
  return v;
}

void align_to_byte(BitWriter& w) {
  while (w.bit_count() % 8 != 0) w.put_bit(false);
}

void skip_zero_padding(BitReader& r) {
  while (r.bit_cursor() % 8 != 0) {
    if (r.get_bit()) {
      throw CorruptStreamError("nonzero padding bit", r.byte_offset());
    }
  }
}

std::size_t words_per_plane_for(std::uint64_t weights, std::size_t n_out) {
  return n_out == 0 ? 0 : (weights + n_out - 1) / n_out;
}

}  // namespace

std::vector<std::uint8_t> serialize(const CompressedTensor& ct) {
  const TensorHeader& h = ct.header;
  if (h.block_size < 1 || h.n_in < 1 || h.n_in > h.n_out) {
    throw std::invalid_argument("serialize: invalid header");
  }
  if (ct.words.size() != h.total_words() ||
      ct.block_widths.size() != h.block_count() ||
      h.words_per_plane !=
          words_per_plane_for(std::uint64_t(h.m) * h.n, h.n_out)) {
    throw std::invalid_argument("serialize: header/content mismatch");
  }

  std::size_t pos_bits = position_bits(h.n_out);

  BitWriter w;
  for (char c : kXqzMagic) w.put_u8(static_cast<std::uint8_t>(c));
  w.put_u32(h.m);
  w.put_u32(h.n);
  w.put_u8(h.n_q);
  w.put_u16(h.n_in);
  w.put_u16(h.n_out);
  w.put_u32(h.block_size);
  w.put_u64(h.network_seed);
  w.put_u32(h.words_per_plane);

  for (std::size_t b = 0; b < ct.block_widths.size(); ++b) {
    std::uint8_t width = ct.block_widths[b];
    w.put_u8(width);
    std::size_t begin = b * h.block_size;
    std::size_t end =
        std::min<std::size_t>(begin + h.block_size, ct.words.size());
    for (std::size_t i = begin; i < end; ++i) {
      const codec::EncodedWord& word = ct.words[i];
      if (word.seed_vector.size() != h.n_in) {
        throw std::invalid_argument("serialize: seed vector length mismatch");
      }
      if (width < 64 && word.n_patch() >= (std::uint64_t(1) << width)) {
        throw std::invalid_argument("serialize: n_patch exceeds block width");
      }
      put_bitvector(w, word.seed_vector);
      w.put_bits(word.n_patch(), width);
      for (std::uint32_t pos : word.d_patch) {
        w.put_bits(pos, pos_bits);
      }
    }
  }
  align_to_byte(w);
  return w.take();
}

CompressedTensor deserialize(std::span<const std::uint8_t> bytes) {
  BitReader r(bytes.data(), bytes.size());

  for (char c : kXqzMagic) {
    if (r.get_u8() != static_cast<std::uint8_t>(c)) {
      throw CorruptStreamError("bad XQZ magic", 0);
    }
  }

  CompressedTensor ct;
  TensorHeader& h = ct.header;
  h.m = r.get_u32();
  h.n = r.get_u32();
  h.n_q = r.get_u8();
  h.n_in = r.get_u16();
  h.n_out = r.get_u16();
  h.block_size = r.get_u32();
  h.network_seed = r.get_u64();
  h.words_per_plane = r.get_u32();

  if (h.n_in < 1 || h.n_in > h.n_out) {
    throw CorruptStreamError("invalid n_in/n_out", r.byte_offset());
  }
  if (h.block_size < 1) {
    throw CorruptStreamError("invalid block_size", r.byte_offset());
  }
  if (h.words_per_plane !=
      words_per_plane_for(std::uint64_t(h.m) * h.n, h.n_out)) {
    throw CorruptStreamError("word count inconsistent with dimensions",
                             r.byte_offset());
  }

  std::size_t pos_bits = position_bits(h.n_out);
  std::size_t max_width = count_bits(h.n_out);
  std::size_t total = h.total_words();

  ct.words.reserve(total);
  std::size_t blocks = h.block_count();
  for (std::size_t b = 0; b < blocks; ++b) {
    std::uint8_t width = r.get_u8();
    if (width > max_width) {
      throw CorruptStreamError("block width exceeds n_out range",
                               r.byte_offset());
    }
    ct.block_widths.push_back(width);
    std::size_t begin = b * h.block_size;
    std::size_t end = std::min<std::size_t>(begin + h.block_size, total);
    for (std::size_t i = begin; i < end; ++i) {
      codec::EncodedWord word;
      word.seed_vector = get_bitvector(r, h.n_in);
      std::uint64_t n_patch = r.get_bits(width);
      if (n_patch > h.n_out) {
        throw CorruptStreamError("n_patch exceeds n_out", r.byte_offset());
      }
      std::uint32_t prev = 0;
      for (std::uint64_t p = 0; p < n_patch; ++p) {
        auto pos = static_cast<std::uint32_t>(r.get_bits(pos_bits));
        if (pos >= h.n_out || (p > 0 && pos <= prev)) {
          throw CorruptStreamError("bad patch position", r.byte_offset());
        }
        word.d_patch.push_back(pos);
        prev = pos;
      }
      ct.words.push_back(std::move(word));
    }
  }

  skip_zero_padding(r);
  if (r.bits_left() != 0) {
    throw CorruptStreamError("trailing bytes after stream", r.byte_offset());
  }
  return ct;
}

std::vector<std::uint8_t> serialize_qmat(const QuantizedMatrix& qm) {
  if (qm.planes.size() != qm.n_q ||
      qm.prune_mask.size() != qm.weight_count()) {
    throw std::invalid_argument("serialize_qmat: inconsistent matrix");
  }
  BitWriter w;
  for (char c : kQmatMagic) w.put_u8(static_cast<std::uint8_t>(c));
  w.put_u8(kQmatVersion);
  w.put_u32(qm.m);
  w.put_u32(qm.n);
  w.put_u8(qm.n_q);
  put_bitvector(w, qm.prune_mask);
  align_to_byte(w);
  for (const auto& plane : qm.planes) {
    if (plane.size() != qm.weight_count()) {
      throw std::invalid_argument("serialize_qmat: plane length mismatch");
    }
    put_bitvector(w, plane & qm.prune_mask);
    align_to_byte(w);
  }
  return w.take();
}

QuantizedMatrix parse_qmat(std::span<const std::uint8_t> bytes) {
  BitReader r(bytes.data(), bytes.size());
  for (char c : kQmatMagic) {
    if (r.get_u8() != static_cast<std::uint8_t>(c)) {
      throw CorruptStreamError("bad QMAT magic", 0);
    }
  }
  if (r.get_u8() != kQmatVersion) {
    throw CorruptStreamError("unsupported QMAT version", r.byte_offset());
  }
  QuantizedMatrix qm;
  qm.m = r.get_u32();
  qm.n = r.get_u32();
  qm.n_q = r.get_u8();

  std::size_t total = qm.weight_count();
  qm.prune_mask = get_bitvector(r, total);
  skip_zero_padding(r);
  for (std::size_t i = 0; i < qm.n_q; ++i) {
    qm.planes.push_back(get_bitvector(r, total));
    skip_zero_padding(r);
  }
  if (r.bits_left() != 0) {
    throw CorruptStreamError("trailing bytes after QMAT", r.byte_offset());
  }
  qm.normalize_planes();
  return qm;
}

}  // namespace xqz::tensor
