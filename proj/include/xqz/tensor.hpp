#ifndef XQZ_TENSOR_HPP
#define XQZ_TENSOR_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "xqz/bits.hpp"
#include "xqz/codec.hpp"

namespace xqz::tensor {

// ceil(lg n) = bits needed to address positions [0, n). 0 for n <= 1.
inline std::size_t position_bits(std::size_t n_out) {
  return std::bit_width(n_out > 0 ? n_out - 1 : 0);
}

// XQZ fixed header: magic + m + n + n_q + n_in + n_out + block_size +
// network_seed + words_per_plane = 33 bytes.
inline constexpr std::size_t kFixedHeaderBits = 33 * 8;

// ceil(lg (max+1)) = bits needed to store counts [0, max]. 0 for max = 0.
inline std::size_t count_bits(std::uint32_t max_count) {
  return std::bit_width(max_count);
}

// An m x n matrix quantized to n_q bit-planes plus its pruning mask.
// Plane bits at pruned positions are kept at 0.
struct QuantizedMatrix {
  std::uint32_t m = 0;
  std::uint32_t n = 0;
  std::uint8_t n_q = 0;
  gf2::BitVector prune_mask;             // m*n bits, 1 = kept weight
  std::vector<gf2::BitVector> planes;    // n_q vectors of m*n bits

  std::size_t weight_count() const {
    return std::size_t(m) * std::size_t(n);
  }
  double sparsity() const;
  void normalize_planes();  // planes[i] &= prune_mask

  bool operator==(const QuantizedMatrix& other) const = default;
};

struct TensorHeader {
  std::uint32_t m = 0;
  std::uint32_t n = 0;
  std::uint8_t n_q = 0;
  std::uint16_t n_in = 0;
  std::uint16_t n_out = 0;
  std::uint32_t block_size = 0;        // words per block
  std::uint64_t network_seed = 0;
  std::uint32_t words_per_plane = 0;   // l = ceil(m*n / n_out)

  std::size_t total_words() const {
    return std::size_t(words_per_plane) * n_q;
  }
  std::size_t block_count() const;

  bool operator==(const TensorHeader& other) const = default;
};

// Encoded word stream with per-block n_patch field widths. Words are
// stored plane-major in slice order.
struct CompressedTensor {
  TensorHeader header;
  std::vector<std::uint8_t> block_widths;  // bits per n_patch field
  std::vector<codec::EncodedWord> words;

  std::vector<std::uint32_t> patch_counts() const;

  bool operator==(const CompressedTensor& other) const = default;
};

// Bit accounting for a compressed tensor. `ratio` follows the
// compressed-payload convention: header and block width markers are
// excluded from the denominator and reported separately.
struct CompressionStats {
  std::uint64_t payload_bits = 0;      // n_in bits per word
  std::uint64_t width_field_bits = 0;  // per-word n_patch fields
  std::uint64_t patch_pos_bits = 0;    // d_patch entries
  std::uint64_t header_bits = 0;       // fixed header + block width markers
  // Single-block width cost under the ceil(lg max(p)) convention, for
  // comparison against the ceil(lg(max+1)) accounting used above.
  std::uint64_t paper_width_field_bits = 0;
  double ratio = 0.0;
  double bits_per_weight = 0.0;
  double memory_reduction = 0.0;

  std::uint64_t compressed_bits() const {
    return payload_bits + width_field_bits + patch_pos_bits;
  }
};

struct EncodeOptions {
  std::uint32_t block_size = 64;
  std::size_t threads = 1;
  bool exhaustive = false;
  std::size_t exhaustive_limit = 24;
};

// Slices every plane (row-major flattening) into n_out-bit words,
// plane-major. The final word of each plane is padded with don't-care
// bits. Total words = n_q * ceil(m*n / n_out).
std::vector<codec::MaskedWord> slice_words(const QuantizedMatrix& qm,
                                           std::size_t n_out);

// Width per block of block_size consecutive words (last block may be
// short): ceil(lg(max_in_block + 1)).
std::vector<std::uint8_t> assign_block_widths(
    std::span<const std::uint32_t> patch_counts, std::size_t block_size);

CompressedTensor encode_tensor(const QuantizedMatrix& qm,
                               const codec::XorNetwork& net,
                               const EncodeOptions& opts = {});

// Rebuilds the network from the header seed, decodes every word, and
// re-masks don't-care positions to 0 with the externally supplied
// prune mask (the mask is not part of the compressed stream).
QuantizedMatrix decode_tensor(const CompressedTensor& ct,
                              const gf2::BitVector& prune_mask);

CompressionStats compression_stats(const CompressedTensor& ct);

// XQZ container (see README for the exact layout). Bit-exact inverse
// pair; deserialize validates magic, header consistency, patch
// ordering, and zero padding, throwing CorruptStreamError otherwise.
std::vector<std::uint8_t> serialize(const CompressedTensor& ct);
CompressedTensor deserialize(std::span<const std::uint8_t> bytes);

// QMAT container for raw quantized matrices.
std::vector<std::uint8_t> serialize_qmat(const QuantizedMatrix& qm);
QuantizedMatrix parse_qmat(std::span<const std::uint8_t> bytes);

}  // namespace xqz::tensor

#endif  // XQZ_TENSOR_HPP
