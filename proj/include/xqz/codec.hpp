#ifndef XQZ_CODEC_HPP
#define XQZ_CODEC_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "xqz/bits.hpp"

namespace xqz::codec {

// Fixed random XOR-gate network: output bit i is the parity of the
// seed-vector bits selected by matrix row i. Fully determined by
// (n_out, n_in, seed); see make_network.
struct XorNetwork {
  gf2::BitMatrix matrix;  // n_out x n_in
  std::uint64_t seed = 0;

  std::size_t n_out() const { return matrix.rows(); }
  std::size_t n_in() const { return matrix.cols(); }
};

// One n_out-long slice of a quantized bit-plane. Bits where care_mask
// is 0 are don't-cares; their value bits are normalized to 0.
struct MaskedWord {
  gf2::BitVector values;
  gf2::BitVector care_mask;

  MaskedWord() = default;
  MaskedWord(gf2::BitVector values_in, gf2::BitVector care_in);

  std::size_t n_out() const { return care_mask.size(); }
  std::size_t care_count() const { return care_mask.popcount(); }
};

// Encrypted form of a word: the seed vector plus the care positions
// the network could not match (flipped back during decode).
struct EncodedWord {
  gf2::BitVector seed_vector;           // length n_in
  std::vector<std::uint32_t> d_patch;   // strictly increasing, < n_out

  std::size_t n_patch() const { return d_patch.size(); }

  bool operator==(const EncodedWord& other) const = default;
};

// Per-word encoding counters, filled by encode_word when requested.
struct EncodeStats {
  std::size_t equations_offered = 0;   // one per care bit
  std::size_t equations_admitted = 0;  // consistent (new pivot or redundant)
  std::size_t conflicts = 0;           // discarded, became patch candidates
};

// Draws each matrix entry as one fair bit from xorshift64* seeded with
// `seed`, row-major order. Requires 1 <= n_in <= n_out.
XorNetwork make_network(std::size_t n_out, std::size_t n_in,
                        std::uint64_t seed);

// Greedy patch search: offers the care-bit equations in ascending
// position order, drops the ones that would make the system
// inconsistent, solves with free variables at 0, then records every
// care position that still mismatches as a patch.
EncodedWord encode_word(const XorNetwork& net, const MaskedWord& word,
                        EncodeStats* stats = nullptr);

// Tries every seed vector in [0, 2^n_in) and keeps one with the fewest
// mismatched care bits; ties go to the numerically smallest seed
// vector (bit 0 = LSB). Rejects n_in > exhaustive_limit.
EncodedWord encode_word_exhaustive(const XorNetwork& net,
                                   const MaskedWord& word,
                                   std::size_t exhaustive_limit = 24);

// matvec(net.matrix, seed_vector) with the d_patch positions flipped.
gf2::BitVector decode_word(const XorNetwork& net, const EncodedWord& enc);

// True when decoded matches word.values at every care position.
bool care_bits_match(const MaskedWord& word, const gf2::BitVector& decoded);

}  // namespace xqz::codec

#endif  // XQZ_CODEC_HPP
