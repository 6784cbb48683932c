#include "xqz/codec.hpp"

#include <bit>
#include <stdexcept>

#include "xqz/errors.hpp"
#include "xqz/rng.hpp"
#include "xqz/rref.hpp"

namespace xqz::codec {

MaskedWord::MaskedWord(gf2::BitVector values_in, gf2::BitVector care_in)
    : values(std::move(values_in)), care_mask(std::move(care_in)) {
  if (values.size() != care_mask.size()) {
    throw std::invalid_argument("MaskedWord: values/care length mismatch");
  }
  values &= care_mask;
}

XorNetwork make_network(std::size_t n_out, std::size_t n_in,
                        std::uint64_t seed) {
  if (n_in < 1 || n_in > n_out) {
    throw std::invalid_argument("make_network: requires 1 <= n_in <= n_out");
  }
  Xorshift64Star rng(seed);
  gf2::BitMatrix m(n_out, n_in);
  for (std::size_t r = 0; r < n_out; ++r) {
    for (std::size_t c = 0; c < n_in; ++c) {
      m.set(r, c, rng.next_bit());
    }
  }
  return XorNetwork{std::move(m), seed};
}

EncodedWord encode_word(const XorNetwork& net, const MaskedWord& word,
                        EncodeStats* stats) {
  if (word.n_out() != net.n_out()) {
    throw std::invalid_argument("encode_word: word length != network n_out");
  }

  gf2::RrefState state(net.n_in());
  EncodeStats local;
  for (std::size_t i = word.care_mask.find_first(); i < word.n_out();
       i = word.care_mask.find_first(i + 1)) {
    ++local.equations_offered;
    if (state.append(net.matrix.row(i), word.values.get(i))) {
      ++local.equations_admitted;
    } else {
      ++local.conflicts;
    }
  }

  EncodedWord enc;
  enc.seed_vector = state.solve();

  gf2::BitVector decoded = gf2::matvec(net.matrix, enc.seed_vector);
  gf2::BitVector mismatch = (decoded ^ word.values) & word.care_mask;
  for (std::size_t i = mismatch.find_first(); i < mismatch.size();
       i = mismatch.find_first(i + 1)) {
    enc.d_patch.push_back(static_cast<std::uint32_t>(i));
  }

  if (stats) *stats = local;
  return enc;
}

EncodedWord encode_word_exhaustive(const XorNetwork& net,
                                   const MaskedWord& word,
                                   std::size_t exhaustive_limit) {
  if (net.n_in() > exhaustive_limit || net.n_in() >= 64) {
    throw std::invalid_argument(
        "encode_word_exhaustive: n_in exceeds exhaustive limit");
  }
  if (word.n_out() != net.n_out()) {
    throw std::invalid_argument(
        "encode_word_exhaustive: word length != network n_out");
  }

  const std::size_t n_in = net.n_in();
  const std::size_t n_words = word.values.word_count();

  std::vector<std::vector<std::uint64_t>> columns(n_in);
  for (std::size_t c = 0; c < n_in; ++c) {
    gf2::BitVector col = net.matrix.column(c);
    columns[c].resize(n_words);
    for (std::size_t w = 0; w < n_words; ++w) columns[c][w] = col.word(w);
  }

  // Walk all seed vectors in Gray-code order so each step is a single
  // column XOR; track the numeric seed value for the tie-break.
  std::vector<std::uint64_t> out(n_words, 0);
  auto mismatches = [&]() {
    std::size_t n = 0;
    for (std::size_t w = 0; w < n_words; ++w) {
      n += std::popcount((out[w] ^ word.values.word(w)) &
                         word.care_mask.word(w));
    }
    return n;
  };

  std::size_t best_count = mismatches();
  std::uint64_t best_value = 0;
  const std::uint64_t total = std::uint64_t(1) << n_in;
  for (std::uint64_t idx = 1; idx < total; ++idx) {
    std::size_t flip = std::countr_zero(idx);
    for (std::size_t w = 0; w < n_words; ++w) out[w] ^= columns[flip][w];
    std::uint64_t value = idx ^ (idx >> 1);
    std::size_t count = mismatches();
    if (count < best_count ||
        (count == best_count && value < best_value)) {
      best_count = count;
      best_value = value;
    }
  }

  EncodedWord enc;
  enc.seed_vector = gf2::BitVector(n_in);
  for (std::size_t c = 0; c < n_in; ++c) {
    enc.seed_vector.set(c, (best_value >> c) & 1u);
  }
  gf2::BitVector decoded = gf2::matvec(net.matrix, enc.seed_vector);
  gf2::BitVector mismatch = (decoded ^ word.values) & word.care_mask;
  for (std::size_t i = mismatch.find_first(); i < mismatch.size();
       i = mismatch.find_first(i + 1)) {
    enc.d_patch.push_back(static_cast<std::uint32_t>(i));
  }
  return enc;
}

gf2::BitVector decode_word(const XorNetwork& net, const EncodedWord& enc) {
  if (enc.seed_vector.size() != net.n_in()) {
    throw std::invalid_argument(
        "decode_word: seed vector length != network n_in");
  }
  gf2::BitVector decoded = gf2::matvec(net.matrix, enc.seed_vector);
  for (std::uint32_t pos : enc.d_patch) {
    if (pos >= net.n_out()) {
      throw CorruptStreamError("decode_word: patch position out of range");
    }
    decoded.set(pos, !decoded.get(pos));
  }
  return decoded;
}

bool care_bits_match(const MaskedWord& word, const gf2::BitVector& decoded) {
  if (decoded.size() != word.n_out()) return false;
  return (decoded & word.care_mask) == word.values;
}

}  // namespace xqz::codec
