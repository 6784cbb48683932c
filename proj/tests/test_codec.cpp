#include <doctest.h>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "xqz/codec.hpp"
#include "xqz/errors.hpp"
#include "xqz/rref.hpp"

using namespace xqz;
using gf2::BitMatrix;
using gf2::BitVector;

namespace {

codec::MaskedWord random_word(std::size_t n_out, double sparsity,
                              std::mt19937_64& rng) {
  BitVector values(n_out);
  BitVector care(n_out);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < n_out; ++i) {
    if (u(rng) >= sparsity) {
      care.set(i, true);
      values.set(i, rng() & 1u);
    }
  }
  return codec::MaskedWord(std::move(values), std::move(care));
}

// Brute-force minimum patch count: try every seed value through the
// naive matvec oracle and count care-bit mismatches.
std::size_t min_patches_oracle(const codec::XorNetwork& net,
                               const codec::MaskedWord& word) {
  oracle::DenseMatrix m = oracle::to_dense(net.matrix);
  oracle::DenseRow values = oracle::to_dense(word.values);
  oracle::DenseRow care = oracle::to_dense(word.care_mask);
  std::size_t best = word.n_out() + 1;
  for (std::uint64_t v = 0; v < (std::uint64_t(1) << net.n_in()); ++v) {
    oracle::DenseRow x(net.n_in());
    for (std::size_t j = 0; j < net.n_in(); ++j) x[j] = (v >> j) & 1u;
    oracle::DenseRow out = oracle::naive_matvec(m, x);
    std::size_t mism = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (care[i] && out[i] != values[i]) ++mism;
    }
    best = std::min(best, mism);
  }
  return best;
}

}  // namespace

TEST_CASE("make_network is deterministic") {
  codec::XorNetwork a = codec::make_network(8, 4, 1);
  codec::XorNetwork b = codec::make_network(8, 4, 1);
  CHECK(a.matrix == b.matrix);
  CHECK(a.seed == 1);
}

TEST_CASE("make_network rejects bad shapes") {
  CHECK_THROWS_AS(codec::make_network(4, 8, 1), std::invalid_argument);
  CHECK_THROWS_AS(codec::make_network(8, 0, 1), std::invalid_argument);
}

TEST_CASE("network entries are close to fair over many seeds") {
  std::size_t ones = 0;
  std::size_t total = 0;
  for (std::uint64_t seed = 0; seed < 128; ++seed) {
    codec::XorNetwork net = codec::make_network(200, 20, seed);
    for (std::size_t r = 0; r < net.n_out(); ++r) {
      ones += net.matrix.row(r).popcount();
    }
    total += net.n_out() * net.n_in();
  }
  double density = static_cast<double>(ones) / static_cast<double>(total);
  CHECK(density > 0.48);
  CHECK(density < 0.52);
}

TEST_CASE("MaskedWord normalizes don't-care value bits") {
  codec::MaskedWord w(BitVector::from_string("1111"),
                      BitVector::from_string("0101"));
  CHECK(w.values == BitVector::from_string("0101"));
  CHECK(w.care_count() == 2);
  CHECK_THROWS_AS(codec::MaskedWord(BitVector(3), BitVector(4)),
                  std::invalid_argument);
}

TEST_CASE("encoding an all-don't-care word yields zero seed, no patches") {
  codec::XorNetwork net = codec::make_network(16, 6, 9);
  codec::MaskedWord word(BitVector(16), BitVector(16));
  codec::EncodedWord enc = codec::encode_word(net, word);
  CHECK(enc.seed_vector == BitVector(6));
  CHECK(enc.n_patch() == 0);
}

TEST_CASE("identity network passes values through") {
  codec::XorNetwork net{BitMatrix::identity(4), 0};
  codec::MaskedWord word(BitVector::from_string("1010"),
                         BitVector::from_string("1111"));
  codec::EncodedWord enc = codec::encode_word(net, word);
  CHECK(enc.seed_vector == BitVector::from_string("1010"));
  CHECK(enc.n_patch() == 0);
}

TEST_CASE("heuristic encode matches a greedy replay oracle") {
  // Replays Algorithm-1 admission independently: a care equation is
  // admitted iff some seed value still satisfies all admitted
  // equations (brute force over all 2^n_in seeds through the naive
  // matvec), in the same ascending position order.
  std::mt19937_64 rng(40);
  for (int iter = 0; iter < 50; ++iter) {
    codec::XorNetwork net = codec::make_network(8, 4, 7 + iter);
    codec::MaskedWord word = random_word(8, iter % 2 ? 0.3 : 0.0, rng);

    oracle::DenseMatrix m = oracle::to_dense(net.matrix);
    oracle::DenseRow values = oracle::to_dense(word.values);
    oracle::DenseRow care = oracle::to_dense(word.care_mask);

    auto satisfiable = [&](const std::vector<std::size_t>& positions) {
      for (std::uint64_t v = 0; v < 16; ++v) {
        oracle::DenseRow x{
            static_cast<std::uint8_t>(v & 1), static_cast<std::uint8_t>((v >> 1) & 1),
            static_cast<std::uint8_t>((v >> 2) & 1), static_cast<std::uint8_t>((v >> 3) & 1)};
        oracle::DenseRow out = oracle::naive_matvec(m, x);
        bool ok = true;
        for (std::size_t p : positions) {
          if (out[p] != values[p]) {
            ok = false;
            break;
          }
        }
        if (ok) return true;
      }
      return false;
    };

    std::vector<std::size_t> admitted;
    std::size_t oracle_conflicts = 0;
    for (std::size_t i = 0; i < 8; ++i) {
      if (!care[i]) continue;
      admitted.push_back(i);
      if (!satisfiable(admitted)) {
        admitted.pop_back();
        ++oracle_conflicts;
      }
    }

    codec::EncodeStats stats;
    codec::EncodedWord enc = codec::encode_word(net, word, &stats);
    CHECK(stats.equations_offered == word.care_count());
    CHECK(stats.conflicts == oracle_conflicts);
    CHECK(stats.equations_admitted == word.care_count() - oracle_conflicts);

    // The solution must satisfy every admitted equation; patches are
    // exactly the care positions the final decode misses.
    oracle::DenseRow x = oracle::to_dense(enc.seed_vector);
    oracle::DenseRow out = oracle::naive_matvec(m, x);
    for (std::size_t p : admitted) CHECK(out[p] == values[p]);
    std::vector<std::uint32_t> expect_patch;
    for (std::size_t i = 0; i < 8; ++i) {
      if (care[i] && out[i] != values[i]) {
        expect_patch.push_back(static_cast<std::uint32_t>(i));
      }
    }
    CHECK(enc.d_patch == expect_patch);
  }
}

TEST_CASE("exhaustive encode: vacuous word hits the zero tie-break") {
  codec::XorNetwork net = codec::make_network(12, 5, 3);
  codec::MaskedWord word(BitVector(12), BitVector(12));
  codec::EncodedWord enc = codec::encode_word_exhaustive(net, word);
  CHECK(enc.seed_vector == BitVector(5));
  CHECK(enc.n_patch() == 0);
}

TEST_CASE("exhaustive encode reaches the brute-force minimum") {
  std::mt19937_64 rng(11);
  codec::XorNetwork net = codec::make_network(12, 6, 11);
  for (int iter = 0; iter < 100; ++iter) {
    codec::MaskedWord word = random_word(12, 0.5, rng);
    codec::EncodedWord enc = codec::encode_word_exhaustive(net, word);
    CHECK(enc.n_patch() == min_patches_oracle(net, word));
  }
}

TEST_CASE("exhaustive patch count never exceeds the heuristic's") {
  std::mt19937_64 rng(123);
  for (int iter = 0; iter < 200; ++iter) {
    std::size_t n_in = 4 + rng() % 6;
    std::size_t n_out = n_in + rng() % 30;
    codec::XorNetwork net = codec::make_network(n_out, n_in, rng());
    codec::MaskedWord word = random_word(n_out, 0.5, rng);
    codec::EncodedWord heur = codec::encode_word(net, word);
    codec::EncodedWord best = codec::encode_word_exhaustive(net, word);
    CHECK(best.n_patch() <= heur.n_patch());
  }
}

TEST_CASE("exhaustive encode rejects oversized n_in") {
  codec::XorNetwork net = codec::make_network(30, 26, 1);
  codec::MaskedWord word(BitVector(30), BitVector(30));
  CHECK_THROWS_AS(codec::encode_word_exhaustive(net, word, 24),
                  std::invalid_argument);
  CHECK_NOTHROW(codec::encode_word_exhaustive(net, word, 26));
}

TEST_CASE("decode without patches is plain matvec") {
  codec::XorNetwork net = codec::make_network(10, 4, 5);
  codec::EncodedWord enc;
  enc.seed_vector = BitVector::from_string("1101");
  CHECK(codec::decode_word(net, enc) ==
        gf2::matvec(net.matrix, enc.seed_vector));
}

TEST_CASE("a single patch flips exactly that bit") {
  codec::XorNetwork net = codec::make_network(10, 4, 5);
  codec::EncodedWord plain;
  plain.seed_vector = BitVector::from_string("0111");
  codec::EncodedWord patched = plain;
  patched.d_patch = {3};

  BitVector a = codec::decode_word(net, plain);
  BitVector b = codec::decode_word(net, patched);
  BitVector diff = a ^ b;
  CHECK(diff.popcount() == 1);
  CHECK(diff.get(3));
}

TEST_CASE("decode rejects out-of-range patch positions") {
  codec::XorNetwork net = codec::make_network(10, 4, 5);
  codec::EncodedWord enc;
  enc.seed_vector = BitVector(4);
  enc.d_patch = {10};
  CHECK_THROWS_AS(codec::decode_word(net, enc), CorruptStreamError);
}

TEST_CASE("decode rejects wrong seed vector width") {
  codec::XorNetwork net = codec::make_network(10, 4, 5);
  codec::EncodedWord enc;
  enc.seed_vector = BitVector(5);
  CHECK_THROWS_AS(codec::decode_word(net, enc), std::invalid_argument);
}

TEST_CASE("roundtrip restores every care bit") {
  std::mt19937_64 rng(2718);
  int cases = 0;
  for (double sparsity : {0.5, 0.8, 0.9}) {
    for (int iter = 0; iter < 340; ++iter) {
      std::size_t n_in = 4 + rng() % 13;
      std::size_t n_out = n_in * (2 + rng() % 8);
      codec::XorNetwork net = codec::make_network(n_out, n_in, rng());
      codec::MaskedWord word = random_word(n_out, sparsity, rng);

      codec::EncodedWord enc = codec::encode_word(net, word);
      BitVector decoded = codec::decode_word(net, enc);
      CHECK(codec::care_bits_match(word, decoded));

      // Patch admissibility: patches only at care positions.
      for (std::uint32_t p : enc.d_patch) CHECK(word.care_mask.get(p));
      ++cases;
    }
  }
  CHECK(cases >= 1000);
}

TEST_CASE("zero conflicts means zero patches") {
  std::mt19937_64 rng(31337);
  for (int iter = 0; iter < 300; ++iter) {
    std::size_t n_in = 4 + rng() % 10;
    std::size_t n_out = n_in + rng() % 40;
    codec::XorNetwork net = codec::make_network(n_out, n_in, rng());
    codec::MaskedWord word = random_word(n_out, 0.7, rng);
    codec::EncodeStats stats;
    codec::EncodedWord enc = codec::encode_word(net, word, &stats);
    if (stats.conflicts == 0) {
      CHECK(enc.n_patch() == 0);
    }
  }
}
