#include "xqz/tensor.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include "xqz/errors.hpp"

namespace xqz::tensor {

double QuantizedMatrix::sparsity() const {
  std::size_t total = weight_count();
  if (total == 0) return 0.0;
  return 1.0 - static_cast<double>(prune_mask.popcount()) /
                   static_cast<double>(total);
}

void QuantizedMatrix::normalize_planes() {
  for (auto& plane : planes) plane &= prune_mask;
}

std::size_t TensorHeader::block_count() const {
  if (block_size == 0) return 0;
  return (total_words() + block_size - 1) / block_size;
}

std::vector<std::uint32_t> CompressedTensor::patch_counts() const {
  std::vector<std::uint32_t> p;
  p.reserve(words.size());
  for (const auto& w : words) {
    p.push_back(static_cast<std::uint32_t>(w.n_patch()));
  }
  return p;
}

std::vector<codec::MaskedWord> slice_words(const QuantizedMatrix& qm,
                                           std::size_t n_out) {
  if (n_out < 1) {
    throw std::invalid_argument("slice_words: n_out must be >= 1");
  }
  std::size_t total = qm.weight_count();
  std::size_t per_plane = (total + n_out - 1) / n_out;

  std::vector<codec::MaskedWord> words;
  words.reserve(per_plane * qm.n_q);
  for (std::size_t plane = 0; plane < qm.n_q; ++plane) {
    for (std::size_t w = 0; w < per_plane; ++w) {
      std::size_t begin = w * n_out;
      // slice() zero-fills past the end, which is exactly the
      // padded-with-don't-care convention for the final word.
      words.emplace_back(qm.planes[plane].slice(begin, n_out),
                         qm.prune_mask.slice(begin, n_out));
    }
  }
  return words;
}

std::vector<std::uint8_t> assign_block_widths(
    std::span<const std::uint32_t> patch_counts, std::size_t block_size) {
  if (block_size < 1) {
    throw std::invalid_argument("assign_block_widths: block_size must be >= 1");
  }
  std::vector<std::uint8_t> widths;
  for (std::size_t begin = 0; begin < patch_counts.size();
       begin += block_size) {
    std::size_t end = std::min(begin + block_size, patch_counts.size());
    std::uint32_t max_count = 0;
    for (std::size_t i = begin; i < end; ++i) {
      max_count = std::max(max_count, patch_counts[i]);
    }
    widths.push_back(static_cast<std::uint8_t>(count_bits(max_count)));
  }
  return widths;
}

CompressedTensor encode_tensor(const QuantizedMatrix& qm,
                               const codec::XorNetwork& net,
                               const EncodeOptions& opts) {
  if (opts.block_size < 1) {
    throw std::invalid_argument("encode_tensor: block_size must be >= 1");
  }
  std::vector<codec::MaskedWord> sliced = slice_words(qm, net.n_out());

  std::vector<codec::EncodedWord> encoded(sliced.size());
  auto encode_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      encoded[i] = opts.exhaustive
                       ? codec::encode_word_exhaustive(net, sliced[i],
                                                       opts.exhaustive_limit)
                       : codec::encode_word(net, sliced[i]);
    }
  };

  std::size_t workers = std::max<std::size_t>(1, opts.threads);
  workers = std::min(workers, std::max<std::size_t>(1, sliced.size()));
  if (workers == 1) {
    encode_range(0, sliced.size());
  } else {
    // Words are independent; indexed writes keep the output identical
    // to the sequential order regardless of worker count.
    std::vector<std::thread> threads;
    std::size_t chunk = (sliced.size() + workers - 1) / workers;
    for (std::size_t t = 0; t < workers; ++t) {
      std::size_t begin = t * chunk;
      std::size_t end = std::min(begin + chunk, sliced.size());
      if (begin >= end) break;
      threads.emplace_back(encode_range, begin, end);
    }
    for (auto& th : threads) th.join();
  }

  CompressedTensor ct;
  ct.header.m = qm.m;
  ct.header.n = qm.n;
  ct.header.n_q = qm.n_q;
  ct.header.n_in = static_cast<std::uint16_t>(net.n_in());
  ct.header.n_out = static_cast<std::uint16_t>(net.n_out());
  ct.header.block_size = opts.block_size;
  ct.header.network_seed = net.seed;
  ct.header.words_per_plane = static_cast<std::uint32_t>(
      qm.n_q == 0 ? 0 : sliced.size() / qm.n_q);
  ct.words = std::move(encoded);
  ct.block_widths = assign_block_widths(ct.patch_counts(), opts.block_size);
  return ct;
}

QuantizedMatrix decode_tensor(const CompressedTensor& ct,
                              const gf2::BitVector& prune_mask) {
  const TensorHeader& h = ct.header;
  std::size_t total = std::size_t(h.m) * h.n;
  if (prune_mask.size() != total) {
    throw std::invalid_argument("decode_tensor: prune mask length mismatch");
  }
  if (h.n_in < 1 || h.n_in > h.n_out) {
    throw CorruptStreamError("decode_tensor: invalid n_in/n_out in header");
  }
  if (ct.words.size() != h.total_words()) {
    throw CorruptStreamError("decode_tensor: word count mismatch");
  }

  codec::XorNetwork net = codec::make_network(h.n_out, h.n_in, h.network_seed);

  QuantizedMatrix qm;
  qm.m = h.m;
  qm.n = h.n;
  qm.n_q = h.n_q;
  qm.prune_mask = prune_mask;
  qm.planes.assign(h.n_q, gf2::BitVector(total));

  std::size_t per_plane = h.words_per_plane;
  for (std::size_t plane = 0; plane < h.n_q; ++plane) {
    for (std::size_t w = 0; w < per_plane; ++w) {
      gf2::BitVector bits = codec::decode_word(net, ct.words[plane * per_plane + w]);
      std::size_t begin = w * h.n_out;
      std::size_t len = std::min<std::size_t>(h.n_out, total - begin);
      qm.planes[plane].splice(begin, bits.slice(0, len));
    }
  }
  qm.normalize_planes();
  return qm;
}

CompressionStats compression_stats(const CompressedTensor& ct) {
  const TensorHeader& h = ct.header;
  std::vector<std::uint32_t> p = ct.patch_counts();

  CompressionStats s;
  s.payload_bits = std::uint64_t(h.n_in) * ct.words.size();

  std::size_t pos_bits = position_bits(h.n_out);
  std::uint32_t global_max = 0;
  for (std::size_t b = 0; b < ct.block_widths.size(); ++b) {
    std::size_t begin = b * h.block_size;
    std::size_t end = std::min<std::size_t>(begin + h.block_size, p.size());
    s.width_field_bits += std::uint64_t(ct.block_widths[b]) * (end - begin);
  }
  for (std::uint32_t count : p) {
    s.patch_pos_bits += std::uint64_t(count) * pos_bits;
    global_max = std::max(global_max, count);
  }

  // ceil(lg max(p)) per word, the single-block convention; lg of 0 or 1
  // is taken as 0.
  std::uint64_t paper_width =
      global_max > 1 ? std::bit_width(global_max - 1u) : 0;
  s.paper_width_field_bits = paper_width * ct.words.size();

  s.header_bits = kFixedHeaderBits + 8ull * ct.block_widths.size();

  std::uint64_t plane_bits = std::uint64_t(h.m) * h.n * h.n_q;
  std::uint64_t denom = s.compressed_bits();
  s.ratio = denom == 0 ? 0.0
                       : static_cast<double>(plane_bits) /
                             static_cast<double>(denom);
  std::uint64_t weights = std::uint64_t(h.m) * h.n;
  s.bits_per_weight = weights == 0 ? 0.0
                                   : static_cast<double>(denom) /
                                         static_cast<double>(weights);
  s.memory_reduction = s.ratio == 0.0 ? 0.0 : 1.0 - 1.0 / s.ratio;
  return s;
}

}  // namespace xqz::tensor
