#include "xqz/synth.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "xqz/rng.hpp"

namespace xqz::synth {

namespace {

// Two draws per element (care decision, then value) so the stream
// layout is independent of the outcomes.
void fill_plane(gf2::BitVector& values, gf2::BitVector& care,
                double sparsity, Xorshift64Star& rng) {
  for (std::size_t i = 0; i < care.size(); ++i) {
    bool is_care = rng.next_double() < (1.0 - sparsity);
    bool value = rng.next_bit();
    if (is_care) {
      care.set(i, true);
      values.set(i, value);
    }
  }
}

}  // namespace

std::pair<gf2::BitVector, gf2::BitVector> gen_plane(std::uint64_t total_bits,
                                                    double sparsity,
                                                    std::uint64_t seed) {
  if (sparsity < 0.0 || sparsity > 1.0) {
    throw std::invalid_argument("gen_plane: sparsity outside [0, 1]");
  }
  gf2::BitVector values(total_bits);
  gf2::BitVector care(total_bits);
  Xorshift64Star rng(seed);
  fill_plane(values, care, sparsity, rng);
  return {std::move(values), std::move(care)};
}

std::vector<codec::MaskedWord> gen_words(const SynthConfig& cfg,
                                         std::size_t n_out,
                                         std::size_t trial) {
  if (n_out < 1 || n_out > cfg.total_bits) {
    throw std::invalid_argument("gen_words: need 1 <= n_out <= total_bits");
  }
  auto [values, care] =
      gen_plane(cfg.total_bits, cfg.sparsity, mix_seed(cfg.seed, 2 * trial));

  std::size_t l = (cfg.total_bits + n_out - 1) / n_out;
  std::vector<codec::MaskedWord> words;
  words.reserve(l);
  for (std::size_t w = 0; w < l; ++w) {
    words.emplace_back(values.slice(w * n_out, n_out),
                       care.slice(w * n_out, n_out));
  }
  return words;
}

tensor::QuantizedMatrix gen_qmat(std::uint32_t m, std::uint32_t n,
                                 std::uint8_t n_q, double sparsity,
                                 std::uint64_t seed) {
  if (sparsity < 0.0 || sparsity > 1.0) {
    throw std::invalid_argument("gen_qmat: sparsity outside [0, 1]");
  }
  tensor::QuantizedMatrix qm;
  qm.m = m;
  qm.n = n;
  qm.n_q = n_q;
  std::size_t total = qm.weight_count();

  Xorshift64Star rng(seed);
  qm.prune_mask = gf2::BitVector(total);
  for (std::size_t i = 0; i < total; ++i) {
    qm.prune_mask.set(i, rng.next_double() < (1.0 - sparsity));
  }
  for (std::size_t p = 0; p < n_q; ++p) {
    gf2::BitVector plane(total);
    for (std::size_t i = 0; i < total; ++i) {
      bool value = rng.next_bit();
      if (qm.prune_mask.get(i)) plane.set(i, value);
    }
    qm.planes.push_back(std::move(plane));
  }
  return qm;
}

std::vector<std::size_t> default_grid(std::size_t n_in,
                                      std::uint64_t total_bits) {
  std::vector<std::size_t> grid;
  for (std::size_t k = 2; k <= 20; ++k) {
    std::size_t n_out = k * n_in;
    if (n_out > total_bits) break;
    grid.push_back(n_out);
  }
  return grid;
}

SweepRow measure_point(const SynthConfig& cfg, std::size_t n_out) {
  if (cfg.trials < 1) {
    throw std::invalid_argument("measure_point: trials must be >= 1");
  }
  auto start = std::chrono::steady_clock::now();

  std::size_t l = (cfg.total_bits + n_out - 1) / n_out;
  std::size_t pos_bits = tensor::position_bits(n_out);

  SweepRow row;
  row.n_in = cfg.n_in;
  row.n_out = n_out;
  row.sparsity = cfg.sparsity;
  row.payload_bits = std::uint64_t(cfg.n_in) * l;

  double sum_compressed = 0.0;
  std::uint64_t sum_patches = 0;
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    std::vector<codec::MaskedWord> words = gen_words(cfg, n_out, trial);
    codec::XorNetwork net = codec::make_network(
        n_out, cfg.n_in, mix_seed(cfg.seed, 2 * trial + 1));

    std::uint32_t max_patch = 0;
    std::uint64_t patches = 0;
    for (const auto& word : words) {
      codec::EncodedWord enc =
          cfg.exhaustive
              ? codec::encode_word_exhaustive(net, word, cfg.exhaustive_limit)
              : codec::encode_word(net, word);
      patches += enc.n_patch();
      max_patch = std::max(max_patch, static_cast<std::uint32_t>(enc.n_patch()));
    }

    double width_bits = static_cast<double>(tensor::count_bits(max_patch) * l);
    double patch_bits = static_cast<double>(patches * pos_bits);
    sum_compressed += static_cast<double>(row.payload_bits) + width_bits +
                      patch_bits;
    sum_patches += patches;
    row.width_bits += width_bits;
    row.patch_bits += patch_bits;
    row.max_patch = std::max(row.max_patch, max_patch);
  }

  double trials = static_cast<double>(cfg.trials);
  row.width_bits /= trials;
  row.patch_bits /= trials;
  double mean_compressed = sum_compressed / trials;
  row.reduction = 1.0 - mean_compressed / static_cast<double>(cfg.total_bits);
  row.ratio = static_cast<double>(cfg.total_bits) / mean_compressed;
  row.mean_patch =
      static_cast<double>(sum_patches) / (trials * static_cast<double>(l));
  row.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return row;
}

std::vector<SweepRow> sweep_nout(const SynthConfig& cfg) {
  std::vector<std::size_t> grid =
      cfg.n_out_grid.empty() ? default_grid(cfg.n_in, cfg.total_bits)
                             : cfg.n_out_grid;
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (std::size_t n_out : grid) rows.push_back(measure_point(cfg, n_out));
  return rows;
}

std::vector<SweepRow> sweep_nout_stopped(const SynthConfig& cfg) {
  std::vector<std::size_t> grid =
      cfg.n_out_grid.empty() ? default_grid(cfg.n_in, cfg.total_bits)
                             : cfg.n_out_grid;
  if (grid.empty()) {
    throw std::invalid_argument("sweep_nout_stopped: empty n_out grid");
  }
  std::vector<SweepRow> rows;
  double prev = -std::numeric_limits<double>::infinity();
  std::size_t declines = 0;
  for (std::size_t n_out : grid) {
    rows.push_back(measure_point(cfg, n_out));
    double reduction = rows.back().reduction;
    if (reduction < prev) {
      if (++declines >= 2) break;
    } else {
      declines = 0;
    }
    prev = reduction;
  }
  return rows;
}

namespace {

SweepRow best_over_nout(const SynthConfig& cfg) {
  std::vector<SweepRow> rows = sweep_nout_stopped(cfg);
  SweepRow best = rows.front();
  for (const auto& row : rows) {
    if (row.reduction > best.reduction) best = row;
  }
  return best;
}

}  // namespace

std::vector<SweepRow> sweep_nin(const SynthConfig& cfg,
                                std::span<const std::size_t> n_in_values) {
  std::vector<SweepRow> rows;
  rows.reserve(n_in_values.size());
  for (std::size_t n_in : n_in_values) {
    SynthConfig point = cfg;
    point.n_in = n_in;
    rows.push_back(best_over_nout(point));
  }
  return rows;
}

std::vector<SweepRow> sweep_sparsity(const SynthConfig& cfg,
                                     std::span<const double> sparsities) {
  std::vector<SweepRow> rows;
  rows.reserve(sparsities.size());
  for (double s : sparsities) {
    SynthConfig point = cfg;
    point.sparsity = s;
    rows.push_back(best_over_nout(point));
  }
  return rows;
}

std::string to_csv(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << "n_in,n_out,sparsity,reduction,ratio,mean_patch,max_patch,seconds\n";
  for (const auto& r : rows) {
    out << r.n_in << ',' << r.n_out << ',' << r.sparsity << ','
        << r.reduction << ',' << r.ratio << ',' << r.mean_patch << ','
        << r.max_patch << ',' << r.seconds << '\n';
  }
  return out.str();
}

std::string to_json(std::span<const SweepRow> rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"n_in", r.n_in},
                   {"n_out", r.n_out},
                   {"sparsity", r.sparsity},
                   {"reduction", r.reduction},
                   {"ratio", r.ratio},
                   {"mean_patch", r.mean_patch},
                   {"max_patch", r.max_patch},
                   {"seconds", r.seconds}});
  }
  return arr.dump(2);
}

}  // namespace xqz::synth
