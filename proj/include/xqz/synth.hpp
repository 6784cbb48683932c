#ifndef XQZ_SYNTH_HPP
#define XQZ_SYNTH_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "xqz/codec.hpp"
#include "xqz/tensor.hpp"

namespace xqz::synth {

struct SynthConfig {
  std::uint64_t total_bits = 10000;
  double sparsity = 0.9;
  std::uint64_t seed = 1;
  std::size_t n_in = 20;
  std::vector<std::size_t> n_out_grid;  // empty -> default_grid(n_in)
  std::size_t trials = 3;
  bool exhaustive = false;
  std::size_t exhaustive_limit = 24;
};

// One sweep point, averaged over the configured trials. payload_bits
// is the same every trial (fixed-rate format); width/patch bits and
// reduction are trial means. `seconds` is wall time and is the only
// field that is not reproducible run to run.
struct SweepRow {
  std::size_t n_in = 0;
  std::size_t n_out = 0;
  double sparsity = 0.0;
  std::uint64_t payload_bits = 0;
  double width_bits = 0.0;
  double patch_bits = 0.0;
  double reduction = 0.0;
  double ratio = 0.0;
  double mean_patch = 0.0;
  std::uint32_t max_patch = 0;
  double seconds = 0.0;
};

// One synthetic bit-plane: each position is a don't-care with
// probability `sparsity`, care bits are fair coin flips. Returns
// (values, care_mask). Deterministic per seed and independent of any
// later slicing width.
std::pair<gf2::BitVector, gf2::BitVector> gen_plane(std::uint64_t total_bits,
                                                    double sparsity,
                                                    std::uint64_t seed);

// The plane for (cfg.seed, trial) sliced into n_out-bit words, last
// word padded with don't-cares.
std::vector<codec::MaskedWord> gen_words(const SynthConfig& cfg,
                                         std::size_t n_out,
                                         std::size_t trial = 0);

// Random QMAT-shaped matrix with the same per-bit distribution.
tensor::QuantizedMatrix gen_qmat(std::uint32_t m, std::uint32_t n,
                                 std::uint8_t n_q, double sparsity,
                                 std::uint64_t seed);

// Default n_out sweep grid: {2*n_in, 3*n_in, ..., 20*n_in}, capped at
// total_bits.
std::vector<std::size_t> default_grid(std::size_t n_in,
                                      std::uint64_t total_bits);

// Encodes the synthetic stream at one (n_in, n_out) point and averages
// the bit accounting over cfg.trials.
SweepRow measure_point(const SynthConfig& cfg, std::size_t n_out);

// Full reduction-vs-n_out curve over the grid.
std::vector<SweepRow> sweep_nout(const SynthConfig& cfg);

// Same scan but stopped after two consecutive declining reductions;
// returns the rows actually evaluated.
std::vector<SweepRow> sweep_nout_stopped(const SynthConfig& cfg);

// Best-over-n_out row per n_in. The n_out scan stops after two
// consecutive declining reductions.
std::vector<SweepRow> sweep_nin(const SynthConfig& cfg,
                                std::span<const std::size_t> n_in_values);

// Best-over-n_out row per sparsity level, same stopping rule.
std::vector<SweepRow> sweep_sparsity(const SynthConfig& cfg,
                                     std::span<const double> sparsities);

// Report emission; fixed column set
// n_in,n_out,sparsity,reduction,ratio,mean_patch,max_patch,seconds.
std::string to_csv(std::span<const SweepRow> rows);
std::string to_json(std::span<const SweepRow> rows);

}  // namespace xqz::synth

#endif  // XQZ_SYNTH_HPP
