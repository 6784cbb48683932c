#include <doctest.h>

#include <cstdint>
#include <vector>

#include "xqz/codec.hpp"
#include "xqz/rng.hpp"
#include "xqz/synth.hpp"
#include "xqz/tensor.hpp"

using namespace xqz;

TEST_CASE("gen_words boundary sparsities") {
  synth::SynthConfig cfg;
  cfg.total_bits = 2000;
  cfg.seed = 5;

  cfg.sparsity = 1.0;
  for (const auto& w : synth::gen_words(cfg, 50)) {
    CHECK(w.care_count() == 0);
  }

  cfg.sparsity = 0.0;
  std::size_t words = 0;
  for (const auto& w : synth::gen_words(cfg, 50)) {
    CHECK(w.care_count() == w.n_out());
    ++words;
  }
  CHECK(words == 40);
}

TEST_CASE("care fraction tracks 1-S within binomial tolerance") {
  double total_care = 0;
  int seeds = 10;
  for (int s = 0; s < seeds; ++s) {
    auto [values, care] = synth::gen_plane(10000, 0.9, 1000 + s);
    total_care += static_cast<double>(care.popcount()) / 10000.0;
  }
  double mean_care = total_care / seeds;
  CHECK(mean_care > 0.085);
  CHECK(mean_care < 0.115);
}

TEST_CASE("gen_plane is deterministic and slicing-independent") {
  auto [v1, c1] = synth::gen_plane(5000, 0.8, 77);
  auto [v2, c2] = synth::gen_plane(5000, 0.8, 77);
  CHECK(v1 == v2);
  CHECK(c1 == c2);

  synth::SynthConfig cfg;
  cfg.total_bits = 5000;
  cfg.sparsity = 0.8;
  cfg.seed = 77;
  auto words_a = synth::gen_words(cfg, 100);
  auto words_b = synth::gen_words(cfg, 250);
  // Same underlying plane regardless of word width.
  CHECK(words_a[0].values.slice(0, 100) == v1.slice(0, 100));
  CHECK(words_b[0].values.slice(0, 100) == v1.slice(0, 100));
}

TEST_CASE("gen_words validates n_out") {
  synth::SynthConfig cfg;
  cfg.total_bits = 100;
  CHECK_THROWS_AS(synth::gen_words(cfg, 0), std::invalid_argument);
  CHECK_THROWS_AS(synth::gen_words(cfg, 101), std::invalid_argument);
}

TEST_CASE("default grid is 2*n_in..20*n_in step n_in") {
  auto grid = synth::default_grid(20, 10000);
  REQUIRE(grid.size() == 19);
  CHECK(grid.front() == 40);
  CHECK(grid[1] == 60);
  CHECK(grid.back() == 400);

  auto capped = synth::default_grid(20, 100);
  CHECK(capped == std::vector<std::size_t>{40, 60, 80, 100});
}

TEST_CASE("payload bits follow the fixed-rate closed form") {
  synth::SynthConfig cfg;
  cfg.total_bits = 10000;
  cfg.trials = 1;
  cfg.n_in = 20;
  auto rows = synth::sweep_nout(cfg);
  std::uint64_t prev_payload = ~0ull;
  for (const auto& row : rows) {
    std::uint64_t l = (cfg.total_bits + row.n_out - 1) / row.n_out;
    CHECK(row.payload_bits == 20 * l);
    CHECK(row.payload_bits <= prev_payload);  // monotone in n_out
    prev_payload = row.payload_bits;
  }
}

TEST_CASE("sweep rows are reproducible apart from wall time") {
  synth::SynthConfig cfg;
  cfg.total_bits = 3000;
  cfg.trials = 2;
  cfg.n_in = 12;
  cfg.n_out_grid = {48, 96, 144};
  auto a = synth::sweep_nout(cfg);
  auto b = synth::sweep_nout(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].n_out == b[i].n_out);
    CHECK(a[i].payload_bits == b[i].payload_bits);
    CHECK(a[i].width_bits == b[i].width_bits);
    CHECK(a[i].patch_bits == b[i].patch_bits);
    CHECK(a[i].reduction == b[i].reduction);
    CHECK(a[i].mean_patch == b[i].mean_patch);
    CHECK(a[i].max_patch == b[i].max_patch);
  }
}

TEST_CASE("patch bits grow with n_out on seed-averaged runs") {
  synth::SynthConfig cfg;
  cfg.total_bits = 10000;
  cfg.sparsity = 0.9;
  cfg.n_in = 20;
  cfg.trials = 5;
  cfg.n_out_grid = {60, 120, 180, 240, 300, 360};
  auto rows = synth::sweep_nout(cfg);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].patch_bits >= rows[i - 1].patch_bits);
  }
}

TEST_CASE("reduction never beats sparsity plus padding slack") {
  synth::SynthConfig cfg;
  cfg.total_bits = 4000;
  cfg.trials = 3;
  for (double s : {0.5, 0.8, 0.95}) {
    cfg.sparsity = s;
    for (std::size_t n_in : {8u, 16u}) {
      cfg.n_in = n_in;
      cfg.n_out_grid.clear();
      for (const auto& row : synth::sweep_nout(cfg)) {
        std::size_t l = (cfg.total_bits + row.n_out - 1) / row.n_out;
        double padding = static_cast<double>(l * row.n_out - cfg.total_bits) /
                         static_cast<double>(cfg.total_bits);
        // 0.01 covers binomial noise in the realized care count.
        CHECK(row.reduction <= s + padding + 0.01);
      }
    }
  }
}

TEST_CASE("measure_point accounting agrees with the tensor pipeline") {
  synth::SynthConfig cfg;
  cfg.total_bits = 6000;
  cfg.sparsity = 0.85;
  cfg.seed = 31;
  cfg.n_in = 16;
  cfg.trials = 1;
  std::size_t n_out = 160;
  synth::SweepRow row = synth::measure_point(cfg, n_out);

  auto [values, care] =
      synth::gen_plane(cfg.total_bits, cfg.sparsity, mix_seed(cfg.seed, 0));
  tensor::QuantizedMatrix qm;
  qm.m = 1;
  qm.n = static_cast<std::uint32_t>(cfg.total_bits);
  qm.n_q = 1;
  qm.prune_mask = care;
  qm.planes = {values};

  codec::XorNetwork net =
      codec::make_network(n_out, cfg.n_in, mix_seed(cfg.seed, 1));
  std::size_t l = (cfg.total_bits + n_out - 1) / n_out;
  tensor::CompressedTensor ct = tensor::encode_tensor(
      qm, net, {.block_size = static_cast<std::uint32_t>(l)});
  tensor::CompressionStats s = tensor::compression_stats(ct);

  CHECK(row.payload_bits == s.payload_bits);
  CHECK(row.width_bits == doctest::Approx(double(s.width_field_bits)));
  CHECK(row.patch_bits == doctest::Approx(double(s.patch_pos_bits)));
  CHECK(row.reduction ==
        doctest::Approx(1.0 - double(s.compressed_bits()) / 6000.0));
}

TEST_CASE("stopped n_out scan halts after two consecutive declines") {
  synth::SynthConfig cfg;
  cfg.total_bits = 2000;
  cfg.sparsity = 0.9;
  cfg.n_in = 20;
  cfg.trials = 2;
  auto rows = synth::sweep_nout_stopped(cfg);
  REQUIRE(!rows.empty());
  std::size_t declines = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].reduction < rows[i - 1].reduction) {
      ++declines;
      // Two in a row only allowed at the stopping point.
      if (declines >= 2) CHECK(i == rows.size() - 1);
    } else {
      declines = 0;
    }
  }
}

TEST_CASE("sweep_nin reports one best row per n_in above its floor") {
  synth::SynthConfig cfg;
  cfg.total_bits = 4000;
  cfg.sparsity = 0.9;
  cfg.trials = 2;
  std::vector<std::size_t> n_ins{12, 16};
  auto rows = synth::sweep_nin(cfg, n_ins);
  REQUIRE(rows.size() == 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].n_in == n_ins[i]);
    CHECK(rows[i].n_out > rows[i].n_in);
    CHECK(rows[i].reduction > 0.0);
  }
}

TEST_CASE("CSV and JSON reports carry the fixed columns") {
  synth::SweepRow row;
  row.n_in = 20;
  row.n_out = 200;
  row.sparsity = 0.9;
  row.reduction = 0.83;
  row.ratio = 5.88;
  row.mean_patch = 1.5;
  row.max_patch = 7;
  row.seconds = 0.25;
  std::vector<synth::SweepRow> rows{row};

  std::string csv = synth::to_csv(rows);
  CHECK(csv.find("n_in,n_out,sparsity,reduction,ratio,mean_patch,max_patch,"
                 "seconds") == 0);
  CHECK(csv.find("20,200,0.9,0.83,5.88,1.5,7,") != std::string::npos);

  std::string json = synth::to_json(rows);
  CHECK(json.find("\"n_out\": 200") != std::string::npos);
  CHECK(json.find("\"reduction\": 0.83") != std::string::npos);
}
