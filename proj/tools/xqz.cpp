// xqz: encode/decode sparse quantized weight matrices through a random
// XOR-gate network, plus sweep experiments and a decode-path simulator.
//
// Exit codes: 0 ok, 1 usage/config error, 2 I/O error, 3 corrupt
// stream, 4 verification mismatch.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xqz/codec.hpp"
#include "xqz/errors.hpp"
#include "xqz/rng.hpp"
#include "xqz/sim.hpp"
#include "xqz/synth.hpp"
#include "xqz/tensor.hpp"

namespace {

using namespace xqz;

constexpr std::uint64_t kDefaultSeed = 1;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VerifyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path);
  return bytes;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

nlohmann::json stats_to_json(const tensor::CompressionStats& s) {
  return nlohmann::json{{"payload_bits", s.payload_bits},
                        {"width_field_bits", s.width_field_bits},
                        {"patch_pos_bits", s.patch_pos_bits},
                        {"header_bits", s.header_bits},
                        {"paper_width_field_bits", s.paper_width_field_bits},
                        {"compressed_bits", s.compressed_bits()},
                        {"ratio", s.ratio},
                        {"bits_per_weight", s.bits_per_weight},
                        {"memory_reduction", s.memory_reduction}};
}

void print_stats(const tensor::CompressionStats& s, const std::string& format) {
  if (format == "json") {
    std::cout << stats_to_json(s).dump(2) << "\n";
    return;
  }
  std::printf("payload bits          %llu\n",
              static_cast<unsigned long long>(s.payload_bits));
  std::printf("width field bits      %llu\n",
              static_cast<unsigned long long>(s.width_field_bits));
  std::printf("patch position bits   %llu\n",
              static_cast<unsigned long long>(s.patch_pos_bits));
  std::printf("header bits           %llu\n",
              static_cast<unsigned long long>(s.header_bits));
  std::printf("width bits (lg max)   %llu\n",
              static_cast<unsigned long long>(s.paper_width_field_bits));
  std::printf("compression ratio     %.6g\n", s.ratio);
  std::printf("bits per weight       %.6g\n", s.bits_per_weight);
  std::printf("memory reduction      %.6g\n", s.memory_reduction);
}

std::uint64_t resolve_seed(std::uint64_t seed, bool entropy) {
  if (!entropy) return seed;
  std::random_device rd;
  return (std::uint64_t(rd()) << 32) | rd();
}

struct EncodeArgs {
  std::string input;
  std::string output;
  std::size_t n_in = 20;
  std::size_t n_out = 200;
  std::uint32_t block_size = 64;
  std::uint64_t seed = kDefaultSeed;
  bool entropy_seed = false;
  bool exhaustive = false;
  std::size_t threads = 1;
  std::string format = "text";
};

tensor::CompressedTensor encode_from_args(const EncodeArgs& a,
                                          tensor::QuantizedMatrix* qm_out) {
  tensor::QuantizedMatrix qm = tensor::parse_qmat(read_file(a.input));
  codec::XorNetwork net = codec::make_network(
      a.n_out, a.n_in, resolve_seed(a.seed, a.entropy_seed));
  tensor::CompressedTensor ct =
      tensor::encode_tensor(qm, net,
                            {.block_size = a.block_size,
                             .threads = a.threads,
                             .exhaustive = a.exhaustive});
  if (qm_out) *qm_out = std::move(qm);
  return ct;
}

int run_encode(const EncodeArgs& a) {
  tensor::CompressedTensor ct = encode_from_args(a, nullptr);
  write_file(a.output, tensor::serialize(ct));
  print_stats(tensor::compression_stats(ct), a.format);
  return 0;
}

int run_verify(const EncodeArgs& a) {
  tensor::QuantizedMatrix qm;
  tensor::CompressedTensor ct = encode_from_args(a, &qm);
  tensor::CompressedTensor back = tensor::deserialize(tensor::serialize(ct));
  tensor::QuantizedMatrix decoded = tensor::decode_tensor(back, qm.prune_mask);
  for (std::size_t p = 0; p < qm.planes.size(); ++p) {
    if ((decoded.planes[p] & qm.prune_mask) != qm.planes[p]) {
      throw VerifyError("care-bit mismatch in plane " + std::to_string(p));
    }
  }
  std::cout << "verify OK: " << qm.m << "x" << qm.n << " n_q=" << int(qm.n_q)
            << ", " << ct.words.size() << " words lossless\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"XOR-gate-network codec for sparse quantized weight matrices"};
  app.require_subcommand(1);

  // encode / verify share their flag set.
  EncodeArgs enc;
  auto add_encode_flags = [&](CLI::App* cmd, bool with_output) {
    cmd->add_option("--input", enc.input, "input QMAT file")->required();
    if (with_output) {
      cmd->add_option("--output", enc.output, "output XQZ file")->required();
    }
    cmd->add_option("--n-in", enc.n_in, "seed vector width");
    cmd->add_option("--n-out", enc.n_out, "word width");
    cmd->add_option("--block-size", enc.block_size,
                    "words per n_patch width block");
    cmd->add_option("--seed", enc.seed, "network seed");
    cmd->add_flag("--entropy-seed", enc.entropy_seed,
                  "seed from system entropy instead of the fixed default");
    cmd->add_flag("--exhaustive", enc.exhaustive,
                  "minimize patches by exhausting all seed vectors");
    cmd->add_option("--threads", enc.threads, "encoder worker threads");
    cmd->add_option("--format", enc.format, "stats format: text|json")
        ->check(CLI::IsMember({"text", "json"}));
  };
  add_encode_flags(app.add_subcommand("encode", "compress QMAT to XQZ"), true);
  add_encode_flags(
      app.add_subcommand("verify",
                         "encode then decode in memory and compare care bits"),
      false);

  auto* decode = app.add_subcommand("decode", "decompress XQZ to QMAT");
  std::string dec_input, dec_mask, dec_output;
  decode->add_option("--input", dec_input, "input XQZ file")->required();
  decode->add_option("--mask", dec_mask,
                     "QMAT file supplying the prune mask")->required();
  decode->add_option("--output", dec_output, "output QMAT file")->required();

  auto* stats = app.add_subcommand("stats", "bit accounting for an XQZ file");
  std::string stats_input, stats_format = "text", stats_trace_out;
  stats->add_option("--input", stats_input, "input XQZ file")->required();
  stats->add_option("--format", stats_format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));
  stats->add_option("--trace-out", stats_trace_out,
                    "write the per-word n_patch trace as JSON");

  auto* sweep = app.add_subcommand("synth-sweep",
                                   "synthetic-stream compression sweeps");
  std::string sweep_kind = "nout", sweep_format = "csv", sweep_output;
  synth::SynthConfig sweep_cfg;
  std::vector<std::size_t> sweep_n_ins{12, 20, 28, 36, 44, 52, 60};
  std::vector<double> sweep_sparsities{0.8, 0.9, 0.95};
  sweep->add_option("--sweep", sweep_kind, "nout|nin|sparsity")
      ->check(CLI::IsMember({"nout", "nin", "sparsity"}));
  sweep->add_option("--bits", sweep_cfg.total_bits, "stream length in bits");
  sweep->add_option("--s", sweep_cfg.sparsity, "don't-care probability");
  sweep->add_option("--n-in", sweep_cfg.n_in, "seed vector width");
  sweep->add_option("--seed", sweep_cfg.seed, "base seed");
  sweep->add_option("--trials", sweep_cfg.trials, "seeds averaged per point");
  sweep->add_option("--n-out-grid", sweep_cfg.n_out_grid,
                    "explicit n_out grid (default 2*n_in..20*n_in)");
  sweep->add_option("--n-in-values", sweep_n_ins, "n_in list for --sweep nin");
  sweep->add_option("--sparsities", sweep_sparsities,
                    "S list for --sweep sparsity");
  sweep->add_flag("--exhaustive", sweep_cfg.exhaustive,
                  "use exhaustive seed search");
  sweep->add_option("--format", sweep_format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--output", sweep_output, "write report to file");

  auto* simulate = app.add_subcommand("simulate", "decode-path FIFO model");
  std::string sim_trace, sim_xqz, sim_output;
  sim::SimConfig sim_cfg;
  bool sim_synth = false;
  std::uint64_t sim_bits = 10000;
  double sim_s = 0.9;
  std::size_t sim_n_in = 20, sim_n_out = 200;
  std::uint64_t sim_seed = kDefaultSeed;
  simulate->add_option("--trace", sim_trace,
                       "JSON array of per-word n_patch");
  simulate->add_option("--input", sim_xqz, "take the trace from an XQZ file");
  simulate->add_flag("--synthetic", sim_synth,
                     "encode a synthetic stream for the trace");
  simulate->add_option("--bits", sim_bits, "synthetic stream bits");
  simulate->add_option("--s", sim_s, "synthetic sparsity");
  simulate->add_option("--n-in", sim_n_in, "synthetic seed width");
  simulate->add_option("--n-out", sim_n_out, "synthetic word width");
  simulate->add_option("--seed", sim_seed, "synthetic seed");
  simulate->add_option("--n-decoders", sim_cfg.n_decoders, "decoder count");
  simulate->add_option("--n-fifo", sim_cfg.n_fifo,
                       "patch entries deliverable per cycle");
  simulate->add_option("--fifo-depth", sim_cfg.fifo_depth, "FIFO capacity");
  simulate->add_option("--output", sim_output, "write JSON report to file");

  auto* gen = app.add_subcommand("gen-synthetic", "emit a random QMAT");
  std::uint32_t gen_m = 100, gen_n = 100;
  std::uint8_t gen_nq = 1;
  double gen_s = 0.9;
  std::uint64_t gen_seed = kDefaultSeed;
  bool gen_entropy = false;
  std::string gen_output;
  gen->add_option("--m", gen_m, "rows");
  gen->add_option("--n", gen_n, "cols");
  gen->add_option("--n-q", gen_nq, "bit planes");
  gen->add_option("--s", gen_s, "don't-care probability");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_flag("--entropy-seed", gen_entropy, "seed from system entropy");
  gen->add_option("--output", gen_output, "output QMAT file")->required();

  try {
    app.parse(argc, argv);

    if (app.got_subcommand("encode")) return run_encode(enc);
    if (app.got_subcommand("verify")) return run_verify(enc);

    if (app.got_subcommand("decode")) {
      tensor::CompressedTensor ct = tensor::deserialize(read_file(dec_input));
      tensor::QuantizedMatrix mask_src = tensor::parse_qmat(read_file(dec_mask));
      tensor::QuantizedMatrix qm = tensor::decode_tensor(ct, mask_src.prune_mask);
      write_file(dec_output, tensor::serialize_qmat(qm));
      return 0;
    }

    if (app.got_subcommand("stats")) {
      tensor::CompressedTensor ct = tensor::deserialize(read_file(stats_input));
      print_stats(tensor::compression_stats(ct), stats_format);
      if (!stats_trace_out.empty()) {
        nlohmann::json trace = nlohmann::json::array();
        for (auto count : ct.patch_counts()) trace.push_back(count);
        write_text(stats_trace_out, trace.dump());
      }
      return 0;
    }

    if (app.got_subcommand("synth-sweep")) {
      std::vector<synth::SweepRow> rows;
      if (sweep_kind == "nout") {
        rows = synth::sweep_nout(sweep_cfg);
      } else if (sweep_kind == "nin") {
        rows = synth::sweep_nin(sweep_cfg, sweep_n_ins);
      } else {
        rows = synth::sweep_sparsity(sweep_cfg, sweep_sparsities);
      }
      std::string report = sweep_format == "csv" ? synth::to_csv(rows)
                                                 : synth::to_json(rows);
      if (sweep_output.empty()) {
        std::cout << report;
      } else {
        write_text(sweep_output, report);
      }
      return 0;
    }

    if (app.got_subcommand("simulate")) {
      int sources = int(!sim_trace.empty()) + int(!sim_xqz.empty()) +
                    int(sim_synth);
      if (sources != 1) {
        throw std::invalid_argument(
            "simulate needs exactly one of --trace, --input, --synthetic");
      }
      if (!sim_trace.empty()) {
        std::vector<std::uint8_t> bytes = read_file(sim_trace);
        nlohmann::json j = nlohmann::json::parse(bytes.begin(), bytes.end(),
                                                 nullptr, false);
        if (j.is_discarded() || !j.is_array()) {
          throw CorruptStreamError("trace is not a JSON array");
        }
        for (const auto& v : j) {
          if (!v.is_number_unsigned()) {
            throw CorruptStreamError("trace entries must be unsigned");
          }
          sim_cfg.trace.push_back(v.get<std::uint32_t>());
        }
      } else if (!sim_xqz.empty()) {
        tensor::CompressedTensor ct = tensor::deserialize(read_file(sim_xqz));
        sim_cfg.trace = ct.patch_counts();
      } else {
        synth::SynthConfig scfg;
        scfg.total_bits = sim_bits;
        scfg.sparsity = sim_s;
        scfg.seed = sim_seed;
        scfg.n_in = sim_n_in;
        codec::XorNetwork net =
            codec::make_network(sim_n_out, sim_n_in, mix_seed(sim_seed, 1));
        for (const auto& word : synth::gen_words(scfg, sim_n_out)) {
          sim_cfg.trace.push_back(static_cast<std::uint32_t>(
              codec::encode_word(net, word).n_patch()));
        }
      }
      std::string report = sim::report_to_json(sim::simulate_decode(sim_cfg));
      if (sim_output.empty()) {
        std::cout << report << "\n";
      } else {
        write_text(sim_output, report);
      }
      return 0;
    }

    if (app.got_subcommand("gen-synthetic")) {
      tensor::QuantizedMatrix qm = synth::gen_qmat(
          gen_m, gen_n, gen_nq, gen_s, resolve_seed(gen_seed, gen_entropy));
      write_file(gen_output, tensor::serialize_qmat(qm));
      return 0;
    }

    return 1;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const CorruptStreamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const VerifyError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
