#include "xqz/sim.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace xqz::sim {

namespace {

struct DecoderRun {
  std::uint64_t cycles = 0;
  std::uint64_t stalls = 0;
  std::uint64_t full_events = 0;
};

DecoderRun run_decoder(std::span<const std::uint32_t> words,
                       std::size_t n_fifo, std::size_t depth) {
  std::uint64_t supply = 0;
  for (std::uint32_t n : words) supply += n;

  DecoderRun run;
  std::uint64_t delivered = 0;
  std::uint64_t occupancy = 0;
  std::size_t w = 0;
  while (w < words.size()) {
    // Fill first: entries pushed this cycle are usable this cycle.
    std::uint64_t want = std::min<std::uint64_t>(n_fifo, supply - delivered);
    std::uint64_t space = depth - occupancy;
    std::uint64_t push = std::min(want, space);
    if (push < want) ++run.full_events;  // lost fill bandwidth this cycle
    occupancy += push;
    delivered += push;

    if (occupancy >= words[w]) {
      occupancy -= words[w];
      ++w;
    } else {
      ++run.stalls;
    }
    ++run.cycles;
  }
  return run;
}

}  // namespace

SimReport simulate_decode(const SimConfig& cfg) {
  if (cfg.trace.empty()) {
    throw std::invalid_argument("simulate_decode: empty trace");
  }
  if (cfg.n_decoders < 1 || cfg.n_fifo < 1 || cfg.fifo_depth < 1) {
    throw std::invalid_argument("simulate_decode: invalid configuration");
  }
  for (std::uint32_t n : cfg.trace) {
    if (n > cfg.fifo_depth) {
      throw std::invalid_argument(
          "simulate_decode: word needs more patch entries than fifo_depth");
    }
  }

  // Round-robin deal, then each decoder runs independently; decoders
  // share no state, so lockstep and sequential simulation agree.
  std::vector<std::vector<std::uint32_t>> per_decoder(cfg.n_decoders);
  for (std::size_t i = 0; i < cfg.trace.size(); ++i) {
    per_decoder[i % cfg.n_decoders].push_back(cfg.trace[i]);
  }

  SimReport report;
  std::uint64_t ideal =
      (cfg.trace.size() + cfg.n_decoders - 1) / cfg.n_decoders;
  for (const auto& words : per_decoder) {
    if (words.empty()) continue;
    DecoderRun run = run_decoder(words, cfg.n_fifo, cfg.fifo_depth);
    report.total_cycles = std::max(report.total_cycles, run.cycles);
    report.fifo_empty_events += run.stalls;
    report.fifo_full_events += run.full_events;
  }
  report.ideal_cycles = static_cast<double>(ideal);
  report.stall_cycles =
      static_cast<double>(report.total_cycles) - report.ideal_cycles;
  report.relative_time =
      static_cast<double>(report.total_cycles) / report.ideal_cycles;
  return report;
}

SimReport simulate_csr(std::span<const std::uint32_t> row_nnz,
                       std::size_t n_decoders) {
  if (row_nnz.empty()) {
    throw std::invalid_argument("simulate_csr: empty rows");
  }
  if (n_decoders < 1) {
    throw std::invalid_argument("simulate_csr: invalid decoder count");
  }

  std::uint64_t total = 0;
  std::uint64_t work = 0;
  for (std::size_t begin = 0; begin < row_nnz.size(); begin += n_decoders) {
    std::size_t end = std::min(begin + n_decoders, row_nnz.size());
    std::uint32_t batch_max = 0;
    for (std::size_t i = begin; i < end; ++i) {
      batch_max = std::max(batch_max, row_nnz[i]);
      work += row_nnz[i];
    }
    total += batch_max;
  }

  SimReport report;
  report.total_cycles = total;
  report.ideal_cycles =
      static_cast<double>(work) / static_cast<double>(n_decoders);
  report.stall_cycles = static_cast<double>(total) - report.ideal_cycles;
  report.relative_time =
      work == 0 ? 1.0
                : static_cast<double>(total) / report.ideal_cycles;
  return report;
}

std::string report_to_json(const SimReport& report) {
  nlohmann::json j{{"total_cycles", report.total_cycles},
                   {"ideal_cycles", report.ideal_cycles},
                   {"stall_cycles", report.stall_cycles},
                   {"relative_time", report.relative_time},
                   {"fifo_full_events", report.fifo_full_events},
                   {"fifo_empty_events", report.fifo_empty_events}};
  return j.dump(2);
}

}  // namespace xqz::sim
