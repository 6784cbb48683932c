#ifndef XQZ_SIM_HPP
#define XQZ_SIM_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace xqz::sim {

// Decoder-array model: each decoder owns a patch FIFO refilled at
// n_fifo entries per cycle and must read n_patch entries to finish its
// current word. Words are dealt to decoders round-robin in stream
// order.
struct SimConfig {
  std::size_t n_decoders = 1;
  std::size_t n_fifo = 1;        // patch entries deliverable per cycle
  std::size_t fifo_depth = 256;  // buffer capacity in entries
  std::vector<std::uint32_t> trace;  // n_patch per word, stream order
};

struct SimReport {
  std::uint64_t total_cycles = 0;
  double ideal_cycles = 0.0;
  double stall_cycles = 0.0;
  double relative_time = 1.0;
  std::uint64_t fifo_full_events = 0;   // fill cycles capped by space
  std::uint64_t fifo_empty_events = 0;  // decoder cycles starved of entries
};

// Cycle-accurate run of the FIFO model. Fill happens before consume
// within a cycle; FIFOs start empty and warm-up stalls are counted.
// Requires a non-empty trace with every n_patch <= fifo_depth (a word
// needing more entries than the buffer holds could never complete).
SimReport simulate_decode(const SimConfig& cfg);

// CSR row-imbalance baseline: rows are processed in batches of
// n_decoders with a barrier after each batch, so a batch costs its
// largest row. relative_time compares against perfectly balanced work.
SimReport simulate_csr(std::span<const std::uint32_t> row_nnz,
                       std::size_t n_decoders);

std::string report_to_json(const SimReport& report);

}  // namespace xqz::sim

#endif  // XQZ_SIM_HPP
