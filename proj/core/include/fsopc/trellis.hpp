#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "fsopc/glrt_metric.hpp"

namespace fsopc {

struct TrellisConfig {
  std::size_t memory_length = 1;   ///< L_m: 1-decisions kept in the selective store
  std::size_t buffer_length = 20;  ///< l: capacity of the ongoing buffers

  void validate() const;
};

/// FIFO of the photon counts of the most recent L_m slots decided as 1.
class SelectiveStore {
 public:
  explicit SelectiveStore(std::size_t capacity);

  /// Append a decided 1-slot; `position` is its index in the decision stream.
  void push(std::int64_t count, std::uint64_t position);

  WindowStats stats() const noexcept {
    return {static_cast<std::int64_t>(counts_.size()), sum_};
  }
  std::size_t size() const noexcept { return counts_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  bool empty() const noexcept { return counts_.empty(); }
  /// Decision-stream index of the oldest stored slot. Requires !empty().
  std::uint64_t oldest_position() const { return positions_.front(); }

 private:
  std::size_t capacity_;
  std::deque<std::int64_t> counts_;
  std::deque<std::uint64_t> positions_;
  std::int64_t sum_ = 0;
};

/// Best path into one trellis node, restricted to its undecided part.
struct Survivor {
  std::vector<std::uint8_t> bits;  ///< ongoing (undecided) bits; back() is the node
  WindowStats stats;               ///< fold of add_slot over the ongoing bits
  LogMetric metric;                ///< metric when this path was selected
};

struct TrellisStats {
  std::uint64_t steps = 0;
  std::uint64_t emitted = 0;
  std::uint64_t forced_merges = 0;
  std::uint64_t metric_evaluations = 0;
  /// d_histogram[d]: steps that ended with an ongoing part of length d.
  std::vector<std::uint64_t> d_histogram;
  /// Sum over steps of L' (slots spanned by the stored 1-decisions).
  std::uint64_t detected_span_sum = 0;

  double mean_d() const;
  double mean_detected_span() const;
  /// Mean effective window L = L' + d.
  double mean_window() const;
  TrellisStats& operator+=(const TrellisStats& other);
};

/// Two-state Viterbi-type GLRT sequence detector with selective store.
///
/// Each node {0, 1} keeps one survivor. A candidate path is scored by the
/// log-metric of (selective store + its ongoing stats + the new slot), so the
/// work per step is four metric evaluations whatever L_m is. When both
/// survivors share a prefix, that prefix is decided and the counts of its
/// 1-slots enter the store. The store is shared by both survivors since it
/// only holds decided slots.
///
/// If the ongoing part reaches the buffer length l without merging, the next
/// step first forces a merge onto the better survivor.
class TrellisDecoder {
 public:
  TrellisDecoder(TrellisConfig config, double n_b);

  /// Consume one slot count; returns the bits decided by this step.
  std::vector<std::uint8_t> step(std::int64_t count);
  /// Decide all remaining ongoing bits from the better survivor and return to
  /// the root state. The selective store and statistics are kept.
  std::vector<std::uint8_t> flush();

  std::size_t ongoing_length() const noexcept { return ongoing_counts_.size(); }
  bool at_root() const noexcept { return !survivors_.has_value(); }
  const std::optional<std::array<Survivor, 2>>& survivors() const noexcept { return survivors_; }
  const SelectiveStore& store() const noexcept { return store_; }
  const TrellisStats& stats() const noexcept { return stats_; }
  const TrellisConfig& config() const noexcept { return config_; }
  double n_b() const noexcept { return n_b_; }

 private:
  LogMetric score(WindowStats ongoing);
  void decide_prefix(std::size_t length, const std::vector<std::uint8_t>& path,
                     std::vector<std::uint8_t>& out);
  std::size_t better_survivor();
  void force_merge(std::vector<std::uint8_t>& out);

  TrellisConfig config_;
  double n_b_;
  SelectiveStore store_;
  std::optional<std::array<Survivor, 2>> survivors_;
  std::deque<std::int64_t> ongoing_counts_;
  TrellisStats stats_;
};

}  // namespace fsopc
