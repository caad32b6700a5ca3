#include "fsopc/trellis.hpp"

#include <algorithm>

#include "fsopc/error.hpp"

namespace fsopc {

void TrellisConfig::validate() const {
  if (memory_length < 1) throw ParameterError("trellis: memory length L_m must be >= 1");
  if (buffer_length < 2) throw ParameterError("trellis: buffer length l must be >= 2");
}

SelectiveStore::SelectiveStore(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ < 1) throw ParameterError("selective store capacity must be >= 1");
}

void SelectiveStore::push(std::int64_t count, std::uint64_t position) {
  counts_.push_back(count);
  positions_.push_back(position);
  sum_ += count;
  if (counts_.size() > capacity_) {
    sum_ -= counts_.front();
    counts_.pop_front();
    positions_.pop_front();
  }
}

double TrellisStats::mean_d() const {
  if (steps == 0) return 0.0;
  double total = 0.0;
  for (std::size_t d = 0; d < d_histogram.size(); ++d) total += static_cast<double>(d * d_histogram[d]);
  return total / static_cast<double>(steps);
}

double TrellisStats::mean_detected_span() const {
  return steps == 0 ? 0.0 : static_cast<double>(detected_span_sum) / static_cast<double>(steps);
}

double TrellisStats::mean_window() const { return mean_detected_span() + mean_d(); }

TrellisStats& TrellisStats::operator+=(const TrellisStats& other) {
  steps += other.steps;
  emitted += other.emitted;
  forced_merges += other.forced_merges;
  metric_evaluations += other.metric_evaluations;
  detected_span_sum += other.detected_span_sum;
  if (d_histogram.size() < other.d_histogram.size()) d_histogram.resize(other.d_histogram.size(), 0);
  for (std::size_t i = 0; i < other.d_histogram.size(); ++i) d_histogram[i] += other.d_histogram[i];
  return *this;
}

namespace {

// Strict preference between two scored paths: higher metric, then fewer
// ones, then lexicographically smaller bits.
bool preferred(LogMetric ma, const WindowStats& sa, const std::vector<std::uint8_t>& ba, LogMetric mb,
               const WindowStats& sb, const std::vector<std::uint8_t>& bb) {
  if (ma != mb) return ma > mb;
  if (sa.n_on != sb.n_on) return sa.n_on < sb.n_on;
  return std::lexicographical_compare(ba.begin(), ba.end(), bb.begin(), bb.end());
}

}  // namespace

TrellisDecoder::TrellisDecoder(TrellisConfig config, double n_b)
    : config_(config), n_b_(n_b), store_(std::max<std::size_t>(config.memory_length, 1)) {
  config_.validate();
  if (!(n_b_ > 0.0)) throw ParameterError("trellis: n_b must be > 0");
  stats_.d_histogram.assign(config_.buffer_length + 1, 0);
}

LogMetric TrellisDecoder::score(WindowStats ongoing) {
  ++stats_.metric_evaluations;
  return log_metric(store_.stats() + ongoing, n_b_);
}

std::vector<std::uint8_t> TrellisDecoder::step(std::int64_t count) {
  std::vector<std::uint8_t> out;
  if (survivors_ && ongoing_length() >= config_.buffer_length) force_merge(out);

  std::array<Survivor, 2> next;
  if (!survivors_) {
    for (int b = 0; b < 2; ++b) {
      next[b].bits = {static_cast<std::uint8_t>(b)};
      next[b].stats = slot_stats(b, count);
      next[b].metric = score(next[b].stats);
    }
  } else {
    const auto& prev = *survivors_;
    for (int b = 0; b < 2; ++b) {
      const WindowStats c0 = prev[0].stats + slot_stats(b, count);
      const WindowStats c1 = prev[1].stats + slot_stats(b, count);
      const LogMetric m0 = score(c0);
      const LogMetric m1 = score(c1);
      // both entrants end in b, so comparing the parents' bits orders the paths
      const bool take1 = preferred(m1, c1, prev[1].bits, m0, c0, prev[0].bits);
      const Survivor& parent = take1 ? prev[1] : prev[0];
      next[b].bits = parent.bits;
      next[b].bits.push_back(static_cast<std::uint8_t>(b));
      next[b].stats = take1 ? c1 : c0;
      next[b].metric = take1 ? m1 : m0;
    }
  }
  survivors_ = std::move(next);
  ongoing_counts_.push_back(count);

  const auto& s = *survivors_;
  const auto mismatch = std::mismatch(s[0].bits.begin(), s[0].bits.end(), s[1].bits.begin());
  const auto common = static_cast<std::size_t>(mismatch.first - s[0].bits.begin());
  if (common > 0) {
    const std::vector<std::uint8_t> path(s[0].bits.begin(), s[0].bits.begin() + common);
    decide_prefix(common, path, out);
  }

  ++stats_.steps;
  ++stats_.d_histogram[ongoing_length()];
  if (!store_.empty()) stats_.detected_span_sum += stats_.emitted - store_.oldest_position();
  return out;
}

std::vector<std::uint8_t> TrellisDecoder::flush() {
  std::vector<std::uint8_t> out;
  if (!survivors_) return out;
  const std::vector<std::uint8_t> path = (*survivors_)[better_survivor()].bits;
  decide_prefix(path.size(), path, out);
  survivors_.reset();
  return out;
}

void TrellisDecoder::decide_prefix(std::size_t length, const std::vector<std::uint8_t>& path,
                                   std::vector<std::uint8_t>& out) {
  WindowStats removed{};
  for (std::size_t i = 0; i < length; ++i) {
    const std::uint8_t bit = path[i];
    out.push_back(bit);
    if (bit) {
      store_.push(ongoing_counts_[i], stats_.emitted);
      removed = add_slot(removed, 1, ongoing_counts_[i]);
    }
    ++stats_.emitted;
  }
  ongoing_counts_.erase(ongoing_counts_.begin(), ongoing_counts_.begin() + static_cast<std::ptrdiff_t>(length));
  if (survivors_) {
    for (auto& sv : *survivors_) {
      sv.bits.erase(sv.bits.begin(), sv.bits.begin() + static_cast<std::ptrdiff_t>(length));
      sv.stats -= removed;
    }
  }
}

std::size_t TrellisDecoder::better_survivor() {
  const auto& s = *survivors_;
  const LogMetric m0 = log_metric(store_.stats() + s[0].stats, n_b_);
  const LogMetric m1 = log_metric(store_.stats() + s[1].stats, n_b_);
  return preferred(m1, s[1].stats, s[1].bits, m0, s[0].stats, s[0].bits) ? 1 : 0;
}

void TrellisDecoder::force_merge(std::vector<std::uint8_t>& out) {
  const std::vector<std::uint8_t> path = (*survivors_)[better_survivor()].bits;
  decide_prefix(path.size(), path, out);
  survivors_.reset();
  ++stats_.forced_merges;
}

}  // namespace fsopc
