#pragma once

#include <compare>
#include <cstdint>

namespace fsopc {

/// Sufficient statistics of an OOK hypothesis over a window: the number of
/// hypothesized 1-slots and the sum of their photon counts.
struct WindowStats {
  std::int64_t n_on = 0;
  std::int64_t r_on = 0;

  friend constexpr WindowStats operator+(WindowStats a, WindowStats b) noexcept {
    return {a.n_on + b.n_on, a.r_on + b.r_on};
  }
  friend constexpr WindowStats operator-(WindowStats a, WindowStats b) noexcept {
    return {a.n_on - b.n_on, a.r_on - b.r_on};
  }
  constexpr WindowStats& operator+=(WindowStats b) noexcept { return *this = *this + b; }
  constexpr WindowStats& operator-=(WindowStats b) noexcept { return *this = *this - b; }
  friend constexpr bool operator==(WindowStats, WindowStats) = default;
};

/// Natural log of the GLRT decision metric.
struct LogMetric {
  double value = 0.0;
  friend constexpr auto operator<=>(LogMetric, LogMetric) = default;
};

/// Stats contribution of a single slot.
constexpr WindowStats slot_stats(int bit, std::int64_t count) noexcept {
  return bit ? WindowStats{1, count} : WindowStats{};
}

constexpr WindowStats add_slot(WindowStats stats, int bit, std::int64_t count) noexcept {
  return stats + slot_stats(bit, count);
}

constexpr WindowStats merge(WindowStats a, WindowStats b) noexcept { return a + b; }

/// ln lambda = r_on ln(r_on / (n_on n_b)) - r_on + n_b n_on, with 0 ln 0 = 0
/// and ln lambda = 0 for the empty (all-zero) hypothesis. Throws
/// ParameterError if n_b <= 0.
LogMetric log_metric(WindowStats stats, double n_b);

}  // namespace fsopc
