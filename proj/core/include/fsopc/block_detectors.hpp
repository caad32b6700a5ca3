#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fsopc/fading.hpp"
#include "fsopc/glrt_metric.hpp"

namespace fsopc {

// Reference receivers: the channel-aware genie, the block GLRT (exhaustive
// and sort-based), and a fixed threshold.

/// Genie receiver: exact Poisson likelihood-ratio test with the true gain.
/// Decides 1 iff count * ln(1 + n_s h / n_b) >= n_s h (ties decide 1).
int genie_detect(std::int64_t count, double h, const ChannelParams& params);

/// Smallest count for which genie_detect returns 1.
std::int64_t genie_threshold(double h, const ChannelParams& params);

/// Conditional bit error probability of the genie receiver at gain h.
double genie_bep_given_h(double h, const ChannelParams& params);

struct BlockDecision {
  std::vector<std::uint8_t> bits;
  LogMetric metric;
  std::int64_t n_on = 0;
};

/// Resolution of exact metric ties between block candidates.
enum class TieRule {
  FewerOnes,  ///< smaller n_on, then lexicographically smaller pattern
  MoreOnes,   ///< larger n_on first; only used to build negative controls
};

inline constexpr std::size_t kBruteForceMaxLength = 20;

/// Exhaustive GLRT block detection over all 2^L patterns (L <= 20).
BlockDecision brute_force_detect(std::span<const std::int64_t> counts, double n_b);

/// Sort-based block GLRT search in O(L log L).
///
/// For a fixed number of ones n the log-metric is convex in r_on, so the best
/// n-subset is either the n largest or the n smallest counts. Sorting once and
/// taking prefix sums in both orders leaves 2L + 1 candidates to score.
BlockDecision msd_detect(std::span<const std::int64_t> counts, double n_b,
                         TieRule tie_rule = TieRule::FewerOnes);

/// 1 iff count >= threshold; threshold must be > 0.
int fixed_threshold_detect(std::int64_t count, double threshold);

}  // namespace fsopc
