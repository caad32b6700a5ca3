#include "fsopc/block_detectors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "fsopc/error.hpp"

namespace fsopc {

namespace {

bool lex_less(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// P(Poisson(mean) <= k - 1), i.e. strictly below k.
double poisson_cdf_below(std::int64_t k, double mean) {
  if (k <= 0) return 0.0;
  if (mean == 0.0) return 1.0;
  return boost::math::gamma_q(static_cast<double>(k), mean);
}

}  // namespace

int genie_detect(std::int64_t count, double h, const ChannelParams& params) {
  const double signal = params.n_s * h;
  const double llr = static_cast<double>(count) * std::log1p(signal / params.n_b) - signal;
  return llr >= 0.0 ? 1 : 0;
}

std::int64_t genie_threshold(double h, const ChannelParams& params) {
  const double signal = params.n_s * h;
  if (signal == 0.0) return 0;
  auto t = static_cast<std::int64_t>(std::ceil(signal / std::log1p(signal / params.n_b)));
  // align with genie_detect's floating-point comparison at the boundary
  while (t > 0 && genie_detect(t - 1, h, params) == 1) --t;
  while (genie_detect(t, h, params) == 0) ++t;
  return t;
}

double genie_bep_given_h(double h, const ChannelParams& params) {
  const std::int64_t tau = genie_threshold(h, params);
  const double false_alarm = 1.0 - poisson_cdf_below(tau, params.n_b);
  const double miss = poisson_cdf_below(tau, params.n_s * h + params.n_b);
  return 0.5 * (false_alarm + miss);
}

BlockDecision brute_force_detect(std::span<const std::int64_t> counts, double n_b) {
  const std::size_t len = counts.size();
  if (len > kBruteForceMaxLength)
    throw ParameterError("brute_force_detect: block length " + std::to_string(len) + " exceeds " +
                         std::to_string(kBruteForceMaxLength));
  // Mask bit (len - 1 - i) is slot i, so increasing masks are increasing patterns.
  std::uint32_t best_mask = 0;
  WindowStats best_stats{};
  LogMetric best = log_metric(best_stats, n_b);
  for (std::uint32_t mask = 1; mask < (1U << len); ++mask) {
    WindowStats s{};
    for (std::size_t i = 0; i < len; ++i)
      if (mask >> (len - 1 - i) & 1U) s = add_slot(s, 1, counts[i]);
    const LogMetric m = log_metric(s, n_b);
    if (m > best || (m == best && s.n_on < best_stats.n_on)) {
      best = m;
      best_stats = s;
      best_mask = mask;
    }
  }
  BlockDecision out;
  out.bits.resize(len);
  for (std::size_t i = 0; i < len; ++i) out.bits[i] = best_mask >> (len - 1 - i) & 1U;
  out.metric = best;
  out.n_on = best_stats.n_on;
  return out;
}

BlockDecision msd_detect(std::span<const std::int64_t> counts, double n_b, TieRule tie_rule) {
  const std::size_t len = counts.size();
  if (len == 0) throw ParameterError("msd_detect: empty block");

  // Among equal counts the later slot is taken first: that yields the
  // lexicographically smallest pattern for a given subset sum.
  std::vector<std::size_t> top(len), bottom(len);
  std::iota(top.begin(), top.end(), 0);
  std::iota(bottom.begin(), bottom.end(), 0);
  std::sort(top.begin(), top.end(), [&](std::size_t a, std::size_t b) {
    return counts[a] != counts[b] ? counts[a] > counts[b] : a > b;
  });
  std::sort(bottom.begin(), bottom.end(), [&](std::size_t a, std::size_t b) {
    return counts[a] != counts[b] ? counts[a] < counts[b] : a > b;
  });

  auto pattern = [&](const std::vector<std::size_t>& order, std::size_t n) {
    std::vector<std::uint8_t> bits(len, 0);
    for (std::size_t i = 0; i < n; ++i) bits[order[i]] = 1;
    return bits;
  };

  struct Choice {
    LogMetric metric;
    std::size_t n;
    const std::vector<std::size_t>* order;
  };
  Choice best{log_metric({}, n_b), 0, &top};

  auto better = [&](const Choice& c) {
    if (c.metric != best.metric) return c.metric > best.metric;
    if (c.n != best.n)
      return tie_rule == TieRule::FewerOnes ? c.n < best.n : c.n > best.n;
    return lex_less(pattern(*c.order, c.n), pattern(*best.order, best.n));
  };

  std::int64_t top_sum = 0, bottom_sum = 0;
  for (std::size_t n = 1; n <= len; ++n) {
    top_sum += counts[top[n - 1]];
    bottom_sum += counts[bottom[n - 1]];
    const auto n_on = static_cast<std::int64_t>(n);
    const Choice hi{log_metric({n_on, top_sum}, n_b), n, &top};
    if (better(hi)) best = hi;
    if (bottom_sum != top_sum) {
      const Choice lo{log_metric({n_on, bottom_sum}, n_b), n, &bottom};
      if (better(lo)) best = lo;
    }
  }

  BlockDecision out;
  out.bits = pattern(*best.order, best.n);
  out.metric = best.metric;
  out.n_on = static_cast<std::int64_t>(best.n);
  return out;
}

int fixed_threshold_detect(std::int64_t count, double threshold) {
  if (!(threshold > 0.0)) throw ParameterError("fixed threshold must be > 0");
  return static_cast<double>(count) >= threshold ? 1 : 0;
}

}  // namespace fsopc
