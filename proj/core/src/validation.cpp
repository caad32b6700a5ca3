#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "fsopc/block_detectors.hpp"
#include "fsopc/commands.hpp"
#include "fsopc/trellis.hpp"

namespace fsopc {

namespace {

std::string printf_string(const char* spec, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, spec, args...);
  return buf;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

CheckResult check_metric_spot_values() {
  const double a = log_metric({2, 5}, 1.0).value;
  const double b = log_metric({1, 0}, 0.5).value;
  const double c = log_metric({0, 0}, 3.0).value;
  const double d = brute_force_detect(std::vector<std::int64_t>{9, 0, 1}, 1.0).metric.value;
  const bool ok = close(a, 1.581454, 1e-6) && b == 0.5 && c == 0.0 && close(d, 11.7750, 1e-4);
  return {"metric spot values", ok, printf_string("{2,5}->%.6f {1,0}->%.3f {0,0}->%.1f (9,0,1)->%.4f", a, b, c, d)};
}

CheckResult check_msd_oracle(const ValidateOptions& opt) {
  const TieRule rule = opt.inject_fault ? TieRule::MoreOnes : TieRule::FewerOnes;
  const int blocks = opt.quick ? 1000 : 10000;
  Rng rng(derive_seed(opt.seed, {0x3d}));
  std::uniform_real_distribution<double> gain(0.0, 3.0);
  std::bernoulli_distribution coin(0.5);
  std::uint64_t metric_mismatch = 0, pattern_mismatch = 0, total = 0;

  auto compare = [&](const std::vector<std::int64_t>& counts, double n_b) {
    const BlockDecision fast = msd_detect(counts, n_b, rule);
    const BlockDecision oracle = brute_force_detect(counts, n_b);
    const double scale = std::max(1.0, std::abs(oracle.metric.value));
    if (std::abs(fast.metric.value - oracle.metric.value) > 1e-9 * scale) ++metric_mismatch;
    if (fast.bits != oracle.bits) ++pattern_mismatch;
    ++total;
  };

  for (std::size_t len : {2U, 4U, 8U, 12U}) {
    for (int i = 0; i < blocks; ++i) {
      const double n_b = 0.5 + gain(rng);
      const double n_s = 20.0 * gain(rng);
      std::vector<std::int64_t> counts(len);
      for (auto& c : counts) c = sample_poisson(n_b + (coin(rng) ? n_s : 0.0), rng);
      compare(counts, n_b);
    }
  }
  // exact metric ties between hypotheses with different numbers of ones
  compare({1}, 1.0);
  compare({1, 1}, 1.0);
  compare({2, 2}, 2.0);
  compare({0, 4, 4}, 2.0);

  const bool ok = metric_mismatch == 0 && pattern_mismatch == 0;
  return {"msd == brute-force", ok,
          printf_string("%llu blocks, %llu metric / %llu pattern mismatches", static_cast<unsigned long long>(total),
                        static_cast<unsigned long long>(metric_mismatch),
                        static_cast<unsigned long long>(pattern_mismatch))};
}

CheckResult check_fading_moments(const ValidateOptions& opt) {
  const std::uint64_t n = opt.quick ? 100000 : 1000000;
  const double mean_tol = opt.quick ? 0.03 : 0.01;
  const double si_tol = opt.quick ? 0.10 : 0.03;
  std::string detail;
  bool ok = true;
  const FadingModel models[] = {lognormal_from_si(0.5), gammagamma_from_si(1.38)};
  for (std::size_t m = 0; m < 2; ++m) {
    Rng rng(derive_seed(opt.seed, {0xfa, m}));
    double sum = 0.0, sum2 = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const double h = models[m].draw(rng);
      sum += h;
      sum2 += h * h;
    }
    const double mean = sum / static_cast<double>(n);
    const double si = (sum2 / static_cast<double>(n)) / (mean * mean) - 1.0;
    const double target = models[m].scintillation_index();
    ok = ok && std::abs(mean - 1.0) <= mean_tol && std::abs(si - target) <= si_tol * target;
    detail += printf_string("%s mean=%.4f si=%.4f/%.2f  ", m == 0 ? "lognormal" : "gammagamma", mean, si, target);
  }
  return {"fading moments", ok, detail};
}

CheckResult check_gammagamma_inversion() {
  const FadingModel m = gammagamma_from_si(1.38);
  const auto& gg = std::get<GammaGammaFading>(m.variant());
  const double si = si_of_gammagamma(gg.alpha, gg.beta);
  return {"gamma-gamma S.I. inversion", std::abs(si - 1.38) <= 1e-9,
          printf_string("alpha=%.6f beta=%.6f si=%.12f", gg.alpha, gg.beta, si)};
}

CheckResult check_poisson_sampler(const ValidateOptions& opt) {
  const std::uint64_t n = opt.quick ? 100000 : 1000000;
  bool ok = true;
  std::string detail;
  for (double mean : {0.1, 1.0, 11.0}) {
    Rng rng(derive_seed(opt.seed, {0x90, static_cast<std::uint64_t>(mean * 10)}));
    double sum = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) sum += static_cast<double>(sample_poisson(mean, rng));
    const double sample_mean = sum / static_cast<double>(n);
    const double se = std::sqrt(mean / static_cast<double>(n));
    ok = ok && std::abs(sample_mean - mean) <= 5.0 * se;
    detail += printf_string("mu=%g:%.4f ", mean, sample_mean);
  }
  return {"poisson sampler means", ok, detail};
}

CheckResult check_genie(const ValidateOptions& opt) {
  const ChannelSpec channel{FadingModel::constant(1.0), {10.0, 1.0, 10000}};
  const StoppingRule stop{0, opt.quick ? 200000ULL : 1000000ULL};
  const BerPoint p = run_ber_point(ReceiverSpec::genie(), channel, stop, derive_seed(opt.seed, {0x9e}), 1);
  const double expected = genie_bep_semi_analytic(channel.model, channel.params, 1);
  const double sigma = std::sqrt(expected * (1.0 - expected) / static_cast<double>(p.bits));
  return {"genie MC == semi-analytic", std::abs(p.ber - expected) <= 3.0 * sigma,
          printf_string("mc=%.6f analytic=%.7f sigma=%.2e bits=%llu", p.ber, expected, sigma,
                        static_cast<unsigned long long>(p.bits))};
}

CheckResult check_trellis_cold_start() {
  TrellisDecoder decoder({1, 20}, 1.0);
  const auto emitted = decoder.step(9);
  const auto& s = *decoder.survivors();
  const bool ok = emitted.empty() && s[0].metric.value == 0.0 && close(s[1].metric.value, 9 * std::log(9.0) - 8, 1e-12);
  return {"trellis cold start", ok, printf_string("node0=%.4f node1=%.4f", s[0].metric.value, s[1].metric.value)};
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidateOptions& options) {
  std::vector<CheckResult> out;
  auto guarded = [&](const char* name, auto&& fn) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("exception: ") + e.what()});
    }
  };
  guarded("metric spot values", [] { return check_metric_spot_values(); });
  guarded("msd == brute-force", [&] { return check_msd_oracle(options); });
  guarded("fading moments", [&] { return check_fading_moments(options); });
  guarded("gamma-gamma S.I. inversion", [] { return check_gammagamma_inversion(); });
  guarded("poisson sampler means", [&] { return check_poisson_sampler(options); });
  guarded("genie MC == semi-analytic", [&] { return check_genie(options); });
  guarded("trellis cold start", [] { return check_trellis_cold_start(); });
  return out;
}

}  // namespace fsopc
