#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "fsopc/error.hpp"
#include "fsopc/fading.hpp"
#include "fsopc/trellis.hpp"
#include "oracles.hpp"

using namespace fsopc;

using Bits = std::vector<std::uint8_t>;

namespace {

std::vector<std::int64_t> random_counts(std::size_t n, double n_s, double n_b, std::size_t block, std::uint64_t seed) {
  Rng rng(seed);
  const FadingModel model = lognormal_from_si(0.5);
  std::vector<std::int64_t> out(n);
  double h = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % block == 0) h = model.draw(rng);
    out[i] = sample_poisson(n_b + ((rng() & 1U) ? n_s * h : 0.0), rng);
  }
  return out;
}

void append(Bits& all, const Bits& more) { all.insert(all.end(), more.begin(), more.end()); }

}  // namespace

TEST_CASE("TrellisConfig validation") {
  CHECK_NOTHROW(TrellisConfig{1, 2}.validate());
  CHECK_THROWS_AS(TrellisConfig({0, 20}).validate(), ParameterError);
  CHECK_THROWS_AS(TrellisConfig({1, 1}).validate(), ParameterError);
  CHECK_THROWS_AS(TrellisDecoder(TrellisConfig{}, 0.0), ParameterError);
}

TEST_CASE("SelectiveStore keeps the newest L_m counts") {
  SelectiveStore s(3);
  CHECK(s.empty());
  s.push(5, 0);
  s.push(7, 2);
  CHECK(s.stats() == WindowStats{2, 12});
  s.push(1, 3);
  s.push(10, 9);
  CHECK(s.size() == 3);
  CHECK(s.stats() == WindowStats{3, 18});
  CHECK(s.oldest_position() == 2);
  CHECK_THROWS_AS(SelectiveStore(0), ParameterError);
}

TEST_CASE("cold start") {
  TrellisDecoder dec({1, 20}, 1.0);
  CHECK(dec.at_root());
  CHECK(dec.step(9).empty());
  REQUIRE(dec.survivors().has_value());
  const auto& sv = *dec.survivors();
  CHECK(sv[0].metric.value == 0.0);
  CHECK(sv[0].bits == Bits{0});
  CHECK(sv[1].metric.value == doctest::Approx(11.7750).epsilon(1e-5));
  CHECK(sv[1].bits == Bits{1});
  CHECK(dec.stats().metric_evaluations == 2);
}

TEST_CASE("scoring against a store of [8]") {
  TrellisDecoder dec({1, 20}, 1.0);
  dec.step(8);
  CHECK(dec.flush() == Bits{1});
  CHECK(dec.at_root());
  CHECK(dec.store().stats() == WindowStats{1, 8});

  dec.step(9);
  const auto& sv = *dec.survivors();
  CHECK(sv[0].metric.value == doctest::Approx(8 * std::log(8.0) - 7).epsilon(1e-12));
  CHECK(sv[0].metric.value == doctest::Approx(9.6355).epsilon(1e-4));
  CHECK(sv[1].metric.value == doctest::Approx(17 * std::log(8.5) - 15).epsilon(1e-12));
  CHECK(sv[1].metric.value == doctest::Approx(21.3812).epsilon(1e-5));
}

TEST_CASE("flush") {
  SUBCASE("fresh decoder emits nothing") {
    TrellisDecoder dec({4, 20}, 1.0);
    CHECK(dec.flush().empty());
  }
  SUBCASE("one step then flush picks the better single-slot candidate") {
    for (double n_b : {0.5, 1.0, 3.0}) {
      for (std::int64_t c = 0; c < 15; ++c) {
        TrellisDecoder dec({2, 20}, n_b);
        dec.step(c);
        const LogMetric one = log_metric({1, c}, n_b);
        CHECK(dec.flush() == Bits{static_cast<std::uint8_t>(one > LogMetric{0.0} ? 1 : 0)});
      }
    }
  }
  SUBCASE("flush keeps the store and statistics") {
    TrellisDecoder dec({2, 20}, 1.0);
    for (std::int64_t c : {12, 1, 9, 0, 11}) dec.step(c);
    const auto steps = dec.stats().steps;
    dec.flush();
    CHECK(dec.at_root());
    CHECK(dec.ongoing_length() == 0);
    CHECK(dec.store().size() == 2);
    CHECK(dec.stats().steps == steps);
    CHECK(dec.stats().emitted == steps);
  }
}

TEST_CASE("decoder agrees with a full-history reference implementation") {
  struct Case {
    std::size_t lm, l;
    double n_s, n_b;
    std::size_t block;
  };
  const Case cases[] = {{1, 20, 10, 1, 50}, {4, 20, 25, 1, 200}, {8, 20, 5, 0.5, 30},
                        {2, 3, 3, 2, 40},  {16, 2, 8, 1, 100}, {64, 20, 40, 1, 10000}};
  std::uint64_t seed = 1;
  for (const Case& c : cases) {
    CAPTURE(c.lm);
    CAPTURE(c.l);
    const auto counts = random_counts(4000, c.n_s, c.n_b, c.block, seed++);
    TrellisDecoder dec({c.lm, c.l}, c.n_b);
    oracle::ReferenceTrellis ref(c.lm, c.l, c.n_b);
    Bits got, want;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const Bits a = dec.step(counts[i]);
      const Bits b = ref.step(counts[i]);
      CHECK(a == b);
      append(got, a);
      append(want, b);
      if (i % 997 == 996) {
        append(got, dec.flush());
        append(want, ref.flush());
      }
    }
    append(got, dec.flush());
    append(want, ref.flush());
    CHECK(got == want);
    CHECK(got.size() == counts.size());
  }
}

TEST_CASE("stream invariants") {
  for (std::size_t lm : {1U, 8U, 64U}) {
    for (std::size_t l : {2U, 5U, 20U}) {
      CAPTURE(lm);
      CAPTURE(l);
      const auto counts = random_counts(3000, 6.0, 1.0, 300, lm * 31 + l);
      TrellisDecoder dec({lm, l}, 1.0);
      std::uint64_t emitted = 0, ones = 0, expected_evals = 0;
      for (std::size_t i = 0; i < counts.size(); ++i) {
        const bool root = dec.at_root();
        const auto before_forced = dec.stats().forced_merges;
        const Bits out = dec.step(counts[i]);
        // root or just forced: both cases start from an empty ongoing part
        expected_evals += (root || dec.stats().forced_merges != before_forced) ? 2 : 4;
        emitted += out.size();
        for (auto b : out) ones += b;

        CHECK(emitted + dec.ongoing_length() == i + 1);
        CHECK(dec.ongoing_length() <= l);
        CHECK(dec.stats().emitted == emitted);
        CHECK(dec.store().size() == std::min<std::uint64_t>(lm, ones));
        const auto& sv = *dec.survivors();
        CHECK(sv[0].bits.size() == dec.ongoing_length());
        CHECK(sv[1].bits.size() == dec.ongoing_length());
        if (!sv[0].bits.empty()) {
          CHECK(sv[0].bits.back() == 0);
          CHECK(sv[1].bits.back() == 1);
          CHECK(sv[0].bits.front() != sv[1].bits.front());
        }
        if (ones > 0) {
          // every candidate shares the nonempty store
          CHECK(dec.store().stats().n_on >= 1);
        }
      }
      CHECK(dec.stats().metric_evaluations == expected_evals);
      CHECK(dec.stats().steps == counts.size());
      if (l == 2) CHECK(dec.stats().forced_merges > 0);
    }
  }
}

TEST_CASE("prefix stability") {
  const auto counts = random_counts(2000, 12.0, 1.0, 500, 77);
  TrellisDecoder dec({8, 20}, 1.0);
  Bits stream;
  for (std::int64_t c : counts) {
    const Bits before = stream;
    append(stream, dec.step(c));
    CHECK(std::equal(before.begin(), before.end(), stream.begin()));
  }
}

TEST_CASE("work per step does not depend on L_m") {
  const auto counts = random_counts(5000, 10.0, 1.0, 1000, 5);
  std::vector<std::uint64_t> evals;
  for (std::size_t lm : {1U, 16U, 1024U}) {
    TrellisDecoder dec({lm, 20}, 1.0);
    for (std::int64_t c : counts) dec.step(c);
    const auto& s = dec.stats();
    CHECK(s.metric_evaluations <= 4 * s.steps);
    CHECK(s.metric_evaluations >= 4 * s.steps - 2 * (s.forced_merges + 1));
  }
}

TEST_CASE("statistics") {
  const auto counts = random_counts(20000, 20.0, 1.0, 10000, 3);
  TrellisDecoder dec({8, 20}, 1.0);
  for (std::int64_t c : counts) dec.step(c);
  const TrellisStats& s = dec.stats();
  std::uint64_t total = 0;
  for (auto v : s.d_histogram) total += v;
  CHECK(total == s.steps);
  CHECK(s.mean_d() >= 1.0);
  CHECK(s.mean_d() <= 3.0);
  CHECK(s.mean_detected_span() >= 8.0);
  CHECK(s.mean_window() == doctest::Approx(s.mean_detected_span() + s.mean_d()));

  TrellisStats sum = s;
  sum += s;
  CHECK(sum.steps == 2 * s.steps);
  CHECK(sum.mean_d() == doctest::Approx(s.mean_d()));
}
