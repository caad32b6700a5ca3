#include "fsopc/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <span>
#include <sstream>
#include <thread>

#include "fsopc/block_detectors.hpp"
#include "fsopc/error.hpp"

namespace fsopc {

std::string ReceiverSpec::name() const {
  switch (kind) {
    case ReceiverKind::Genie: return "genie";
    case ReceiverKind::Msd: return "msd";
    case ReceiverKind::Trellis: return "trellis";
    case ReceiverKind::Fixed: return "fixed";
    case ReceiverKind::Brute: return "brute";
  }
  return "unknown";
}

std::string ReceiverSpec::param_text() const {
  if (kind == ReceiverKind::Genie) return {};
  std::ostringstream os;
  os << param;
  return os.str();
}

std::size_t ReceiverSpec::block_length() const {
  if (kind == ReceiverKind::Msd || kind == ReceiverKind::Brute) return static_cast<std::size_t>(param);
  return 1;
}

void ReceiverSpec::validate() const {
  auto positive_integer = [&](const char* what) {
    if (!(param >= 1.0) || param != std::floor(param) || param > 1e6)
      throw ParameterError(name() + ": " + what + " must be a positive integer");
  };
  switch (kind) {
    case ReceiverKind::Genie: break;
    case ReceiverKind::Msd: positive_integer("block length"); break;
    case ReceiverKind::Brute:
      positive_integer("block length");
      if (param > static_cast<double>(kBruteForceMaxLength))
        throw ParameterError("brute: block length must be <= " + std::to_string(kBruteForceMaxLength));
      break;
    case ReceiverKind::Trellis:
      positive_integer("memory length");
      TrellisConfig{static_cast<std::size_t>(param), buffer_length}.validate();
      break;
    case ReceiverKind::Fixed:
      if (!(param > 0.0)) throw ParameterError("fixed: threshold must be > 0");
      break;
  }
}

void StoppingRule::validate() const {
  if (min_errors == 0 && max_bits == 0)
    throw ParameterError("stopping rule: min_errors and max_bits cannot both be 0");
}

double snr_db(double n_s, double n_b, SnrMapping mapping) {
  const double ratio = mapping == SnrMapping::SignalToBackground ? n_s / n_b : n_s;
  return 10.0 * std::log10(ratio);
}

double n_s_from_snr_db(double snr, double n_b, SnrMapping mapping) {
  const double ratio = std::pow(10.0, snr / 10.0);
  return mapping == SnrMapping::SignalToBackground ? ratio * n_b : ratio;
}

void finalize_ber(BerPoint& point) {
  if (point.bits == 0) {
    point.ber = 0.0;
    point.ci95 = 0.0;
    return;
  }
  const double n = static_cast<double>(point.bits);
  point.ber = static_cast<double>(point.errors) / n;
  point.ci95 = 1.96 * std::sqrt(point.ber * (1.0 - point.ber) / n);
}

std::uint64_t chunk_slots(const ReceiverSpec& receiver, const ChannelParams& params) {
  constexpr std::uint64_t kTargetSlots = 1U << 16;
  const std::uint64_t lc = params.coherence_length;
  const std::uint64_t base = lc * ((kTargetSlots + lc - 1) / lc);
  return std::lcm(base, static_cast<std::uint64_t>(receiver.block_length()));
}

namespace {

struct ChunkResult {
  std::uint64_t bits = 0;
  std::uint64_t errors = 0;
  std::optional<TrellisStats> trellis;
};

struct ChunkData {
  std::vector<std::uint8_t> bits;
  std::vector<std::int64_t> counts;
  std::vector<double> gains;
};

ChunkData generate_chunk(const ChannelSpec& channel, std::uint64_t slots, std::uint64_t stream_seed) {
  const ChannelParams& p = channel.params;
  GainProcess gains(channel.model, p.coherence_length, derive_seed(stream_seed, {1}));
  Rng data(derive_seed(stream_seed, {2}));

  ChunkData out;
  out.bits.resize(slots);
  out.counts.resize(slots);
  out.gains.resize(slots);

  std::poisson_distribution<std::int64_t> off(p.n_b);
  std::poisson_distribution<std::int64_t> on(p.n_b);
  std::uint64_t word = 0;
  for (std::uint64_t k = 0; k < slots; ++k) {
    const double h = gains.sample_gain();
    if (gains.block_started()) {
      const double mean = p.n_s * h + p.n_b;
      if (!(mean <= kMaxPoissonMean)) throw ParameterError("Poisson mean exceeds 1e9");
      on = std::poisson_distribution<std::int64_t>(mean);
    }
    if (k % 64 == 0) word = data();
    const auto bit = static_cast<std::uint8_t>(word >> (k % 64) & 1U);
    out.bits[k] = bit;
    out.gains[k] = h;
    out.counts[k] = bit ? on(data) : off(data);
  }
  return out;
}

std::uint64_t count_errors(std::span<const std::uint8_t> decided, std::span<const std::uint8_t> truth) {
  std::uint64_t errors = 0;
  for (std::size_t i = 0; i < decided.size(); ++i) errors += decided[i] != truth[i];
  return errors;
}

ChunkResult simulate_chunk(const ReceiverSpec& receiver, const ChannelSpec& channel, std::uint64_t slots,
                           std::uint64_t stream_seed) {
  const ChunkData data = generate_chunk(channel, slots, stream_seed);
  const ChannelParams& p = channel.params;
  ChunkResult result;
  result.bits = slots;
  const std::span<const std::uint8_t> truth(data.bits);

  switch (receiver.kind) {
    case ReceiverKind::Genie: {
      double last_h = -1.0;
      std::int64_t threshold = 0;
      for (std::uint64_t k = 0; k < slots; ++k) {
        if (data.gains[k] != last_h) {
          last_h = data.gains[k];
          threshold = genie_threshold(last_h, p);
        }
        result.errors += static_cast<std::uint8_t>(data.counts[k] >= threshold) != truth[k];
      }
      break;
    }
    case ReceiverKind::Fixed:
      for (std::uint64_t k = 0; k < slots; ++k)
        result.errors += static_cast<std::uint8_t>(fixed_threshold_detect(data.counts[k], receiver.param)) != truth[k];
      break;
    case ReceiverKind::Msd:
    case ReceiverKind::Brute: {
      const std::size_t len = receiver.block_length();
      const std::span<const std::int64_t> counts(data.counts);
      for (std::uint64_t k = 0; k < slots; k += len) {
        const auto block = counts.subspan(k, len);
        const BlockDecision d =
            receiver.kind == ReceiverKind::Msd ? msd_detect(block, p.n_b) : brute_force_detect(block, p.n_b);
        result.errors += count_errors(d.bits, truth.subspan(k, len));
      }
      break;
    }
    case ReceiverKind::Trellis: {
      TrellisDecoder decoder({static_cast<std::size_t>(receiver.param), receiver.buffer_length}, p.n_b);
      std::uint64_t decided = 0;
      auto score = [&](const std::vector<std::uint8_t>& bits) {
        result.errors += count_errors(bits, truth.subspan(decided, bits.size()));
        decided += bits.size();
      };
      for (std::uint64_t k = 0; k < slots; ++k) score(decoder.step(data.counts[k]));
      score(decoder.flush());
      result.trellis = decoder.stats();
      break;
    }
  }
  return result;
}

bool should_stop(const StoppingRule& rule, std::uint64_t bits, std::uint64_t errors) {
  return (rule.min_errors > 0 && errors >= rule.min_errors) || (rule.max_bits > 0 && bits >= rule.max_bits);
}

}  // namespace

BerPoint run_ber_point(const ReceiverSpec& receiver, const ChannelSpec& channel, const StoppingRule& stopping,
                       std::uint64_t seed, std::size_t shards, SnrMapping mapping) {
  receiver.validate();
  channel.params.validate();
  stopping.validate();
  if (shards < 1) throw ParameterError("shard count must be >= 1");

  const std::uint64_t slots = chunk_slots(receiver, channel.params);
  // The chunk that reaches max_bits is cut short so the bit budget is met
  // exactly, up to whole receiver blocks.
  const std::uint64_t block = receiver.block_length();
  const std::uint64_t budget =
      stopping.max_bits > 0 ? (stopping.max_bits + block - 1) / block * block : std::uint64_t{0};
  auto chunk_size = [&](std::uint64_t index) {
    if (budget == 0) return slots;
    const std::uint64_t start = index * slots;
    return start >= budget ? std::uint64_t{0} : std::min(slots, budget - start);
  };

  BerPoint point;
  point.receiver = receiver.name();
  point.param = receiver.param_text();
  point.n_s = channel.params.n_s;
  point.n_b = channel.params.n_b;
  point.snr_db = snr_db(channel.params.n_s, channel.params.n_b, mapping);
  point.seed = seed;
  point.shards = shards;
  TrellisStats trellis;

  std::uint64_t next_chunk = 0;
  bool done = false;
  while (!done) {
    std::vector<ChunkResult> round(shards);
    auto work = [&](std::size_t i) {
      const std::uint64_t n = chunk_size(next_chunk + i);
      if (n > 0) round[i] = simulate_chunk(receiver, channel, n, derive_seed(seed, {next_chunk + i}));
    };
    if (shards == 1) {
      work(0);
    } else {
      std::vector<std::exception_ptr> failures(shards);
      std::vector<std::thread> workers;
      workers.reserve(shards);
      for (std::size_t i = 0; i < shards; ++i)
        workers.emplace_back([&, i] {
          try {
            work(i);
          } catch (...) {
            failures[i] = std::current_exception();
          }
        });
      for (auto& w : workers) w.join();
      for (auto& f : failures)
        if (f) std::rethrow_exception(f);
    }
    next_chunk += shards;

    for (const ChunkResult& r : round) {
      point.bits += r.bits;
      point.errors += r.errors;
      if (r.trellis) trellis += *r.trellis;
      if (should_stop(stopping, point.bits, point.errors)) {
        done = true;
        break;
      }
    }
  }

  finalize_ber(point);
  if (receiver.kind == ReceiverKind::Trellis) {
    point.mean_d = trellis.mean_d();
    point.forced_merges = trellis.forced_merges;
    point.trellis = std::move(trellis);
  }
  return point;
}

void SweepConfig::validate() const {
  if (n_s_grid.empty()) throw ParameterError("sweep grid is empty");
  for (double v : n_s_grid)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError("sweep grid values must be >= 0");
  if (receivers.empty()) throw ParameterError("no receivers configured");
  for (const auto& r : receivers) r.validate();
  base.validate();
  stopping.validate();
  if (shards < 1) throw ParameterError("shard count must be >= 1");
}

std::vector<BerPoint> run_sweep(const SweepConfig& config) {
  config.validate();
  std::vector<double> grid = config.n_s_grid;
  std::sort(grid.begin(), grid.end());

  std::vector<BerPoint> rows;
  rows.reserve(grid.size() * config.receivers.size());
  for (const ReceiverSpec& receiver : config.receivers) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      ChannelSpec channel{config.model, config.base};
      channel.params.n_s = grid[i];
      rows.push_back(run_ber_point(receiver, channel, config.stopping, config.seed,
                                   config.shards, config.snr_mapping));
    }
  }
  return rows;
}

GenieBound genie_bound(const FadingModel& model, const ChannelParams& params, std::uint64_t n_gain_samples,
                       std::uint64_t seed) {
  params.validate();
  if (n_gain_samples < 1) throw ParameterError("genie bound: n_gain_samples must be >= 1");
  if (const auto* c = std::get_if<ConstantFading>(&model.variant()))
    return {genie_bep_given_h(c->h, params), 0.0};

  Rng rng(seed);
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t i = 1; i <= n_gain_samples; ++i) {
    const double x = genie_bep_given_h(model.draw(rng), params);
    const double delta = x - mean;
    mean += delta / static_cast<double>(i);
    m2 += delta * (x - mean);
  }
  const double n = static_cast<double>(n_gain_samples);
  const double variance = n_gain_samples > 1 ? m2 / (n - 1.0) : 0.0;
  return {mean, std::sqrt(variance / n)};
}

double genie_bep_semi_analytic(const FadingModel& model, const ChannelParams& params, std::uint64_t n_gain_samples,
                               std::uint64_t seed) {
  return genie_bound(model, params, n_gain_samples, seed).bep;
}

}  // namespace fsopc
