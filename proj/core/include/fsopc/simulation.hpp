#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fsopc/fading.hpp"
#include "fsopc/trellis.hpp"

namespace fsopc {

enum class ReceiverKind { Genie, Msd, Trellis, Fixed, Brute };

struct ReceiverSpec {
  ReceiverKind kind = ReceiverKind::Genie;
  double param = 0.0;              ///< L (msd, brute), L_m (trellis), threshold (fixed)
  std::size_t buffer_length = 20;  ///< trellis only

  static ReceiverSpec genie() { return {ReceiverKind::Genie, 0.0}; }
  static ReceiverSpec msd(std::size_t block_length) {
    return {ReceiverKind::Msd, static_cast<double>(block_length)};
  }
  static ReceiverSpec brute(std::size_t block_length) {
    return {ReceiverKind::Brute, static_cast<double>(block_length)};
  }
  static ReceiverSpec trellis(std::size_t memory_length, std::size_t buffer_length = 20) {
    return {ReceiverKind::Trellis, static_cast<double>(memory_length), buffer_length};
  }
  static ReceiverSpec fixed(double threshold) { return {ReceiverKind::Fixed, threshold}; }

  /// "genie", "msd", "trellis", "fixed" or "brute".
  std::string name() const;
  /// Parameter as printed in the CSV; empty for genie.
  std::string param_text() const;
  /// Slots consumed per decision block (1 for symbol-by-symbol receivers).
  std::size_t block_length() const;
  void validate() const;
};

struct ChannelSpec {
  FadingModel model = FadingModel::constant(1.0);
  ChannelParams params;
};

/// Halts at errors >= min_errors or bits >= max_bits, whichever comes first.
/// A zero field disables that criterion; at least one must be nonzero.
struct StoppingRule {
  std::uint64_t min_errors = 100;
  std::uint64_t max_bits = 100'000'000;

  void validate() const;
};

/// Axis label mapping from (n_s, n_b) to an SNR in dB.
enum class SnrMapping {
  SignalToBackground,  ///< 10 log10(n_s / n_b)
  SignalCount,         ///< 10 log10(n_s)
};

double snr_db(double n_s, double n_b, SnrMapping mapping);
double n_s_from_snr_db(double snr_db, double n_b, SnrMapping mapping);

struct BerPoint {
  std::string receiver;
  std::string param;
  double n_s = 0.0;
  double n_b = 0.0;
  double snr_db = 0.0;
  std::uint64_t bits = 0;
  std::uint64_t errors = 0;
  double ber = 0.0;
  double ci95 = 0.0;
  std::optional<double> mean_d;                 ///< trellis only
  std::optional<std::uint64_t> forced_merges;   ///< trellis only
  std::optional<TrellisStats> trellis;          ///< full trellis statistics
  std::uint64_t seed = 0;
  std::size_t shards = 1;
};

/// BER = errors / bits and the normal-approximation 95% half-width.
void finalize_ber(BerPoint& point);

/// Slots simulated per work unit for a receiver/channel pair. A multiple of
/// the coherence length and of the receiver's block length.
std::uint64_t chunk_slots(const ReceiverSpec& receiver, const ChannelParams& params);

/// Monte Carlo BER at one operating point.
///
/// The slot stream is cut into fixed-size chunks, each with its own RNG
/// stream derived from (seed, chunk index) and its own channel and detector
/// state. Chunks are dealt to `shards` worker threads; the stopping rule is
/// applied to chunks in index order, so the result depends on the seed only
/// and not on the number of shards. The channel realization does not depend
/// on the receiver, so receivers at the same seed see identical data.
BerPoint run_ber_point(const ReceiverSpec& receiver, const ChannelSpec& channel, const StoppingRule& stopping,
                       std::uint64_t seed, std::size_t shards, SnrMapping mapping = SnrMapping::SignalToBackground);

struct SweepConfig {
  FadingModel model = FadingModel::constant(1.0);
  ChannelParams base;
  std::vector<double> n_s_grid;  ///< ascending
  SnrMapping snr_mapping = SnrMapping::SignalToBackground;
  std::vector<ReceiverSpec> receivers;
  StoppingRule stopping;
  std::uint64_t seed = 1;
  std::size_t shards = 1;

  void validate() const;
};

/// One BerPoint per (receiver, grid value), ordered by receiver then grid.
/// Every point shares the master seed, so all receivers and all grid values
/// see the same gain sequence and data bits (common random numbers).
std::vector<BerPoint> run_sweep(const SweepConfig& config);

struct GenieBound {
  double bep = 0.0;
  double std_error = 0.0;  ///< Monte Carlo standard error over gain samples (0 for constant)
};

/// Genie Bound: the genie receiver's conditional BEP averaged over
/// `n_gain_samples` gain draws (exact for the constant model).
GenieBound genie_bound(const FadingModel& model, const ChannelParams& params, std::uint64_t n_gain_samples,
                       std::uint64_t seed = 0x5eed);

double genie_bep_semi_analytic(const FadingModel& model, const ChannelParams& params,
                               std::uint64_t n_gain_samples, std::uint64_t seed = 0x5eed);

}  // namespace fsopc
