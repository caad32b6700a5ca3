#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fsopc/simulation.hpp"

namespace fsopc {

// Run configuration text: one `key = value` per line, `#` starts a comment,
// keys are case-sensitive and unknown keys are rejected. Lists are
// comma-separated.
//
//   model        constant | lognormal | gammagamma
//   h            constant gain (constant model)
//   si           scintillation index (lognormal, gammagamma)
//   alpha, beta  Gamma-Gamma shapes (instead of si)
//   wave         plane | spherical   Rytov parameterization for gammagamma si
//   ns           list of n_s values       } one of the two
//   snr_db       list of SNR values (dB)  }
//   snr_mapping  ratio (10log10 ns/nb) | signal (10log10 ns)
//   nb, lc       background count, coherence length (slots)
//   receivers    list of genie | msd:L | brute:L | fixed:T | trellis[:Lm]
//   lm, l        default trellis memory length, trellis buffer length
//   min_errors, max_bits, seed, shards
//   out, log     CSV path, run-log path
//   gain_samples genie-bound gain samples; samples  fading-stats samples

enum class Command { Sweep, Validate, GenieBound, FadingStats };

struct RunConfig {
  Command command = Command::Sweep;
  SweepConfig sweep;
  std::string out_path = "ber.csv";
  std::string log_path;  ///< empty: out_path + ".log"
  int verbosity = 0;
  bool quick = false;
  std::uint64_t gain_samples = 200000;
  std::uint64_t fading_samples = 1000000;

  std::string effective_log_path() const { return log_path.empty() ? out_path + ".log" : log_path; }
};

/// Command-line overrides, applied over the file (flag wins).
using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

RunConfig parse_config(std::string_view text, const ConfigOverrides& overrides = {});
RunConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

/// Parse one receiver token such as "msd:4" or "trellis".
ReceiverSpec parse_receiver(std::string_view token, std::size_t default_memory_length, std::size_t buffer_length);

}  // namespace fsopc
