#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "fsopc/rng.hpp"

namespace fsopc {

// Turbulence-induced intensity fading laws. Every random model has unit mean
// gain; the scintillation index is the normalized intensity variance
// E[h^2]/E[h]^2 - 1.

struct ConstantFading {
  double h = 1.0;
};

/// h = exp(2x), x ~ N(mu_x, sigma_x2), with mu_x = -sigma_x2 so that E[h] = 1.
struct LogNormalFading {
  double sigma_x2 = 0.0;
  double mu_x() const noexcept { return -sigma_x2; }
};

/// h = X * Y with X ~ Gamma(alpha, 1/alpha), Y ~ Gamma(beta, 1/beta).
struct GammaGammaFading {
  double alpha = 1.0;
  double beta = 1.0;
};

class FadingModel {
 public:
  using Variant = std::variant<ConstantFading, LogNormalFading, GammaGammaFading>;

  static FadingModel constant(double h = 1.0);
  static FadingModel lognormal(double sigma_x2);
  static FadingModel gamma_gamma(double alpha, double beta);

  const Variant& variant() const noexcept { return v_; }
  bool is_constant() const noexcept { return std::holds_alternative<ConstantFading>(v_); }

  /// Analytic scintillation index.
  double scintillation_index() const;
  /// Analytic mean gain (1 for the random models, h for the constant model).
  double mean_gain() const;
  /// Short human-readable description, e.g. "lognormal(si=0.5)".
  std::string describe() const;

  /// One independent gain draw.
  double draw(Rng& rng) const;

 private:
  explicit FadingModel(Variant v) : v_(v) {}
  Variant v_;
};

/// Plane- or spherical-wave Rytov parameterization of the Gamma-Gamma shapes.
enum class RytovWave { Plane, Spherical };

struct GammaGammaShapes {
  double alpha;
  double beta;
};

FadingModel lognormal_from_si(double si);

double si_of_gammagamma(double alpha, double beta);

/// Gamma-Gamma shapes for a point receiver at Rytov variance `rytov_variance`.
GammaGammaShapes gammagamma_shapes_from_rytov(double rytov_variance, RytovWave wave);

/// Gamma-Gamma model with the requested scintillation index. Searches the
/// weak-to-moderate branch of the Rytov curve (Rytov variance from 0 up to
/// the S.I. peak); throws UnattainableError if `si` lies above the peak.
FadingModel gammagamma_from_si(double si, RytovWave wave = RytovWave::Spherical);

/// Rytov variance found by the same search as gammagamma_from_si.
double rytov_variance_for_si(double si, RytovWave wave = RytovWave::Spherical);

struct ChannelParams {
  double n_s = 10.0;                 ///< mean signal count per slot at h = 1
  double n_b = 1.0;                  ///< mean background count per slot
  std::uint64_t coherence_length = 10000;  ///< slots sharing one gain draw

  void validate() const;
};

/// Block-constant gain sequence: each draw is held for exactly L_c slots.
class GainProcess {
 public:
  GainProcess(FadingModel model, std::uint64_t coherence_length, std::uint64_t seed);

  /// Gain for the next slot.
  double sample_gain();
  /// True if the most recent sample_gain() started a new coherence block.
  bool block_started() const noexcept { return block_started_; }

  const FadingModel& model() const noexcept { return model_; }

 private:
  FadingModel model_;
  std::uint64_t coherence_length_;
  std::uint64_t remaining_ = 0;
  double gain_ = 0.0;
  bool block_started_ = false;
  Rng rng_;
};

/// Largest accepted Poisson mean; larger means indicate a misconfiguration.
inline constexpr double kMaxPoissonMean = 1e9;

/// Photon count for one OOK slot: Poisson(n_s * h * bit + n_b).
std::int64_t transmit_slot(int bit, double h, const ChannelParams& params, Rng& rng);

/// Poisson draw with the mean guard; mean 0 yields 0.
std::int64_t sample_poisson(double mean, Rng& rng);

}  // namespace fsopc
