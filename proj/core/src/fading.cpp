#include "fsopc/fading.hpp"

#include <cmath>
#include <sstream>

#include "fsopc/error.hpp"

namespace fsopc {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kMaxRytovScan = 200.0;

}  // namespace

FadingModel FadingModel::constant(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("constant fading: h must be > 0");
  return FadingModel(ConstantFading{h});
}

FadingModel FadingModel::lognormal(double sigma_x2) {
  if (!(sigma_x2 > 0.0) || !std::isfinite(sigma_x2))
    throw ParameterError("lognormal fading: sigma_x2 must be > 0");
  return FadingModel(LogNormalFading{sigma_x2});
}

FadingModel FadingModel::gamma_gamma(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
    throw ParameterError("gamma-gamma fading: alpha and beta must be > 0");
  return FadingModel(GammaGammaFading{alpha, beta});
}

double FadingModel::scintillation_index() const {
  return std::visit(Overloaded{
                        [](const ConstantFading&) { return 0.0; },
                        [](const LogNormalFading& m) { return std::expm1(4.0 * m.sigma_x2); },
                        [](const GammaGammaFading& m) { return si_of_gammagamma(m.alpha, m.beta); },
                    },
                    v_);
}

double FadingModel::mean_gain() const {
  if (const auto* c = std::get_if<ConstantFading>(&v_)) return c->h;
  return 1.0;
}

std::string FadingModel::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const ConstantFading& m) { os << "constant(h=" << m.h << ")"; },
                 [&](const LogNormalFading& m) {
                   os << "lognormal(sigma_x2=" << m.sigma_x2 << ", si=" << scintillation_index() << ")";
                 },
                 [&](const GammaGammaFading& m) {
                   os << "gammagamma(alpha=" << m.alpha << ", beta=" << m.beta
                      << ", si=" << scintillation_index() << ")";
                 },
             },
             v_);
  return os.str();
}

double FadingModel::draw(Rng& rng) const {
  return std::visit(Overloaded{
                        [](const ConstantFading& m) { return m.h; },
                        [&](const LogNormalFading& m) {
                          std::normal_distribution<double> x(m.mu_x(), std::sqrt(m.sigma_x2));
                          return std::exp(2.0 * x(rng));
                        },
                        [&](const GammaGammaFading& m) {
                          std::gamma_distribution<double> large(m.alpha, 1.0 / m.alpha);
                          std::gamma_distribution<double> small(m.beta, 1.0 / m.beta);
                          const double x = large(rng);
                          return x * small(rng);
                        },
                    },
                    v_);
}

FadingModel lognormal_from_si(double si) {
  if (!(si > 0.0) || !std::isfinite(si)) throw ParameterError("lognormal_from_si: si must be > 0");
  // exp(4 sigma^2) - 1 = si
  return FadingModel::lognormal(std::log1p(si) / 4.0);
}

double si_of_gammagamma(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw ParameterError("si_of_gammagamma: shapes must be > 0");
  return 1.0 / alpha + 1.0 / beta + 1.0 / (alpha * beta);
}

GammaGammaShapes gammagamma_shapes_from_rytov(double rytov_variance, RytovWave wave) {
  if (!(rytov_variance > 0.0)) throw ParameterError("Rytov variance must be > 0");
  const double s = rytov_variance;
  const double s125 = std::pow(s, 1.2);  // sigma^(12/5)
  const double large_coeff = wave == RytovWave::Plane ? 1.11 : 0.56;
  const double a_exp = 0.49 * s / std::pow(1.0 + large_coeff * s125, 7.0 / 6.0);
  const double b_exp = 0.51 * s / std::pow(1.0 + 0.69 * s125, 5.0 / 6.0);
  return {1.0 / std::expm1(a_exp), 1.0 / std::expm1(b_exp)};
}

namespace {

double si_at_rytov(double s, RytovWave wave) {
  const auto shapes = gammagamma_shapes_from_rytov(s, wave);
  return si_of_gammagamma(shapes.alpha, shapes.beta);
}

// Rytov variance at which the S.I. curve peaks.
double rytov_peak(RytovWave wave) {
  double best_s = 1e-3;
  double best = si_at_rytov(best_s, wave);
  for (double s = 1e-3; s <= kMaxRytovScan; s *= 1.01) {
    const double v = si_at_rytov(s, wave);
    if (v > best) {
      best = v;
      best_s = s;
    }
  }
  // golden-section refinement around the scan maximum
  double lo = best_s / 1.01, hi = best_s * 1.01;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double a = hi - g * (hi - lo);
    const double b = lo + g * (hi - lo);
    if (si_at_rytov(a, wave) < si_at_rytov(b, wave))
      lo = a;
    else
      hi = b;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double rytov_variance_for_si(double si, RytovWave wave) {
  if (!(si > 0.0) || !std::isfinite(si)) throw ParameterError("gammagamma_from_si: si must be > 0");
  const double peak = rytov_peak(wave);
  const double peak_si = si_at_rytov(peak, wave);
  if (si > peak_si) {
    std::ostringstream os;
    os << "gammagamma_from_si: S.I. " << si << " unattainable; searched Rytov variance in (0, " << peak
       << "], maximum S.I. " << peak_si;
    throw UnattainableError(os.str(), 0.0, peak);
  }
  // S.I. is increasing on (0, peak]; bisection.
  double lo = 0.0, hi = peak;
  for (int i = 0; i < 400 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (si_at_rytov(mid, wave) < si)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

FadingModel gammagamma_from_si(double si, RytovWave wave) {
  const auto shapes = gammagamma_shapes_from_rytov(rytov_variance_for_si(si, wave), wave);
  return FadingModel::gamma_gamma(shapes.alpha, shapes.beta);
}

void ChannelParams::validate() const {
  if (!(n_s >= 0.0) || !std::isfinite(n_s)) throw ParameterError("n_s must be >= 0");
  if (!(n_b > 0.0) || !std::isfinite(n_b)) throw ParameterError("n_b must be > 0");
  if (coherence_length < 1) throw ParameterError("coherence length must be >= 1");
}

GainProcess::GainProcess(FadingModel model, std::uint64_t coherence_length, std::uint64_t seed)
    : model_(model), coherence_length_(coherence_length), rng_(seed) {
  if (coherence_length_ < 1) throw ParameterError("coherence length must be >= 1");
}

double GainProcess::sample_gain() {
  block_started_ = remaining_ == 0;
  if (block_started_) {
    gain_ = model_.draw(rng_);
    remaining_ = coherence_length_;
  }
  --remaining_;
  return gain_;
}

std::int64_t sample_poisson(double mean, Rng& rng) {
  if (!(mean >= 0.0) || !(mean <= kMaxPoissonMean))
    throw ParameterError("Poisson mean out of range [0, 1e9]: " + std::to_string(mean));
  if (mean == 0.0) return 0;
  std::poisson_distribution<std::int64_t> dist(mean);
  return dist(rng);
}

std::int64_t transmit_slot(int bit, double h, const ChannelParams& params, Rng& rng) {
  if (bit != 0 && bit != 1) throw ParameterError("bit must be 0 or 1");
  if (!(h > 0.0)) throw ParameterError("gain must be > 0");
  return sample_poisson(params.n_s * h * bit + params.n_b, rng);
}

}  // namespace fsopc
