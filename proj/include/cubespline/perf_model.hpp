#pragma once

// Execution-time model: Gamma noise above a baseline that bridges an L3
// regime and a main-memory regime, plus ensemble MCMC fitting.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cubespline {

inline constexpr std::size_t kModelDim = 9;

struct ModelParams {
  double m_L3 = 0.0;
  double m_MM = 0.0;
  double b_L3 = 0.0;
  double t = 0.0;
  double s = 0.0;
  double p = 0.0;
  double Mo = 0.0;
  double sigma0 = 0.0;
  double sigma_inf = 0.0;

  std::array<double, kModelDim> to_array() const;
  static ModelParams from_array(const std::array<double, kModelDim>& v);
};

const std::array<std::string, kModelDim>& param_names();

struct GammaParams {
  double kappa;
  double theta;
};

struct PriorBounds {
  double t_min = 32000.0;
  double t_max = 350000.0;
};

/// Throws DomainError unless Mo >= 0 and sigma > 0, both finite.
GammaParams gamma_from_mode_sigma(double Mo, double sigma);

double baseline(const ModelParams& theta, double n);
double noise_sigma(const ModelParams& theta, double n);

/// Name of the first violated constraint, if any.
std::optional<std::string> prior_violation(const ModelParams& theta, const PriorBounds& bounds);
double log_prior(const ModelParams& theta, const PriorBounds& bounds = {});

struct Observation {
  double n;
  double time_ns;
};

/// Observations with time/n and 1/n precomputed once.
class PreparedData {
 public:
  explicit PreparedData(std::span<const Observation> data);

  std::size_t size() const noexcept { return n_.size(); }
  std::span<const double> n() const noexcept { return n_; }
  std::span<const double> normed() const noexcept { return normed_; }
  std::span<const double> inv_n() const noexcept { return inv_n_; }

 private:
  std::vector<double> n_;
  std::vector<double> normed_;
  std::vector<double> inv_n_;
};

double log_likelihood(const ModelParams& theta, const PreparedData& data);
double log_likelihood(const ModelParams& theta, std::span<const Observation> data);

struct PosteriorSamples {
  std::vector<ModelParams> draws;
};

struct FitConfig {
  int walkers = 32;
  int steps = 2000;
  /// Negative means half of `steps`.
  int burn_in = -1;
  std::uint64_t seed = 0;
  PriorBounds bounds;
  std::size_t min_draws = 4096;
  double stretch = 2.0;

  int effective_burn_in() const noexcept { return burn_in < 0 ? steps / 2 : burn_in; }
  void validate() const;
};

struct FitResult {
  PosteriorSamples samples;
  double acceptance_fraction = 0.0;
  std::vector<std::string> warnings;
};

FitResult fit_posterior(std::span<const Observation> data, const FitConfig& cfg);

/// Central interval holding `fraction` of the predicted time per point at n.
std::pair<double, double> credible_interval(const ModelParams& theta, double n,
                                            double fraction = 2.0 / 3.0);

struct ParamSummary {
  double p16;
  double p50;
  double p84;
};

/// Linear interpolation between order statistics; q in [0, 100].
double percentile(std::vector<double> values, double q);
ParamSummary summarize(std::span<const double> values);
std::array<ParamSummary, kModelDim> summarize_posterior(const PosteriorSamples& samples);

/// "median^{+upper}_{-lower}" with three significant digits.
std::string format_summary(const ParamSummary& s);

/// One draw per line, nine tab-separated columns in field order, no header.
/// Draws are written in a shuffled order.
void write_posterior(std::ostream& out, const PosteriorSamples& samples, std::uint64_t seed);
PosteriorSamples read_posterior(std::istream& in);

/// Points with n log-uniform in [n_lo, n_hi] (rounded to integers) and times
/// drawn from the model.
std::vector<Observation> generate_synthetic(const ModelParams& theta, std::size_t count,
                                            double n_lo, double n_hi, std::mt19937_64& rng);

}  // namespace cubespline
