#include "cubespline/perf_model.hpp"

#include <boost/math/distributions/gamma.hpp>
#include <gsl/gsl_multimin.h>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "cubespline/errors.hpp"

namespace cubespline {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using Point = std::array<double, kModelDim>;

constexpr std::size_t kClimbSubset = 1500;
constexpr std::size_t kL3MinPoints = 50;
constexpr std::size_t kPolishStarts = 3;
constexpr double kCurvatureStep = 1e-4;
constexpr double kOverdispersion = 2.0;
constexpr double kMaxStartWidth = 0.5;

double weight(const ModelParams& th, double n) {
  if (n <= th.t) {
    return 1.0;
  }
  double w = std::exp(-std::pow((n - th.t) * th.s, th.p));
  if (std::isnan(w)) {
    w = 1.0;
  }
  return std::clamp(w, 0.0, 1.0);
}

double log_posterior(const ModelParams& th, const PriorBounds& bounds, const PreparedData& data) {
  const double lp = log_prior(th, bounds);
  if (lp == kNegInf) {
    return kNegInf;
  }
  const double ll = log_likelihood(th, data);
  if (std::isnan(ll)) {
    return kNegInf;
  }
  return lp + ll;
}

// Walkers move in log coordinates; the Jacobian term keeps the target equal
// to the posterior over the parameters themselves.
double log_target(const Point& u, const PriorBounds& bounds, const PreparedData& data) {
  Point th;
  double jacobian = 0.0;
  for (std::size_t d = 0; d < kModelDim; ++d) {
    th[d] = std::exp(u[d]);
    jacobian += u[d];
  }
  const double lp = log_posterior(ModelParams::from_array(th), bounds, data);
  return lp == kNegInf ? kNegInf : lp + jacobian;
}

Point to_log(const ModelParams& th) {
  Point u = th.to_array();
  for (double& v : u) {
    v = std::log(v);
  }
  return u;
}

ModelParams from_log(const Point& u) {
  Point th;
  for (std::size_t d = 0; d < kModelDim; ++d) {
    th[d] = std::exp(u[d]);
  }
  return ModelParams::from_array(th);
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

// Log-uniform box around scales read off the data. Wide on purpose: the
// sampler is expected to contract it.
ModelParams draw_initial(std::mt19937_64& rng, const PreparedData& data,
                         const PriorBounds& bounds) {
  const auto normed = data.normed();
  const auto ns = data.n();
  // Zero times cannot be fitted, but they must not collapse the box either;
  // the baseline check then reports them.
  double q_min = std::numeric_limits<double>::infinity();
  for (double v : normed) {
    if (v > 0.0) {
      q_min = std::min(q_min, v);
    }
  }
  if (!std::isfinite(q_min)) {
    q_min = 1.0;
  }
  std::vector<double> sorted(normed.begin(), normed.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2),
                   sorted.end());
  const double q_med = sorted[sorted.size() / 2] > 0.0 ? sorted[sorted.size() / 2] : q_min;
  const double n_min = *std::min_element(ns.begin(), ns.end());

  ModelParams th;
  th.m_L3 = log_uniform(rng, 0.5 * q_min, q_min);
  th.m_MM = log_uniform(rng, 0.5 * q_min, q_min);
  th.b_L3 = log_uniform(rng, 1e-6, 1.0);
  th.t = log_uniform(rng, bounds.t_min, bounds.t_max);
  const double n_max = *std::max_element(ns.begin(), ns.end());
  th.s = log_uniform(rng, 0.1 / n_max, std::min(1e-2, 10.0 / n_max));
  th.p = log_uniform(rng, 0.3, 3.0);
  th.Mo = log_uniform(rng, 1e-3 * q_med, q_med);
  th.sigma0 = log_uniform(rng, 1e-1 * q_med * n_min, 10.0 * q_med * n_min);
  th.sigma_inf = log_uniform(rng, 1e-3 * q_med, q_med);
  return th;
}

struct ModeSearch {
  const PriorBounds* bounds;
  const PreparedData* data;
  const std::vector<std::size_t>* free;
  Point* point;
};

double negative_target(const gsl_vector* x, void* params) {
  const auto* search = static_cast<const ModeSearch*>(params);
  Point& u = *search->point;
  for (std::size_t i = 0; i < search->free->size(); ++i) {
    u[(*search->free)[i]] = gsl_vector_get(x, i);
  }
  const double value = log_target(u, *search->bounds, *search->data);
  return value == kNegInf ? 1e300 : -value;
}

// Nelder-Mead over the `free` log coordinates, restarted until a pass stops
// improving.
Point climb(const Point& start, const PriorBounds& bounds, const PreparedData& data,
            const std::vector<std::size_t>& free, int max_passes) {
  Point scratch = start;
  ModeSearch search{&bounds, &data, &free, &scratch};
  const std::size_t dim = free.size();
  gsl_multimin_function fn{&negative_target, dim, &search};
  gsl_vector* x = gsl_vector_alloc(dim);
  gsl_vector* step = gsl_vector_alloc(dim);
  gsl_multimin_fminimizer* nm =
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);
  Point u = start;
  double previous = std::numeric_limits<double>::infinity();
  for (int pass = 0; pass < max_passes; ++pass) {
    for (std::size_t i = 0; i < dim; ++i) {
      gsl_vector_set(x, i, u[free[i]]);
    }
    gsl_vector_set_all(step, 0.1);
    scratch = u;
    gsl_multimin_fminimizer_set(nm, &fn, x, step);
    for (int iter = 0; iter < 4000; ++iter) {
      if (gsl_multimin_fminimizer_iterate(nm) != 0) {
        break;
      }
      if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(nm), 1e-6) == GSL_SUCCESS) {
        break;
      }
    }
    for (std::size_t i = 0; i < dim; ++i) {
      u[free[i]] = gsl_vector_get(nm->x, i);
    }
    const double value = nm->fval;
    if (previous - value < 1e-3) {
      break;
    }
    previous = value;
  }
  gsl_multimin_fminimizer_free(nm);
  gsl_vector_free(step);
  gsl_vector_free(x);
  return u;
}

std::vector<Observation> strided(const std::vector<Observation>& data, std::size_t limit) {
  if (data.size() <= limit) {
    return data;
  }
  std::vector<Observation> out;
  const std::size_t stride = (data.size() + limit - 1) / limit;
  for (std::size_t i = 0; i < data.size(); i += stride) {
    out.push_back(data[i]);
  }
  return out;
}

// Deterministic search for a starting point. Observations below t_min pin
// the L3 line and the noise, a grid over the transition shape finds the
// right basin, and the best grid points are polished on all the data.
Point find_start(const Point& fallback, std::span<const Observation> data,
                 const PreparedData& prepared, const PriorBounds& bounds) {
  enum : std::size_t { kL3, kMM, kB, kT, kS, kP, kMo, kSig0, kSigInf };
  Point best = fallback;
  double best_lp = log_target(fallback, bounds, prepared);

  std::vector<Observation> below;
  double n_max = 0.0;
  double normed_max = 0.0;
  for (const auto& obs : data) {
    if (obs.n < bounds.t_min) {
      below.push_back(obs);
    }
    n_max = std::max(n_max, obs.n);
    normed_max = std::max(normed_max, obs.time_ns / obs.n);
  }
  Point l3 = fallback;
  if (below.size() >= kL3MinPoints) {
    const PreparedData low(strided(below, kClimbSubset));
    Point start = fallback;
    start[kT] = std::log(bounds.t_max);
    start[kMM] = std::max(start[kMM], std::log(normed_max));
    if (log_target(start, bounds, low) != kNegInf) {
      l3 = climb(start, bounds, low, {kL3, kB, kMo, kSig0, kSigInf}, 4);
    }
  }

  struct Candidate {
    double lp;
    Point u;
  };
  std::vector<Candidate> grid;
  const double m_l3 = std::exp(l3[kL3]);
  for (int i = 0; i < 8; ++i) {
    const double t = bounds.t_min * std::pow(bounds.t_max / bounds.t_min, i / 7.0);
    const double span = std::max(n_max - t, 0.1 * t);
    for (double reach : {0.3, 1.0, 3.0, 10.0}) {
      const double s = std::min(reach / span, 1e-2);
      for (double p : {0.5, 1.0, 2.0}) {
        Candidate best_here{kNegInf, {}};
        for (double ratio : {1.0, 1.02, 1.05, 1.1, 1.2, 1.5, 2.0}) {
          Point u = l3;
          u[kMM] = std::log(m_l3 * ratio);
          u[kT] = std::log(t);
          u[kS] = std::log(s);
          u[kP] = std::log(p);
          const double value = log_target(u, bounds, prepared);
          if (value > best_here.lp) {
            best_here = {value, u};
          }
        }
        if (best_here.lp != kNegInf) {
          grid.push_back(best_here);
        }
      }
    }
  }
  const std::size_t polish = std::min(kPolishStarts, grid.size());
  std::partial_sort(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(polish), grid.end(),
                    [](const auto& x, const auto& y) { return x.lp > y.lp; });
  std::vector<std::size_t> all(kModelDim);
  std::iota(all.begin(), all.end(), 0);
  for (std::size_t i = 0; i < polish; ++i) {
    const Point u = climb(grid[i].u, bounds, prepared, all, 3);
    const double value = log_target(u, bounds, prepared);
    if (value > best_lp) {
      best = u;
      best_lp = value;
    }
  }
  return best;
}


// Square root of the inverse curvature at `u`, inflated for overdispersion.
// Flat or non-concave directions get a capped width instead.
Eigen::Matrix<double, kModelDim, kModelDim> laplace_spread(const Point& u, double value,
                                                          const PriorBounds& bounds,
                                                          const PreparedData& data) {
  using Matrix = Eigen::Matrix<double, kModelDim, kModelDim>;
  auto at = [&](std::size_t i, double di, std::size_t j, double dj) {
    Point v = u;
    v[i] += di;
    v[j] += dj;
    return log_target(v, bounds, data);
  };
  Matrix curvature = Matrix::Zero();
  for (std::size_t i = 0; i < kModelDim; ++i) {
    for (std::size_t j = i; j < kModelDim; ++j) {
      for (double h = kCurvatureStep; h >= kCurvatureStep * 1e-2; h *= 0.1) {
        double second;
        if (i == j) {
          second = (at(i, h, i, 0.0) - 2.0 * value + at(i, -h, i, 0.0)) / (h * h);
        } else {
          second = (at(i, h, j, h) - at(i, h, j, -h) - at(i, -h, j, h) + at(i, -h, j, -h)) /
                   (4.0 * h * h);
        }
        if (std::isfinite(second)) {
          const auto ei = static_cast<Eigen::Index>(i);
          const auto ej = static_cast<Eigen::Index>(j);
          curvature(ei, ej) = -second;
          curvature(ej, ei) = -second;
          break;
        }
      }
    }
  }
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(curvature);
  Eigen::Matrix<double, kModelDim, 1> widths;
  for (Eigen::Index d = 0; d < static_cast<Eigen::Index>(kModelDim); ++d) {
    const double lambda = eig.eigenvalues()(d);
    const double sd = lambda > 0.0 ? 1.0 / std::sqrt(lambda) : kMaxStartWidth;
    widths(d) = kOverdispersion * std::min(sd, kMaxStartWidth);
  }
  return eig.eigenvectors() * widths.asDiagonal();
}

}  // namespace

std::array<double, kModelDim> ModelParams::to_array() const {
  return {m_L3, m_MM, b_L3, t, s, p, Mo, sigma0, sigma_inf};
}

ModelParams ModelParams::from_array(const std::array<double, kModelDim>& v) {
  return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]};
}

const std::array<std::string, kModelDim>& param_names() {
  static const std::array<std::string, kModelDim> names = {
      "m_L3", "m_MM", "b_L3", "t", "s", "p", "Mo", "sigma0", "sigma_inf"};
  return names;
}

GammaParams gamma_from_mode_sigma(double Mo, double sigma) {
  if (!std::isfinite(Mo) || Mo < 0.0) {
    throw DomainError("Gamma mode must be finite and non-negative");
  }
  if (!std::isfinite(sigma) || sigma <= 0.0) {
    throw DomainError("Gamma standard deviation must be finite and positive");
  }
  // theta = (root - Mo) / 2 and kappa = (root + Mo) / (root - Mo), rewritten
  // without the cancellation in root - Mo.
  const double root = std::hypot(Mo, 2.0 * sigma);
  const double theta = 2.0 * sigma * sigma / (root + Mo);
  const double kappa = (Mo + root) * (Mo + root) / (4.0 * sigma * sigma);
  return {kappa, theta};
}

double baseline(const ModelParams& theta, double n) {
  const double l3 = theta.m_L3 + theta.b_L3 / n;
  if (n <= theta.t) {
    return l3;
  }
  const double w = weight(theta, n);
  return w * l3 + (1.0 - w) * theta.m_MM;
}

double noise_sigma(const ModelParams& theta, double n) {
  return theta.sigma_inf + theta.sigma0 / n;
}

std::optional<std::string> prior_violation(const ModelParams& th, const PriorBounds& bounds) {
  const auto values = th.to_array();
  for (std::size_t i = 0; i < kModelDim; ++i) {
    if (!std::isfinite(values[i])) {
      return param_names()[i] + " is not finite";
    }
  }
  if (th.m_L3 <= 0.0) return std::string("m_L3 must be positive");
  if (th.m_MM <= 0.0) return std::string("m_MM must be positive");
  if (th.m_L3 > th.m_MM) return std::string("m_L3 must not exceed m_MM");
  if (th.b_L3 < 0.0) return std::string("b_L3 must be non-negative");
  if (th.t < bounds.t_min || th.t > bounds.t_max) return std::string("t is outside its bounds");
  if (th.s <= 0.0 || th.s > 1e-2) return std::string("s must lie in (0, 1e-2]");
  if (th.p <= 0.0 || th.p > 1000.0) return std::string("p must lie in (0, 1000]");
  if (th.Mo <= 0.0) return std::string("Mo must be positive");
  if (th.sigma0 <= 0.0) return std::string("sigma0 must be positive");
  if (th.sigma_inf <= 0.0) return std::string("sigma_inf must be positive");
  if (th.sigma_inf > th.sigma0) return std::string("sigma_inf must not exceed sigma0");
  return std::nullopt;
}

double log_prior(const ModelParams& theta, const PriorBounds& bounds) {
  if (prior_violation(theta, bounds)) {
    return kNegInf;
  }
  return -1.5 * (std::log1p(theta.m_L3 * theta.m_L3) + std::log1p(theta.m_MM * theta.m_MM));
}

PreparedData::PreparedData(std::span<const Observation> data) {
  n_.reserve(data.size());
  normed_.reserve(data.size());
  inv_n_.reserve(data.size());
  for (const auto& obs : data) {
    n_.push_back(obs.n);
    normed_.push_back(obs.time_ns / obs.n);
    inv_n_.push_back(1.0 / obs.n);
  }
}

double log_likelihood(const ModelParams& th, const PreparedData& data) {
  if (!(th.Mo >= 0.0)) {
    return kNegInf;
  }
  const auto ns = data.n();
  const auto normed = data.normed();
  double total = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double z = normed[i] - baseline(th, ns[i]);
    const double sigma = noise_sigma(th, ns[i]);
    if (!(z > 0.0) || !(sigma > 0.0)) {
      return kNegInf;
    }
    const double root = std::sqrt(th.Mo * th.Mo + 4.0 * sigma * sigma);
    const double scale = 2.0 * sigma * sigma / (root + th.Mo);
    const double shape = (th.Mo + root) * (th.Mo + root) / (4.0 * sigma * sigma);
    int sign = 0;
    total += (shape - 1.0) * std::log(z) - z / scale - ::lgamma_r(shape, &sign) -
             shape * std::log(scale);
  }
  return total;
}

double log_likelihood(const ModelParams& theta, std::span<const Observation> data) {
  return log_likelihood(theta, PreparedData(data));
}

void FitConfig::validate() const {
  if (walkers < static_cast<int>(2 * kModelDim) || walkers % 2 != 0) {
    throw DomainError("walkers must be even and at least " + std::to_string(2 * kModelDim));
  }
  if (steps < 1) {
    throw DomainError("steps must be positive");
  }
  const int burn = effective_burn_in();
  if (burn >= steps) {
    throw DomainError("burn-in (" + std::to_string(burn) + ") must be below steps (" +
                      std::to_string(steps) + ")");
  }
  const auto draws = static_cast<std::size_t>(walkers) * static_cast<std::size_t>(steps - burn);
  if (draws < min_draws) {
    throw DomainError("walkers x kept steps gives " + std::to_string(draws) +
                      " draws, below the minimum of " + std::to_string(min_draws));
  }
  if (!(stretch > 1.0)) {
    throw DomainError("stretch scale must exceed 1");
  }
  if (!(bounds.t_min > 0.0) || !(bounds.t_max >= bounds.t_min)) {
    throw DomainError("t bounds must satisfy 0 < t_min <= t_max");
  }
}

FitResult fit_posterior(std::span<const Observation> data, const FitConfig& cfg) {
  cfg.validate();
  if (data.empty()) {
    throw SizeError("no observations to fit");
  }
  for (const auto& obs : data) {
    if (!(obs.n >= 1.0) || !(obs.time_ns >= 0.0)) {
      throw DomainError("observations need n >= 1 and non-negative times");
    }
  }
  const PreparedData prepared(data);
  std::mt19937_64 rng(cfg.seed);
  const auto k = static_cast<std::size_t>(cfg.walkers);

  std::vector<Point> pos(k);
  std::vector<double> lp(k);
  constexpr int kMaxAttempts = 20000;
  for (std::size_t w = 0; w < k; ++w) {
    std::map<std::string, int> reasons;
    int below_baseline = 0;
    bool found = false;
    for (int attempt = 0; attempt < kMaxAttempts && !found; ++attempt) {
      const ModelParams th = draw_initial(rng, prepared, cfg.bounds);
      if (auto why = prior_violation(th, cfg.bounds)) {
        ++reasons[*why];
        continue;
      }
      const Point u = to_log(th);
      const double value = log_target(u, cfg.bounds, prepared);
      if (value == kNegInf) {
        ++below_baseline;
        continue;
      }
      pos[w] = u;
      lp[w] = value;
      found = true;
    }
    if (!found) {
      // Prior violations are only reported when no draw got past the prior.
      std::string why = "some observations lie at or below the baseline";
      if (below_baseline == 0) {
        why = std::max_element(reasons.begin(), reasons.end(), [](const auto& a, const auto& b) {
                return a.second < b.second;
              })->first;
      }
      throw InitializationError("no valid starting point for walker " + std::to_string(w) +
                                " after " + std::to_string(kMaxAttempts) +
                                " attempts; violated constraint: " + why);
    }
  }

  // The posterior has ridges and secondary modes in the transition shape
  // that stretch moves cross slowly, so the ensemble starts in an
  // overdispersed Gaussian ball shaped by the curvature at a searched
  // optimum.
  {
    const Point best = find_start(
        pos[static_cast<std::size_t>(std::max_element(lp.begin(), lp.end()) - lp.begin())], data,
        prepared, cfg.bounds);
    const double best_lp = log_target(best, cfg.bounds, prepared);
    const Eigen::Matrix<double, kModelDim, kModelDim> spread =
        laplace_spread(best, best_lp, cfg.bounds, prepared);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t w = 0; w < k; ++w) {
      Point candidate = best;
      double value = kNegInf;
      double shrink = 1.0;
      for (int attempt = 0; attempt < 1000 && value == kNegInf; ++attempt) {
        if (attempt > 0 && attempt % 100 == 0) {
          shrink *= 0.5;
        }
        Eigen::Matrix<double, kModelDim, 1> z;
        for (std::size_t d = 0; d < kModelDim; ++d) {
          z(static_cast<Eigen::Index>(d)) = normal(rng);
        }
        const Eigen::Matrix<double, kModelDim, 1> offset = shrink * (spread * z);
        for (std::size_t d = 0; d < kModelDim; ++d) {
          candidate[d] = best[d] + offset(static_cast<Eigen::Index>(d));
        }
        value = log_target(candidate, cfg.bounds, prepared);
      }
      if (value == kNegInf) {
        candidate = best;
        value = best_lp;
      }
      pos[w] = candidate;
      lp[w] = value;
    }
  }

  const int burn = cfg.effective_burn_in();
  FitResult result;
  result.samples.draws.reserve(k * static_cast<std::size_t>(cfg.steps - burn));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t half = k / 2;
  const double a = cfg.stretch;
  std::size_t accepted = 0;
  std::size_t proposed = 0;

  for (int step = 0; step < cfg.steps; ++step) {
    for (std::size_t set = 0; set < 2; ++set) {
      const std::size_t begin = set * half;
      const std::size_t other = (1 - set) * half;
      std::uniform_int_distribution<std::size_t> pick(0, half - 1);
      for (std::size_t w = begin; w < begin + half; ++w) {
        const Point& partner = pos[other + pick(rng)];
        const double u = unit(rng);
        const double z = ((a - 1.0) * u + 1.0) * ((a - 1.0) * u + 1.0) / a;
        Point proposal;
        for (std::size_t d = 0; d < kModelDim; ++d) {
          proposal[d] = partner[d] + z * (pos[w][d] - partner[d]);
        }
        const double value = log_target(proposal, cfg.bounds, prepared);
        const double log_ratio =
            static_cast<double>(kModelDim - 1) * std::log(z) + value - lp[w];
        const bool accept = value != kNegInf && std::log(unit(rng)) < log_ratio;
        if (accept) {
          pos[w] = proposal;
          lp[w] = value;
        }
        if (step >= burn) {
          ++proposed;
          accepted += accept ? 1 : 0;
        }
      }
    }
    if (step >= burn) {
      for (const auto& p : pos) {
        result.samples.draws.push_back(from_log(p));
      }
    }
  }

  result.acceptance_fraction = static_cast<double>(accepted) / static_cast<double>(proposed);
  if (result.acceptance_fraction < 0.1 || result.acceptance_fraction > 0.9) {
    std::ostringstream msg;
    msg << "acceptance fraction " << result.acceptance_fraction << " is outside [0.1, 0.9]";
    result.warnings.push_back(msg.str());
  }
  return result;
}

std::pair<double, double> credible_interval(const ModelParams& theta, double n, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw DomainError("credible fraction must lie strictly between 0 and 1");
  }
  const GammaParams g = gamma_from_mode_sigma(theta.Mo, noise_sigma(theta, n));
  const boost::math::gamma_distribution<double> dist(g.kappa, g.theta);
  const double base = baseline(theta, n);
  const double tail = (1.0 - fraction) / 2.0;
  return {base + boost::math::quantile(dist, tail), base + boost::math::quantile(dist, 1.0 - tail)};
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) {
    throw SizeError("percentile of an empty sample");
  }
  if (!(q >= 0.0 && q <= 100.0)) {
    throw DomainError("percentile must lie in [0, 100]");
  }
  std::sort(values.begin(), values.end());
  const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

ParamSummary summarize(std::span<const double> values) {
  const std::vector<double> v(values.begin(), values.end());
  return {percentile(v, 16.0), percentile(v, 50.0), percentile(v, 84.0)};
}

std::array<ParamSummary, kModelDim> summarize_posterior(const PosteriorSamples& samples) {
  if (samples.draws.empty()) {
    throw SizeError("cannot summarize an empty posterior");
  }
  std::array<ParamSummary, kModelDim> out{};
  std::vector<double> column(samples.draws.size());
  for (std::size_t d = 0; d < kModelDim; ++d) {
    for (std::size_t i = 0; i < samples.draws.size(); ++i) {
      column[i] = samples.draws[i].to_array()[d];
    }
    out[d] = summarize(column);
  }
  return out;
}

std::string format_summary(const ParamSummary& s) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.2e^{+%.2e}_{-%.2e}", s.p50, s.p84 - s.p50, s.p50 - s.p16);
  return buf;
}

void write_posterior(std::ostream& out, const PosteriorSamples& samples, std::uint64_t seed) {
  std::vector<std::size_t> idx(samples.draws.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  char buf[32];
  for (std::size_t i : idx) {
    const auto v = samples.draws[i].to_array();
    for (std::size_t d = 0; d < kModelDim; ++d) {
      std::snprintf(buf, sizeof buf, "%.17g", v[d]);
      out << (d ? "\t" : "") << buf;
    }
    out << '\n';
  }
  out.flush();
  if (!out) {
    throw IoError("failed to write posterior draws", 0);
  }
}

PosteriorSamples read_posterior(std::istream& in) {
  PosteriorSamples out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") {
      continue;
    }
    std::array<double, kModelDim> v{};
    std::size_t col = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      const std::string field = line.substr(start, tab == std::string::npos ? std::string::npos
                                                                            : tab - start);
      if (col >= kModelDim) {
        throw ParseError("expected 9 columns, found more", lineno);
      }
      char* end = nullptr;
      v[col] = std::strtod(field.c_str(), &end);
      if (field.empty() || (*end != '\0' && *end != '\r')) {
        throw ParseError("not a number: '" + field + "'", lineno);
      }
      ++col;
      if (tab == std::string::npos) {
        break;
      }
      start = tab + 1;
    }
    if (col != kModelDim) {
      throw ParseError("expected 9 columns, found " + std::to_string(col), lineno);
    }
    out.draws.push_back(ModelParams::from_array(v));
  }
  if (out.draws.empty()) {
    throw SizeError("posterior file holds no draws");
  }
  return out;
}

std::vector<Observation> generate_synthetic(const ModelParams& theta, std::size_t count,
                                            double n_lo, double n_hi, std::mt19937_64& rng) {
  if (!(n_lo >= 1.0) || !(n_hi >= n_lo)) {
    throw DomainError("synthetic n range must satisfy 1 <= n_lo <= n_hi");
  }
  std::uniform_real_distribution<double> log_n(std::log(n_lo), std::log(n_hi));
  std::vector<Observation> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double n = std::round(std::exp(log_n(rng)));
    const GammaParams g = gamma_from_mode_sigma(theta.Mo, noise_sigma(theta, n));
    std::gamma_distribution<double> noise(g.kappa, g.theta);
    out.push_back({n, n * (baseline(theta, n) + noise(rng))});
  }
  return out;
}

}  // namespace cubespline
