// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cubespline/bench.hpp"
#include "cubespline/oracle.hpp"
#include "cubespline/perf_model.hpp"
#include "cubespline/spline.hpp"
#include "test_support.hpp"

using namespace cubespline;

namespace {

constexpr double kGoldenTol = 5e-6;
constexpr double kGoldenSeconds = 1.0;
constexpr double kFormulaTol = 1e-12;
constexpr double kFormulaSeconds = 5.0;
constexpr double kDenseTol = 1e-10;
constexpr double kSlopeTol = 1e-4;
constexpr double kDoubleVsOracleTol = 1e-12;
constexpr double kOracleVsOracleTol = 1e-25;
constexpr double kPrecisionSeconds = 30.0;
constexpr double kSweepMseBound = 1e-24;
constexpr double kDeskBenchSeconds = 600.0;
constexpr double kGammaTol = 1e-12;
constexpr double kSlopeMedianErr = 0.02;
constexpr double kModeMedianErr = 0.10;
constexpr int kRecoveryReps = 20;
constexpr int kRecoveryCover = 16;
constexpr double kRecoverySeconds = 600.0;

// Posterior medians for newint__orig on the reference machine.
const ModelParams kTheta{5.28, 5.49, 3.05e-3, 2.37e5, 5.53e-6, 0.685, 0.753, 590, 0.0768};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

const BoundaryCondition kNatural = BoundaryCondition::natural();

Outcome golden_second_derivatives() {
  const auto t0 = Clock::now();
  const auto ypp = second_derivatives(fixtures::hand_curve(), kNatural, kNatural);
  const double secs = seconds_since(t0);
  double worst = 0.0;
  for (std::size_t i = 0; i < ypp.size(); ++i) {
    worst = std::max(worst, std::abs(ypp[i] - fixtures::kHandNaturalYpp[i]));
  }
  return {worst <= kGoldenTol && secs < kGoldenSeconds,
          fmt("max |delta| %.3g <= %.0e, %.4f s < %.0f s", worst, kGoldenTol, secs,
              kGoldenSeconds)};
}

Outcome formula_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2018);
  std::uniform_real_distribution<double> pos(-100.0, 100.0);
  std::uniform_real_distribution<double> width(1e-3, 10.0);
  std::uniform_real_distribution<double> val(-10.0, 10.0);
  std::uniform_real_distribution<double> curv(-1000.0, 1000.0);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  double worst = 0.0;
  double worst_plain = 0.0;
  for (int i = 0; i < 100000; ++i) {
    Segment s;
    s.a = pos(rng);
    s.b = s.a + width(rng);
    s.u = val(rng);
    s.v = val(rng);
    s.upp = curv(rng);
    s.vpp = curv(rng);
    const double x = std::min(s.b, s.a + frac(rng) * (s.b - s.a));
    const double ref = interp_segment_reference(x, s);
    // Relative to the magnitude of the summed terms, which bounds what any
    // evaluation order can achieve under cancellation.
    const double h = s.b - s.a;
    const double A = (s.b - x) / h;
    const double B = 1.0 - A;
    const double scale =
        std::max(1.0, std::abs(A * s.u) + std::abs(B * s.v) +
                          (std::abs((A * A * A - A) * s.upp) + std::abs((B * B * B - B) * s.vpp)) *
                              h * h / 6.0);
    for (auto strategy :
         {DivisionStrategy::PrecomputedInverse, DivisionStrategy::DeferredDivision}) {
      const double diff = std::abs(interp_segment_fast(x, s, strategy) - ref);
      worst = std::max(worst, diff / scale);
      worst_plain = std::max(worst_plain, diff / std::max(1.0, std::abs(ref)));
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= kFormulaTol && secs < kFormulaSeconds,
          fmt("max rel %.3g <= %.0e (vs |ref|: %.3g), %.3f s < %.0f s", worst, kFormulaTol,
              worst_plain, secs, kFormulaSeconds)};
}

Outcome dense_oracle_equivalence() {
  std::mt19937_64 rng(2019);
  double worst = 0.0;
  for (std::size_t n : {3U, 4U, 8U, 16U, 64U}) {
    for (int rep = 0; rep < 100; ++rep) {
      const auto c = fixtures::random_curve(n, rng);
      for (const auto& s : fixtures::boundary_choices()) {
        for (const auto& e : fixtures::boundary_choices()) {
          worst = std::max(worst, max_disagreement(second_derivatives(c, s, e).values(),
                                                   dense_tridiag_solve(assemble_system(c, s, e))));
        }
      }
      worst = std::max(worst, max_disagreement(second_derivatives_simple(c).values(),
                                               dense_tridiag_solve(assemble_simple(c))));
    }
  }
  return {worst <= kDenseTol, fmt("max |diff| %.3g <= %.0e", worst, kDenseTol)};
}

Outcome clamped_slopes() {
  std::mt19937_64 rng(2020);
  std::uniform_real_distribution<double> slope(-3.0, 3.0);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const auto c = fixtures::random_curve(12, rng);
    const double s1 = slope(rng);
    const double sn = slope(rng);
    const auto ypp =
        second_derivatives(c, BoundaryCondition::clamped(s1), BoundaryCondition::clamped(sn));
    const auto x = c.knots();
    const std::size_t n = c.size();
    const double h1 = 1e-6 * (x[1] - x[0]);
    const double hn = 1e-6 * (x[n - 1] - x[n - 2]);
    // Centred one step inside each end so both samples stay in the domain.
    const std::vector<double> left = {x[0], x[0] + 2.0 * h1};
    const std::vector<double> right = {x[n - 1] - 2.0 * hn, x[n - 1]};
    const auto yl = evaluate_curve(c, ypp, left);
    const auto yr = evaluate_curve(c, ypp, right);
    const double fd1 = (yl[1] - yl[0]) / (2.0 * h1);
    const double fdn = (yr[1] - yr[0]) / (2.0 * hn);
    worst = std::max(worst, std::abs(fd1 - s1) / std::max(1.0, std::abs(s1)));
    worst = std::max(worst, std::abs(fdn - sn) / std::max(1.0, std::abs(sn)));
  }
  return {worst <= kSlopeTol, fmt("max rel %.3g <= %.0e", worst, kSlopeTol)};
}

Outcome precision_scaling() {
  const auto t0 = Clock::now();
  const auto c = fixtures::hand_curve();
  const auto dbl = second_derivatives(c, kNatural, kNatural);
  const auto o30 = hp_second_derivatives(c, kNatural, kNatural, PrecisionConfig{30});
  const auto o50 = hp_second_derivatives(c, kNatural, kNatural, PrecisionConfig{50});
  const double d_double = max_disagreement(dbl.values(), o30);
  const double d_oracle = max_disagreement(o30, o50);
  const double secs = seconds_since(t0);
  return {d_double <= kDoubleVsOracleTol && d_oracle <= kOracleVsOracleTol &&
              secs < kPrecisionSeconds,
          fmt("double vs 30 digits %.3g <= %.0e, 30 vs 50 digits %.3g <= %.0e, %.3f s < %.0f s",
              d_double, kDoubleVsOracleTol, d_oracle, kOracleVsOracleTol, secs,
              kPrecisionSeconds)};
}

Outcome sweep_mse() {
  const auto c = fixtures::hand_curve();
  const auto s = BoundaryCondition::clamped(-1.0);
  const auto e = BoundaryCondition::clamped(1.0);
  const auto xs = linspace(c.x_min(), c.x_max(), 2048);
  const auto ys = evaluate_curve(c, second_derivatives(c, s, e), xs);
  const HpCurve hp = HpCurve::from_curve(c, PrecisionConfig{30});
  const auto truth = hp_evaluate_curve(hp, hp_second_derivatives(hp, s, e), xs);
  const double value = mse(ys, truth);
  return {value < kSweepMseBound, fmt("MSE %.3g < %.0e", value, kSweepMseBound)};
}

std::string n_and_order(const std::string& tsv) {
  std::istringstream in(tsv);
  std::string line;
  std::string out;
  std::getline(in, line);
  while (std::getline(in, line)) {
    out += line.substr(0, line.find('\t')) + '\t' + line.substr(line.rfind('\t') + 1) + '\n';
  }
  return out;
}

Outcome bench_determinism() {
  BenchConfig cfg;
  cfg.schedule_len = 4096;
  cfg.n_max = 65536;
  cfg.seed = 20180101;
  const auto t0 = Clock::now();
  std::ostringstream out_a;
  run_benchmark(cfg, out_a);
  const double secs = seconds_since(t0);
  std::ostringstream out_b;
  run_benchmark(cfg, out_b);
  const std::string a = out_a.str();
  const std::string b = out_b.str();
  const std::string header_a = a.substr(0, a.find('\n'));
  const std::string want =
      "n\tnoop\tsplint_one__div\tsplint_one__mul\tnewint__orig\tnewint__noinv\tnewint__vol\torder";
  const bool same = n_and_order(a) == n_and_order(b);
  const auto rows = std::count(a.begin(), a.end(), '\n') - 1;
  return {same && header_a == want && rows == 4096 && secs < kDeskBenchSeconds,
          fmt("n/order columns %s, header %s, %ld rows, desk run %.1f s < %.0f s",
              same ? "identical" : "differ", header_a == want ? "exact" : "mismatch",
              static_cast<long>(rows), secs, kDeskBenchSeconds)};
}

Outcome gamma_round_trip() {
  double worst = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double Mo = 10.0 * i / 400.0;
    for (int j = 1; j <= 400; ++j) {
      for (double sigma : {10.0 * j / 400.0, std::pow(10.0, -12.0 + 13.0 * j / 400.0)}) {
        if (sigma > 10.0) {
          continue;
        }
        const GammaParams g = gamma_from_mode_sigma(Mo, sigma);
        worst = std::max(worst, std::abs((g.kappa - 1.0) * g.theta - Mo));
        worst = std::max(worst, std::abs(std::sqrt(g.kappa) * g.theta - sigma));
      }
    }
  }
  return {worst <= kGammaTol, fmt("max round-trip error %.3g <= %.0e", worst, kGammaTol)};
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Outcome synthetic_recovery() {
  const auto t0 = Clock::now();
  const auto truth = kTheta.to_array();
  const std::size_t tracked[] = {0, 1, 6};  // m_L3, m_MM, Mo
  std::vector<double> errors[3];
  int covered[kModelDim] = {};
  for (int rep = 0; rep < kRecoveryReps; ++rep) {
    std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(rep));
    const auto data = generate_synthetic(kTheta, 5000, 100, 500000, rng);
    FitConfig cfg;
    cfg.seed = 77 + static_cast<std::uint64_t>(rep);
    const FitResult fit = fit_posterior(data, cfg);
    const auto summary = summarize_posterior(fit.samples);
    for (std::size_t d = 0; d < kModelDim; ++d) {
      covered[d] += summary[d].p16 <= truth[d] && truth[d] <= summary[d].p84 ? 1 : 0;
    }
    for (std::size_t k = 0; k < 3; ++k) {
      const std::size_t d = tracked[k];
      errors[k].push_back(std::abs(summary[d].p50 - truth[d]) / truth[d]);
    }
    std::fprintf(stderr, "  recovery rep %d/%d done, %.0f s\n", rep + 1, kRecoveryReps,
                 seconds_since(t0));
  }
  const double secs = seconds_since(t0);
  const double err_l3 = median_of(errors[0]);
  const double err_mm = median_of(errors[1]);
  const double err_mo = median_of(errors[2]);
  bool pass = err_l3 <= kSlopeMedianErr && err_mm <= kSlopeMedianErr &&
              err_mo <= kModeMedianErr && secs <= kRecoverySeconds;
  std::string cover;
  for (std::size_t d = 0; d < kModelDim; ++d) {
    cover += fmt(" %s %d", param_names()[d].c_str(), covered[d]);
  }
  for (std::size_t d : tracked) {
    pass = pass && covered[d] >= kRecoveryCover;
  }
  return {pass, fmt("median rel err m_L3 %.4f m_MM %.4f (<= %.2f), Mo %.4f (<= %.2f); "
                    "16/84 coverage of %d reps (need %d for m_L3, m_MM, Mo):%s; %.0f s <= %.0f s",
                    err_l3, err_mm, kSlopeMedianErr, err_mo, kModeMedianErr, kRecoveryReps,
                    kRecoveryCover, cover.c_str(), secs, kRecoverySeconds)};
}

Outcome likelihood_support() {
  std::mt19937_64 rng(2021);
  auto data = generate_synthetic(kTheta, 2000, 100, 500000, rng);
  std::uniform_real_distribution<double> log_n(std::log(100.0), std::log(500000.0));
  std::uniform_real_distribution<double> below(0.0, 1.0);
  int failures = 0;
  const bool finite_before = std::isfinite(log_likelihood(kTheta, data));
  for (int trial = 0; trial < 200; ++trial) {
    const double n = std::round(std::exp(log_n(rng)));
    const double base = baseline(kTheta, n);
    const double ratio = trial % 2 == 0 ? 1.0 : below(rng);
    double time = n * base * ratio;
    while (time / n > base) {
      time = std::nextafter(time, 0.0);
    }
    data.push_back({n, time});
    const double poisoned = log_likelihood(kTheta, data);
    data.pop_back();
    const double restored = log_likelihood(kTheta, data);
    if (poisoned != -std::numeric_limits<double>::infinity() || !std::isfinite(restored)) {
      ++failures;
    }
  }
  return {finite_before && failures == 0,
          fmt("200 inserted points at or below the baseline, %d violations", failures)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "golden second derivatives", golden_second_derivatives},
      {2, "fast formula equivalence", formula_equivalence},
      {3, "dense oracle equivalence", dense_oracle_equivalence},
      {4, "clamped end slopes", clamped_slopes},
      {5, "precision scaling", precision_scaling},
      {6, "sweep MSE", sweep_mse},
      {7, "bench determinism and schema", bench_determinism},
      {8, "gamma reparameterization", gamma_round_trip},
      {9, "synthetic model recovery", synthetic_recovery},
      {10, "likelihood support", likelihood_support},
  };
  // Criterion numbers select a subset; --expected-fail N reports N but keeps
  // it out of the exit status.
  std::set<int> only;
  std::set<int> expected_fail;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--expected-fail" && i + 1 < argc) {
      expected_fail.insert(std::atoi(argv[++i]));
    } else {
      only.insert(std::atoi(argv[i]));
    }
  }
  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && only.count(c.id) == 0) {
      continue;
    }
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const bool excused = expected_fail.count(c.id) != 0;
    std::printf("%s criterion %d: %s: %s%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), !o.pass && excused ? " (expected)" : "");
    std::fflush(stdout);
    failed += o.pass || excused ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
