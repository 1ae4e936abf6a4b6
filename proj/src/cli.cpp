#include "cubespline/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "cubespline/bench.hpp"
#include "cubespline/errors.hpp"
#include "cubespline/io.hpp"
#include "cubespline/oracle.hpp"
#include "cubespline/perf_model.hpp"

namespace cubespline::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 20180101;

// Opened before any work so a bad output path fails fast.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) {
        throw IoError("cannot open '" + path + "' for writing", 0);
      }
      stream_ = file_.get();
    }
  }

  std::ostream& get() { return *stream_; }

  void finish(std::int64_t rows) {
    stream_->flush();
    if (!*stream_) {
      throw IoError("write failed", rows);
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

struct BoundaryFlags {
  std::string start = "natural";
  std::string end = "natural";
};

void add_boundary_flags(CLI::App* cmd, BoundaryFlags& flags) {
  cmd->add_option("--start-deriv", flags.start,
                  "First derivative at the first knot, or 'natural'")
      ->capture_default_str();
  cmd->add_option("--end-deriv", flags.end, "First derivative at the last knot, or 'natural'")
      ->capture_default_str();
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) {
      continue;
    }
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (*end != '\0') {
      throw DomainError("not a number in point list: '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

int algorithm_id(const std::string& label) {
  const auto id = variant_id_by_label(label);
  if (!id || *id == kNoopId) {
    std::string known;
    for (const auto& v : variant_registry()) {
      if (v.id != kNoopId) {
        known += (known.empty() ? "" : ", ") + v.label;
      }
    }
    throw DomainError("unknown algorithm '" + label + "' (expected one of " + known + ")");
  }
  return *id;
}

bool in_round(const BenchRecord& rec, int id, int round) {
  if (round <= 0) {
    return true;
  }
  const auto order = decode_order(rec.order);
  return static_cast<std::size_t>(round) <= order.size() &&
         order[static_cast<std::size_t>(round - 1)] == id;
}

std::vector<Observation> select_observations(const BenchTable& table, int id, int round) {
  std::vector<Observation> out;
  for (const auto& rec : table.rows) {
    const auto& t = rec.alg_ns[static_cast<std::size_t>(id - 1)];
    if (t && in_round(rec, id, round)) {
      out.push_back({static_cast<double>(rec.n), static_cast<double>(*t)});
    }
  }
  return out;
}

void write_curve_rows(std::ostream& out, const ControlCurve& curve, std::span<const double> ypp) {
  out << "#x\ty\typp\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out << format_double(curve.knots()[i]) << '\t' << format_double(curve.values()[i]) << '\t'
        << format_double(ypp[i]) << '\n';
  }
}

int cmd_derivs(const std::string& input, const BoundaryFlags& bc, bool simple,
               const std::string& out_path, std::ostream& out) {
  const auto start = parse_boundary(bc.start);
  const auto end = parse_boundary(bc.end);
  Sink sink(out_path, out);
  const ControlCurve curve = read_curve_file(input).curve();
  const SecondDerivatives ypp =
      simple ? second_derivatives_simple(curve) : second_derivatives(curve, start, end);
  write_curve_rows(sink.get(), curve, ypp.values());
  sink.finish(static_cast<std::int64_t>(curve.size()));
  return 0;
}

Formula parse_formula(const std::string& name) {
  if (name == "reference") return Formula::Reference;
  if (name == "fast") return Formula::FastPrecomputedInverse;
  if (name == "deferred") return Formula::FastDeferredDivision;
  throw DomainError("unknown formula '" + name + "' (expected reference, fast or deferred)");
}

int cmd_interp(const std::string& input, const BoundaryFlags& bc,
               const std::optional<std::size_t>& points, const std::optional<std::string>& at,
               const std::string& formula, const std::string& out_path, std::ostream& out) {
  const auto start = parse_boundary(bc.start);
  const auto end = parse_boundary(bc.end);
  const Formula f = parse_formula(formula);
  if (points && at) {
    throw DomainError("--points and --at are mutually exclusive");
  }
  Sink sink(out_path, out);
  const CurveFile file = read_curve_file(input);
  const ControlCurve curve = file.curve();
  const SecondDerivatives ypp = file.second ? SecondDerivatives(*file.second)
                                            : second_derivatives(curve, start, end);
  std::vector<double> xs;
  if (points) {
    xs = linspace(curve.x_min(), curve.x_max(), *points);
  } else if (at) {
    xs = parse_list(*at);
  } else {
    xs.assign(curve.knots().begin(), curve.knots().end());
  }
  const auto ys = evaluate_curve(curve, ypp, xs, f);
  auto& o = sink.get();
  o << "#x\ty\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    o << format_double(xs[i]) << '\t' << format_double(ys[i]) << '\n';
  }
  sink.finish(static_cast<std::int64_t>(xs.size()));
  return 0;
}

int cmd_bench(BenchConfig cfg, const std::vector<std::string>& algorithms, bool quiet,
              const std::string& out_path, std::ostream& out, std::ostream& err) {
  if (!algorithms.empty()) {
    cfg.algorithms.clear();
    for (const auto& label : algorithms) {
      cfg.algorithms.push_back(algorithm_id(label));
    }
  }
  cfg.validate();
  Sink sink(out_path, out);
  const TimerInfo timer = timer_resolution();
  if (std::max(timer.nominal_ns, timer.observed_ns) > 100.0) {
    err << "warning: steady clock resolution is " << std::max(timer.nominal_ns, timer.observed_ns)
        << " ns, coarser than 100 ns\n";
  }
  if (quiet) {
    const QuietCheckReport report = quiet_check();
    err << "quiet-check: timer " << report.timer.observed_ns << " ns, clock call "
        << report.call_overhead_ns << " ns, busy-loop spread " << report.spin_cv << "\n";
    for (const auto& w : report.warnings) {
      err << "warning: " << w << "\n";
    }
  }
  const std::int64_t rows = run_benchmark(cfg, sink.get());
  sink.finish(rows);
  return 0;
}

struct FitFlags {
  std::string input;
  std::string algorithm;
  int round = 0;
  FitConfig cfg;
  std::string out;
};

int cmd_fit(FitFlags flags, std::ostream& out, std::ostream& err) {
  const int id = algorithm_id(flags.algorithm);
  if (flags.round < 0 || flags.round > kNoopId) {
    throw DomainError("--round must lie in 1.." + std::to_string(kNoopId));
  }
  flags.cfg.validate();
  Sink sink(flags.out, out);
  const BenchTable table = read_bench_file(flags.input);
  const auto data = select_observations(table, id, flags.round);
  if (data.empty()) {
    throw SizeError("no timings for '" + flags.algorithm + "' in the selected round");
  }
  const FitResult result = fit_posterior(data, flags.cfg);
  for (const auto& w : result.warnings) {
    err << "warning: " << w << "\n";
  }
  write_posterior(sink.get(), result.samples, flags.cfg.seed);
  sink.finish(static_cast<std::int64_t>(result.samples.draws.size()));

  const auto summary = summarize_posterior(result.samples);
  err << "fit: " << data.size() << " points, " << result.samples.draws.size()
      << " draws, acceptance " << result.acceptance_fraction << "\n";
  for (std::size_t d = 0; d < kModelDim; ++d) {
    err << param_names()[d] << "\t" << format_summary(summary[d]) << "\n";
  }
  return 0;
}

int cmd_compare(const std::string& input, const BoundaryFlags& bc, int digits, std::size_t points,
                const std::string& out_path, std::ostream& out) {
  const auto start = parse_boundary(bc.start);
  const auto end = parse_boundary(bc.end);
  PrecisionConfig cfg{digits};
  cfg.validate();
  PrecisionConfig wider{digits + 20};
  Sink sink(out_path, out);
  const CurveFile file = read_curve_file(input);
  const ControlCurve curve = file.curve();

  const HpCurve hp = HpCurve::from_curve(curve, cfg);
  const HpCurve hp_wide = HpCurve::from_curve(curve, wider);
  const HpCurve hp_decimal = HpCurve::from_decimal(file.knot_text, file.value_text, cfg);
  const HpVector hp_ypp = hp_second_derivatives(hp, start, end);
  const HpVector hp_ypp_wide = hp_second_derivatives(hp_wide, start, end);
  const HpVector hp_ypp_assembled = hp_second_derivatives_assembled(hp, start, end);
  const SecondDerivatives ypp = second_derivatives(curve, start, end);

  const auto xs = linspace(curve.x_min(), curve.x_max(), points);
  const HpVector hp_sweep = hp_evaluate_curve(hp, hp_ypp, xs);
  const auto ref = evaluate_curve(curve, ypp, xs, Formula::Reference);
  const auto fast = evaluate_curve(curve, ypp, xs, Formula::FastPrecomputedInverse);
  const auto deferred = evaluate_curve(curve, ypp, xs, Formula::FastDeferredDivision);

  auto& o = sink.get();
  auto row = [&](const std::string& key, double v) { o << key << '\t' << v << '\n'; };
  o.precision(6);
  o << std::scientific;
  o << "metric\tvalue\n";
  o << "points\t" << points << '\n';
  o << "precision_digits\t" << digits << '\n';
  row("ypp_max_abs_diff", max_disagreement(ypp.values(), hp_ypp));
  row("ypp_decimal_input_max_abs_diff",
      max_disagreement(ypp.values(), hp_second_derivatives(hp_decimal, start, end)));
  row("ypp_oracle_routes_max_abs_diff", max_disagreement(hp_ypp, hp_ypp_assembled));
  row("ypp_oracle_precision_max_abs_diff", max_disagreement(hp_ypp, hp_ypp_wide));
  if (!xs.empty()) {
    row("sweep_reference_max_abs_diff", max_disagreement(ref, hp_sweep));
    row("sweep_reference_mse", mse(ref, hp_sweep));
    row("sweep_fast_mse", mse(fast, hp_sweep));
    row("sweep_deferred_mse", mse(deferred, hp_sweep));
  }
  sink.finish(8);
  return 0;
}

void write_per_n(std::ostream& o, const BenchTable& table, int round_filter_id, int round) {
  std::map<std::int64_t, std::vector<const BenchRecord*>> by_n;
  for (const auto& rec : table.rows) {
    by_n[rec.n].push_back(&rec);
  }
  o << "n\tcount";
  for (const auto& v : variant_registry()) {
    o << '\t' << v.label << "_p16\t" << v.label << "_p50\t" << v.label << "_p84";
  }
  o << '\n';
  for (const auto& [n, recs] : by_n) {
    std::size_t count = 0;
    std::ostringstream cells;
    cells.precision(6);
    for (const auto& v : variant_registry()) {
      std::vector<double> per_point;
      for (const BenchRecord* rec : recs) {
        if (round_filter_id > 0 && !in_round(*rec, v.id, round)) {
          continue;
        }
        const std::optional<std::int64_t> t =
            v.id == kNoopId ? std::optional<std::int64_t>(rec->noop_ns)
                            : rec->alg_ns[static_cast<std::size_t>(v.id - 1)];
        if (t) {
          per_point.push_back(static_cast<double>(*t) / static_cast<double>(n));
        }
      }
      count = std::max(count, per_point.size());
      if (per_point.empty()) {
        cells << "\tNA\tNA\tNA";
      } else {
        const ParamSummary s = summarize(per_point);
        cells << '\t' << s.p16 << '\t' << s.p50 << '\t' << s.p84;
      }
    }
    o << n << '\t' << count << cells.str() << '\n';
  }
}

int cmd_report(const std::string& input, const std::optional<std::string>& posterior, int round,
               const std::string& out_path, std::ostream& out) {
  if (round < 0 || round > kNoopId) {
    throw DomainError("--round must lie in 1.." + std::to_string(kNoopId));
  }
  Sink sink(out_path, out);
  const BenchTable table = read_bench_file(input);
  auto& o = sink.get();
  o << "# timing ns/point by n\n";
  write_per_n(o, table, round > 0 ? 1 : 0, round);

  if (posterior) {
    std::ifstream in(*posterior);
    if (!in) {
      throw IoError("cannot open '" + *posterior + "' for reading", 0);
    }
    const PosteriorSamples samples = read_posterior(in);
    const auto summary = summarize_posterior(samples);
    o << "\n# posterior\nparam\tp16\tp50\tp84\tsummary\n";
    std::array<double, kModelDim> median{};
    for (std::size_t d = 0; d < kModelDim; ++d) {
      median[d] = summary[d].p50;
      o << param_names()[d] << '\t' << summary[d].p16 << '\t' << summary[d].p50 << '\t'
        << summary[d].p84 << '\t' << format_summary(summary[d]) << '\n';
    }
    const ModelParams theta = ModelParams::from_array(median);
    std::vector<std::int64_t> ns;
    for (const auto& rec : table.rows) {
      ns.push_back(rec.n);
    }
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    o << "\n# model band at posterior medians, central 2/3\nn\tbaseline\tlow\thigh\n";
    for (std::int64_t n : ns) {
      const auto dn = static_cast<double>(n);
      const auto [lo, hi] = credible_interval(theta, dn);
      o << n << '\t' << baseline(theta, dn) << '\t' << lo << '\t' << hi << '\n';
    }
  }
  sink.finish(static_cast<std::int64_t>(table.rows.size()));
  return 0;
}

}  // namespace

BoundaryCondition parse_boundary(const std::string& text) {
  if (text == "natural") {
    return BoundaryCondition::natural();
  }
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0') {
    throw DomainError("boundary must be 'natural' or a number, got '" + text + "'");
  }
  if (v > 0.99e30) {
    return BoundaryCondition::natural();
  }
  return BoundaryCondition::clamped(v);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) {
    return *flag;
  }
  if (const char* env = std::getenv("CUBESPLINE_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') {
      throw DomainError(std::string("CUBESPLINE_SEED is not an integer: '") + env + "'");
    }
    return v;
  }
  return kDefaultSeed;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cubic spline interpolation, precision checks and timing analysis",
               "cubespline"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::string out_path;
  BoundaryFlags bc;

  std::string input;
  bool simple = false;
  auto* derivs = app.add_subcommand("derivs", "Write x, y, y'' for a curve file");
  derivs->add_option("curve", input, "Curve file (x y per line)")->required()->check(
      CLI::ExistingFile);
  add_boundary_flags(derivs, bc);
  derivs->add_flag("--simple", simple, "Use the reduced-continuity end rows");
  derivs->add_option("--out", out_path, "Output file (default stdout)");

  std::optional<std::size_t> points;
  std::optional<std::string> at;
  std::string formula = "reference";
  auto* interp = app.add_subcommand("interp", "Evaluate a curve at many points");
  interp->add_option("curve", input, "Curve file; a third column is used as y''")
      ->required()
      ->check(CLI::ExistingFile);
  add_boundary_flags(interp, bc);
  interp->add_option("--points", points, "Uniformly spaced points over the curve domain");
  interp->add_option("--at", at, "Comma-separated ascending points");
  interp->add_option("--formula", formula, "reference, fast or deferred")->capture_default_str();
  interp->add_option("--out", out_path, "Output file (default stdout)");

  BenchConfig bench_cfg;
  std::vector<std::string> bench_algorithms;
  bool quiet = false;
  auto* bench = app.add_subcommand("bench", "Run the randomized timing benchmark");
  bench->add_option("--seed", seed, "Random seed (falls back to CUBESPLINE_SEED)");
  bench->add_option("--n-min", bench_cfg.n_min)->capture_default_str();
  bench->add_option("--n-max", bench_cfg.n_max)->capture_default_str();
  bench->add_option("--schedule-len", bench_cfg.schedule_len)->capture_default_str();
  bench->add_option("--algorithm", bench_algorithms, "Restrict to these variants");
  bench->add_flag("--quiet-check", quiet, "Measure timer overhead and machine noise first");
  bench->add_option("--out", out_path, "Output TSV (default stdout)");

  FitFlags fit_flags;
  auto* fit = app.add_subcommand("fit", "Fit the timing model to one benchmark column");
  fit->add_option("bench", fit_flags.input, "Benchmark TSV")->required()->check(CLI::ExistingFile);
  fit->add_option("--algorithm", fit_flags.algorithm, "Column to fit")->required();
  fit->add_option("--round", fit_flags.round, "Keep trials where it ran in this 1-based slot");
  fit->add_option("--walkers", fit_flags.cfg.walkers)->capture_default_str();
  fit->add_option("--steps", fit_flags.cfg.steps)->capture_default_str();
  fit->add_option("--burn-in", fit_flags.cfg.burn_in, "Default: half of --steps");
  fit->add_option("--t-min", fit_flags.cfg.bounds.t_min)->capture_default_str();
  fit->add_option("--t-max", fit_flags.cfg.bounds.t_max)->capture_default_str();
  fit->add_option("--seed", seed, "Random seed (falls back to CUBESPLINE_SEED)");
  fit->add_option("--out", out_path, "Posterior TSV (default stdout)");

  int digits = 30;
  std::size_t compare_points = 2048;
  auto* compare = app.add_subcommand("compare", "Compare double results to an MPFR oracle");
  compare->add_option("curve", input, "Curve file")->required()->check(CLI::ExistingFile);
  add_boundary_flags(compare, bc);
  compare->add_option("--precision", digits, "Oracle decimal digits")->capture_default_str();
  compare->add_option("--points", compare_points, "Sweep points")->capture_default_str();
  compare->add_option("--out", out_path, "Output file (default stdout)");

  std::optional<std::string> posterior;
  int report_round = 0;
  auto* report = app.add_subcommand("report", "Percentile tables from benchmark output");
  report->add_option("bench", input, "Benchmark TSV")->required()->check(CLI::ExistingFile);
  report->add_option("--posterior", posterior, "Posterior TSV to summarize")
      ->check(CLI::ExistingFile);
  report->add_option("--round", report_round, "Keep only the given 1-based execution slot");
  report->add_option("--out", out_path, "Output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (derivs->parsed()) {
      return cmd_derivs(input, bc, simple, out_path, out);
    }
    if (interp->parsed()) {
      return cmd_interp(input, bc, points, at, formula, out_path, out);
    }
    if (bench->parsed()) {
      bench_cfg.seed = resolve_seed(seed);
      return cmd_bench(bench_cfg, bench_algorithms, quiet, out_path, out, err);
    }
    if (fit->parsed()) {
      fit_flags.cfg.seed = resolve_seed(seed);
      fit_flags.out = out_path;
      return cmd_fit(fit_flags, out, err);
    }
    if (compare->parsed()) {
      return cmd_compare(input, bc, digits, compare_points, out_path, out);
    }
    return cmd_report(input, posterior, report_round, out_path, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const RuntimeFailure& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cubespline::cli
