#include "cubespline/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <set>
#include <sstream>

#include "cubespline/kernels.hpp"

namespace cubespline {

namespace {

using Clock = std::chrono::steady_clock;

volatile double g_sink = 0.0;

void check_ids(const std::vector<int>& perm) {
  if (perm.empty()) {
    throw DomainError("order permutation is empty");
  }
  std::set<int> seen;
  for (int id : perm) {
    if (id < 1 || id > kNoopId) {
      throw DomainError("unknown variant ID " + std::to_string(id));
    }
    if (!seen.insert(id).second) {
      throw DomainError("variant ID " + std::to_string(id) + " appears twice in order");
    }
  }
}

// Evaluates the whole sweep with forward bracketing. Kept out of line so each
// variant gets its own loop body and the call cannot be hoisted across the
// clock reads.
template <class Kernel>
[[gnu::noinline]] double sweep(const double* knots, const double* values, const double* ypp,
                               std::size_t n, const double* xs, std::size_t m, Kernel kernel) {
  double acc = 0.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = xs[i];
    while (j + 2 < n && knots[j + 1] <= x) {
      ++j;
    }
    acc += kernel(x, knots[j], knots[j + 1], values[j], values[j + 1], ypp[j], ypp[j + 1]);
  }
  return acc;
}

struct Noop {
  double operator()(double x, double, double, double, double, double, double) const { return x; }
};

struct RefDiv {
  double operator()(double x, double a, double b, double u, double v, double upp,
                    double vpp) const {
    return kernels::interp_reference<double>(x, a, b, u, v, upp, vpp);
  }
};

struct RefMul {
  double operator()(double x, double a, double b, double u, double v, double upp,
                    double vpp) const {
    return kernels::interp_reference_mul(x, a, b, u, v, upp, vpp);
  }
};

struct FastInverse {
  double operator()(double x, double a, double b, double u, double v, double upp,
                    double vpp) const {
    return kernels::interp_fast_inverse(x, a, b, u, v, upp, vpp);
  }
};

struct FastDeferred {
  double operator()(double x, double a, double b, double u, double v, double upp,
                    double vpp) const {
    return kernels::interp_fast_deferred(x, a, b, u, v, upp, vpp);
  }
};

struct FastVolatile {
  double operator()(double x, double a, double b, double u, double v, double upp,
                    double vpp) const {
    return kernels::interp_fast_volatile(x, a, b, u, v, upp, vpp);
  }
};

std::int64_t time_variant(int id, const double* knots, const double* values, const double* ypp,
                          std::size_t n, const double* xs, std::size_t m) {
  const auto start = Clock::now();
  double acc = 0.0;
  switch (id) {
    case 1:
      acc = sweep(knots, values, ypp, n, xs, m, RefDiv{});
      break;
    case 2:
      acc = sweep(knots, values, ypp, n, xs, m, RefMul{});
      break;
    case 3:
      acc = sweep(knots, values, ypp, n, xs, m, FastInverse{});
      break;
    case 4:
      acc = sweep(knots, values, ypp, n, xs, m, FastDeferred{});
      break;
    case 5:
      acc = sweep(knots, values, ypp, n, xs, m, FastVolatile{});
      break;
    default:
      acc = sweep(knots, values, ypp, n, xs, m, Noop{});
      break;
  }
  const auto stop = Clock::now();
  g_sink = acc;
  if (stop < start) {
    throw EnvironmentError("monotonic clock went backwards");
  }
  return std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count();
}

}  // namespace

const std::vector<Variant>& variant_registry() {
  static const std::vector<Variant> registry = {
      {1, "splint_one__div"}, {2, "splint_one__mul"}, {3, "newint__orig"},
      {4, "newint__noinv"},   {5, "newint__vol"},     {kNoopId, "noop"},
  };
  return registry;
}

const Variant& variant_by_id(int id) {
  for (const auto& v : variant_registry()) {
    if (v.id == id) {
      return v;
    }
  }
  throw DomainError("unknown variant ID " + std::to_string(id));
}

std::optional<int> variant_id_by_label(const std::string& label) {
  for (const auto& v : variant_registry()) {
    if (v.label == label) {
      return v.id;
    }
  }
  return std::nullopt;
}

void BenchConfig::validate() const {
  if (n_min < 3) {
    throw DomainError("n_min must be at least 3, got " + std::to_string(n_min));
  }
  if (n_max < n_min) {
    throw DomainError("n_max (" + std::to_string(n_max) + ") is below n_min (" +
                      std::to_string(n_min) + ")");
  }
  if (schedule_len < 1) {
    throw DomainError("schedule length must be at least 1, got " + std::to_string(schedule_len));
  }
  check_ids(algorithms);
  if (std::find(algorithms.begin(), algorithms.end(), kNoopId) != algorithms.end()) {
    throw DomainError("the no-op loop always runs and cannot be listed as an algorithm");
  }
}

std::vector<std::int64_t> build_n_schedule(const BenchConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  const double lo = std::sqrt(static_cast<double>(cfg.n_min));
  const double hi = std::sqrt(static_cast<double>(cfg.n_max));
  const auto len = static_cast<std::size_t>(cfg.schedule_len);
  std::vector<std::int64_t> out(len);
  for (std::size_t i = 0; i < len; ++i) {
    const double r = len == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(len - 1);
    const double root = r * (hi - lo) + lo;
    out[i] = std::clamp<std::int64_t>(std::llround(root * root), cfg.n_min, cfg.n_max);
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

std::vector<std::int64_t> build_n_schedule(const BenchConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  return build_n_schedule(cfg, rng);
}

ControlCurve gen_control_points(std::int64_t n, const std::function<double()>& uniform) {
  if (n < 3) {
    throw SizeError("a generated curve needs at least 3 points, got " + std::to_string(n));
  }
  const auto count = static_cast<std::size_t>(n);
  std::vector<double> x(count);
  std::vector<double> y(count);
  x[0] = 0.0;
  y[0] = uniform();
  for (std::size_t i = 1; i < count; ++i) {
    const double eps = uniform();
    x[i] = x[i - 1] + (eps == 0.0 ? 0.0001 : eps);
    y[i] = uniform();
  }
  return ControlCurve(std::move(x), std::move(y));
}

ControlCurve gen_control_points(std::int64_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  return gen_control_points(n, [&] { return dist(rng); });
}

std::uint64_t encode_order(const std::vector<int>& perm) {
  check_ids(perm);
  std::uint64_t code = 0;
  for (std::size_t k = perm.size(); k-- > 0;) {
    code = code * 8 + static_cast<std::uint64_t>(perm[k]);
  }
  return code;
}

std::vector<int> decode_order(std::uint64_t code) {
  std::vector<int> perm;
  const std::uint64_t original = code;
  while (code != 0) {
    const int digit = static_cast<int>(code & 7U);
    if (digit == 0) {
      throw DomainError("order code " + std::to_string(original) + " contains an empty slot");
    }
    perm.push_back(digit);
    code >>= 3U;
  }
  check_ids(perm);
  return perm;
}

void check_permutation(const std::vector<int>& perm, const std::vector<int>& expected) {
  std::vector<int> a = perm;
  std::vector<int> b = expected;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) {
    throw DomainError("order is not a permutation of the registered variants");
  }
}

BenchRecord run_trial(std::int64_t n, std::mt19937_64& rng, const std::vector<int>& algorithms) {
  const ControlCurve curve = gen_control_points(n, rng);
  const SecondDerivatives ypp = second_derivatives(curve, BoundaryCondition::natural(),
                                                   BoundaryCondition::natural());
  const std::vector<double> xs =
      linspace(curve.x_min(), curve.x_max(), static_cast<std::size_t>(n));

  std::vector<int> order = algorithms;
  order.push_back(kNoopId);
  std::shuffle(order.begin(), order.end(), rng);

  BenchRecord rec;
  rec.n = n;
  rec.alg_ns.assign(kNoopId - 1, std::nullopt);
  rec.order = encode_order(order);

  const double* knots = curve.knots().data();
  const double* values = curve.values().data();
  const double* second = ypp.values().data();
  const auto count = static_cast<std::size_t>(n);
  for (int id : order) {
    const std::int64_t ns = time_variant(id, knots, values, second, count, xs.data(), xs.size());
    if (id == kNoopId) {
      rec.noop_ns = ns;
    } else {
      rec.alg_ns[static_cast<std::size_t>(id - 1)] = ns;
    }
  }
  return rec;
}

std::string bench_header() {
  std::string out = "n\tnoop";
  for (const auto& v : variant_registry()) {
    if (v.id != kNoopId) {
      out += '\t' + v.label;
    }
  }
  return out + "\torder";
}

std::string format_record(const BenchRecord& rec) {
  std::ostringstream line;
  line << rec.n << '\t' << rec.noop_ns;
  for (const auto& t : rec.alg_ns) {
    line << '\t';
    if (t) {
      line << *t;
    } else {
      line << "NA";
    }
  }
  line << '\t' << rec.order;
  return line.str();
}

std::int64_t run_benchmark(const BenchConfig& cfg, std::ostream& out,
                           const std::function<void(std::int64_t, std::int64_t)>& progress) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  const std::vector<std::int64_t> schedule = build_n_schedule(cfg, rng);

  std::int64_t rows = 0;
  out << bench_header() << '\n' << std::flush;
  if (!out) {
    throw IoError("failed to write benchmark header", rows);
  }
  for (std::int64_t n : schedule) {
    const BenchRecord rec = run_trial(n, rng, cfg.algorithms);
    out << format_record(rec) << '\n' << std::flush;
    if (!out) {
      throw IoError("failed to write benchmark row", rows);
    }
    ++rows;
    if (progress) {
      progress(rows, cfg.schedule_len);
    }
  }
  return rows;
}

TimerInfo timer_resolution() {
  using Period = Clock::period;
  const double nominal = 1e9 * static_cast<double>(Period::num) / static_cast<double>(Period::den);
  double observed = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto t0 = Clock::now();
    auto t1 = Clock::now();
    while (t1 == t0) {
      t1 = Clock::now();
    }
    const double step =
        static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
    observed = k == 0 ? step : std::min(observed, step);
  }
  return {nominal, observed};
}

QuietCheckReport quiet_check() {
  QuietCheckReport report{};
  report.timer = timer_resolution();
  if (std::max(report.timer.nominal_ns, report.timer.observed_ns) > 100.0) {
    report.warnings.push_back("timer resolution is coarser than 100 ns");
  }

  constexpr int kCalls = 100000;
  const auto c0 = Clock::now();
  for (int i = 0; i < kCalls; ++i) {
    static_cast<void>(Clock::now());
  }
  const auto c1 = Clock::now();
  report.call_overhead_ns =
      static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(c1 - c0).count()) /
      kCalls;

  constexpr int kRuns = 30;
  std::vector<double> times;
  for (int run = 0; run < kRuns; ++run) {
    const auto t0 = Clock::now();
    double acc = 0.0;
    for (int i = 0; i < 200000; ++i) {
      acc += 1.0 / (1.0 + i);
    }
    g_sink = acc;
    const auto t1 = Clock::now();
    times.push_back(
        static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
  }
  double mean = 0.0;
  for (double t : times) {
    mean += t;
  }
  mean /= kRuns;
  double var = 0.0;
  for (double t : times) {
    var += (t - mean) * (t - mean);
  }
  report.spin_cv = mean > 0.0 ? std::sqrt(var / (kRuns - 1)) / mean : 0.0;
  if (report.spin_cv > 0.2) {
    report.warnings.push_back("busy-loop timings vary by more than 20%; the machine appears loaded");
  }
  return report;
}

}  // namespace cubespline
