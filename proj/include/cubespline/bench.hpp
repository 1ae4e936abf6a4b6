#pragma once

// Randomized timing harness for the interpolation variants.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cubespline/errors.hpp"
#include "cubespline/spline.hpp"

namespace cubespline {

inline constexpr int kNoopId = 6;

struct Variant {
  int id;
  std::string label;
  bool synthetic = false;
};

/// The five interpolation variants (IDs 1..5) followed by the no-op loop.
const std::vector<Variant>& variant_registry();
const Variant& variant_by_id(int id);
std::optional<int> variant_id_by_label(const std::string& label);

struct BenchConfig {
  std::int64_t n_min = 4;
  std::int64_t n_max = 1048576;
  std::int64_t schedule_len = 524288;
  std::uint64_t seed = 0;
  std::vector<int> algorithms = {1, 2, 3, 4, 5};

  void validate() const;
};

struct BenchRecord {
  std::int64_t n = 0;
  std::int64_t noop_ns = 0;
  /// Indexed by variant ID - 1; absent for variants not run.
  std::vector<std::optional<std::int64_t>> alg_ns;
  std::uint64_t order = 0;
};

std::vector<std::int64_t> build_n_schedule(const BenchConfig& cfg, std::mt19937_64& rng);
std::vector<std::int64_t> build_n_schedule(const BenchConfig& cfg);

/// `uniform` returns draws from U(0,1); injectable so the zero-step rule can
/// be exercised directly.
ControlCurve gen_control_points(std::int64_t n, const std::function<double()>& uniform);
ControlCurve gen_control_points(std::int64_t n, std::mt19937_64& rng);

/// Packs IDs three bits each, first-run variant in the lowest bits.
std::uint64_t encode_order(const std::vector<int>& perm);
std::vector<int> decode_order(std::uint64_t code);

/// Throws ValidationError unless `perm` is a permutation of `expected`.
void check_permutation(const std::vector<int>& perm, const std::vector<int>& expected);

BenchRecord run_trial(std::int64_t n, std::mt19937_64& rng, const std::vector<int>& algorithms);

std::string bench_header();
std::string format_record(const BenchRecord& rec);

/// Writes the header and one flushed row per trial. Returns rows written.
/// Throws IoError carrying the row count if the stream fails.
std::int64_t run_benchmark(const BenchConfig& cfg, std::ostream& out,
                           const std::function<void(std::int64_t, std::int64_t)>& progress = {});

/// Nominal tick of the steady clock and the smallest nonzero step observed.
struct TimerInfo {
  double nominal_ns;
  double observed_ns;
};
TimerInfo timer_resolution();

struct QuietCheckReport {
  TimerInfo timer;
  double call_overhead_ns;
  double spin_cv;
  std::vector<std::string> warnings;
};

/// Pre-flight: timer resolution, clock call overhead and run-to-run spread of
/// a fixed busy loop.
QuietCheckReport quiet_check();

}  // namespace cubespline
