#pragma once

// Scalar-generic kernels shared by the double-precision library, the
// extended-precision oracle and the benchmark loops. Nothing in here
// validates its input; callers do that once, outside the hot path.

#include <cassert>
#include <cstddef>
#include <optional>
#include <span>

namespace cubespline::kernels {

/// y = A u + B v + C u'' + D v'' with the classic A, B, C, D weights.
template <class T>
T interp_reference(const T& x, const T& a, const T& b, const T& u, const T& v,
                   const T& upp, const T& vpp) {
  const T h = b - a;
  const T A = (b - x) / h;
  const T B = (x - a) / h;
  const T h2 = h * h;
  const T C = (A * A * A - A) * h2 / 6;
  const T D = (B * B * B - B) * h2 / 6;
  return A * u + B * v + C * upp + D * vpp;
}

/// Same as interp_reference but multiplies by a precomputed 1/6.
inline double interp_reference_mul(double x, double a, double b, double u, double v,
                                   double upp, double vpp) {
  constexpr double kSixth = 1.0 / 6.0;
  const double h = b - a;
  const double A = (b - x) / h;
  const double B = (x - a) / h;
  const double h2 = h * h;
  const double C = (A * A * A - A) * h2 * kSixth;
  const double D = (B * B * B - B) * h2 * kSixth;
  return A * u + B * v + C * upp + D * vpp;
}

/// Rearranged form: the (b - a) factors inside C and D cancel, leaving a
/// single division that is hoisted into inv_ba.
inline double interp_fast_inverse(double x, double a, double b, double u, double v,
                                  double upp, double vpp) {
  const double ba = b - a;
  const double xa = x - a;
  const double inv_ba = 1.0 / ba;
  const double bx = b - x;
  const double ba2 = ba * ba;

  const double lower = xa * v + bx * u;
  const double C = (xa * xa - ba2) * xa * vpp;
  const double D = (bx * bx - ba2) * bx * upp;

  return (lower + (1.0 / 6.0) * (C + D)) * inv_ba;
}

/// Rearranged form with the division deferred to the very end.
inline double interp_fast_deferred(double x, double a, double b, double u, double v,
                                   double upp, double vpp) {
  const double ba = b - a;
  const double xa = x - a;
  const double bx = b - x;
  const double ba2 = ba * ba;

  const double lower = xa * v + bx * u;
  const double C = (xa * xa - ba2) * xa * vpp;
  const double D = (bx * bx - ba2) * bx * upp;

  return (lower + (1.0 / 6.0) * (C + D)) / ba;
}

/// interp_fast_inverse with the reciprocal pinned in memory, which stops the
/// compiler from sinking the division towards the return.
inline double interp_fast_volatile(double x, double a, double b, double u, double v,
                                   double upp, double vpp) {
  const double ba = b - a;
  const double xa = x - a;
  volatile double inv_ba = 1.0 / ba;
  const double bx = b - x;
  const double ba2 = ba * ba;

  const double lower = xa * v + bx * u;
  const double C = (xa * xa - ba2) * xa * vpp;
  const double D = (bx * bx - ba2) * bx * upp;

  return (lower + (1.0 / 6.0) * (C + D)) * inv_ba;
}

/// Thomas' algorithm fused with assembly of the spline system. `ypp` holds
/// d'_j during the forward sweep and y''_j after back substitution; `c_prime`
/// is the only scratch list. An empty slope means a natural (zero curvature)
/// end.
template <class T>
void fused_second_derivatives(std::span<const T> x, std::span<const T> y,
                              const std::optional<T>& start_slope,
                              const std::optional<T>& end_slope, std::span<T> ypp,
                              std::span<T> c_prime) {
  const std::size_t n = x.size();
  assert(n > 2 && y.size() == n && ypp.size() == n && c_prime.size() == n);

  T new_x = x[1];
  T new_y = y[1];
  T cj = x[1] - x[0];
  T new_dj = (y[1] - y[0]) / cj;

  if (!start_slope) {
    c_prime[0] = T(0);
    ypp[0] = T(0);
  } else {
    c_prime[0] = T(0.5);
    ypp[0] = 3 * (new_dj - *start_slope) / cj;
  }

  std::size_t j = 1;
  for (; j < n - 1; ++j) {
    const T old_x = new_x;
    const T old_y = new_y;
    const T aj = cj;
    const T old_dj = new_dj;

    new_x = x[j + 1];
    new_y = y[j + 1];

    cj = new_x - old_x;
    new_dj = (new_y - old_y) / cj;
    const T bj = 2 * (cj + aj);
    assert(bj >= aj + cj);  // diagonal dominance
    const T inv_denom = T(1) / (bj - aj * c_prime[j - 1]);
    const T dj = 6 * (new_dj - old_dj);

    ypp[j] = (dj - aj * ypp[j - 1]) * inv_denom;
    c_prime[j] = cj * inv_denom;
  }

  if (!end_slope) {
    c_prime[j] = T(0);
    ypp[j] = T(0);
  } else {
    // c_n does not exist; treating it as zero folds the clamped row in
    const T aj = cj;
    const T bj = 2 * aj;
    const T inv_denom = T(1) / (bj - aj * c_prime[j - 1]);
    const T dj = 6 * (*end_slope - new_dj);

    ypp[j] = (dj - aj * ypp[j - 1]) * inv_denom;
    c_prime[j] = T(0);
  }

  // y''_n = d'_n is already in place
  while (j > 0) {
    --j;
    ypp[j] = ypp[j] - c_prime[j] * ypp[j + 1];
  }
}

/// The reduced-continuity variant: the end rows come from collapsing the
/// missing neighbour onto the end knot instead of from a boundary condition.
template <class T>
void fused_second_derivatives_simple(std::span<const T> x, std::span<const T> y,
                                     std::span<T> ypp, std::span<T> c_prime) {
  const std::size_t n = x.size();
  assert(n > 2 && y.size() == n && ypp.size() == n && c_prime.size() == n);

  T new_x = x[1];
  T new_y = y[1];
  T cj = x[1] - x[0];
  T new_dj = (y[1] - y[0]) / cj;

  c_prime[0] = T(0.5);
  ypp[0] = 3 * new_dj / cj;

  std::size_t j = 1;
  for (; j < n - 1; ++j) {
    const T old_x = new_x;
    const T old_y = new_y;
    const T aj = cj;
    const T old_dj = new_dj;

    new_x = x[j + 1];
    new_y = y[j + 1];

    cj = new_x - old_x;
    new_dj = (new_y - old_y) / cj;
    const T bj = 2 * (cj + aj);
    assert(bj >= aj + cj);
    const T inv_denom = T(1) / (bj - aj * c_prime[j - 1]);
    const T dj = 6 * (new_dj - old_dj);

    ypp[j] = (dj - aj * ypp[j - 1]) * inv_denom;
    c_prime[j] = cj * inv_denom;
  }

  {
    const T aj = cj;
    const T bj = 2 * aj;
    const T inv_denom = T(1) / (bj - aj * c_prime[j - 1]);
    const T dj = -6 * new_dj;

    ypp[j] = (dj - aj * ypp[j - 1]) * inv_denom;
    c_prime[j] = T(0);
  }

  while (j > 0) {
    --j;
    ypp[j] = ypp[j] - c_prime[j] * ypp[j + 1];
  }
}

}  // namespace cubespline::kernels
