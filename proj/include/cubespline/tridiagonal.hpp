#pragma once

// Explicit tridiagonal form of the spline system and a textbook Thomas
// solver over it. The library's production solver assembles rows on the fly
// (see kernels.hpp); these templates materialise the matrix so it can be
// checked against a dense solve or re-run at extended precision.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace cubespline {

/// Row j reads sub[j-1] * y_{j-1} + diag[j] * y_j + super[j] * y_{j+1} = rhs[j]
/// (0-based), so sub holds a_2..a_n and super holds c_1..c_{n-1}.
template <class T>
struct BasicTridiagonalSystem {
  std::vector<T> sub;
  std::vector<T> diag;
  std::vector<T> super;
  std::vector<T> rhs;

  std::size_t size() const noexcept { return diag.size(); }
};

using TridiagonalSystem = BasicTridiagonalSystem<double>;

/// Throws ShapeError on inconsistent lengths and DomainError when a row is
/// not diagonally dominant.
void validate_system(const TridiagonalSystem& sys);

template <class T>
BasicTridiagonalSystem<T> assemble_spline_system(std::span<const T> x, std::span<const T> y,
                                                 const std::optional<T>& start_slope,
                                                 const std::optional<T>& end_slope) {
  const std::size_t n = x.size();
  BasicTridiagonalSystem<T> sys;
  sys.sub.resize(n - 1);
  sys.diag.resize(n);
  sys.super.resize(n - 1);
  sys.rhs.resize(n);

  if (!start_slope) {
    sys.diag[0] = T(1);
    sys.super[0] = T(0);
    sys.rhs[0] = T(0);
  } else {
    const T h = x[1] - x[0];
    sys.diag[0] = 2 * h;
    sys.super[0] = h;
    sys.rhs[0] = 6 * ((y[1] - y[0]) / h - *start_slope);
  }

  for (std::size_t j = 1; j + 1 < n; ++j) {
    const T left = x[j] - x[j - 1];
    const T right = x[j + 1] - x[j];
    sys.sub[j - 1] = left;
    sys.diag[j] = 2 * (x[j + 1] - x[j - 1]);
    sys.super[j] = right;
    sys.rhs[j] = 6 * ((y[j + 1] - y[j]) / right - (y[j] - y[j - 1]) / left);
  }

  if (!end_slope) {
    sys.sub[n - 2] = T(0);
    sys.diag[n - 1] = T(1);
    sys.rhs[n - 1] = T(0);
  } else {
    const T h = x[n - 1] - x[n - 2];
    sys.sub[n - 2] = h;
    sys.diag[n - 1] = 2 * h;
    sys.rhs[n - 1] = 6 * (*end_slope - (y[n - 1] - y[n - 2]) / h);
  }
  return sys;
}

/// End rows of the reduced-continuity variant.
template <class T>
BasicTridiagonalSystem<T> assemble_simple_system(std::span<const T> x, std::span<const T> y) {
  const std::size_t n = x.size();
  auto sys = assemble_spline_system<T>(x, y, std::nullopt, std::nullopt);

  const T h1 = x[1] - x[0];
  sys.diag[0] = 2 * h1;
  sys.super[0] = h1;
  sys.rhs[0] = 6 * (y[1] - y[0]) / h1;

  const T hn = x[n - 1] - x[n - 2];
  sys.sub[n - 2] = hn;
  sys.diag[n - 1] = 2 * hn;
  sys.rhs[n - 1] = -6 * (y[n - 1] - y[n - 2]) / hn;
  return sys;
}

/// Forward elimination into separate c' and d' lists, then back
/// substitution.
template <class T>
std::vector<T> thomas_solve(const BasicTridiagonalSystem<T>& sys) {
  const std::size_t n = sys.size();
  std::vector<T> c_prime(n);
  std::vector<T> d_prime(n);

  c_prime[0] = n > 1 ? sys.super[0] / sys.diag[0] : T(0);
  d_prime[0] = sys.rhs[0] / sys.diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const T a = sys.sub[i - 1];
    const T denom = sys.diag[i] - a * c_prime[i - 1];
    c_prime[i] = i + 1 < n ? sys.super[i] / denom : T(0);
    d_prime[i] = (sys.rhs[i] - a * d_prime[i - 1]) / denom;
  }

  std::vector<T> out(n);
  out[n - 1] = d_prime[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    out[i] = d_prime[i] - c_prime[i] * out[i + 1];
  }
  return out;
}

}  // namespace cubespline
