// Copyright 2026 The mxq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mxq/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mxq/error.hpp"

namespace mxq::numeric {

TwoTerm two_sum(double a, double b) noexcept {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

TwoTerm two_product(double a, double b) noexcept {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

void CompensatedSum::add(double x) noexcept {
  const TwoTerm t = two_sum(hi_, x);
  hi_ = t.hi;
  lo_ += t.lo;
}

void CompensatedSum::add_product(double a, double b) noexcept {
  const TwoTerm p = two_product(a, b);
  add(p.hi);
  lo_ += p.lo;
}

double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

double horner(std::span<const double> coeffs, double s) noexcept {
  if (coeffs.empty()) return 0.0;
  double acc = coeffs.back();
  double err = 0.0;
  for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
    const TwoTerm p = two_product(acc, s);
    const TwoTerm t = two_sum(p.hi, coeffs[k]);
    acc = t.hi;
    err = err * s + (p.lo + t.lo);
  }
  return acc + err;
}

PolyValue horner_with_derivatives(std::span<const double> coeffs, double s) noexcept {
  std::vector<double> d1;
  std::vector<double> d2;
  const std::size_t n = coeffs.size();
  if (n > 1) {
    d1.resize(n - 1);
    for (std::size_t k = 1; k < n; ++k) d1[k - 1] = static_cast<double>(k) * coeffs[k];
  }
  if (n > 2) {
    d2.resize(n - 2);
    for (std::size_t k = 2; k < n; ++k)
      d2[k - 2] = static_cast<double>(k) * static_cast<double>(k - 1) * coeffs[k];
  }
  return {horner(coeffs, s), horner(d1, s), horner(d2, s)};
}

std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  if (a.size() != n * n) throw NumericalError("solve_dense: matrix/rhs size mismatch");

  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::abs(x));
  if (scale == 0.0 && n > 0) throw NumericalError("solve_dense: zero matrix");

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    if (std::abs(a[pivot * n + col]) <= 64 * std::numeric_limits<double>::epsilon() * scale)
      throw NumericalError("solve_dense: singular boundary system");
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
      std::swap(b[col], b[pivot]);
    }
    const double inv = 1.0 / a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] * inv;
      if (f == 0.0) continue;
      a[r * n + col] = 0.0;
      for (std::size_t k = col + 1; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
      b[r] -= f * b[col];
    }
  }

  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    CompensatedSum acc(b[i]);
    for (std::size_t k = i + 1; k < n; ++k) acc.add_product(-a[i * n + k], x[k]);
    x[i] = acc.value() / a[i * n + i];
  }
  for (double v : x)
    if (!std::isfinite(v)) throw NumericalError("solve_dense: non-finite solution");
  return x;
}

std::vector<double> deflate(std::span<const double> coeffs, double root) {
  std::size_t deg = coeffs.size();
  while (deg > 0 && coeffs[deg - 1] == 0.0) --deg;
  if (deg <= 1) return {};
  std::vector<double> q(deg - 1);
  q[deg - 2] = coeffs[deg - 1];
  for (std::size_t k = deg - 2; k-- > 0;) q[k] = coeffs[k + 1] + root * q[k + 1];
  return q;
}

std::vector<double> series_divide(std::span<const double> numer, std::span<const double> denom,
                                  std::size_t count) {
  if (denom.empty() || denom[0] == 0.0)
    throw NumericalError("series_divide: denominator vanishes at zero");
  std::vector<double> y(count, 0.0);
  const double d0 = denom[0];
  for (std::size_t j = 0; j < count; ++j) {
    CompensatedSum acc(j < numer.size() ? numer[j] : 0.0);
    const std::size_t kmax = std::min(j, denom.size() - 1);
    for (std::size_t k = 1; k <= kmax; ++k) acc.add_product(-denom[k], y[j - k]);
    y[j] = acc.value() / d0;
  }
  return y;
}

std::vector<double> deflated_series(std::span<const double> numer, std::span<const double> denom,
                                    double root, std::size_t count) {
  const std::vector<double> qn = deflate(numer, root);
  const std::vector<double> qd = deflate(denom, root);
  if (qd.empty()) throw NumericalError("deflated_series: denominator has degree < 2");
  return series_divide(qn, qd, count);
}

}  // namespace mxq::numeric
