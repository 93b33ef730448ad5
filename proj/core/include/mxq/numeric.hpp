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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Floating-point building blocks shared by the analytic modules.
namespace mxq::numeric {

/// Error-free transformation a + b = sum + err.
struct TwoTerm {
  double hi = 0.0;
  double lo = 0.0;
};

TwoTerm two_sum(double a, double b) noexcept;
TwoTerm two_product(double a, double b) noexcept;

/// Running sum carried as a double-double pair.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double x) : hi_(x) {}

  void add(double x) noexcept;
  /// Adds a*b with the product error captured.
  void add_product(double a, double b) noexcept;
  double value() const noexcept { return hi_ + lo_; }

 private:
  double hi_ = 0.0;
  double lo_ = 0.0;
};

double compensated_sum(std::span<const double> xs) noexcept;

/// Compensated Horner evaluation of sum_k coeffs[k] s^k.
double horner(std::span<const double> coeffs, double s) noexcept;

/// Value, first and second derivative of the polynomial at s, each via
/// compensated Horner.
struct PolyValue {
  double value;
  double d1;
  double d2;
};
PolyValue horner_with_derivatives(std::span<const double> coeffs, double s) noexcept;

/// Dense row-major n x n system solved by Gaussian elimination with
/// partial pivoting. Throws NumericalError when the matrix is numerically
/// singular.
std::vector<double> solve_dense(std::vector<double> matrix, std::vector<double> rhs);

/// Synthetic division by (s - root), highest coefficient first. Returns the
/// quotient; the remainder p(root) is dropped.
std::vector<double> deflate(std::span<const double> coeffs, double root);

/// First `count` power-series coefficients of numer(s)/denom(s) when both
/// polynomials vanish at `root`, the only zero of denom in the closed unit
/// disk. The common factor (s - root) is removed before the series division,
/// so the recursion runs against a denominator whose zeros lie outside the
/// disk and rounding errors are damped instead of amplified.
std::vector<double> deflated_series(std::span<const double> numer, std::span<const double> denom,
                                    double root, std::size_t count);

/// Plain power-series division numer/denom (denom[0] != 0).
std::vector<double> series_divide(std::span<const double> numer, std::span<const double> denom,
                                  std::size_t count);

}  // namespace mxq::numeric
