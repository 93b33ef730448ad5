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

#include <span>
#include <vector>

#include "mxq/model.hpp"

namespace mxq {

/// One row phi_{i0..iJ}(lambda) of a resolvent.
struct ResolventRow {
  double lambda = 0.0;
  int source = 0;
  std::vector<double> values;
  int truncation = 0;
  /// 1/lambda minus the sum of the stored entries.
  double tail_bound = 0.0;
};

struct ExtinctionReport {
  int k = 0;
  double e_star = 0.0;
  /// m*_1(k), ..., m*_J(k).
  std::vector<double> m_star;
  double mean_time = 0.0;
};

/// phi*_{i0}(lambda), ..., phi*_{i,c-1}(lambda) from the c x c boundary system.
std::vector<double> resolvent_boundary(const QueueModel& model, int i, double lambda);

/// phi*_{i0..iJ}(lambda), J >= c.
ResolventRow resolvent_row(const QueueModel& model, int i, double lambda, int J);

/// Same, with J grown until lambda * sum >= 1 - 1e-10 or J = 10^4.
ResolventRow resolvent_row(const QueueModel& model, int i, double lambda);

/// Sum_j phi*_{ij}(lambda) s^j for |s| <= 1.
double resolvent_gf(const QueueModel& model, int i, double lambda, double s);

/// Laplace transform of the extinction-time distribution function from k.
double extinction_time_lt(const QueueModel& model, int k, double lambda);

/// e*_k together with m*_1(k)..m*_J(k) and the mean extinction time.
/// J = 0 stores max(c-1, 1) occupation times.
ExtinctionReport extinction_probability(const QueueModel& model, int k, int J = 0);

/// m*_1(k), ..., m*_J(k): expected total time spent in each state before
/// absorption.
std::vector<double> occupation_times(const QueueModel& model, int k, int J);

/// Expected time to reach 0 from k; +infinity unless the drift is negative.
double mean_extinction_time(const QueueModel& model, int k);

/// sum_i w_i phi*_{ij}(lambda) for j = 0..J.
std::vector<double> weighted_row(const QueueModel& model, std::span<const double> weights,
                                 double lambda, int J);

namespace detail {

/// Solution of the boundary system for a weighted source. x[0] is
/// lambda * sum_i w_i phi_{i0} (the absorption weight when lambda = 0) and
/// x[k] = sum_i w_i phi_{ik} for 1 <= k <= c-1.
struct Boundary {
  double lambda = 0.0;
  double u = 0.0;
  std::vector<double> x;
};

/// s^{k-1} (c-k) b_0 (1-s) and its derivative.
double g(const QueueModel& model, int k, double s);
double g_prime(const QueueModel& model, int k, double s);

std::vector<double> unit_weights(int i);

/// Boundary system at lambda >= 0 with u the matching root (u(lambda) for
/// lambda > 0, the root u for lambda = 0).
Boundary solve_boundary(const QueueModel& model, double lambda, double u,
                        std::span<const double> weights);

/// d/dlambda of the boundary unknowns given du = u'(lambda).
std::vector<double> boundary_derivative(const QueueModel& model, const Boundary& b,
                                        std::span<const double> weights, double du);

/// P(s) = x_0 s + sum_k x_k s^k (c-k) b_0 (1-s) - s W(s), which vanishes at u.
std::vector<double> tail_numerator(const QueueModel& model, const Boundary& b,
                                   std::span<const double> weights);

/// Coefficients 0..count-1 of the part of the row generating function beyond
/// the phi_{i0} term: P(s) / U_lambda(s), where
/// P(s) = x_0 s + sum_k x_k s^k (c-k) b_0 (1-s) - s W(s).
std::vector<double> tail_series(const QueueModel& model, const Boundary& b,
                                std::span<const double> weights, std::size_t count);

/// Literal forward recursion: each forward equation solved for its highest
/// unknown, starting from the boundary values. Unstable for large J.
std::vector<double> forward_recursion(const QueueModel& model, int i, double lambda, int J);

}  // namespace detail

}  // namespace mxq
