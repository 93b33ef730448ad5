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

#include <map>
#include <vector>

#include "mxq/model.hpp"

namespace mxq {

struct HittingTime {
  /// Transform at the requested lambda.
  double transform = 0.0;
  double mean = 0.0;
};

struct CatastropheEquilibrium {
  std::vector<double> pi;
  double tail_mass = 0.0;
  /// L_0(beta), ..., L_J(beta).
  std::vector<double> L;
  double EN = 0.0;
  double ELw = 0.0;
};

/// Row of the resolvent of the chain where catastrophes are absorbed in -1.
struct EtaRow {
  double lambda = 0.0;
  int source = 0;
  /// eta_{j,-1}(lambda).
  double absorbed = 0.0;
  /// eta_{j0}, ..., eta_{jJ}.
  std::vector<double> values;
};

enum class DerivativeMethod { analytic, central_difference };

struct CatastropheTimeStats {
  int j = 0;
  double mean = 0.0;
  double variance = 0.0;
  std::map<double, double> delta_at;
};

/// What an asymptote limit refers to.
enum class LimitQuantity {
  /// lim beta E(C_j0)
  beta_times_mean,
  /// lim E(C_j0) - 1/beta
  mean_minus_inverse_beta,
  /// lim E(C_j0)
  mean,
};

struct Asymptote {
  double limit = 0.0;
  LimitQuantity quantity = LimitQuantity::mean;
};

std::string_view to_string(LimitQuantity quantity);

namespace catastrophe {

/// r_{ij}(lambda) for the queue with resurrection and catastrophes.
double resolvent(const QueueModel& model, int i, int j, double lambda);

/// Row r_{i0..iJ}(lambda).
std::vector<double> resolvent_row(const QueueModel& model, int i, double lambda, int J);

/// Time to empty from k when there is no resurrection (h = 0): transform of
/// its distribution function at lambda and its mean.
HittingTime hitting_time_h0(const QueueModel& model, int k, double lambda);

/// L_0(lambda), ..., L_J(lambda) from the weighted boundary system.
std::vector<double> L_coefficients(const QueueModel& model, double lambda, int J);

/// Stationary law. J = 0 grows the truncation until the tail is below
/// eps_tail.
CatastropheEquilibrium equilibrium(const QueueModel& model, int J = 0, double eps_tail = 1e-12);

/// sum_j pi_j s^j for s in [-1, 1].
double equilibrium_gf(const QueueModel& model, double s);

EtaRow eta_resolvent(const QueueModel& model, int j, double lambda, int J);

/// Laplace-Stieltjes transform of the first effective catastrophe time from j.
double catastrophe_time_transform(const QueueModel& model, int j, double lambda);

CatastropheTimeStats catastrophe_time_moments(const QueueModel& model, int j,
                                              DerivativeMethod method = DerivativeMethod::analytic,
                                              const std::vector<double>& delta_points = {});

/// Limit of the mean first catastrophe time as beta -> 0. The model's own
/// beta is ignored.
Asymptote small_beta_asymptote(const QueueModel& model, int j);

/// Limit as beta -> infinity.
Asymptote large_beta_asymptote(const QueueModel& model, int j);

namespace detail {

/// h - sum_i h_i lambda phi*_{i0}(lambda) from the L system.
double excess_from_L(const QueueModel& model, double lambda);

}  // namespace detail

}  // namespace catastrophe

}  // namespace mxq
