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

#include <vector>

#include "mxq/model.hpp"
#include "mxq/stopped.hpp"

namespace mxq {

enum class RecurrenceKind { transient, null_recurrent, positive_recurrent };

std::string_view to_string(RecurrenceKind kind);

struct Classification {
  RecurrenceKind kind = RecurrenceKind::transient;
  double drift = 0.0;
  double mu1 = 0.0;
};

struct EquilibriumReport {
  Classification classification;
  /// pi_0, ..., pi_J.
  std::vector<double> pi;
  double tail_mass = 0.0;
  /// r_1, ..., r_J.
  std::vector<double> r_coeffs;
  double EN = 0.0;
  double ELw = 0.0;
  double mean_busy_period = 0.0;
};

/// Recurrence class of the queue with resurrection. Requires h > 0, beta = 0.
Classification classify(const QueueModel& model);

/// r~_{ij}(lambda) for the queue with resurrection.
double resolvent_tilde(const QueueModel& model, int i, int j, double lambda);

/// r~_{i0..iJ}(lambda).
ResolventRow resolvent_tilde_row(const QueueModel& model, int i, double lambda, int J);

/// r_1, ..., r_J with r_k = sum_i h_i m*_k(i). Requires h > 0.
std::vector<double> r_coefficients(const QueueModel& model, int J);

/// Mean length of a busy period started by a resurrection jump; +infinity
/// unless the drift is negative.
double mean_busy_period(const QueueModel& model);

/// Stationary law. J = 0 grows the truncation until the tail is below
/// eps_tail. Throws GateError unless positive recurrent.
EquilibriumReport equilibrium(const QueueModel& model, int J = 0, double eps_tail = 1e-12);

/// sum_j pi~_j s^j for s in [-1, 1].
double equilibrium_gf(const QueueModel& model, double s);

namespace detail {

/// h - H(u) = sum_i h_i (1 - u^i), without cancellation near u = 1.
double resurrection_gap(const QueueModel& model, double u);

/// lambda phi*_{i0}(lambda), the transform of the absorption time from i
/// (1 for i = 0), with its lambda-derivative.
struct ValueSlope {
  double value = 0.0;
  double slope = 0.0;
};
ValueSlope absorption_weight(const QueueModel& model, int i, double lambda);

/// h - sum_i h_i lambda phi*_{i0}(lambda), with its lambda-derivative. Zero
/// when there is no resurrection.
ValueSlope excess(const QueueModel& model, double lambda);

/// L_j(lambda) = sum_i h_i phi*_{ij}(lambda), j = 0..J, summed source by
/// source.
std::vector<double> source_sum_L(const QueueModel& model, double lambda, int J);

/// r~_{00}(lambda) = 1 / (lambda + excess) with its derivative. No gates.
ValueSlope tilde_r00(const QueueModel& model, double lambda);

/// r~_{i0}(lambda) with its derivative. No gates.
ValueSlope tilde_ri0(const QueueModel& model, int i, double lambda);

/// r~_{i0..iJ}(lambda) without parameter gates.
std::vector<double> tilde_row(const QueueModel& model, int i, double lambda, int J);

}  // namespace detail

}  // namespace mxq
