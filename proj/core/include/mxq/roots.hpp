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

#include "mxq/model.hpp"

namespace mxq {

/// A zero of B_c(s) or of U_lambda(s) = B_c(s) - lambda s on [0, 1].
struct RootResult {
  double value = 0.0;
  /// |B_c(u)| or |U_lambda(u(lambda))| at the returned value.
  double residual = 0.0;
  Regime regime = Regime::subcritical;
};

/// 1e-12 * max(c b_0, |b_1|).
double root_tolerance(const QueueModel& model);

/// Smallest zero u of B_c on [0, 1]. Exactly 1 unless the model is
/// supercritical.
RootResult root_u(const QueueModel& model);

/// The unique zero u(lambda) of U_lambda in (0, 1). Requires lambda >= 1e-12.
RootResult root_u_lambda(const QueueModel& model, double lambda);

/// u'(lambda) = u(lambda) / (B_c'(u(lambda)) - lambda).
double root_u_lambda_derivative(const QueueModel& model, double lambda);

}  // namespace mxq
