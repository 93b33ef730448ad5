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

#include <functional>
#include <optional>

#include "mxq/model.hpp"

namespace mxq {

enum class InversionKind { function, density, distribution };

enum class InversionMethod {
  /// Gaver functionals accelerated by Wynn's rho algorithm.
  gaver_wynn_rho,
  /// Classical Gaver-Stehfest weights.
  stehfest,
};

struct InversionRequest {
  /// Laplace transform of the target, evaluated at real lambda > 0.
  std::function<double(double)> transform;
  double t = 1.0;
  /// Number of transform evaluations: one of 8, 10, 12, 14, 16.
  int order = 12;
  InversionKind kind = InversionKind::function;
  /// Clip the result to [0, 1] (ignored for densities).
  bool probability = false;
  InversionMethod method = InversionMethod::gaver_wynn_rho;
};

struct InversionResult {
  double value = 0.0;
  /// |order-12 result - order-14 result|.
  double error_estimate = 0.0;
};

InversionResult invert(const InversionRequest& request);

struct TransitionProbability {
  double value = 0.0;
  double error_estimate = 0.0;
  /// Catastrophe variant only: |p_ij(t) - right-hand side of the
  /// time-domain decomposition through the resurrect-only chain|.
  std::optional<double> pakes_gap;
};

/// p_ij(t) of the chosen chain, by inversion of its resolvent. For
/// absorbed_M, j = -1 is the catastrophe-absorbed state.
TransitionProbability transition_probability(const QueueModel& model, ProcessVariant variant,
                                             int i, int j, double t, int order = 12);

}  // namespace mxq
