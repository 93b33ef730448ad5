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

#include "mxq/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mxq/error.hpp"
#include "mxq/numeric.hpp"

namespace mxq {

namespace {

constexpr double kMinLambda = 1e-12;
constexpr int kMaxIterations = 200;
constexpr double kBracketWidth = 1e-3;

// Zero of a convex polynomial that is positive at lo and non-positive at hi.
// Bisection narrows the bracket, then Newton runs from the left end, where
// convexity makes every iterate stay left of the root.
double convex_zero(const std::vector<double>& p, double lo, double hi, double tol) {
  int iterations = 0;
  while (hi - lo > kBracketWidth && iterations < kMaxIterations) {
    const double mid = 0.5 * (lo + hi);
    if (numeric::horner(p, mid) > 0.0)
      lo = mid;
    else
      hi = mid;
    ++iterations;
  }
  double x = lo;
  for (; iterations < kMaxIterations; ++iterations) {
    const auto v = numeric::horner_with_derivatives(p, x);
    if (v.value <= 0.0) break;
    if (!(v.d1 < 0.0)) throw NumericalError("root search lost its bracket");
    const double step = v.value / v.d1;
    const double next = std::min(x - step, hi);
    if (next <= x) break;
    x = next;
    if (std::abs(v.value) <= tol && std::abs(step) <= 4 * std::numeric_limits<double>::epsilon() * x)
      break;
  }
  return x;
}

}  // namespace

double root_tolerance(const QueueModel& model) {
  return 1e-12 * std::max(model.servers() * model.service_rate(), std::abs(model.b1()));
}

RootResult root_u(const QueueModel& model) {
  if (model.regime() != Regime::supercritical) return {1.0, 0.0, model.regime()};

  const std::vector<double> bc = B_coefficients(model, model.servers());
  std::vector<double> dbc(bc.size() - 1);
  for (std::size_t k = 1; k < bc.size(); ++k) dbc[k - 1] = static_cast<double>(k) * bc[k];

  // B_c' is increasing with B_c'(0) < 0 < B_c'(1); its zero is the minimiser.
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (numeric::horner(dbc, mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double u = convex_zero(bc, 0.0, hi, root_tolerance(model));
  return {u, std::abs(numeric::horner(bc, u)), model.regime()};
}

RootResult root_u_lambda(const QueueModel& model, double lambda) {
  if (!(lambda >= kMinLambda) || !std::isfinite(lambda)) {
    std::ostringstream msg;
    msg << "lambda must be finite and >= " << kMinLambda << " (got " << lambda << ")";
    throw GateError(msg.str());
  }
  std::vector<double> p = B_coefficients(model, model.servers());
  p[1] -= lambda;
  const double u = convex_zero(p, 0.0, 1.0, root_tolerance(model));
  return {u, std::abs(numeric::horner(p, u)), model.regime()};
}

double root_u_lambda_derivative(const QueueModel& model, double lambda) {
  const double u = root_u_lambda(model, lambda).value;
  const double denom = eval_B(model, model.servers(), u).first_derivative - lambda;
  if (std::abs(denom) < 1e-12) throw NumericalError("derivative singular near criticality");
  return u / denom;
}

}  // namespace mxq
