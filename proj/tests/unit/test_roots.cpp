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

#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "mxq/error.hpp"
#include "mxq/roots.hpp"

using namespace mxq;

namespace {

double U(const QueueModel& m, double lambda, double s) { return eval_B(m, m.servers(), s).value - lambda * s; }

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(lo * std::pow(hi / lo, k / double(n - 1)));
  return out;
}

std::vector<QueueModel> suite() {
  return {testing::model_A(), testing::model_B(), testing::model_C(), testing::supercritical_c2(),
          testing::make_model(1, {{0, 2.0}, {2, 2.0}})};
}

}  // namespace

TEST_CASE("root_u examples") {
  CHECK(root_u(testing::model_A()).value == 1.0);
  CHECK(root_u(testing::model_C()).value == 1.0);
  const RootResult b = root_u(testing::model_B());
  CHECK(b.value == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(b.regime == Regime::supercritical);
  CHECK(root_u(testing::make_model(1, {{0, 2.0}, {2, 2.0}})).value == 1.0);
}

TEST_CASE("root_u_lambda examples") {
  const double expect = 2.0 - std::sqrt(2.0);
  CHECK(root_u_lambda(testing::model_C(), 1.0).value == doctest::Approx(expect).epsilon(1e-14));
  CHECK(root_u_lambda(testing::model_A(), 1.0).value == doctest::Approx(expect).epsilon(1e-14));
  const double big = 1e8;
  CHECK(big * root_u_lambda(testing::model_A(), big).value == doctest::Approx(2.0).epsilon(1e-3));
  CHECK_THROWS_AS(root_u_lambda(testing::model_A(), 0.0), GateError);
  CHECK_THROWS_AS(root_u_lambda(testing::model_A(), 1e-13), GateError);
  CHECK_THROWS_AS(root_u_lambda(testing::model_A(), -1.0), GateError);
}

TEST_CASE("residuals stay under the scaled tolerance on a 40-point grid") {
  for (const QueueModel& m : suite()) {
    const double tol = root_tolerance(m);
    CHECK(tol == doctest::Approx(1e-12 * std::max(m.servers() * m.service_rate(), std::abs(m.b1()))));
    for (double lambda : log_grid(1e-6, 1e8, 40)) {
      const RootResult r = root_u_lambda(m, lambda);
      CHECK(r.value > 0.0);
      CHECK(r.value < 1.0);
      CHECK(std::abs(U(m, lambda, r.value)) <= tol);
      CHECK(r.residual <= tol);
    }
    CHECK(std::abs(eval_B(m, m.servers(), root_u(m).value).value) <= tol);
  }
}

TEST_CASE("u(lambda) decreases and has the stated limits") {
  for (const QueueModel& m : suite()) {
    double prev = 2.0;
    for (double lambda : log_grid(1e-6, 1e8, 40)) {
      const double u = root_u_lambda(m, lambda).value;
      CHECK(u < prev);
      prev = u;
    }
    CHECK(root_u_lambda(m, 1e10).value < 1e-9);
    CHECK(1e8 * root_u_lambda(m, 1e8).value ==
          doctest::Approx(m.servers() * m.service_rate()).epsilon(1e-3));
    if (m.regime() != Regime::critical)
      CHECK(std::abs(root_u_lambda(m, 1e-10).value - root_u(m).value) <= 1e-4);
  }
}

TEST_CASE("(1 - u^k)/lambda tends to k/(-drift) in the subcritical regime") {
  for (const QueueModel& m : {testing::model_A(), testing::model_C()}) {
    const double lambda = 1e-8;
    const double u = root_u_lambda(m, lambda).value;
    for (int k : {1, 2, 5}) {
      const double ratio = -std::expm1(k * std::log(u)) / lambda;
      CHECK(ratio == doctest::Approx(k / -m.drift()).epsilon(1e-3));
    }
  }
}

TEST_CASE("u'(lambda)") {
  const QueueModel a = testing::model_A();
  const double u = 2.0 - std::sqrt(2.0);
  CHECK(root_u_lambda_derivative(a, 1.0) == doctest::Approx(u / (2.0 * u - 4.0)).epsilon(1e-12));
  CHECK(root_u_lambda_derivative(a, 1.0) == doctest::Approx(-0.20711).epsilon(1e-4));

  const double big = 1e8;
  CHECK(root_u_lambda_derivative(a, big) / (-2.0 / (big * big)) == doctest::Approx(1.0).epsilon(1e-3));

  const QueueModel b = testing::model_B();
  const double lambda = 1e-6;
  const double delta = 1e-9;
  const double fd =
      (root_u_lambda(b, lambda + delta).value - root_u_lambda(b, lambda - delta).value) / (2.0 * delta);
  CHECK(root_u_lambda_derivative(b, lambda) == doctest::Approx(fd).epsilon(1e-4));

  for (const QueueModel& m : suite())
    for (double l : log_grid(1e-4, 1e4, 9)) CHECK(root_u_lambda_derivative(m, l) < 0.0);
}
