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
#include "mxq/resurrect.hpp"
#include "mxq/roots.hpp"
#include "mxq/stopped.hpp"
#include "oracle.hpp"

using namespace mxq;

TEST_CASE("classification") {
  CHECK(classify(testing::model_A()).kind == RecurrenceKind::positive_recurrent);
  CHECK(classify(testing::model_B_h()).kind == RecurrenceKind::transient);
  const QueueModel critical = testing::make_model(1, {{0, 2.0}, {2, 2.0}}, {{1, 1.0}});
  const Classification k = classify(critical);
  CHECK(k.kind == RecurrenceKind::null_recurrent);
  CHECK(k.mu1 == 1.0);
  CHECK_THROWS_WITH_AS(classify(testing::model_B()), doctest::Contains("resurrection required"), GateError);
  CHECK_THROWS_WITH_AS(classify(testing::model_D()), doctest::Contains("catastrophe module"), GateError);
  CHECK_THROWS_WITH_AS(equilibrium(critical), doctest::Contains("no equilibrium"), GateError);
  CHECK_THROWS_WITH_AS(equilibrium(testing::model_B_h()), doctest::Contains("no equilibrium"), GateError);
}

TEST_CASE("resolvent examples") {
  const QueueModel a = testing::model_A();
  CHECK(resolvent_tilde(a, 0, 0, 1.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  const auto dense = testing::dense_resolvent_row(a, ProcessVariant::resurrect, 1, 1.0, 300);
  CHECK(std::abs(resolvent_tilde(a, 1, 0, 1.0) - dense[0]) <= 1e-8);
  CHECK_THROWS_AS(resolvent_tilde(testing::model_D(), 0, 0, 1.0), GateError);
}

TEST_CASE("resolvent rows match a dense solve and are honest") {
  auto models = testing::random_small_models(4, 33);
  models.push_back(testing::model_C());
  models.push_back(testing::model_B_h());
  for (const QueueModel& m : models) {
    for (int i : {0, 1, 3}) {
      for (double lambda : {0.3, 2.0}) {
        const auto dense = testing::dense_resolvent_row(m, ProcessVariant::resurrect, i, lambda, 300);
        const ResolventRow row = resolvent_tilde_row(m, i, lambda, 40);
        for (int j = 0; j <= 40; ++j) CHECK(std::abs(row.values[j] - dense[j]) <= 1e-6);
        const ResolventRow full = resolvent_tilde_row(m, i, lambda, 400);
        double sum = 0.0;
        for (double v : full.values) sum += v;
        CHECK(lambda * sum == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("r coefficients") {
  const auto a = r_coefficients(testing::model_A(), 8);
  for (int k = 1; k <= 8; ++k) CHECK(a[k - 1] == doctest::Approx(std::pow(0.5, k)).epsilon(1e-12));
  const auto c = r_coefficients(testing::model_C(), 2);
  CHECK(c[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("r_k agrees with the occupation-time sum over the resurrection support") {
  auto models = testing::random_small_models(4, 44);
  models.push_back(testing::model_C());
  for (const QueueModel& m : models) {
    const auto r = r_coefficients(m, 10);
    std::vector<double> direct(10, 0.0);
    for (int i = 1; i <= m.max_resurrection_index(); ++i) {
      if (m.h(i) == 0.0) continue;
      const auto occ = occupation_times(m, i, 10);
      for (int k = 0; k < 10; ++k) direct[k] += m.h(i) * occ[k];
    }
    for (int k = 0; k < 10; ++k) CHECK(std::abs(r[k] - direct[k]) <= 1e-8);
  }
}

TEST_CASE("equilibrium of the M/M/1 and M/M/2 reductions") {
  const EquilibriumReport a = equilibrium(testing::model_A());
  for (int k = 0; k < 20; ++k) CHECK(a.pi[k] == doctest::Approx(0.5 * std::pow(0.5, k)).epsilon(1e-10));
  CHECK(a.EN == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.ELw == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(a.mean_busy_period == doctest::Approx(1.0).epsilon(1e-12));

  const EquilibriumReport c = equilibrium(testing::model_C());
  CHECK(c.pi[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(c.pi[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  for (int k = 2; k < 20; ++k) CHECK(c.pi[k] == doctest::Approx(std::pow(2.0, 1 - k) / 3.0).epsilon(1e-10));
  CHECK(c.EN == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(c.ELw == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(mean_busy_period(testing::model_C()) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("equilibrium invariants on random models") {
  auto models = testing::random_small_models(5, 55);
  models.push_back(testing::model_C());
  for (const QueueModel& m : models) {
    const EquilibriumReport eq = equilibrium(m);
    double total = eq.tail_mass;
    double en = 0.0;
    double busy = 0.0;
    for (std::size_t j = 0; j < eq.pi.size(); ++j) {
      CHECK(eq.pi[j] >= 0.0);
      total += eq.pi[j];
      en += j * eq.pi[j];
      busy += std::min<double>(j, m.servers()) * eq.pi[j];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(eq.EN >= eq.ELw);
    CHECK(eq.ELw >= 0.0);
    CHECK(std::abs(eq.EN - en) <= 1e-8);
    CHECK(std::abs(eq.ELw - (eq.EN - busy)) <= 1e-8);

    // pi Q over the window away from the truncation edge.
    const auto q = testing::generator(m, ProcessVariant::resurrect, static_cast<int>(eq.pi.size()));
    for (int n = 0; n + m.max_batch_index() < static_cast<int>(eq.pi.size()) - 1; ++n) {
      double acc = 0.0;
      for (std::size_t j = 0; j < eq.pi.size(); ++j) acc += eq.pi[j] * q(static_cast<Eigen::Index>(j), n);
      CHECK(std::abs(acc) <= 1e-8);
    }

    const auto dense = testing::dense_stationary(m, ProcessVariant::resurrect, 400);
    for (std::size_t j = 0; j < 30 && j < eq.pi.size(); ++j) CHECK(std::abs(eq.pi[j] - dense[j]) <= 1e-6);

    const double lambda = 1e-7;
    const ResolventRow r0 = resolvent_tilde_row(m, 0, lambda, 10);
    for (int j = 0; j <= 10; ++j) CHECK(std::abs(lambda * r0.values[j] - eq.pi[j]) <= 1e-3);
  }
}

TEST_CASE("equilibrium generating function") {
  CHECK(equilibrium_gf(testing::model_A(), 0.0) == doctest::Approx(0.5).epsilon(1e-14));
  const EquilibriumReport c = equilibrium(testing::model_C());
  double series = 0.0;
  for (int j = 0; j <= 60; ++j) series += c.pi[j] * std::pow(0.5, j);
  CHECK(std::abs(equilibrium_gf(testing::model_C(), 0.5) - series) <= 1e-10);
  for (const QueueModel& m : testing::random_small_models(3, 66)) {
    CHECK(equilibrium_gf(m, 1.0 - 1e-6) == doctest::Approx(1.0).epsilon(1e-4));
    const EquilibriumReport eq = equilibrium(m);
    double s = 0.0;
    for (std::size_t j = 0; j < eq.pi.size(); ++j) s += eq.pi[j] * std::pow(0.7, j);
    CHECK(std::abs(equilibrium_gf(m, 0.7) - s) <= 1e-9);
  }
}
