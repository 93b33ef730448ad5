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

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "mxq/catastrophe.hpp"
#include "mxq/error.hpp"
#include "mxq/inversion.hpp"
#include "mxq/resurrect.hpp"
#include "mxq/simulator.hpp"
#include "mxq/stopped.hpp"

using namespace mxq;

namespace {

SimConfig config(ProcessVariant v, int x0, std::uint64_t reps, std::uint64_t seed = 42) {
  SimConfig cfg;
  cfg.variant = v;
  cfg.x0 = x0;
  cfg.replications = reps;
  cfg.seed = seed;
  return cfg;
}

Statistic stat(StatKind kind, double t = 0.0, int target = 0) {
  Statistic s;
  s.kind = kind;
  s.t = t;
  s.target_state = target;
  return s;
}

bool within(const SimEstimate& e, double analytic, double z) { return std::abs(e.point - analytic) <= z * e.std_error; }

}  // namespace

TEST_CASE("step distributions") {
  const StepDistribution c3 = step_distribution(testing::model_C(), ProcessVariant::resurrect, 3);
  CHECK(c3.total_rate == 3.0);
  REQUIRE(c3.targets.size() == 2);
  for (const Transition& t : c3.targets) {
    if (t.target == 2) CHECK(t.probability == doctest::Approx(2.0 / 3.0));
    if (t.target == 4) CHECK(t.probability == doctest::Approx(1.0 / 3.0));
  }

  const StepDistribution d1 = step_distribution(testing::model_D(), ProcessVariant::catastrophe, 1);
  CHECK(d1.total_rate == 4.0);
  double service = 0.0;
  double arrival = 0.0;
  double catastrophe = 0.0;
  for (const Transition& t : d1.targets) {
    if (t.channel == Channel::service) service += t.probability;
    if (t.channel == Channel::arrival) arrival += t.probability;
    if (t.channel == Channel::catastrophe) catastrophe += t.probability;
    CHECK(t.target == (t.channel == Channel::arrival ? 2 : 0));
  }
  CHECK(service == 0.5);
  CHECK(arrival == 0.25);
  CHECK(catastrophe == 0.25);

  CHECK(step_distribution(testing::model_A(), ProcessVariant::stopped, 0).total_rate == 0.0);
  const StepDistribution m1 = step_distribution(testing::model_D(), ProcessVariant::absorbed_M, 1);
  CHECK(std::any_of(m1.targets.begin(), m1.targets.end(), [](const Transition& t) { return t.target == -1; }));
  CHECK(step_distribution(testing::model_D(), ProcessVariant::absorbed_M, -1).total_rate == 0.0);
  CHECK_THROWS_AS(step_distribution(testing::model_D(), ProcessVariant::catastrophe, -1), GateError);

  // Catastrophes only leave busy states.
  for (ProcessVariant v : {ProcessVariant::catastrophe, ProcessVariant::absorbed_M}) {
    const StepDistribution zero = step_distribution(testing::model_D(), v, 0);
    for (const Transition& t : zero.targets) CHECK(t.channel == Channel::resurrection);
  }
}

TEST_CASE("estimates are bit-reproducible and independent of the thread count") {
  const QueueModel d = testing::model_D();
  SimConfig a = config(ProcessVariant::catastrophe, 0, 20000, 9);
  a.threads = 1;
  SimConfig b = a;
  b.threads = 3;
  const SimEstimate ea = estimate(d, a, stat(StatKind::mean_catastrophe_time));
  const SimEstimate eb = estimate(d, b, stat(StatKind::mean_catastrophe_time));
  CHECK(ea.point == eb.point);
  CHECK(ea.std_error == eb.std_error);
  CHECK(ea.seed == 9);
  CHECK(ea.n == 20000);
  const SimEstimate other = estimate(d, config(ProcessVariant::catastrophe, 0, 20000, 10), stat(StatKind::mean_catastrophe_time));
  CHECK(other.point != ea.point);
}

TEST_CASE("holding times are exponential with the total rate") {
  for (int state : {1, 2, 5}) {
    const HoldingCheck h = holding_time_check(testing::model_D(), ProcessVariant::catastrophe, state, 100000, 5);
    CHECK(h.pass);
    CHECK(h.expected == doctest::Approx(1.0 / step_distribution(testing::model_D(), ProcessVariant::catastrophe, state).total_rate));
  }
  CHECK(holding_time_check(testing::model_C(), ProcessVariant::resurrect, 0, 100000, 6).pass);
  CHECK_THROWS_AS(holding_time_check(testing::model_A(), ProcessVariant::stopped, 0, 10, 1), GateError);
}

TEST_CASE("Monte Carlo against analytic values") {
  const QueueModel a = testing::model_A();
  CHECK(within(estimate(a, config(ProcessVariant::resurrect, 0, 200000), stat(StatKind::mean_busy_period)), 1.0, 4.0));
  for (int k : {1, 3}) {
    const SimEstimate e = estimate(a, config(ProcessVariant::stopped, k, 200000), stat(StatKind::mean_extinction_time));
    CHECK(within(e, k, 4.0));
  }
  const QueueModel c = testing::model_C();
  CHECK(within(estimate(c, config(ProcessVariant::stopped, 1, 200000), stat(StatKind::mean_extinction_time)),
               mean_extinction_time(c, 1), 4.0));

  const QueueModel b = testing::model_B();
  CHECK(within(estimate(b, config(ProcessVariant::stopped, 1, 100000), stat(StatKind::extinction_prob, 100.0)), 0.5, 4.0));
  const QueueModel sc = testing::supercritical_c2();
  CHECK(within(estimate(sc, config(ProcessVariant::stopped, 1, 100000), stat(StatKind::extinction_prob, 100.0)),
               extinction_probability(sc, 1).e_star, 4.0));

  const QueueModel d = testing::model_D();
  const auto moments = catastrophe::catastrophe_time_moments(d, 0);
  CHECK(within(estimate(d, config(ProcessVariant::catastrophe, 0, 200000), stat(StatKind::mean_catastrophe_time)),
               moments.mean, 4.0));
  CHECK(within(estimate(d, config(ProcessVariant::catastrophe, 0, 200000), stat(StatKind::var_catastrophe_time)),
               moments.variance, 4.0));
  const auto m3 = catastrophe::catastrophe_time_moments(d, 3);
  CHECK(within(estimate(d, config(ProcessVariant::absorbed_M, 3, 200000), stat(StatKind::mean_catastrophe_time)),
               m3.mean, 4.0));

  const QueueModel h0 = a.with_resurrection({}).with_beta(1.0);
  for (int k : {1, 2}) {
    const SimEstimate e = estimate(h0, config(ProcessVariant::catastrophe, k, 200000), stat(StatKind::mean_extinction_time));
    CHECK(within(e, catastrophe::hitting_time_h0(h0, k, 1.0).mean, 4.0));
  }

  const double p50 = transition_probability(d, ProcessVariant::catastrophe, 5, 0, 0.5).value;
  CHECK(within(estimate(d, config(ProcessVariant::catastrophe, 5, 200000), stat(StatKind::p_ij, 0.5, 0)), p50, 4.0));
}

TEST_CASE("catastrophe ordering in the starting state") {
  const QueueModel d = testing::model_D();
  const SimEstimate one = estimate(d, config(ProcessVariant::catastrophe, 1, 200000, 1), stat(StatKind::mean_catastrophe_time));
  const SimEstimate thirty = estimate(d, config(ProcessVariant::catastrophe, 30, 200000, 2), stat(StatKind::mean_catastrophe_time));
  CHECK(thirty.point <= one.point + 3.0 * std::hypot(one.std_error, thirty.std_error));
}

TEST_CASE("absorption times of M follow the inverted transform") {
  const QueueModel d = testing::model_D();
  for (int j : {0, 2}) {
    std::vector<double> samples = catastrophe_time_samples(d, config(ProcessVariant::absorbed_M, j, 100000, 17));
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double ks = 0.0;
    for (double q : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      const double t = samples[static_cast<std::size_t>(q * n)];
      const double cdf = transition_probability(d, ProcessVariant::absorbed_M, j, -1, t).value;
      const double emp = static_cast<double>(std::upper_bound(samples.begin(), samples.end(), t) - samples.begin()) / n;
      ks = std::max(ks, std::abs(emp - cdf));
    }
    CHECK(ks <= 1.63 / std::sqrt(n));
  }
}

TEST_CASE("time-average occupancy converges to the equilibrium") {
  const QueueModel c = testing::model_C();
  SimConfig cfg = config(ProcessVariant::resurrect, 0, 1, 3);
  cfg.horizon = 1e6;
  Statistic s = stat(StatKind::stationary_tv);
  s.target = equilibrium(c).pi;
  CHECK(estimate(c, cfg, s).point <= 0.01);

  const QueueModel d = testing::model_D();
  cfg.variant = ProcessVariant::catastrophe;
  s.target = catastrophe::equilibrium(d).pi;
  CHECK(estimate(d, cfg, s).point <= 0.01);
}

TEST_CASE("gates and censoring") {
  const QueueModel a = testing::model_A();
  CHECK_THROWS_AS(estimate(a, config(ProcessVariant::stopped, 1, 10), stat(StatKind::mean_busy_period)), GateError);
  CHECK_THROWS_AS(estimate(a, config(ProcessVariant::resurrect, 1, 10), stat(StatKind::mean_catastrophe_time)), GateError);
  CHECK_THROWS_AS(estimate(a, config(ProcessVariant::resurrect, 1, 10), stat(StatKind::mean_extinction_time)), GateError);
  CHECK_THROWS_AS(estimate(a, config(ProcessVariant::resurrect, 1, 0), stat(StatKind::mean_busy_period)), GateError);
  SimConfig cfg = config(ProcessVariant::stopped, 1, 1000);
  cfg.horizon = 5.0;
  CHECK_THROWS_WITH(estimate(testing::model_B(), cfg, stat(StatKind::mean_extinction_time)),
                    doctest::Contains("horizon exhausted"));
  CHECK(parse_stat("p_ij") == StatKind::p_ij);
  CHECK(to_string(StatKind::mean_busy_period) == "mean_busy_period");
  CHECK_THROWS_AS(parse_stat("median"), GateError);
}
