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

#include <cstdint>
#include <vector>

#include "mxq/model.hpp"

namespace mxq {

/// Which rate produced a jump. Service into 0 and catastrophe into 0 land in
/// the same state but are different events.
enum class Channel { service, arrival, catastrophe, resurrection };

std::string_view to_string(Channel channel);

struct Transition {
  int target = 0;
  double probability = 0.0;
  Channel channel = Channel::service;
};

struct StepDistribution {
  double total_rate = 0.0;
  std::vector<Transition> targets;
};

/// Jump law out of `state`. State -1 exists only for absorbed_M.
StepDistribution step_distribution(const QueueModel& model, ProcessVariant variant, int state);

struct SimConfig {
  ProcessVariant variant = ProcessVariant::resurrect;
  int x0 = 0;
  /// Time horizon per replication (time-average statistics run exactly this
  /// long; path statistics are censored here).
  double horizon = 1e3;
  /// Event cap per replication.
  std::uint64_t max_events = 100'000'000;
  std::uint64_t replications = 1;
  std::uint64_t seed = 0;
  /// Worker threads; 0 uses the hardware concurrency. Results do not depend
  /// on this value.
  unsigned threads = 0;
};

struct SimEstimate {
  double point = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

enum class StatKind {
  /// Total variation distance between time-average occupancy and `target`.
  stationary_tv,
  /// Busy period started by a resurrection jump (x0 ignored).
  mean_busy_period,
  /// P(absorbed in 0 by time t) for the stopped chain from x0.
  extinction_prob,
  mean_extinction_time,
  /// First catastrophe-channel epoch from x0.
  mean_catastrophe_time,
  var_catastrophe_time,
  /// P(X_t = target_state | X_0 = x0).
  p_ij,
};

StatKind parse_stat(std::string_view name);
std::string_view to_string(StatKind kind);

struct Statistic {
  StatKind kind = StatKind::p_ij;
  int target_state = 0;
  double t = 0.0;
  std::vector<double> target;
};

SimEstimate estimate(const QueueModel& model, const SimConfig& config, const Statistic& statistic);

/// Time-average occupancy with 1% burn-in and batch-means standard errors.
struct Occupancy {
  std::vector<double> probability;
  std::vector<double> std_error;
  double time = 0.0;
};
Occupancy occupancy(const QueueModel& model, const SimConfig& config);

/// First catastrophe epochs from x0, one per replication, in replication
/// order.
std::vector<double> catastrophe_time_samples(const QueueModel& model, const SimConfig& config);

/// Holding times in `state` against 1/total_rate.
struct HoldingCheck {
  double sample_mean = 0.0;
  double std_error = 0.0;
  double expected = 0.0;
  bool pass = false;
};
HoldingCheck holding_time_check(const QueueModel& model, ProcessVariant variant, int state,
                                std::uint64_t samples, std::uint64_t seed);

}  // namespace mxq
