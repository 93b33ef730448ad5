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

#include "mxq/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "mxq/error.hpp"
#include "mxq/rng.hpp"

namespace mxq {

std::string_view to_string(Channel channel) {
  switch (channel) {
    case Channel::service: return "service";
    case Channel::arrival: return "arrival";
    case Channel::catastrophe: return "catastrophe";
    case Channel::resurrection: return "resurrection";
  }
  return "unknown";
}

StatKind parse_stat(std::string_view name) {
  if (name == "stationary_tv") return StatKind::stationary_tv;
  if (name == "mean_busy_period") return StatKind::mean_busy_period;
  if (name == "extinction_prob") return StatKind::extinction_prob;
  if (name == "mean_extinction_time") return StatKind::mean_extinction_time;
  if (name == "mean_catastrophe_time") return StatKind::mean_catastrophe_time;
  if (name == "var_catastrophe_time") return StatKind::var_catastrophe_time;
  if (name == "p_ij") return StatKind::p_ij;
  throw GateError("unknown statistic '" + std::string(name) + "'");
}

std::string_view to_string(StatKind kind) {
  switch (kind) {
    case StatKind::stationary_tv: return "stationary_tv";
    case StatKind::mean_busy_period: return "mean_busy_period";
    case StatKind::extinction_prob: return "extinction_prob";
    case StatKind::mean_extinction_time: return "mean_extinction_time";
    case StatKind::mean_catastrophe_time: return "mean_catastrophe_time";
    case StatKind::var_catastrophe_time: return "var_catastrophe_time";
    case StatKind::p_ij: return "p_ij";
  }
  return "unknown";
}

namespace {

bool has_resurrection(ProcessVariant v) { return v != ProcessVariant::stopped; }
bool has_catastrophe(ProcessVariant v) {
  return v == ProcessVariant::catastrophe || v == ProcessVariant::absorbed_M;
}

struct Step {
  int next = 0;
  Channel channel = Channel::service;
  double dt = 0.0;
};

// Rate tables of one chain, laid out for sampling.
class Engine {
 public:
  Engine(const QueueModel& model, ProcessVariant variant)
      : variant_(variant), c_(model.servers()), b0_(model.service_rate()), arrivals_(model.arrival_rate()),
        beta_(has_catastrophe(variant) ? model.beta() : 0.0),
        h_(has_resurrection(variant) ? model.total_resurrection() : 0.0) {
    double acc = 0.0;
    for (int k = 2; k <= model.max_batch_index(); ++k) {
      if (model.b(k) == 0.0) continue;
      acc += model.b(k);
      batch_.push_back({k - 1, acc});
    }
    acc = 0.0;
    for (int j = 1; j <= model.max_resurrection_index(); ++j) {
      if (model.h(j) == 0.0) continue;
      acc += model.h(j);
      jump_.push_back({j, acc});
    }
  }

  double total_rate(int state) const {
    if (state < 0) return 0.0;
    if (state == 0) return h_;
    return std::min(state, c_) * b0_ + arrivals_ + beta_;
  }

  // False when the state is absorbing.
  bool step(int state, Stream& rng, Step& out) const {
    const double total = total_rate(state);
    if (total <= 0.0) return false;
    out.dt = rng.exponential(total);
    double x = rng.uniform() * total;
    if (state == 0) {
      out.channel = Channel::resurrection;
      out.next = pick(jump_, x);
      return true;
    }
    const double service = std::min(state, c_) * b0_;
    if (x < service) {
      out.channel = Channel::service;
      out.next = state - 1;
      return true;
    }
    x -= service;
    if (x < arrivals_ || beta_ == 0.0) {
      out.channel = Channel::arrival;
      out.next = state + pick(batch_, x);
      return true;
    }
    out.channel = Channel::catastrophe;
    out.next = variant_ == ProcessVariant::absorbed_M ? -1 : 0;
    return true;
  }

  double resurrection_total() const { return h_; }
  // Start of a busy period.
  int draw_resurrection(Stream& rng) const { return pick(jump_, rng.uniform() * h_); }

 private:
  struct Cum {
    int value;
    double cum;
  };

  static int pick(const std::vector<Cum>& table, double x) {
    for (const Cum& e : table)
      if (x < e.cum) return e.value;
    return table.back().value;
  }

  ProcessVariant variant_;
  int c_;
  double b0_;
  double arrivals_;
  double beta_;
  double h_;
  std::vector<Cum> batch_;
  std::vector<Cum> jump_;
};

constexpr double kCensored = std::numeric_limits<double>::quiet_NaN();

// values[r] = f(r) for every replication; chunks are claimed dynamically but
// each value depends only on r.
template <class F>
std::vector<double> replicate(std::uint64_t n, unsigned threads, F&& f) {
  std::vector<double> values(n);
  unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  constexpr std::uint64_t kChunk = 4096;
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::uint64_t begin = next.fetch_add(kChunk);
      if (begin >= n) return;
      const std::uint64_t end = std::min(n, begin + kChunk);
      for (std::uint64_t r = begin; r < end; ++r) values[r] = f(r);
    }
  };
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, (n + kChunk - 1) / kChunk));
  if (workers <= 1) {
    work();
    return values;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return values;
}

void check_censoring(const std::vector<double>& values) {
  const auto censored = static_cast<std::uint64_t>(std::count_if(values.begin(), values.end(), [](double v) { return std::isnan(v); }));
  if (censored > 0) {
    std::ostringstream msg;
    msg << "horizon exhausted before the event of interest in " << censored << " of " << values.size()
        << " replications";
    throw Error(msg.str());
  }
}

SimEstimate mean_estimate(const std::vector<double>& values, std::uint64_t seed) {
  double mean = 0.0;
  double m2 = 0.0;
  std::uint64_t n = 0;
  for (double v : values) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  const double var = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(n)), n, seed};
}

SimEstimate variance_estimate(const std::vector<double>& values, std::uint64_t seed) {
  const SimEstimate m = mean_estimate(values, seed);
  const auto n = static_cast<double>(values.size());
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : values) {
    const double d = v - m.point;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double var = m2 / (n - 1);
  m4 /= n;
  const double pop = m2 / n;
  return {var, std::sqrt(std::max(0.0, m4 - pop * pop) / n), values.size(), seed};
}

void require(bool ok, std::string_view what) {
  if (!ok) throw GateError("incompatible statistic/variant: " + std::string(what));
}

// Runs until `stop` returns true after a jump; returns the epoch, or NaN if
// the horizon or event cap is reached first.
template <class Stop>
double first_epoch(const Engine& engine, const SimConfig& cfg, int start, Stream& rng, Stop&& stop) {
  int state = start;
  double time = 0.0;
  Step s;
  for (std::uint64_t e = 0; e < cfg.max_events; ++e) {
    if (!engine.step(state, rng, s)) return kCensored;
    time += s.dt;
    if (time > cfg.horizon) return kCensored;
    state = s.next;
    if (stop(s)) return time;
  }
  return kCensored;
}

int state_at(const Engine& engine, const SimConfig& cfg, int start, double t, Stream& rng) {
  int state = start;
  double time = 0.0;
  Step s;
  for (std::uint64_t e = 0; e < cfg.max_events; ++e) {
    if (!engine.step(state, rng, s)) return state;
    time += s.dt;
    if (time > t) return state;
    state = s.next;
  }
  throw Error("event cap reached before the requested time");
}

}  // namespace

StepDistribution step_distribution(const QueueModel& model, ProcessVariant variant, int state) {
  if (state < -1 || (state == -1 && variant != ProcessVariant::absorbed_M))
    throw GateError("invalid state for this variant");
  StepDistribution out;
  const Engine engine(model, variant);
  out.total_rate = engine.total_rate(state);
  if (out.total_rate == 0.0) return out;
  const double total = out.total_rate;
  if (state == 0) {
    for (int j = 1; j <= model.max_resurrection_index(); ++j)
      if (model.h(j) > 0.0) out.targets.push_back({j, model.h(j) / total, Channel::resurrection});
    return out;
  }
  out.targets.push_back({state - 1, std::min(state, model.servers()) * model.service_rate() / total, Channel::service});
  for (int k = 2; k <= model.max_batch_index(); ++k)
    if (model.b(k) > 0.0) out.targets.push_back({state + k - 1, model.b(k) / total, Channel::arrival});
  if (has_catastrophe(variant) && model.beta() > 0.0)
    out.targets.push_back({variant == ProcessVariant::absorbed_M ? -1 : 0, model.beta() / total, Channel::catastrophe});
  return out;
}

Occupancy occupancy(const QueueModel& model, const SimConfig& cfg) {
  if (!(cfg.horizon > 0.0) || cfg.replications < 1) throw GateError("horizon must be > 0 and replications >= 1");
  const Engine engine(model, cfg.variant);
  constexpr int kBatches = 100;
  const double burn = 0.01 * cfg.horizon;
  const double batch_len = (cfg.horizon - burn) / kBatches;

  // Per replication: batch-by-state time fractions.
  std::vector<std::vector<std::vector<double>>> per_rep(cfg.replications);
  replicate(cfg.replications, cfg.threads, [&](std::uint64_t r) {
    Stream rng(cfg.seed, r);
    std::vector<std::vector<double>> batches(kBatches);
    int state = cfg.x0;
    double time = 0.0;
    Step s;
    std::uint64_t events = 0;
    while (time < cfg.horizon) {
      double next_time = cfg.horizon;
      bool moved = false;
      if (events < cfg.max_events && engine.step(state, rng, s)) {
        next_time = std::min(cfg.horizon, time + s.dt);
        moved = time + s.dt < cfg.horizon;
        ++events;
      }
      // Spread [time, next_time) over the batches it touches.
      double a = std::max(time, burn);
      while (a < next_time) {
        const int b = std::min(kBatches - 1, static_cast<int>((a - burn) / batch_len));
        const double end = std::min(next_time, burn + (b + 1) * batch_len);
        const auto idx = static_cast<std::size_t>(std::max(state, 0));
        auto& row = batches[static_cast<std::size_t>(b)];
        if (row.size() <= idx) row.resize(idx + 1, 0.0);
        row[idx] += end - a;
        if (end <= a) break;
        a = end;
      }
      if (!moved) break;
      time = next_time;
      state = s.next;
    }
    per_rep[r] = std::move(batches);
    return 0.0;
  });

  std::size_t width = 0;
  for (const auto& rep : per_rep)
    for (const auto& b : rep) width = std::max(width, b.size());
  Occupancy out;
  out.time = (cfg.horizon - burn) * static_cast<double>(cfg.replications);
  out.probability.assign(width, 0.0);
  out.std_error.assign(width, 0.0);
  std::vector<double> sum(width, 0.0);
  std::vector<double> sum2(width, 0.0);
  const double nb = static_cast<double>(kBatches) * static_cast<double>(cfg.replications);
  for (const auto& rep : per_rep)
    for (const auto& b : rep)
      for (std::size_t j = 0; j < width; ++j) {
        const double f = j < b.size() ? b[j] / batch_len : 0.0;
        sum[j] += f;
        sum2[j] += f * f;
      }
  for (std::size_t j = 0; j < width; ++j) {
    const double mean = sum[j] / nb;
    out.probability[j] = mean;
    const double var = nb > 1 ? std::max(0.0, (sum2[j] - nb * mean * mean) / (nb - 1)) : 0.0;
    out.std_error[j] = std::sqrt(var / nb);
  }
  return out;
}

std::vector<double> catastrophe_time_samples(const QueueModel& model, const SimConfig& cfg) {
  require(has_catastrophe(cfg.variant) && model.beta() > 0.0, "catastrophe times need beta > 0 and a catastrophe variant");
  const Engine engine(model, cfg.variant);
  auto values = replicate(cfg.replications, cfg.threads, [&](std::uint64_t r) {
    Stream rng(cfg.seed, r);
    return first_epoch(engine, cfg, cfg.x0, rng, [](const Step& s) { return s.channel == Channel::catastrophe; });
  });
  check_censoring(values);
  return values;
}

SimEstimate estimate(const QueueModel& model, const SimConfig& cfg, const Statistic& stat) {
  if (cfg.replications < 1) throw GateError("replications must be >= 1");
  if (!(cfg.horizon > 0.0)) throw GateError("horizon must be > 0");
  if (cfg.x0 < 0) throw GateError("starting state must be >= 0");
  const Engine engine(model, cfg.variant);

  switch (stat.kind) {
    case StatKind::stationary_tv: {
      require(cfg.variant == ProcessVariant::resurrect || cfg.variant == ProcessVariant::catastrophe,
              "stationary occupancy needs the resurrect or catastrophe chain");
      require(!stat.target.empty(), "stationary_tv needs a target distribution");
      const Occupancy occ = occupancy(model, cfg);
      double tv = 0.0;
      double var = 0.0;
      const std::size_t width = std::max(occ.probability.size(), stat.target.size());
      for (std::size_t j = 0; j < width; ++j) {
        const double p = j < occ.probability.size() ? occ.probability[j] : 0.0;
        const double q = j < stat.target.size() ? stat.target[j] : 0.0;
        tv += std::abs(p - q);
        if (j < occ.std_error.size()) var += occ.std_error[j] * occ.std_error[j];
      }
      return {0.5 * tv, 0.5 * std::sqrt(var), cfg.replications, cfg.seed};
    }
    case StatKind::mean_busy_period: {
      require(has_resurrection(cfg.variant) && model.total_resurrection() > 0.0, "busy periods need h > 0");
      auto values = replicate(cfg.replications, cfg.threads, [&](std::uint64_t r) {
        Stream rng(cfg.seed, r);
        const int start = engine.draw_resurrection(rng);
        return first_epoch(engine, cfg, start, rng, [](const Step& s) { return s.next == 0; });
      });
      check_censoring(values);
      return mean_estimate(values, cfg.seed);
    }
    case StatKind::extinction_prob: {
      require(cfg.variant == ProcessVariant::stopped, "extinction statistics use the stopped chain");
      require(cfg.x0 >= 1, "extinction needs x0 >= 1");
      require(stat.t > 0.0, "extinction_prob needs t > 0");
      SimConfig capped = cfg;
      capped.horizon = stat.t;
      auto values = replicate(cfg.replications, cfg.threads, [&](std::uint64_t r) {
        Stream rng(cfg.seed, r);
        const double when = first_epoch(engine, capped, cfg.x0, rng, [](const Step& s) { return s.next == 0; });
        return std::isnan(when) ? 0.0 : 1.0;
      });
      return mean_estimate(values, cfg.seed);
    }
    case StatKind::mean_extinction_time: {
      // With h = 0 state 0 is absorbing in the catastrophe chain too.
      const bool absorbing_zero = cfg.variant == ProcessVariant::stopped ||
                                  (cfg.variant == ProcessVariant::catastrophe && model.total_resurrection() == 0.0);
      require(absorbing_zero, "extinction times need state 0 absorbing");
      require(cfg.x0 >= 1, "extinction needs x0 >= 1");
      auto values = replicate(cfg.replications, cfg.threads, [&](std::uint64_t r) {
        Stream rng(cfg.seed, r);
        return first_epoch(engine, cfg, cfg.x0, rng, [](const Step& s) { return s.next == 0; });
      });
      check_censoring(values);
      return mean_estimate(values, cfg.seed);
    }
    case StatKind::mean_catastrophe_time:
      return mean_estimate(catastrophe_time_samples(model, cfg), cfg.seed);
    case StatKind::var_catastrophe_time:
      return variance_estimate(catastrophe_time_samples(model, cfg), cfg.seed);
    case StatKind::p_ij: {
      require(stat.t > 0.0, "p_ij needs t > 0");
      auto values = replicate(cfg.replications, cfg.threads, [&](std::uint64_t r) {
        Stream rng(cfg.seed, r);
        return state_at(engine, cfg, cfg.x0, stat.t, rng) == stat.target_state ? 1.0 : 0.0;
      });
      return mean_estimate(values, cfg.seed);
    }
  }
  throw GateError("unknown statistic");
}

HoldingCheck holding_time_check(const QueueModel& model, ProcessVariant variant, int state,
                                std::uint64_t samples, std::uint64_t seed) {
  const Engine engine(model, variant);
  HoldingCheck out;
  const double total = engine.total_rate(state);
  if (total <= 0.0) throw GateError("state is absorbing");
  out.expected = 1.0 / total;
  Stream rng(seed, 0);
  std::vector<double> values(samples);
  Step s;
  for (auto& v : values) {
    engine.step(state, rng, s);
    v = s.dt;
  }
  const SimEstimate m = mean_estimate(values, seed);
  out.sample_mean = m.point;
  out.std_error = m.std_error;
  out.pass = std::abs(m.point - out.expected) <= 4 * m.std_error;
  return out;
}

}  // namespace mxq
