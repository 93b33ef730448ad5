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
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mxq {

/// Unvalidated parameter set as read from a model file. Keys of `b` are
/// batch indices j (0 = per-server service rate, j >= 2 = arrival rate of a
/// batch of j-1 customers); keys of `h` are resurrection targets j >= 1.
struct RawParameters {
  int c = 1;
  std::map<int, double> b;
  std::map<int, double> h;
  double beta = 0.0;
};

/// Value and first two derivatives of a generating function at one point.
struct GfValue {
  double value = 0.0;
  double first_derivative = 0.0;
  double second_derivative = 0.0;
};

enum class Regime { subcritical, critical, supercritical };

/// The four chains built on the same rates: the stopped queue (0 absorbing),
/// the queue with resurrection, the queue with resurrection and
/// catastrophes, and the catastrophe-absorbed chain on {-1, 0, 1, ...}.
enum class ProcessVariant { stopped, resurrect, catastrophe, absorbed_M };

std::string_view to_string(Regime regime);
std::string_view to_string(ProcessVariant variant);
ProcessVariant parse_variant(std::string_view name);

/// Validated, immutable parameterization of the M^X/M/c queue with
/// state-dependent control at idle time and catastrophes.
///
/// The rate b_1 and the total resurrection rate h are derived so that the
/// generator is conservative by construction.
class QueueModel {
 public:
  /// Throws ModelError when any invariant is violated.
  static QueueModel validate(const RawParameters& raw);

  int servers() const noexcept { return c_; }
  double service_rate() const noexcept { return b_[0]; }
  /// b_j for any j >= 0 (zero outside the support); b_1 is the derived
  /// diagonal rate -(b_0 + sum_{j>=2} b_j).
  double b(int j) const noexcept;
  double b1() const noexcept { return b_[1]; }
  /// b_0, b_1, ..., b_{J_b}.
  std::span<const double> b_coefficients() const noexcept { return b_; }
  int max_batch_index() const noexcept { return static_cast<int>(b_.size()) - 1; }
  /// Sum of batch arrival rates, sum_{j>=2} b_j.
  double arrival_rate() const noexcept { return arrival_rate_; }

  double h(int j) const noexcept;
  /// h_0 = 0, h_1, ..., h_{J_h}.
  std::span<const double> h_coefficients() const noexcept { return h_; }
  int max_resurrection_index() const noexcept { return static_cast<int>(h_.size()) - 1; }
  double total_resurrection() const noexcept { return h_total_; }
  /// H'(1) = sum_j j h_j.
  double mu1() const noexcept { return mu1_; }

  double beta() const noexcept { return beta_; }

  /// B_c'(1), evaluated without cancellation as -c b_0 + sum_{j>=2} (j-1) b_j.
  double drift() const noexcept { return drift_; }
  Regime regime() const noexcept { return regime_; }

  /// Copy with a different catastrophe rate.
  QueueModel with_beta(double beta) const;
  /// Copy with the resurrection rates replaced (empty map removes them).
  QueueModel with_resurrection(const std::map<int, double>& h) const;

  RawParameters raw() const;

 private:
  QueueModel() = default;

  int c_ = 1;
  std::vector<double> b_;
  std::vector<double> h_;
  double beta_ = 0.0;
  double arrival_rate_ = 0.0;
  double h_total_ = 0.0;
  double mu1_ = 0.0;
  double drift_ = 0.0;
  Regime regime_ = Regime::subcritical;
};

/// B_i(s) = B(s) + (i-1) b_0 (1-s), 1 <= i <= c, |s| <= 1.
GfValue eval_B(const QueueModel& model, int i, double s);

/// H(s) = sum_j h_j s^j, |s| <= 1.
GfValue eval_H(const QueueModel& model, double s);

/// Coefficients of B_i(s) as a polynomial in s.
std::vector<double> B_coefficients(const QueueModel& model, int i);

/// Rates j -> rate(j) for j = first, first+1, ... until the remaining tail
/// mass drops to eps_tail * (total so far). Rates are kept absolute.
std::map<int, double> truncate_tail(const std::function<double(int)>& rate, int first,
                                    double tail_mass_at_first, double eps_tail = 1e-12);

/// Geometric family: rate(j) = total (1-p) p^{j-first}, truncated at tail
/// mass <= eps_tail.
std::map<int, double> geometric_rates(double total, double ratio, int first,
                                      double eps_tail = 1e-12);

/// Model file: {"c": int, "b": {"0": rate, "2": rate, ...},
///              "h": {"1": rate, ...}, "beta": rate}.
RawParameters parse_model_json(std::string_view text);
RawParameters load_model_file(const std::string& path);
std::string model_to_json(const QueueModel& model);

}  // namespace mxq
