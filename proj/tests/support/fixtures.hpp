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

#include <map>
#include <random>

#include "mxq/model.hpp"

namespace mxq::testing {

inline QueueModel make_model(int c, std::map<int, double> b, std::map<int, double> h = {}, double beta = 0.0) {
  RawParameters raw;
  raw.c = c;
  raw.b = std::move(b);
  raw.h = std::move(h);
  raw.beta = beta;
  return QueueModel::validate(raw);
}

// The four reference models used throughout the suite.
inline QueueModel model_A() { return make_model(1, {{0, 2.0}, {2, 1.0}}, {{1, 1.0}}); }
inline QueueModel model_B() { return make_model(1, {{0, 1.0}, {2, 2.0}}); }
inline QueueModel model_C() { return make_model(2, {{0, 1.0}, {2, 1.0}}, {{1, 1.0}}); }
inline QueueModel model_D() { return make_model(1, {{0, 2.0}, {2, 1.0}}, {{1, 1.0}}, 1.0); }
inline QueueModel model_B_h() { return make_model(1, {{0, 1.0}, {2, 2.0}}, {{1, 1.0}}); }
inline QueueModel supercritical_c2() { return make_model(2, {{0, 1.0}, {2, 3.0}}); }

/// Small subcritical models with c <= 3 and at most 4 batch sizes, drawn
/// from a fixed seed.
inline std::vector<QueueModel> random_small_models(int count, std::uint32_t seed, bool with_h = true,
                                                   double beta = 0.0) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> rate(0.1, 1.0);
  std::uniform_int_distribution<int> servers(1, 3);
  std::uniform_int_distribution<int> support(1, 4);
  std::vector<QueueModel> out;
  while (static_cast<int>(out.size()) < count) {
    const int c = servers(gen);
    std::map<int, double> b{{0, 1.0 + rate(gen)}};
    const int n = support(gen);
    for (int k = 0; k < n; ++k) b[2 + k] = 0.3 * rate(gen);
    std::map<int, double> h;
    if (with_h) {
      h[1] = rate(gen);
      if (n > 1) h[3] = 0.5 * rate(gen);
    }
    const QueueModel m = make_model(c, b, h, beta);
    if (m.drift() < -0.2) out.push_back(m);
  }
  return out;
}

}  // namespace mxq::testing
