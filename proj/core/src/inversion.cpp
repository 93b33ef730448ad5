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

#include "mxq/inversion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>

#include "mxq/catastrophe.hpp"
#include "mxq/error.hpp"
#include "mxq/resurrect.hpp"
#include "mxq/stopped.hpp"

namespace mxq {

namespace {

// Transform samples at k ln2 / t, shared between orders.
class NodeCache {
 public:
  NodeCache(const std::function<double(double)>& f, double t) : f_(f), tau_(std::numbers::ln2 / t) {}

  double operator()(int k) {
    auto it = values_.find(k);
    if (it != values_.end()) return it->second;
    const double v = f_(k * tau_);
    if (!std::isfinite(v)) throw NumericalError("transform is not finite at an inversion node");
    values_.emplace(k, v);
    return v;
  }

  double tau() const { return tau_; }

 private:
  const std::function<double(double)>& f_;
  double tau_;
  std::map<int, double> values_;
};

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double gaver_wynn_rho(NodeCache& nodes, int order) {
  const int m = order / 2;
  std::vector<double> g(static_cast<std::size_t>(m));
  for (int n = 1; n <= m; ++n) {
    // tau (2n)! / (n! (n-1)!) = tau n C(2n, n)
    const double scale = nodes.tau() * n * binomial(2 * n, n);
    double acc = 0.0;
    for (int j = 0; j <= n; ++j) {
      const double term = binomial(n, j) * nodes(n + j);
      acc += (j % 2 == 0) ? term : -term;
    }
    g[static_cast<std::size_t>(n - 1)] = scale * acc;
  }

  // rho_{-1} = 0, rho_0 = G_n; even columns carry the estimates.
  std::vector<double> prev(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<double> cur = g;
  double best = g.back();
  for (int k = 1; k < m; ++k) {
    std::vector<double> next(cur.size() - 1);
    bool ok = true;
    for (std::size_t n = 0; n + 1 < cur.size(); ++n) {
      const double diff = cur[n + 1] - cur[n];
      if (diff == 0.0 || !std::isfinite(diff)) {
        ok = false;
        break;
      }
      next[n] = prev[n + 1] + k / diff;
    }
    if (!ok) break;
    prev = std::move(cur);
    cur = std::move(next);
    if (k % 2 == 0) best = cur.back();
  }
  return best;
}

double stehfest(NodeCache& nodes, int order) {
  const int half = order / 2;
  std::vector<double> fact(static_cast<std::size_t>(2 * order) + 1, 1.0);
  for (std::size_t i = 1; i < fact.size(); ++i) fact[i] = fact[i - 1] * static_cast<double>(i);
  double acc = 0.0;
  for (int k = 1; k <= order; ++k) {
    double v = 0.0;
    for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
      v += std::pow(j, half) * fact[static_cast<std::size_t>(2 * j)] /
           (fact[static_cast<std::size_t>(half - j)] * fact[static_cast<std::size_t>(j)] *
            fact[static_cast<std::size_t>(j - 1)] * fact[static_cast<std::size_t>(k - j)] *
            fact[static_cast<std::size_t>(2 * j - k)]);
    }
    if ((k + half) % 2 != 0) v = -v;
    acc += v * nodes(k);
  }
  return acc * nodes.tau();
}

double run(NodeCache& nodes, int order, InversionMethod method) {
  return method == InversionMethod::stehfest ? stehfest(nodes, order) : gaver_wynn_rho(nodes, order);
}

// Gauss-Legendre nodes and weights on [-1, 1].
struct Quadrature {
  std::vector<double> x;
  std::vector<double> w;
};

Quadrature gauss_legendre(int n) {
  Quadrature q;
  q.x.resize(static_cast<std::size_t>(n));
  q.w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    q.x[static_cast<std::size_t>(i)] = x;
    q.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return q;
}

}  // namespace

InversionResult invert(const InversionRequest& request) {
  if (!(request.t > 0.0) || !std::isfinite(request.t)) throw GateError("inversion time t must be > 0");
  if (request.order < 8 || request.order > 16 || request.order % 2 != 0)
    throw GateError("inversion order must be one of 8, 10, 12, 14, 16");
  if (!request.transform) throw GateError("inversion needs a transform");
  NodeCache nodes(request.transform, request.t);
  InversionResult out;
  out.value = run(nodes, request.order, request.method);
  out.error_estimate = std::abs(run(nodes, 12, request.method) - run(nodes, 14, request.method));
  if (request.probability && request.kind != InversionKind::density)
    out.value = std::clamp(out.value, 0.0, 1.0);
  return out;
}

namespace {

double phi_entry(const QueueModel& model, int i, int j, double lambda) {
  return resolvent_row(model, i, lambda, std::max(j, model.servers())).values[static_cast<std::size_t>(j)];
}

double tilde_entry(const QueueModel& model, int i, int j, double lambda) {
  if (j == 0) return detail::tilde_ri0(model, i, lambda).value;
  return detail::tilde_row(model, i, lambda, j)[static_cast<std::size_t>(j)];
}

InversionResult invert_probability(std::function<double(double)> f, double t, int order) {
  InversionRequest req;
  req.transform = std::move(f);
  req.t = t;
  req.order = order;
  req.kind = InversionKind::function;
  req.probability = true;
  return invert(req);
}

}  // namespace

TransitionProbability transition_probability(const QueueModel& model, ProcessVariant variant, int i,
                                             int j, double t, int order) {
  if (i < 0) throw GateError("source state must be >= 0");
  if (j < 0 && !(variant == ProcessVariant::absorbed_M && j == -1))
    throw GateError("target state must be >= 0 (or -1 for absorbed_M)");
  TransitionProbability out;
  InversionResult r;
  switch (variant) {
    case ProcessVariant::stopped:
      r = invert_probability([&](double l) { return phi_entry(model, i, j, l); }, t, order);
      break;
    case ProcessVariant::resurrect:
      if (model.beta() != 0.0) throw GateError("beta > 0: resurrect variant requires beta = 0");
      if (!(model.total_resurrection() > 0.0)) throw GateError("resurrection required (h > 0)");
      r = invert_probability([&](double l) { return tilde_entry(model, i, j, l); }, t, order);
      break;
    case ProcessVariant::catastrophe: {
      if (!(model.beta() > 0.0)) throw GateError("catastrophe variant requires beta > 0");
      r = invert_probability([&](double l) { return catastrophe::resolvent(model, i, j, l); }, t, order);
      // p_ij(t) = e^{-beta t} p~_ij(t) + beta int_0^t e^{-beta s} p~_0j(s) ds
      const double beta = model.beta();
      const double direct = invert_probability([&](double l) { return tilde_entry(model, i, j, l); }, t, order).value;
      static const Quadrature q = gauss_legendre(32);
      double integral = 0.0;
      for (std::size_t k = 0; k < q.x.size(); ++k) {
        const double s = 0.5 * t * (q.x[k] + 1.0);
        const double p0 = invert_probability([&](double l) { return tilde_entry(model, 0, j, l); }, s, order).value;
        integral += q.w[k] * std::exp(-beta * s) * p0;
      }
      integral *= 0.5 * t;
      const double rhs = std::exp(-beta * t) * direct + beta * integral;
      out.pakes_gap = std::abs(r.value - rhs);
      if (*out.pakes_gap > 1e-3) throw NumericalError("time-domain decomposition check failed (gap > 1e-3)");
      break;
    }
    case ProcessVariant::absorbed_M: {
      if (!(model.beta() > 0.0)) throw GateError("absorbed_M variant requires beta > 0");
      if (!(model.total_resurrection() > 0.0)) throw GateError("resurrection required (h > 0)");
      r = invert_probability(
          [&](double l) {
            const EtaRow row = catastrophe::eta_resolvent(model, i, l, std::max(j, 0));
            return j == -1 ? row.absorbed : row.values[static_cast<std::size_t>(j)];
          },
          t, order);
      break;
    }
  }
  out.value = r.value;
  out.error_estimate = r.error_estimate;
  return out;
}

}  // namespace mxq
