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

#include "mxq/stopped.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mxq/error.hpp"
#include "mxq/numeric.hpp"
#include "mxq/roots.hpp"

namespace mxq {

namespace detail {

double g(const QueueModel& model, int k, double s) {
  const int c = model.servers();
  return std::pow(s, k - 1) * (c - k) * model.service_rate() * (1.0 - s);
}

double g_prime(const QueueModel& model, int k, double s) {
  const int c = model.servers();
  const double lead = k >= 2 ? (k - 1) * std::pow(s, k - 2) * (1.0 - s) : 0.0;
  return (c - k) * model.service_rate() * (lead - std::pow(s, k - 1));
}

std::vector<double> unit_weights(int i) {
  if (i < 0) throw GateError("state index must be >= 0");
  std::vector<double> w(static_cast<std::size_t>(i) + 1, 0.0);
  w.back() = 1.0;
  return w;
}

namespace {

double weight(std::span<const double> w, int j) {
  return j >= 0 && j < static_cast<int>(w.size()) ? w[static_cast<std::size_t>(j)] : 0.0;
}

std::vector<double> boundary_matrix(const QueueModel& model, double lambda, double u) {
  const int c = model.servers();
  const auto n = static_cast<std::size_t>(c);
  const double b0 = model.service_rate();
  std::vector<double> a(n * n, 0.0);
  a[0] = -1.0;
  for (int k = 1; k < c; ++k) a[static_cast<std::size_t>(k)] = -g(model, k, u);
  if (c >= 2) {
    a[n] = -1.0;
    a[n + 1] = b0;
  }
  for (int j = 1; j <= c - 2; ++j) {
    const std::size_t row = static_cast<std::size_t>(j + 1) * n;
    for (int k = 1; k < j; ++k) a[row + static_cast<std::size_t>(k)] = model.b(j - k + 1);
    a[row + static_cast<std::size_t>(j)] = model.b1() - (j - 1) * b0 - lambda;
    a[row + static_cast<std::size_t>(j + 1)] = (j + 1) * b0;
  }
  return a;
}

}  // namespace

Boundary solve_boundary(const QueueModel& model, double lambda, double u,
                        std::span<const double> weights) {
  const int c = model.servers();
  std::vector<double> rhs(static_cast<std::size_t>(c), 0.0);
  rhs[0] = -numeric::horner(weights, u);
  if (c >= 2) rhs[1] = -weight(weights, 0);
  for (int j = 1; j <= c - 2; ++j) rhs[static_cast<std::size_t>(j + 1)] = -weight(weights, j);
  Boundary b;
  b.lambda = lambda;
  b.u = u;
  b.x = numeric::solve_dense(boundary_matrix(model, lambda, u), std::move(rhs));
  return b;
}

std::vector<double> boundary_derivative(const QueueModel& model, const Boundary& b,
                                        std::span<const double> weights, double du) {
  const int c = model.servers();
  std::vector<double> rhs(static_cast<std::size_t>(c), 0.0);
  const auto wv = numeric::horner_with_derivatives(weights, b.u);
  numeric::CompensatedSum anchor(-wv.d1 * du);
  for (int k = 1; k < c; ++k) anchor.add_product(g_prime(model, k, b.u) * du, b.x[static_cast<std::size_t>(k)]);
  rhs[0] = anchor.value();
  for (int j = 1; j <= c - 2; ++j) rhs[static_cast<std::size_t>(j + 1)] = b.x[static_cast<std::size_t>(j)];
  return numeric::solve_dense(boundary_matrix(model, b.lambda, b.u), std::move(rhs));
}

std::vector<double> tail_numerator(const QueueModel& model, const Boundary& b,
                                   std::span<const double> weights) {
  const int c = model.servers();
  const double b0 = model.service_rate();
  std::vector<double> p(std::max<std::size_t>(static_cast<std::size_t>(c) + 1, weights.size() + 1), 0.0);
  p[1] += b.x[0];
  for (int k = 1; k < c; ++k) {
    const double coef = b.x[static_cast<std::size_t>(k)] * (c - k) * b0;
    p[static_cast<std::size_t>(k)] += coef;
    p[static_cast<std::size_t>(k + 1)] -= coef;
  }
  for (std::size_t i = 0; i < weights.size(); ++i) p[i + 1] -= weights[i];
  return p;
}

std::vector<double> tail_series(const QueueModel& model, const Boundary& b,
                                std::span<const double> weights, std::size_t count) {
  std::vector<double> denom = B_coefficients(model, model.servers());
  denom[1] -= b.lambda;
  return numeric::deflated_series(tail_numerator(model, b, weights), denom, b.u, count);
}

std::vector<double> forward_recursion(const QueueModel& model, int i, double lambda, int J) {
  const int c = model.servers();
  std::vector<double> phi = resolvent_boundary(model, i, lambda);
  const double b0 = model.service_rate();
  phi.resize(static_cast<std::size_t>(std::max(J, c - 1)) + 1, 0.0);
  for (int j = c - 1; j < J; ++j) {
    const double delta = (i == j) ? 1.0 : 0.0;
    if (j == 0) {
      phi[1] = (lambda * phi[0] - delta) / b0;
      continue;
    }
    numeric::CompensatedSum acc(-delta);
    for (int k = 1; k < j; ++k) acc.add_product(-model.b(j - k + 1), phi[static_cast<std::size_t>(k)]);
    acc.add_product(-(model.b1() - (std::min(j, c) - 1) * b0 - lambda), phi[static_cast<std::size_t>(j)]);
    phi[static_cast<std::size_t>(j + 1)] = acc.value() / (std::min(j + 1, c) * b0);
  }
  phi.resize(static_cast<std::size_t>(J) + 1);
  return phi;
}

}  // namespace detail

namespace {

void require_source(int i) {
  if (i < 0) throw GateError("state index must be >= 0");
}

void require_start(int k) {
  if (k < 1) throw GateError("starting state must be >= 1");
}

void clip_negatives(std::vector<double>& v) {
  for (double& x : v) {
    if (x < 0.0) {
      if (x < -1e-9) throw NumericalError("recursion unstable; reduce J or raise precision");
      x = 0.0;
    }
  }
}

std::vector<double> weighted_values(const QueueModel& model, std::span<const double> weights,
                                    double lambda, int J) {
  const int c = model.servers();
  const double u = root_u_lambda(model, lambda).value;
  const detail::Boundary b = detail::solve_boundary(model, lambda, u, weights);
  std::vector<double> values = detail::tail_series(model, b, weights, static_cast<std::size_t>(J) + 1);
  values[0] = b.x[0] / lambda;
  for (int k = 1; k < c && k <= J; ++k) values[static_cast<std::size_t>(k)] = b.x[static_cast<std::size_t>(k)];
  clip_negatives(values);
  return values;
}

}  // namespace

std::vector<double> resolvent_boundary(const QueueModel& model, int i, double lambda) {
  require_source(i);
  const int c = model.servers();
  const double u = root_u_lambda(model, lambda).value;
  std::vector<double> out(static_cast<std::size_t>(c), 0.0);
  if (i == 0) {
    out[0] = 1.0 / lambda;
    return out;
  }
  const auto w = detail::unit_weights(i);
  const detail::Boundary b = detail::solve_boundary(model, lambda, u, w);
  out[0] = b.x[0] / lambda;
  for (int k = 1; k < c; ++k) out[static_cast<std::size_t>(k)] = b.x[static_cast<std::size_t>(k)];
  return out;
}

ResolventRow resolvent_row(const QueueModel& model, int i, double lambda, int J) {
  require_source(i);
  if (J < model.servers()) throw GateError("truncation J must be >= c");
  ResolventRow row;
  row.lambda = lambda;
  row.source = i;
  row.truncation = J;
  if (i == 0) {
    root_u_lambda(model, lambda);
    row.values.assign(static_cast<std::size_t>(J) + 1, 0.0);
    row.values[0] = 1.0 / lambda;
  } else {
    row.values = weighted_values(model, detail::unit_weights(i), lambda, J);
  }
  row.tail_bound = 1.0 / lambda - numeric::compensated_sum(row.values);
  return row;
}

ResolventRow resolvent_row(const QueueModel& model, int i, double lambda) {
  constexpr int kCap = 10'000;
  int J = std::max(model.servers(), 64);
  for (;;) {
    ResolventRow row = resolvent_row(model, i, lambda, J);
    const double mass = lambda * (1.0 / lambda - row.tail_bound);
    if (mass >= 1.0 - 1e-10) return row;
    if (J >= kCap) {
      if (lambda * row.tail_bound >= 1e-6)
        throw NumericalError("resolvent row truncation cap reached with tail mass >= 1e-6");
      return row;
    }
    J = std::min(2 * J, kCap);
  }
}

double resolvent_gf(const QueueModel& model, int i, double lambda, double s) {
  require_source(i);
  if (!(std::abs(s) <= 1.0)) throw GateError("generating functions are evaluated on [-1, 1]");
  const int c = model.servers();
  const double u = root_u_lambda(model, lambda).value;
  if (i == 0) return 1.0 / lambda;
  const auto w = detail::unit_weights(i);
  const detail::Boundary b = detail::solve_boundary(model, lambda, u, w);
  const double phi0 = b.x[0] / lambda;
  const double b0 = model.service_rate();

  if (std::abs(s - u) >= 1e-6) {
    numeric::CompensatedSum numer;
    numer.add_product(eval_B(model, c, s).value, phi0);
    for (int k = 1; k < c; ++k)
      numer.add_product(b.x[static_cast<std::size_t>(k)], std::pow(s, k) * (c - k) * b0 * (1.0 - s));
    numer.add(-std::pow(s, i + 1));
    const double denom = eval_B(model, c, s).value - lambda * s;
    return numer.value() / denom;
  }

  // Near u(lambda) both numerator and denominator vanish; use the quotients
  // with the common factor removed.
  const std::vector<double> p = detail::tail_numerator(model, b, w);
  std::vector<double> denom = B_coefficients(model, c);
  denom[1] -= lambda;
  const auto qp = numeric::deflate(p, u);
  const auto qd = numeric::deflate(denom, u);
  return phi0 + numeric::horner(qp, s) / numeric::horner(qd, s);
}

double extinction_time_lt(const QueueModel& model, int k, double lambda) {
  require_start(k);
  const int c = model.servers();
  const double u = root_u_lambda(model, lambda).value;
  const auto w = detail::unit_weights(k);
  const detail::Boundary b = detail::solve_boundary(model, lambda, u, w);
  numeric::CompensatedSum acc(std::pow(u, k));
  for (int i = 1; i < c; ++i) acc.add_product(-b.x[static_cast<std::size_t>(i)], detail::g(model, i, u));
  return acc.value() / lambda;
}

std::vector<double> occupation_times(const QueueModel& model, int k, int J) {
  require_start(k);
  if (J < 1) throw GateError("J must be >= 1");
  const int c = model.servers();
  const double u = root_u(model).value;
  const auto w = detail::unit_weights(k);
  const detail::Boundary b = detail::solve_boundary(model, 0.0, u, w);
  const std::vector<double> series = detail::tail_series(model, b, w, static_cast<std::size_t>(J) + 1);
  std::vector<double> m(series.begin() + 1, series.end());
  for (int i = 1; i < c && i <= J; ++i) m[static_cast<std::size_t>(i - 1)] = b.x[static_cast<std::size_t>(i)];
  clip_negatives(m);
  return m;
}

double mean_extinction_time(const QueueModel& model, int k) {
  require_start(k);
  if (model.regime() != Regime::subcritical) return std::numeric_limits<double>::infinity();
  const int c = model.servers();
  numeric::CompensatedSum acc(static_cast<double>(k));
  if (c > 1) {
    const std::vector<double> m = occupation_times(model, k, c - 1);
    for (int i = 1; i < c; ++i)
      acc.add_product(m[static_cast<std::size_t>(i - 1)], (c - i) * model.service_rate());
  }
  return -acc.value() / model.drift();
}

ExtinctionReport extinction_probability(const QueueModel& model, int k, int J) {
  require_start(k);
  const int c = model.servers();
  ExtinctionReport report;
  report.k = k;
  report.m_star = occupation_times(model, k, J > 0 ? J : std::max(c - 1, 1));
  if (model.regime() == Regime::supercritical) {
    const double u = root_u(model).value;
    const std::vector<double> m =
        static_cast<int>(report.m_star.size()) >= c - 1 ? report.m_star : occupation_times(model, k, c - 1);
    numeric::CompensatedSum acc(std::pow(u, k));
    for (int i = 1; i < c; ++i) acc.add_product(-m[static_cast<std::size_t>(i - 1)], detail::g(model, i, u));
    report.e_star = acc.value();
  } else {
    report.e_star = 1.0;
  }
  report.mean_time = mean_extinction_time(model, k);
  return report;
}

std::vector<double> weighted_row(const QueueModel& model, std::span<const double> weights,
                                 double lambda, int J) {
  if (J < model.servers()) throw GateError("truncation J must be >= c");
  return weighted_values(model, weights, lambda, J);
}

}  // namespace mxq
