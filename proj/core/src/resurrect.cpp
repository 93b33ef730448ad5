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

#include "mxq/resurrect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mxq/error.hpp"
#include "mxq/numeric.hpp"
#include "mxq/roots.hpp"

namespace mxq {

std::string_view to_string(RecurrenceKind kind) {
  switch (kind) {
    case RecurrenceKind::transient: return "transient";
    case RecurrenceKind::null_recurrent: return "null_recurrent";
    case RecurrenceKind::positive_recurrent: return "positive_recurrent";
  }
  return "unknown";
}

namespace detail {

double resurrection_gap(const QueueModel& model, double u) {
  // 1 - u^i = (1-u)(1 + u + ... + u^{i-1}); 1-u is exact for u in [1/2, 1].
  numeric::CompensatedSum acc;
  double partial = 0.0;
  double power = 1.0;
  for (int i = 1; i <= model.max_resurrection_index(); ++i) {
    partial += power;
    power *= u;
    acc.add_product(model.h(i), partial);
  }
  return (1.0 - u) * acc.value();
}

ValueSlope absorption_weight(const QueueModel& model, int i, double lambda) {
  if (i == 0) {
    root_u_lambda(model, lambda);
    return {1.0, 0.0};
  }
  const double u = root_u_lambda(model, lambda).value;
  const auto w = unit_weights(i);
  const Boundary b = solve_boundary(model, lambda, u, w);
  const double du = root_u_lambda_derivative(model, lambda);
  const std::vector<double> dx = boundary_derivative(model, b, w, du);
  return {b.x[0], dx[0]};
}

ValueSlope excess(const QueueModel& model, double lambda) {
  const double u = root_u_lambda(model, lambda).value;
  if (model.total_resurrection() == 0.0) return {0.0, 0.0};
  const int c = model.servers();
  const auto h = model.h_coefficients();
  const Boundary b = solve_boundary(model, lambda, u, h);
  numeric::CompensatedSum acc(resurrection_gap(model, u));
  for (int k = 1; k < c; ++k) acc.add_product(g(model, k, u), b.x[static_cast<std::size_t>(k)]);
  const double du = root_u_lambda_derivative(model, lambda);
  const std::vector<double> dx = boundary_derivative(model, b, h, du);
  return {acc.value(), -dx[0]};
}

std::vector<double> source_sum_L(const QueueModel& model, double lambda, int J) {
  const int width = std::max(J, model.servers());
  std::vector<numeric::CompensatedSum> acc(static_cast<std::size_t>(J) + 1);
  for (int i = 1; i <= model.max_resurrection_index(); ++i) {
    const double hi = model.h(i);
    if (hi == 0.0) continue;
    const ResolventRow row = resolvent_row(model, i, lambda, width);
    for (int j = 0; j <= J; ++j) acc[static_cast<std::size_t>(j)].add_product(hi, row.values[static_cast<std::size_t>(j)]);
  }
  std::vector<double> out(acc.size());
  for (std::size_t j = 0; j < acc.size(); ++j) out[j] = acc[j].value();
  return out;
}

ValueSlope tilde_r00(const QueueModel& model, double lambda) {
  const ValueSlope ex = excess(model, lambda);
  const double d = lambda + ex.value;
  return {1.0 / d, -(1.0 + ex.slope) / (d * d)};
}

ValueSlope tilde_ri0(const QueueModel& model, int i, double lambda) {
  const ValueSlope r00 = tilde_r00(model, lambda);
  if (i == 0) return r00;
  const ValueSlope e = absorption_weight(model, i, lambda);
  return {r00.value * e.value, r00.slope * e.value + r00.value * e.slope};
}

std::vector<double> tilde_row(const QueueModel& model, int i, double lambda, int J) {
  if (i < 0) throw GateError("state index must be >= 0");
  const int width = std::max(J, model.servers());
  const std::vector<double> phi = resolvent_row(model, i, lambda, width).values;
  const std::vector<double> L = source_sum_L(model, lambda, J);
  const double ri0 = tilde_ri0(model, i, lambda).value;
  std::vector<double> out(static_cast<std::size_t>(J) + 1);
  out[0] = ri0;
  for (int j = 1; j <= J; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    out[idx] = phi[idx] + ri0 * L[idx];
  }
  return out;
}

}  // namespace detail

namespace {

void require_resurrection(const QueueModel& model) {
  if (!(model.total_resurrection() > 0.0)) throw GateError("resurrection required (h > 0)");
}

void require_plain(const QueueModel& model) {
  require_resurrection(model);
  if (model.beta() != 0.0) throw GateError("beta > 0: use catastrophe module");
}

}  // namespace

Classification classify(const QueueModel& model) {
  require_plain(model);
  Classification out;
  out.drift = model.drift();
  out.mu1 = model.mu1();
  switch (model.regime()) {
    case Regime::subcritical: out.kind = RecurrenceKind::positive_recurrent; break;
    case Regime::critical: out.kind = RecurrenceKind::null_recurrent; break;
    case Regime::supercritical: out.kind = RecurrenceKind::transient; break;
  }
  return out;
}

double resolvent_tilde(const QueueModel& model, int i, int j, double lambda) {
  require_plain(model);
  if (i < 0 || j < 0) throw GateError("state index must be >= 0");
  if (j == 0) return detail::tilde_ri0(model, i, lambda).value;
  return detail::tilde_row(model, i, lambda, j)[static_cast<std::size_t>(j)];
}

ResolventRow resolvent_tilde_row(const QueueModel& model, int i, double lambda, int J) {
  require_plain(model);
  ResolventRow row;
  row.lambda = lambda;
  row.source = i;
  row.truncation = J;
  row.values = detail::tilde_row(model, i, lambda, J);
  row.tail_bound = 1.0 / lambda - numeric::compensated_sum(row.values);
  return row;
}

std::vector<double> r_coefficients(const QueueModel& model, int J) {
  require_resurrection(model);
  if (J < 1) throw GateError("J must be >= 1");
  const int c = model.servers();
  const double u = root_u(model).value;
  const auto h = model.h_coefficients();
  const detail::Boundary b = detail::solve_boundary(model, 0.0, u, h);
  const std::vector<double> series = detail::tail_series(model, b, h, static_cast<std::size_t>(J) + 1);
  std::vector<double> r(series.begin() + 1, series.end());
  for (int k = 1; k < c && k <= J; ++k) r[static_cast<std::size_t>(k - 1)] = b.x[static_cast<std::size_t>(k)];
  for (double& x : r) {
    if (x < 0.0) {
      if (x < -1e-9) throw NumericalError("recursion unstable; reduce J or raise precision");
      x = 0.0;
    }
  }
  return r;
}

double mean_busy_period(const QueueModel& model) {
  require_resurrection(model);
  if (model.regime() != Regime::subcritical) return std::numeric_limits<double>::infinity();
  const int c = model.servers();
  numeric::CompensatedSum acc;
  for (int k = 1; k <= model.max_resurrection_index(); ++k) {
    const double hk = model.h(k);
    if (hk == 0.0) continue;
    numeric::CompensatedSum inner(static_cast<double>(k));
    if (c > 1) {
      const std::vector<double> m = occupation_times(model, k, c - 1);
      for (int i = 1; i < c; ++i) inner.add_product(m[static_cast<std::size_t>(i - 1)], (c - i) * model.service_rate());
    }
    acc.add_product(hk, inner.value());
  }
  return -acc.value() / (model.total_resurrection() * model.drift());
}

namespace {

struct Moments {
  double EN;
  double ELw;
};

Moments closed_form_moments(const QueueModel& model, const std::vector<double>& pi) {
  const int c = model.servers();
  const double b0 = model.service_rate();
  const GfValue bc = eval_B(model, c, 1.0);
  const GfValue hv = eval_H(model, 1.0);
  const double d1 = model.drift();
  const double d2 = bc.second_derivative;
  const double mu1 = model.mu1();
  const double lead = d2 * mu1 / (2 * d1 * d1) - (2 * mu1 + hv.second_derivative) / (2 * d1);
  numeric::CompensatedSum en(pi[0] * lead);
  numeric::CompensatedSum lw(pi[0] * (lead + c));
  for (int k = 1; k < c; ++k) {
    const double bracket = d2 / (2 * d1 * d1) - k / d1;
    const double pk = pi[static_cast<std::size_t>(k)];
    en.add(pk * (c - k) * b0 * bracket);
    lw.add(pk * (c - k) * (b0 * bracket + 1.0));
  }
  lw.add(-static_cast<double>(c));
  return {en.value(), lw.value()};
}

}  // namespace

EquilibriumReport equilibrium(const QueueModel& model, int J, double eps_tail) {
  EquilibriumReport report;
  report.classification = classify(model);
  if (report.classification.kind != RecurrenceKind::positive_recurrent)
    throw GateError(std::string("no equilibrium: process is ") +
                    std::string(to_string(report.classification.kind)));
  const int c = model.servers();
  const double b0 = model.service_rate();

  constexpr int kCap = 100'000;
  int width = J > 0 ? std::max(J, c) : std::max(64, c);
  for (;;) {
    report.r_coeffs = r_coefficients(model, width);
    numeric::CompensatedSum denom(-model.drift());
    denom.add(model.mu1());
    for (int k = 1; k < c; ++k) denom.add_product(report.r_coeffs[static_cast<std::size_t>(k - 1)], (c - k) * b0);
    const double pi0 = -model.drift() / denom.value();
    report.pi.assign(static_cast<std::size_t>(width) + 1, 0.0);
    report.pi[0] = pi0;
    for (int k = 1; k <= width; ++k) report.pi[static_cast<std::size_t>(k)] = pi0 * report.r_coeffs[static_cast<std::size_t>(k - 1)];
    report.tail_mass = std::max(0.0, 1.0 - numeric::compensated_sum(report.pi));
    if (J > 0 || report.tail_mass < eps_tail || width >= kCap) break;
    width = std::min(2 * width, kCap);
  }
  if (J > 0 && J < c) {
    report.pi.resize(static_cast<std::size_t>(J) + 1);
    report.r_coeffs.resize(static_cast<std::size_t>(J));
    report.tail_mass = std::max(0.0, 1.0 - numeric::compensated_sum(report.pi));
  }
  const Moments m = closed_form_moments(model, report.pi);
  report.EN = m.EN;
  report.ELw = m.ELw;
  report.mean_busy_period = mean_busy_period(model);
  return report;
}

double equilibrium_gf(const QueueModel& model, double s) {
  const Classification cls = classify(model);
  if (cls.kind != RecurrenceKind::positive_recurrent) throw GateError("no equilibrium: process is not positive recurrent");
  if (!(std::abs(s) <= 1.0)) throw GateError("generating functions are evaluated on [-1, 1]");
  if (s == 1.0) return 1.0;
  const int c = model.servers();
  const double b0 = model.service_rate();
  const EquilibriumReport eq = equilibrium(model, c);
  const double pi0 = eq.pi[0];

  if (1.0 - s >= 1e-6) {
    const double bc = eval_B(model, c, s).value;
    numeric::CompensatedSum acc(pi0);
    acc.add(pi0 * s * (model.total_resurrection() - eval_H(model, s).value) / bc);
    for (int k = 1; k < c; ++k)
      acc.add(eq.pi[static_cast<std::size_t>(k)] * std::pow(s, k) * (c - k) * b0 * (1.0 - s) / bc);
    return acc.value();
  }

  // Near s = 1 numerator and B_c both vanish; divide out (s - 1).
  const auto h = model.h_coefficients();
  std::vector<double> p(std::max<std::size_t>(static_cast<std::size_t>(c) + 1, h.size() + 1), 0.0);
  p[1] += pi0 * model.total_resurrection();
  for (std::size_t i = 0; i < h.size(); ++i) p[i + 1] -= pi0 * h[i];
  for (int k = 1; k < c; ++k) {
    const double coef = eq.pi[static_cast<std::size_t>(k)] * (c - k) * b0;
    p[static_cast<std::size_t>(k)] += coef;
    p[static_cast<std::size_t>(k + 1)] -= coef;
  }
  const auto qp = numeric::deflate(p, 1.0);
  const auto qd = numeric::deflate(B_coefficients(model, c), 1.0);
  return pi0 + numeric::horner(qp, s) / numeric::horner(qd, s);
}

}  // namespace mxq
