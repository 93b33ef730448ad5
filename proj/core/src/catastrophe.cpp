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

#include "mxq/catastrophe.hpp"

#include <algorithm>
#include <cmath>

#include "mxq/error.hpp"
#include "mxq/numeric.hpp"
#include "mxq/resurrect.hpp"
#include "mxq/roots.hpp"
#include "mxq/stopped.hpp"

namespace mxq {

std::string_view to_string(LimitQuantity quantity) {
  switch (quantity) {
    case LimitQuantity::beta_times_mean: return "beta_times_mean";
    case LimitQuantity::mean_minus_inverse_beta: return "mean_minus_inverse_beta";
    case LimitQuantity::mean: return "mean";
  }
  return "unknown";
}

namespace catastrophe {

namespace {

void require_beta(const QueueModel& model) {
  if (!(model.beta() > 0.0)) throw GateError("beta = 0: use the resurrect module");
}

void require_resurrection(const QueueModel& model) {
  if (!(model.total_resurrection() > 0.0))
    throw GateError("h = 0: no resurrection, use hitting_time_h0");
}

void require_state(int i) {
  if (i < 0) throw GateError("state index must be >= 0");
}

// L_0..L_J without parameter gates.
std::vector<double> L_values(const QueueModel& model, double lambda, int J) {
  const int width = std::max(J, model.servers());
  std::vector<double> L = weighted_row(model, model.h_coefficients(), lambda, width);
  L.resize(static_cast<std::size_t>(J) + 1);
  return L;
}

// lambda phi*_{i0}(lambda), 1 for i = 0.
double absorption(const QueueModel& model, int i, double lambda) {
  if (i == 0) return 1.0;
  return extinction_time_lt(model, i, lambda) * lambda;
}

// r_{00}(lambda) and r_{i0}(lambda) given mu = lambda + beta.
struct ZeroColumn {
  double r00;
  double ri0;
};

ZeroColumn zero_column(const QueueModel& model, int i, double lambda) {
  const double beta = model.beta();
  const double mu = lambda + beta;
  const double ex = detail::excess_from_L(model, mu);
  const double r00 = 1.0 / (lambda + (lambda / mu) * ex);
  const double ri0 = i == 0 ? r00 : r00 * (lambda * absorption(model, i, mu) + beta) / mu;
  return {r00, ri0};
}

// r~_{j0}(mu) / (1 - beta r~_{00}(mu)) at mu = lambda + beta, written as
// e_j(mu) / (lambda + excess(mu)) so that no cancellation occurs.
double renewal_ratio(const QueueModel& model, int j, double lambda) {
  const double mu = lambda + model.beta();
  const double ex = mxq::detail::excess(model, mu).value;
  const double denom = lambda + ex;
  if (denom / (mu + ex) < 1e-12) throw NumericalError("1 - beta r~_00 vanishes");
  return mxq::detail::absorption_weight(model, j, mu).value / denom;
}

// Delta_j0(lambda) = (beta/mu) (lambda (1 - e_j) + excess) / (lambda + excess), the
// cancellation-free form of beta/mu - (lambda/mu) beta F.
double delta_transform(const QueueModel& model, int j, double lambda) {
  const double beta = model.beta();
  const double mu = lambda + beta;
  const double ex = mxq::detail::excess(model, mu).value;
  const double denom = lambda + ex;
  if (denom / (mu + ex) < 1e-12) throw NumericalError("1 - beta r~_00 vanishes");
  const double miss = j == 0 ? 0.0 : 1.0 - mxq::detail::absorption_weight(model, j, mu).value;
  return beta / mu * (lambda * miss + ex) / denom;
}

}  // namespace

namespace detail {

double excess_from_L(const QueueModel& model, double lambda) {
  const double u = root_u_lambda(model, lambda).value;
  if (model.total_resurrection() == 0.0) return 0.0;
  const mxq::detail::Boundary b =
      mxq::detail::solve_boundary(model, lambda, u, model.h_coefficients());
  numeric::CompensatedSum acc(mxq::detail::resurrection_gap(model, u));
  for (int k = 1; k < model.servers(); ++k)
    acc.add_product(mxq::detail::g(model, k, u), b.x[static_cast<std::size_t>(k)]);
  return acc.value();
}

}  // namespace detail

double resolvent(const QueueModel& model, int i, int j, double lambda) {
  require_beta(model);
  require_state(i);
  require_state(j);
  const ZeroColumn z = zero_column(model, i, lambda);
  if (j == 0) return z.ri0;
  return catastrophe::resolvent_row(model, i, lambda, j)[static_cast<std::size_t>(j)];
}

std::vector<double> resolvent_row(const QueueModel& model, int i, double lambda, int J) {
  require_beta(model);
  require_state(i);
  if (J < 0) throw GateError("J must be >= 0");
  const double mu = lambda + model.beta();
  const int width = std::max(J, model.servers());
  const ZeroColumn z = zero_column(model, i, lambda);
  const std::vector<double> phi = mxq::resolvent_row(model, i, mu, width).values;
  const std::vector<double> L = L_values(model, mu, J);
  std::vector<double> out(static_cast<std::size_t>(J) + 1);
  out[0] = z.ri0;
  for (int n = 1; n <= J; ++n) {
    const auto idx = static_cast<std::size_t>(n);
    out[idx] = phi[idx] + z.ri0 * L[idx];
  }
  return out;
}

HittingTime hitting_time_h0(const QueueModel& model, int k, double lambda) {
  require_beta(model);
  if (model.total_resurrection() > 0.0) throw GateError("h > 0: use catastrophe_time ops");
  if (k < 1) throw GateError("starting state must be >= 1");
  const double beta = model.beta();
  const double mu = lambda + beta;
  HittingTime out;
  out.transform = (beta / lambda + absorption(model, k, mu)) / mu;
  out.mean = (1.0 - absorption(model, k, beta)) / beta;
  return out;
}

std::vector<double> L_coefficients(const QueueModel& model, double lambda, int J) {
  if (!(model.total_resurrection() > 0.0)) throw GateError("resurrection required (h > 0)");
  if (J < 0) throw GateError("J must be >= 0");
  return L_values(model, lambda, J);
}

CatastropheEquilibrium equilibrium(const QueueModel& model, int J, double eps_tail) {
  require_beta(model);
  if (!(model.total_resurrection() > 0.0))
    throw GateError("h = 0: equilibrium is degenerate at state 0; use hitting_time_h0");
  const int c = model.servers();
  const double beta = model.beta();
  const double b0 = model.service_rate();
  const double ex = detail::excess_from_L(model, beta);
  const double pi0 = beta / (beta + ex);

  CatastropheEquilibrium out;
  constexpr int kCap = 100'000;
  int width = J > 0 ? J : std::max(64, c);
  for (;;) {
    out.L = L_values(model, beta, width);
    out.pi.assign(out.L.size(), 0.0);
    out.pi[0] = pi0;
    for (std::size_t n = 1; n < out.L.size(); ++n) out.pi[n] = pi0 * out.L[n];
    out.tail_mass = std::max(0.0, 1.0 - numeric::compensated_sum(out.pi));
    if (J > 0 || out.tail_mass < eps_tail || width >= kCap) break;
    width = std::min(2 * width, kCap);
  }

  // Moments need pi_0..pi_{c-1} even when J < c.
  const std::vector<double> head = L_values(model, beta, std::max(c - 1, 0));
  const double u = root_u_lambda(model, beta).value;
  const double d1 = model.drift();
  const double gap = mxq::detail::resurrection_gap(model, u);
  const double beta2 = beta * beta;
  const double lead = (model.mu1() * beta + gap * d1) / beta2;
  numeric::CompensatedSum en(pi0 * lead);
  numeric::CompensatedSum lw(pi0 * (lead + c));
  for (int k = 1; k < c; ++k) {
    const double pk = pi0 * head[static_cast<std::size_t>(k)];
    const double inner = beta + std::pow(u, k - 1) * (1.0 - u) * d1;
    en.add(pk * (c - k) * b0 * inner / beta2);
    lw.add(pk * (c - k) * (b0 * inner + beta2) / beta2);
  }
  lw.add(-static_cast<double>(c));
  out.EN = en.value();
  out.ELw = lw.value();
  return out;
}

double equilibrium_gf(const QueueModel& model, double s) {
  require_beta(model);
  require_resurrection(model);
  if (!(std::abs(s) <= 1.0)) throw GateError("generating functions are evaluated on [-1, 1]");
  const double beta = model.beta();
  const double u = root_u_lambda(model, beta).value;
  const double pi0 = beta / (beta + detail::excess_from_L(model, beta));
  const auto h = model.h_coefficients();
  const mxq::detail::Boundary b = mxq::detail::solve_boundary(model, beta, u, h);
  const std::vector<double> p = mxq::detail::tail_numerator(model, b, h);
  std::vector<double> denom = B_coefficients(model, model.servers());
  denom[1] -= beta;
  double ratio = 0.0;
  if (std::abs(s - u) >= 1e-6) {
    ratio = numeric::horner(p, s) / numeric::horner(denom, s);
  } else {
    ratio = numeric::horner(numeric::deflate(p, u), s) / numeric::horner(numeric::deflate(denom, u), s);
  }
  return pi0 * (1.0 + ratio);
}

EtaRow eta_resolvent(const QueueModel& model, int j, double lambda, int J) {
  require_beta(model);
  require_resurrection(model);
  require_state(j);
  if (J < 0) throw GateError("J must be >= 0");
  const double beta = model.beta();
  const double mu = lambda + beta;
  const double f = renewal_ratio(model, j, lambda);
  const std::vector<double> rj = mxq::detail::tilde_row(model, j, mu, J);
  const std::vector<double> r0 = j == 0 ? rj : mxq::detail::tilde_row(model, 0, mu, J);
  EtaRow out;
  out.lambda = lambda;
  out.source = j;
  out.absorbed = delta_transform(model, j, lambda) / lambda;
  out.values.resize(rj.size());
  for (std::size_t n = 0; n < rj.size(); ++n) out.values[n] = rj[n] + beta * r0[n] * f;
  return out;
}

double catastrophe_time_transform(const QueueModel& model, int j, double lambda) {
  require_beta(model);
  require_state(j);
  return delta_transform(model, j, lambda);
}

namespace {

struct Derivatives {
  double r00;
  double dr00;
  double rj0;
  double drj0;
};

Derivatives analytic_derivatives(const QueueModel& model, int j, double beta) {
  const auto r00 = mxq::detail::tilde_r00(model, beta);
  const auto rj0 = mxq::detail::tilde_ri0(model, j, beta);
  return {r00.value, r00.slope, rj0.value, rj0.slope};
}

double richardson(const std::function<double(double)>& f, double x) {
  const double h = 1e-6 * x;
  const auto d = [&](double step) { return (f(x + step) - f(x - step)) / (2 * step); };
  return (4 * d(h / 2) - d(h)) / 3;
}

Derivatives numeric_derivatives(const QueueModel& model, int j, double beta) {
  const auto r00 = [&](double x) { return mxq::detail::tilde_r00(model, x).value; };
  const auto rj0 = [&](double x) { return mxq::detail::tilde_ri0(model, j, x).value; };
  return {r00(beta), richardson(r00, beta), rj0(beta), richardson(rj0, beta)};
}

}  // namespace

CatastropheTimeStats catastrophe_time_moments(const QueueModel& model, int j, DerivativeMethod method,
                                              const std::vector<double>& delta_points) {
  require_beta(model);
  require_resurrection(model);
  require_state(j);
  const double beta = model.beta();
  const Derivatives d = method == DerivativeMethod::analytic ? analytic_derivatives(model, j, beta)
                                                             : numeric_derivatives(model, j, beta);
  // 1 - beta r~_00(beta) = excess / (beta + excess).
  const double ex = mxq::detail::excess(model, beta).value;
  const double s = ex / (beta + ex);
  if (s < 1e-12) throw NumericalError("1 - beta r~_00 vanishes");
  const double ratio = d.rj0 / s;

  CatastropheTimeStats out;
  out.j = j;
  out.mean = 1.0 / beta + ratio;
  const double beta2 = beta * beta;
  const double braces = 1.0 - beta2 * ratio * ratio - 2 * beta2 * d.drj0 / s -
                        2 * beta2 * beta * d.rj0 * d.dr00 / (s * s);
  out.variance = braces / beta2;
  for (double lambda : delta_points) out.delta_at[lambda] = catastrophe_time_transform(model, j, lambda);
  return out;
}

Asymptote small_beta_asymptote(const QueueModel& model, int j) {
  require_resurrection(model);
  require_state(j);
  const int c = model.servers();
  const double b0 = model.service_rate();
  const std::vector<double> r = c > 1 ? r_coefficients(model, c - 1) : std::vector<double>{};
  switch (model.regime()) {
    case Regime::subcritical: {
      numeric::CompensatedSum s(model.mu1());
      for (int k = 1; k < c; ++k) s.add_product(r[static_cast<std::size_t>(k - 1)], (c - k) * b0);
      return {(-model.drift() + s.value()) / s.value(), LimitQuantity::beta_times_mean};
    }
    case Regime::supercritical: {
      const double u = root_u(model).value;
      numeric::CompensatedSum s(mxq::detail::resurrection_gap(model, u));
      for (int k = 1; k < c; ++k) s.add_product(mxq::detail::g(model, k, u), r[static_cast<std::size_t>(k - 1)]);
      double limit = 1.0 / s.value();
      if (j >= 1) limit *= b0 * occupation_times(model, j, 1)[0];
      return {limit, LimitQuantity::mean_minus_inverse_beta};
    }
    case Regime::critical: break;
  }
  throw GateError("small-beta limit not covered at critical drift");
}

Asymptote large_beta_asymptote(const QueueModel& model, int j) {
  require_resurrection(model);
  require_state(j);
  const double h = model.total_resurrection();
  if (j == 0) return {1.0 / h, LimitQuantity::mean};
  if (j == 1) return {1.0 + model.service_rate() / h, LimitQuantity::beta_times_mean};
  return {1.0, LimitQuantity::beta_times_mean};
}

}  // namespace catastrophe

}  // namespace mxq
