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

#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#ifdef MXQ_VENDORED_JSON
#include "json.hpp"
#else
#include <nlohmann/json.hpp>
#endif

#include "mxq/catastrophe.hpp"
#include "mxq/error.hpp"
#include "mxq/inversion.hpp"
#include "mxq/model.hpp"
#include "mxq/resurrect.hpp"
#include "mxq/simulator.hpp"
#include "mxq/stopped.hpp"

namespace mxq::cli {

namespace {

using Json = nlohmann::ordered_json;

Json num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

Json num_array(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

std::string csv_num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::setprecision(12) << x;
  return s.str();
}

struct Options {
  std::string model_path;
  std::string out_path;
  std::string format = "json";
  std::string variant;
  std::string stat;
  std::string t_list;
  std::string lambda_list;
  std::string reps = "10000";
  int k = 1;
  int j = 0;
  int i = 0;
  int x0 = -1;
  int J = 0;
  int order = 12;
  std::uint64_t seed = 42;
  double horizon = 1e3;
  unsigned threads = 0;
};

std::vector<double> parse_list(const std::string& text, std::string_view what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw GateError("cannot parse " + std::string(what) + " value '" + item + "'");
    }
  }
  return out;
}

std::uint64_t parse_reps(const std::string& text) {
  double v = 0.0;
  try {
    v = std::stod(text);
  } catch (const std::exception&) {
    throw GateError("cannot parse --reps '" + text + "'");
  }
  if (!(v >= 1.0) || v > 1e12) throw GateError("--reps must be in [1, 1e12]");
  return static_cast<std::uint64_t>(std::llround(v));
}

void emit(const Options& opt, const std::string& text, std::ostream& out) {
  if (opt.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(opt.out_path);
  if (!f) throw Error("cannot write '" + opt.out_path + "'");
  f << text;
}

QueueModel load(const Options& opt) { return QueueModel::validate(load_model_file(opt.model_path)); }

Json asymptotes(const QueueModel& m, int j) {
  Json a;
  try {
    const Asymptote s = catastrophe::small_beta_asymptote(m, j);
    a["small_beta"] = {{"limit", num(s.limit)}, {"quantity", std::string(to_string(s.quantity))}};
  } catch (const GateError& e) {
    a["small_beta"] = {{"error", e.what()}};
  }
  const Asymptote l = catastrophe::large_beta_asymptote(m, j);
  a["large_beta"] = {{"limit", num(l.limit)}, {"quantity", std::string(to_string(l.quantity))}};
  return a;
}

std::string finish(const Json& j) { return j.dump(2) + "\n"; }

std::string cmd_validate(const Options& opt) {
  const QueueModel m = load(opt);
  Json j;
  j["valid"] = true;
  j["c"] = m.servers();
  j["b1"] = num(m.b1());
  j["h"] = num(m.total_resurrection());
  j["mu1"] = num(m.mu1());
  j["beta"] = num(m.beta());
  j["drift"] = num(m.drift());
  j["regime"] = std::string(to_string(m.regime()));
  return finish(j);
}

std::string cmd_analyze(const Options& opt) {
  const QueueModel m = load(opt);
  std::vector<double> pi;
  Json j;
  if (m.beta() == 0.0) {
    const EquilibriumReport eq = equilibrium(m, opt.J);
    pi = eq.pi;
    j["process"] = "resurrect";
    j["classification"] = {{"kind", std::string(to_string(eq.classification.kind))},
                           {"drift", num(eq.classification.drift)},
                           {"mu1", num(eq.classification.mu1)}};
    j["pi"] = num_array(eq.pi);
    j["tail_mass"] = num(eq.tail_mass);
    j["EN"] = num(eq.EN);
    j["ELw"] = num(eq.ELw);
    j["busy_period"] = num(eq.mean_busy_period);
  } else {
    const CatastropheEquilibrium eq = catastrophe::equilibrium(m, opt.J);
    pi = eq.pi;
    const CatastropheTimeStats ct = catastrophe::catastrophe_time_moments(m, 0);
    j["process"] = "catastrophe";
    j["classification"] = {{"kind", "positive_recurrent"}, {"drift", num(m.drift())}, {"mu1", num(m.mu1())}};
    j["pi"] = num_array(eq.pi);
    j["tail_mass"] = num(eq.tail_mass);
    j["EN"] = num(eq.EN);
    j["ELw"] = num(eq.ELw);
    j["catastrophe_time"] = {{"j", 0}, {"mean", num(ct.mean)}, {"var", num(ct.variance)}};
    j["asymptotes"] = asymptotes(m, 0);
  }
  if (opt.format == "csv") {
    std::string s = "state,probability\n";
    for (std::size_t n = 0; n < pi.size(); ++n) s += std::to_string(n) + "," + csv_num(pi[n]) + "\n";
    return s;
  }
  return finish(j);
}

std::string cmd_extinction(const Options& opt) {
  const QueueModel m = load(opt);
  const ExtinctionReport r = extinction_probability(m, opt.k, opt.J);
  if (opt.format == "csv") {
    std::string s = "state,m_star\n";
    for (std::size_t n = 0; n < r.m_star.size(); ++n) s += std::to_string(n + 1) + "," + csv_num(r.m_star[n]) + "\n";
    return s;
  }
  Json j;
  j["k"] = r.k;
  j["regime"] = std::string(to_string(m.regime()));
  j["e_star"] = num(r.e_star);
  j["m_star"] = num_array(r.m_star);
  j["mean_time"] = num(r.mean_time);
  return finish(j);
}

std::string cmd_catastrophe(const Options& opt) {
  const QueueModel m = load(opt);
  const std::vector<double> lambdas = parse_list(opt.lambda_list, "--lambda");
  const CatastropheTimeStats s = catastrophe::catastrophe_time_moments(m, opt.j, DerivativeMethod::analytic, lambdas);
  if (opt.format == "csv") {
    std::string out = "quantity,value\nmean," + csv_num(s.mean) + "\nvar," + csv_num(s.variance) + "\n";
    for (const auto& [l, d] : s.delta_at) out += "delta(" + csv_num(l) + ")," + csv_num(d) + "\n";
    return out;
  }
  Json ct = {{"j", s.j}, {"mean", num(s.mean)}, {"var", num(s.variance)}};
  if (!s.delta_at.empty()) {
    Json d = Json::array();
    for (const auto& [l, v] : s.delta_at) d.push_back({{"lambda", num(l)}, {"delta", num(v)}});
    ct["delta"] = d;
  }
  Json j;
  j["catastrophe_time"] = ct;
  j["asymptotes"] = asymptotes(m, opt.j);
  return finish(j);
}

ProcessVariant default_variant(const QueueModel& m) {
  return m.beta() > 0.0 ? ProcessVariant::catastrophe : ProcessVariant::resurrect;
}

std::string cmd_invert(const Options& opt) {
  const QueueModel m = load(opt);
  const ProcessVariant v = opt.variant.empty() ? default_variant(m) : parse_variant(opt.variant);
  std::vector<double> ts = parse_list(opt.t_list, "--t");
  if (ts.empty()) throw GateError("invert needs --t");
  std::vector<TransitionProbability> ps;
  for (double t : ts) ps.push_back(transition_probability(m, v, opt.i, opt.j, t, opt.order));
  if (opt.format == "json") {
    Json rows = Json::array();
    for (std::size_t n = 0; n < ts.size(); ++n) {
      Json r = {{"t", num(ts[n])}, {"value", num(ps[n].value)}, {"error_estimate", num(ps[n].error_estimate)}};
      if (ps[n].pakes_gap) r["decomposition_gap"] = num(*ps[n].pakes_gap);
      rows.push_back(r);
    }
    return finish(Json{{"variant", std::string(to_string(v))}, {"i", opt.i}, {"j", opt.j}, {"rows", rows}});
  }
  std::string s = "t,value,error_estimate\n";
  for (std::size_t n = 0; n < ts.size(); ++n)
    s += csv_num(ts[n]) + "," + csv_num(ps[n].value) + "," + csv_num(ps[n].error_estimate) + "\n";
  return s;
}

// Simulation set-up shared by simulate and compare.
struct SimPlan {
  QueueModel model;
  SimConfig config;
  Statistic statistic;
};

SimPlan plan(const Options& opt, const std::string& stat) {
  QueueModel m = load(opt);
  Statistic st;
  st.kind = parse_stat(stat);
  SimConfig cfg;
  cfg.replications = parse_reps(opt.reps);
  cfg.seed = opt.seed;
  cfg.horizon = opt.horizon;
  cfg.threads = opt.threads;
  const std::vector<double> ts = parse_list(opt.t_list, "--t");
  switch (st.kind) {
    case StatKind::extinction_prob:
    case StatKind::mean_extinction_time:
      cfg.variant = ProcessVariant::stopped;
      cfg.x0 = opt.k;
      st.t = ts.empty() ? opt.horizon : ts.front();
      break;
    case StatKind::mean_catastrophe_time:
    case StatKind::var_catastrophe_time:
      cfg.variant = ProcessVariant::catastrophe;
      cfg.x0 = opt.j;
      break;
    case StatKind::p_ij:
      cfg.variant = default_variant(m);
      cfg.x0 = opt.i;
      st.target_state = opt.j;
      if (ts.empty()) throw GateError("p_ij needs --t");
      st.t = ts.front();
      break;
    case StatKind::mean_busy_period:
      cfg.variant = default_variant(m);
      break;
    case StatKind::stationary_tv:
      cfg.variant = default_variant(m);
      cfg.replications = std::max<std::uint64_t>(1, cfg.replications);
      st.target = m.beta() > 0.0 ? catastrophe::equilibrium(m).pi : equilibrium(m).pi;
      break;
  }
  if (!opt.variant.empty()) cfg.variant = parse_variant(opt.variant);
  if (opt.x0 >= 0) cfg.x0 = opt.x0;
  return {std::move(m), cfg, st};
}

Json estimate_json(const SimPlan& p, const SimEstimate& e) {
  return Json{{"statistic", std::string(to_string(p.statistic.kind))},
              {"variant", std::string(to_string(p.config.variant))},
              {"x0", p.config.x0},
              {"point", num(e.point)},
              {"std_error", num(e.std_error)},
              {"n", e.n},
              {"seed", e.seed}};
}

std::string cmd_simulate(const Options& opt) {
  if (opt.stat.empty()) throw GateError("--stat is required");
  const SimPlan p = plan(opt, opt.stat);
  const SimEstimate e = estimate(p.model, p.config, p.statistic);
  if (opt.format == "csv")
    return "statistic,point,std_error,n,seed\n" + std::string(to_string(p.statistic.kind)) + "," + csv_num(e.point) +
           "," + csv_num(e.std_error) + "," + std::to_string(e.n) + "," + std::to_string(e.seed) + "\n";
  return finish(estimate_json(p, e));
}

double analytic_value(const SimPlan& p, const Options& opt) {
  const QueueModel& m = p.model;
  switch (p.statistic.kind) {
    case StatKind::mean_busy_period: return mean_busy_period(m);
    case StatKind::extinction_prob: return extinction_probability(m, p.config.x0).e_star;
    case StatKind::mean_extinction_time: return mean_extinction_time(m, p.config.x0);
    case StatKind::mean_catastrophe_time: return catastrophe::catastrophe_time_moments(m, p.config.x0).mean;
    case StatKind::var_catastrophe_time: return catastrophe::catastrophe_time_moments(m, p.config.x0).variance;
    case StatKind::p_ij:
      return transition_probability(m, p.config.variant, p.config.x0, p.statistic.target_state, p.statistic.t, opt.order).value;
    case StatKind::stationary_tv: return 0.0;
  }
  return 0.0;
}

Json verdict(const Options& opt, const std::string& stat, bool& passed) {
  const SimPlan p = plan(opt, stat);
  const double analytic = analytic_value(p, opt);
  Json j;
  j["quantity"] = std::string(to_string(p.statistic.kind));
  j["analytic"] = num(analytic);
  if (std::isinf(analytic)) {
    // A finite simulated estimate cannot confirm an infinite value.
    j["estimate"] = "censored";
    j["pass"] = false;
    passed = false;
    return j;
  }
  const SimEstimate e = estimate(p.model, p.config, p.statistic);
  double z = 0.0;
  bool ok = false;
  if (p.statistic.kind == StatKind::stationary_tv) {
    ok = e.point <= 0.01;
  } else {
    z = e.std_error > 0.0 ? (e.point - analytic) / e.std_error
                          : (e.point == analytic ? 0.0 : std::numeric_limits<double>::infinity());
    ok = std::abs(z) <= 4.0;
  }
  j["estimate"] = num(e.point);
  j["std_error"] = num(e.std_error);
  j["z"] = num(z);
  j["pass"] = ok;
  j["n"] = e.n;
  j["seed"] = e.seed;
  passed = passed && ok;
  return j;
}

// Statistics that have a finite analytic value for this model.
std::vector<std::string> default_suite(const QueueModel& m) {
  std::vector<std::string> out;
  if (m.beta() > 0.0) {
    out = {"mean_catastrophe_time", "var_catastrophe_time"};
  } else {
    if (m.regime() == Regime::subcritical) out.push_back("mean_extinction_time");
    if (m.regime() == Regime::supercritical) out.push_back("extinction_prob");
    if (m.total_resurrection() > 0.0 && m.regime() == Regime::subcritical) out.push_back("mean_busy_period");
  }
  return out;
}

std::string cmd_compare(const Options& opt, bool& passed) {
  if (!opt.stat.empty()) return finish(verdict(opt, opt.stat, passed));
  const std::vector<std::string> suite = default_suite(load(opt));
  if (suite.empty()) throw GateError("no comparable statistic for this model");
  Json list = Json::array();
  for (const std::string& stat : suite) list.push_back(verdict(opt, stat, passed));
  return finish(Json{{"verdicts", list}, {"pass", passed}});
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analytic performance quantities for the M^X/M/c queue with idle-time control and catastrophes", "mxq"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("model", opt.model_path, "Model JSON file")->required();
    sub->add_option("--out", opt.out_path, "Write the report to this path");
    sub->add_option("--format", opt.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--J", opt.J, "Truncation index (0 = automatic)")->check(CLI::NonNegativeNumber);
  };
  auto add_sim = [&](CLI::App* sub) {
    sub->add_option("--stat", opt.stat, "Statistic (compare runs a default suite without it)");
    sub->add_option("--variant", opt.variant, "stopped, resurrect, catastrophe or absorbed_M");
    sub->add_option("--reps", opt.reps, "Replications (accepts 1e6)");
    sub->add_option("--seed", opt.seed, "Random seed");
    sub->add_option("--horizon", opt.horizon, "Time horizon per replication");
    sub->add_option("--k", opt.k, "Starting state for extinction statistics");
    sub->add_option("--i", opt.i, "Starting state for p_ij");
    sub->add_option("--j", opt.j, "Catastrophe start state, or p_ij target");
    sub->add_option("--x0", opt.x0, "Override the starting state");
    sub->add_option("--t", opt.t_list, "Time for p_ij or extinction_prob");
    sub->add_option("--order", opt.order, "Inversion order");
    sub->add_option("--threads", opt.threads, "Worker threads (0 = all cores)");
  };

  auto* validate = app.add_subcommand("validate", "Check a model file");
  add_common(validate);
  auto* analyze = app.add_subcommand("analyze", "Equilibrium and moments");
  add_common(analyze);
  auto* extinction = app.add_subcommand("extinction", "Extinction probability, occupation times, mean time");
  add_common(extinction);
  extinction->add_option("--k", opt.k, "Starting state")->check(CLI::PositiveNumber);
  auto* cat = app.add_subcommand("catastrophe", "First effective catastrophe time");
  add_common(cat);
  cat->add_option("--j", opt.j, "Starting state")->check(CLI::NonNegativeNumber);
  cat->add_option("--lambda", opt.lambda_list, "Comma-separated points for the transform");
  auto* inv = app.add_subcommand("invert", "Transition probabilities by numerical inversion");
  add_common(inv);
  inv->add_option("--variant", opt.variant, "stopped, resurrect, catastrophe or absorbed_M");
  inv->add_option("--i", opt.i, "Source state");
  inv->add_option("--j", opt.j, "Target state (-1 for absorbed_M)");
  inv->add_option("--t", opt.t_list, "Comma-separated times")->required();
  inv->add_option("--order", opt.order, "Inversion order (8..16, even)");
  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate");
  add_common(sim);
  add_sim(sim);
  auto* cmp = app.add_subcommand("compare", "Analytic value against a Monte Carlo estimate");
  add_common(cmp);
  add_sim(cmp);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream x;
    const int code = app.exit(e, o, x);
    out << o.str();
    err << x.str();
    return code == 0 ? kOk : kUsage;
  }

  if (*inv && opt.format == "json" && inv->count("--format") == 0) opt.format = "csv";

  try {
    bool passed = true;
    std::string report;
    if (*validate) report = cmd_validate(opt);
    else if (*analyze) report = cmd_analyze(opt);
    else if (*extinction) report = cmd_extinction(opt);
    else if (*cat) report = cmd_catastrophe(opt);
    else if (*inv) report = cmd_invert(opt);
    else if (*sim) report = cmd_simulate(opt);
    else if (*cmp) report = cmd_compare(opt, passed);
    emit(opt, report, out);
    return passed ? kOk : kVerdictFailed;
  } catch (const ModelError& e) {
    err << "invalid model: " << e.what() << "\n";
    return kInvalidModel;
  } catch (const GateError& e) {
    err << "error: " << e.what() << "\n";
    return kGate;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace mxq::cli
