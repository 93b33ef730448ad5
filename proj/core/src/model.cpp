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

#include "mxq/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#ifdef MXQ_VENDORED_JSON
#include "json.hpp"
#else
#include <nlohmann/json.hpp>
#endif

#include "mxq/error.hpp"
#include "mxq/numeric.hpp"

namespace mxq {

namespace {

void check_rate(double v, std::string_view what, int index) {
  std::ostringstream msg;
  if (!std::isfinite(v)) {
    msg << "non-finite rate " << what << "[" << index << "]";
    throw ModelError(msg.str());
  }
  if (v < 0.0) {
    msg << "negative rate " << what << "[" << index << "] = " << v;
    throw ModelError(msg.str());
  }
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::subcritical: return "subcritical";
    case Regime::critical: return "critical";
    case Regime::supercritical: return "supercritical";
  }
  return "unknown";
}

std::string_view to_string(ProcessVariant variant) {
  switch (variant) {
    case ProcessVariant::stopped: return "stopped";
    case ProcessVariant::resurrect: return "resurrect";
    case ProcessVariant::catastrophe: return "catastrophe";
    case ProcessVariant::absorbed_M: return "absorbed_M";
  }
  return "unknown";
}

ProcessVariant parse_variant(std::string_view name) {
  if (name == "stopped") return ProcessVariant::stopped;
  if (name == "resurrect") return ProcessVariant::resurrect;
  if (name == "catastrophe") return ProcessVariant::catastrophe;
  if (name == "absorbed_M" || name == "absorbed") return ProcessVariant::absorbed_M;
  throw GateError("unknown process variant '" + std::string(name) + "'");
}

QueueModel QueueModel::validate(const RawParameters& raw) {
  if (raw.c < 1) throw ModelError("c must be a positive integer");
  if (!std::isfinite(raw.beta)) throw ModelError("non-finite catastrophe rate beta");
  if (raw.beta < 0.0) throw ModelError("negative catastrophe rate beta");

  int max_b = 0;
  for (const auto& [j, v] : raw.b) {
    if (j < 0) throw ModelError("batch index must be >= 0");
    if (j == 1) throw ModelError("b1 is derived from the other rates and must not be supplied");
    check_rate(v, "b", j);
    if (v > 0.0) max_b = std::max(max_b, j);
  }
  for (const auto& [j, v] : raw.h) {
    if (j < 1) throw ModelError("resurrection index must be >= 1");
    check_rate(v, "h", j);
  }

  const auto b0 = raw.b.find(0);
  if (b0 == raw.b.end() || !(b0->second > 0.0)) throw ModelError("no service capacity (b0 must be > 0)");

  QueueModel m;
  m.c_ = raw.c;
  m.beta_ = raw.beta;
  m.b_.assign(static_cast<std::size_t>(std::max(max_b, 1)) + 1, 0.0);
  for (const auto& [j, v] : raw.b) m.b_[static_cast<std::size_t>(j)] = v;

  numeric::CompensatedSum arrivals;
  numeric::CompensatedSum drift(-static_cast<double>(m.c_) * m.b_[0]);
  for (std::size_t j = 2; j < m.b_.size(); ++j) {
    arrivals.add(m.b_[j]);
    drift.add_product(static_cast<double>(j - 1), m.b_[j]);
  }
  m.arrival_rate_ = arrivals.value();
  if (!(m.arrival_rate_ > 0.0)) throw ModelError("no batch arrivals (sum of b_j for j >= 2 must be > 0)");

  numeric::CompensatedSum total(m.b_[0]);
  for (std::size_t j = 2; j < m.b_.size(); ++j) total.add(m.b_[j]);
  m.b_[1] = -total.value();
  m.drift_ = drift.value();

  int max_h = 0;
  for (const auto& [j, v] : raw.h)
    if (v > 0.0) max_h = std::max(max_h, j);
  m.h_.assign(static_cast<std::size_t>(max_h) + 1, 0.0);
  for (const auto& [j, v] : raw.h)
    if (j <= max_h) m.h_[static_cast<std::size_t>(j)] = v;
  numeric::CompensatedSum htot;
  numeric::CompensatedSum mu1;
  for (std::size_t j = 1; j < m.h_.size(); ++j) {
    htot.add(m.h_[j]);
    mu1.add_product(static_cast<double>(j), m.h_[j]);
  }
  m.h_total_ = htot.value();
  m.mu1_ = mu1.value();

  // |B_c'(1)| below this is treated as exactly critical.
  const double threshold = 1e-10 * (std::abs(m.b_[1]) + m.c_ * m.b_[0]);
  if (std::abs(m.drift_) < threshold)
    m.regime_ = Regime::critical;
  else
    m.regime_ = m.drift_ < 0.0 ? Regime::subcritical : Regime::supercritical;
  return m;
}

double QueueModel::b(int j) const noexcept {
  if (j < 0 || j >= static_cast<int>(b_.size())) return 0.0;
  return b_[static_cast<std::size_t>(j)];
}

double QueueModel::h(int j) const noexcept {
  if (j < 1 || j >= static_cast<int>(h_.size())) return 0.0;
  return h_[static_cast<std::size_t>(j)];
}

RawParameters QueueModel::raw() const {
  RawParameters r;
  r.c = c_;
  r.beta = beta_;
  for (std::size_t j = 0; j < b_.size(); ++j)
    if (j != 1 && b_[j] > 0.0) r.b[static_cast<int>(j)] = b_[j];
  for (std::size_t j = 1; j < h_.size(); ++j)
    if (h_[j] > 0.0) r.h[static_cast<int>(j)] = h_[j];
  return r;
}

QueueModel QueueModel::with_beta(double beta) const {
  RawParameters r = raw();
  r.beta = beta;
  return validate(r);
}

QueueModel QueueModel::with_resurrection(const std::map<int, double>& h) const {
  RawParameters r = raw();
  r.h = h;
  return validate(r);
}

std::vector<double> B_coefficients(const QueueModel& model, int i) {
  if (i < 1 || i > model.servers()) throw GateError("server index out of range 1..c");
  std::vector<double> coeffs(model.b_coefficients().begin(), model.b_coefficients().end());
  const double shift = static_cast<double>(i - 1) * model.service_rate();
  coeffs[0] += shift;
  coeffs[1] -= shift;
  return coeffs;
}

GfValue eval_B(const QueueModel& model, int i, double s) {
  if (!(std::abs(s) <= 1.0)) throw GateError("generating functions are evaluated on [-1, 1]");
  const std::vector<double> coeffs = B_coefficients(model, i);
  const auto v = numeric::horner_with_derivatives(coeffs, s);
  return {v.value, v.d1, v.d2};
}

GfValue eval_H(const QueueModel& model, double s) {
  if (!(std::abs(s) <= 1.0)) throw GateError("generating functions are evaluated on [-1, 1]");
  const auto v = numeric::horner_with_derivatives(model.h_coefficients(), s);
  return {v.value, v.d1, v.d2};
}

std::map<int, double> truncate_tail(const std::function<double(int)>& rate, int first,
                                    double total_mass, double eps_tail) {
  std::map<int, double> out;
  numeric::CompensatedSum acc;
  for (int j = first; j < first + 1'000'000; ++j) {
    const double r = rate(j);
    if (r > 0.0) out[j] = r;
    acc.add(r);
    if (total_mass - acc.value() <= eps_tail * total_mass) return out;
  }
  throw ModelError("tail truncation did not reach the requested mass");
}

std::map<int, double> geometric_rates(double total, double ratio, int first, double eps_tail) {
  if (!(ratio >= 0.0 && ratio < 1.0)) throw ModelError("geometric ratio must lie in [0, 1)");
  if (!(total > 0.0)) throw ModelError("geometric total rate must be > 0");
  return truncate_tail(
      [=](int j) { return total * (1.0 - ratio) * std::pow(ratio, j - first); }, first, total,
      eps_tail);
}

namespace {

std::map<int, double> parse_rate_map(const nlohmann::json& obj, std::string_view name) {
  std::map<int, double> out;
  if (obj.is_null()) return out;
  if (!obj.is_object()) throw ModelError("'" + std::string(name) + "' must be an object of index -> rate");
  for (const auto& [key, value] : obj.items()) {
    int index = 0;
    std::size_t used = 0;
    try {
      index = std::stoi(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != key.size() || key.empty())
      throw ModelError("'" + std::string(name) + "' key '" + key + "' is not an integer index");
    if (!value.is_number()) throw ModelError("'" + std::string(name) + "[" + key + "]' is not a number");
    out[index] = value.get<double>();
  }
  return out;
}

}  // namespace

RawParameters parse_model_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ModelError("model file must contain a JSON object");
  RawParameters raw;
  if (!doc.contains("c") || !doc["c"].is_number_integer()) throw ModelError("'c' must be an integer");
  raw.c = doc["c"].get<int>();
  if (!doc.contains("b")) throw ModelError("missing 'b' rates");
  raw.b = parse_rate_map(doc["b"], "b");
  if (doc.contains("h")) raw.h = parse_rate_map(doc["h"], "h");
  if (doc.contains("beta")) {
    if (!doc["beta"].is_number()) throw ModelError("'beta' must be a number");
    raw.beta = doc["beta"].get<double>();
  }
  return raw;
}

RawParameters load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot read model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_json(buf.str());
}

std::string model_to_json(const QueueModel& model) {
  const RawParameters r = model.raw();
  nlohmann::json doc;
  doc["c"] = r.c;
  doc["b"] = nlohmann::json::object();
  for (const auto& [j, v] : r.b) doc["b"][std::to_string(j)] = v;
  doc["h"] = nlohmann::json::object();
  for (const auto& [j, v] : r.h) doc["h"][std::to_string(j)] = v;
  doc["beta"] = r.beta;
  return doc.dump();
}

}  // namespace mxq
