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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "mxq");
  std::ostringstream out;
  std::ostringstream err;
  const int code = mxq::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string model(const std::string& name) { return std::string(MXQ_MODELS_DIR) + "/" + name; }

}  // namespace

TEST_CASE("analyze routes by beta") {
  const Result a = run({"analyze", model("model_A.json")});
  REQUIRE(a.code == 0);
  const auto ja = nlohmann::json::parse(a.out);
  CHECK(ja["pi"][0].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ja["EN"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ja["busy_period"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ja["classification"]["kind"] == "positive_recurrent");

  const Result d = run({"analyze", model("model_D.json")});
  REQUIRE(d.code == 0);
  const auto jd = nlohmann::json::parse(d.out);
  CHECK(jd["pi"][0].get<double>() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(jd["catastrophe_time"]["mean"].get<double>() == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
  CHECK(jd["asymptotes"]["small_beta"]["limit"].get<double>() == 2.0);
}

TEST_CASE("JSON output round-trips exactly") {
  const Result c = run({"analyze", model("model_C.json")});
  REQUIRE(c.code == 0);
  const auto j = nlohmann::json::parse(c.out);
  const double en = j["EN"].get<double>();
  std::ostringstream again;
  again << nlohmann::json(en).dump();
  CHECK(c.out.find("\"EN\": " + again.str()) != std::string::npos);
  CHECK(std::stod(again.str()) == en);
  for (const auto& p : j["pi"]) {
    const double v = p.get<double>();
    CHECK(nlohmann::json::parse(nlohmann::json(v).dump()).get<double>() == v);
  }
}

TEST_CASE("CSV output uses 12 significant digits") {
  const Result c = run({"analyze", model("model_C.json"), "--format", "csv"});
  REQUIRE(c.code == 0);
  CHECK(c.out.rfind("state,probability\n0,0.333333333333\n", 0) == 0);
  const Result inv = run({"invert", model("model_A.json"), "--i", "0", "--j", "0", "--t", "1,50"});
  REQUIRE(inv.code == 0);
  CHECK(inv.out.rfind("t,value,error_estimate\n1,", 0) == 0);
  CHECK(inv.out.find("\n50,0.5000") != std::string::npos);
}

TEST_CASE("infinity is written as a string") {
  const Result b = run({"extinction", model("model_B.json"), "--k", "1"});
  REQUIRE(b.code == 0);
  const auto j = nlohmann::json::parse(b.out);
  CHECK(j["mean_time"] == "inf");
  CHECK(j["e_star"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(j["m_star"][0].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("exit codes") {
  const Result bad = run({"validate", model("bad.json")});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("no service capacity") != std::string::npos);
  CHECK(run({"validate", model("missing.json")}).code == 2);
  const Result transient = run({"analyze", model("model_B.json")});
  CHECK(transient.code == 3);
  CHECK(transient.err.find("resurrection required") != std::string::npos);
  CHECK(run({"catastrophe", model("model_A.json")}).code == 3);
  CHECK(run({"frobnicate", model("model_A.json")}).code == 64);
  CHECK(run({"analyze"}).code == 64);
  CHECK(run({"analyze", model("model_A.json"), "--format", "xml"}).code == 64);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"validate", model("model_A.json")}).code == 0);
}

TEST_CASE("catastrophe subcommand") {
  const Result r = run({"catastrophe", model("model_D.json"), "--j", "0", "--lambda", "1"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["catastrophe_time"]["mean"].get<double>() == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
  CHECK(j["catastrophe_time"]["delta"][0]["delta"].get<double>() == doctest::Approx(0.17980).epsilon(1e-4));
  CHECK(j["asymptotes"]["large_beta"]["limit"].get<double>() == 1.0);
}

TEST_CASE("simulate and compare") {
  const Result s = run({"simulate", model("model_D.json"), "--stat", "mean_catastrophe_time", "--reps", "1e4",
                        "--seed", "7"});
  REQUIRE(s.code == 0);
  const auto js = nlohmann::json::parse(s.out);
  CHECK(js["n"] == 10000);
  CHECK(js["seed"] == 7);
  CHECK(js["std_error"].get<double>() > 0.0);
  const Result again = run({"simulate", model("model_D.json"), "--stat", "mean_catastrophe_time", "--reps", "1e4",
                            "--seed", "7"});
  CHECK(again.out == s.out);

  const Result c = run({"compare", model("model_D.json"), "--stat", "mean_catastrophe_time", "--j", "0", "--reps",
                        "1e6", "--seed", "42"});
  CHECK(c.code == 0);
  const auto jc = nlohmann::json::parse(c.out);
  CHECK(jc["pass"] == true);
  CHECK(std::abs(jc["z"].get<double>()) <= 4.0);

  const Result suite = run({"compare", model("model_A.json"), "--reps", "1e5"});
  CHECK(suite.code == 0);
  CHECK(nlohmann::json::parse(suite.out)["verdicts"].size() == 2);

  // An infinite analytic value cannot be confirmed by a finite estimate.
  const Result inf = run({"compare", model("model_B.json"), "--stat", "mean_extinction_time", "--reps", "10"});
  CHECK(inf.code == 1);
  CHECK(nlohmann::json::parse(inf.out)["pass"] == false);

  CHECK(run({"simulate", model("model_A.json"), "--stat", "median"}).code == 3);
  CHECK(run({"simulate", model("model_A.json"), "--stat", "mean_busy_period", "--reps", "abc"}).code == 3);
}

TEST_CASE("--out writes the report to a file") {
  const std::string path = "mxq_cli_test_out.json";
  std::remove(path.c_str());
  const Result r = run({"analyze", model("model_A.json"), "--out", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(nlohmann::json::parse(buf.str())["EN"].get<double>() == 1.0);
  std::remove(path.c_str());
}
