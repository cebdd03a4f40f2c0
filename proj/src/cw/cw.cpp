// Copyright 2026 The qmf Authors
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

#include "qmf/cw.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "qmf/amplify.hpp"
#include "qmf/error.hpp"

namespace qmf::cw {

namespace {

constexpr double kReversibleOverhead = 3.0;
constexpr double kUncompute = 2.0;

}  // namespace

void CwSearchSpec::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError(std::string(name) + " must be positive");
  };
  positive(f_khz, "f");
  positive(t_obs_yr, "t_obs");
  positive(delta_f_hz, "delta_f");
  positive(delta_f1, "delta_f1");
  if (!(delta_target > 0.0 && delta_target < 1.0)) throw InputError("delta_target must lie in (0, 1)");
}

double n_total(const CwSearchSpec& s) {
  s.validate();
  return 2e28 * std::pow(s.f_khz, 2) * std::pow(s.t_obs_yr, 3) * s.delta_f_hz * (s.delta_f1 / 1e-9);
}

double n_sky_f1(const CwSearchSpec& s) {
  s.validate();
  return 1e20 * std::pow(s.f_khz, 2) * std::pow(s.t_obs_yr, 2) * (s.delta_f1 / 1e-9);
}

double n_f0(const CwSearchSpec& s) {
  s.validate();
  return 2e8 * s.t_obs_yr;
}

QuantumCost quantum_cost(const CwSearchSpec& s) {
  QuantumCost c;
  const double n = n_sky_f1(s);
  // Smallest p with 2^p > pi sqrt(N), in floating point since N can exceed 2^64.
  c.p = static_cast<unsigned>(std::floor(std::log2(std::numbers::pi * std::sqrt(n)))) + 1;
  c.ell = amplify::repetitions_for(s.delta_target);
  c.iterations = static_cast<double>(c.ell) * (std::ldexp(1.0, static_cast<int>(c.p)) - 1.0);
  c.gate_factor = kReversibleOverhead * kUncompute;
  c.quantum_ops = c.gate_factor * c.iterations;
  c.classical_ops = n;
  c.speedup = c.classical_ops / c.quantum_ops;
  return c;
}

CwSearchSpec spec_from_json(const std::string& json_text) {
  CwSearchSpec s;
  try {
    const auto j = nlohmann::json::parse(json_text);
    s.f_khz = j.value("f_khz", s.f_khz);
    s.t_obs_yr = j.value("t_obs_yr", s.t_obs_yr);
    s.delta_f_hz = j.value("delta_f_hz", s.delta_f_hz);
    s.delta_f1 = j.value("delta_f1", s.delta_f1);
    s.delta_target = j.value("delta_target", s.delta_target);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("cw spec: ") + e.what());
  }
  s.validate();
  return s;
}

std::string report_json(const CwSearchSpec& s, const QuantumCost& c) {
  nlohmann::ordered_json j;
  j["spec"] = {{"f_khz", s.f_khz},
               {"t_obs_yr", s.t_obs_yr},
               {"delta_f_hz", s.delta_f_hz},
               {"delta_f1", s.delta_f1},
               {"delta_target", s.delta_target}};
  j["n_total"] = n_total(s);
  j["n_sky_f1"] = n_sky_f1(s);
  j["n_f0"] = n_f0(s);
  j["p"] = c.p;
  j["ell"] = c.ell;
  j["iterations"] = c.iterations;
  j["gate_factor"] = c.gate_factor;
  j["classical_ops"] = c.classical_ops;
  j["quantum_ops"] = c.quantum_ops;
  j["speedup"] = c.speedup;
  return j.dump(2);
}

}  // namespace qmf::cw
