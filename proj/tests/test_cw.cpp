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

#include <doctest.h>

#include <cmath>
#include <string>

#include "qmf/amplify.hpp"
#include "qmf/cw.hpp"
#include "qmf/error.hpp"

using namespace qmf;
using namespace qmf::cw;

TEST_CASE("default template counts") {
  const CwSearchSpec d;
  CHECK(n_total(d) == doctest::Approx(2e28).epsilon(1e-12));
  CHECK(n_sky_f1(d) == doctest::Approx(1e20).epsilon(1e-12));
  CHECK(n_f0(d) == doctest::Approx(2e8).epsilon(1e-12));
}

TEST_CASE("scaling laws") {
  const CwSearchSpec d;
  auto s = d;
  s.f_khz = 2;
  CHECK(n_total(s) / n_total(d) == doctest::Approx(4));
  CHECK(n_sky_f1(s) / n_sky_f1(d) == doctest::Approx(4));
  s = d;
  s.t_obs_yr = 2;
  CHECK(n_total(s) / n_total(d) == doctest::Approx(8));
  CHECK(n_sky_f1(s) / n_sky_f1(d) == doctest::Approx(4));
  CHECK(n_f0(s) / n_f0(d) == doctest::Approx(2));
  s = d;
  s.delta_f_hz = 3;
  CHECK(n_total(s) / n_total(d) == doctest::Approx(3));
  s = d;
  s.delta_f1 = 5e-9;
  CHECK(n_total(s) / n_total(d) == doctest::Approx(5));
}

TEST_CASE("quantum cost with defaults") {
  const auto c = quantum_cost(CwSearchSpec{});
  CHECK(c.ell == 6);
  // The search runs over sky position and spin-down only.
  CHECK(std::ldexp(1.0, int(c.p)) > M_PI * 1e10);
  CHECK(std::ldexp(1.0, int(c.p) - 1) <= M_PI * 1e10);
  CHECK(c.p == 35);
  CHECK(c.classical_ops == doctest::Approx(1e20));
  CHECK(c.iterations == doctest::Approx(6 * (std::ldexp(1.0, int(c.p)) - 1)));
  CHECK(c.iterations == doctest::Approx(2e11).epsilon(0.10));
  CHECK(c.quantum_ops == doctest::Approx(c.gate_factor * c.iterations));
  CHECK(c.speedup > 5e7);
  CHECK(c.speedup < 2e8);
}

TEST_CASE("speedup exceeds 10 for large searches") {
  for (double f : {0.1, 0.3, 1.0, 2.0}) {
    for (double t : {0.01, 0.1, 1.0}) {
      for (double delta : {1e-3, 1e-6, 1e-9}) {
        CwSearchSpec s;
        s.f_khz = f;
        s.t_obs_yr = t;
        s.delta_target = delta;
        if (n_sky_f1(s) < 1e6) continue;
        CHECK(quantum_cost(s).speedup > 10);
      }
    }
  }
}

TEST_CASE("validation and json") {
  CwSearchSpec bad;
  bad.f_khz = -1;
  CHECK_THROWS_AS(quantum_cost(bad), InputError);
  bad = {};
  bad.delta_target = 1.5;
  CHECK_THROWS_AS(quantum_cost(bad), InputError);

  const auto s = spec_from_json(R"({"f_khz": 0.5, "t_obs_yr": 2})");
  CHECK(s.f_khz == 0.5);
  CHECK(s.t_obs_yr == 2);
  CHECK(s.delta_f_hz == 1.0);
  CHECK_THROWS_AS(spec_from_json("[1,2]"), InputError);
  const auto text = report_json(s, quantum_cost(s));
  CHECK(text.find("\"speedup\"") != std::string::npos);
  CHECK(text == report_json(s, quantum_cost(s)));
}
