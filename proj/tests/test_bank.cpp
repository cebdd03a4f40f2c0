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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <utility>

#include "qmf/bank.hpp"
#include "qmf/dsp.hpp"
#include "qmf/error.hpp"

using namespace qmf;
using namespace qmf::bank;

namespace {

BankSpec small_spec() {
  BankSpec s;
  s.f0_min = 20;
  s.f0_max = 60;
  s.n_f0 = 8;
  s.f1_min = 0;
  s.f1_max = 20;
  s.n_f1 = 4;
  s.fs = 256;
  s.m_samples = 1024;
  s.dur = 2.0;
  return s;
}

}  // namespace

TEST_CASE("bank_size") {
  auto s = small_spec();
  CHECK(bank_size(s) == 32);
  s.n_f0 = 512;
  s.n_f1 = 256;
  CHECK(bank_size(s) == 131072);
  s.n_f0 = 0;
  CHECK_THROWS_AS(bank_size(s), InputError);
}

TEST_CASE("lattice corners and bijection") {
  const auto s = small_spec();
  const auto first = index_to_params(s, 0);
  CHECK(first.f0 == 20);
  CHECK(first.f1 == 0);
  const auto last = index_to_params(s, 31);
  CHECK(last.f0 == doctest::Approx(60));
  CHECK(last.f1 == doctest::Approx(20));
  CHECK_THROWS_AS(index_to_params(s, 32), InputError);

  // Nested loops with f0 innermost enumerate the same lattice in order.
  std::uint64_t i = 0;
  std::set<std::pair<double, double>> seen;
  for (std::size_t b = 0; b < s.n_f1; ++b) {
    for (std::size_t a = 0; a < s.n_f0; ++a, ++i) {
      const auto p = index_to_params(s, i);
      CHECK(p.f0 == doctest::Approx(20 + 40.0 * double(a) / 7));
      CHECK(p.f1 == doctest::Approx(20.0 * double(b) / 3));
      CHECK(p.dur == s.dur);
      CHECK(p.phi0 == 0.0);
      seen.emplace(p.f0, p.f1);
    }
  }
  CHECK(seen.size() == bank_size(s));

  auto single = s;
  single.n_f0 = 1;
  single.f0_max = single.f0_min;
  CHECK(index_to_params(single, 0).f0 == 20);
}

TEST_CASE("waveform shape") {
  const double fs = 1000;
  // f1 = 0, phase pi/2: a cosine away from the taper.
  const auto c = waveform({50, 0, 1.0, std::numbers::pi / 2}, fs, 2000);
  CHECK(c.samples.size() == 2000);
  CHECK(c.dt == doctest::Approx(1e-3));
  for (std::size_t j = 100; j < 900; j += 37)
    CHECK(c.samples[j] == doctest::Approx(std::cos(2 * std::numbers::pi * 50 * double(j) / fs)).epsilon(1e-12));
  for (std::size_t j = 1000; j < 2000; ++j) CHECK(c.samples[j] == 0.0);
  CHECK(std::abs(c.samples[0]) < 1e-12);

  // Instantaneous frequency from zero crossings around t = 0.5 s: 100 + 100*0.5.
  const auto w = waveform({100, 100, 1.0, 0}, fs, 1000);
  int crossings = 0;
  for (std::size_t j = 450; j < 550; ++j)
    if ((w.samples[j] < 0) != (w.samples[j + 1] < 0)) ++crossings;
  CHECK(crossings / 2.0 / 0.1 == doctest::Approx(150).epsilon(0.05));
}

TEST_CASE("waveform input checks") {
  CHECK_THROWS_AS(waveform({400, 300, 1.0, 0}, 1000, 1000), InputError);
  CHECK_THROWS_AS(waveform({600, 0, 1.0, 0}, 1000, 1000), InputError);
  CHECK_THROWS_AS(waveform({100, 0, 2.0, 0}, 1000, 1000), InputError);
  CHECK_THROWS_AS(waveform({100, 0, 0.0, 0}, 1000, 1000), InputError);
  const auto a = waveform({100, 30, 0.7, 0.2}, 1000, 1000);
  const auto b = waveform({100, 30, 0.7, 0.2}, 1000, 1000);
  CHECK(a.samples == b.samples);
}

TEST_CASE("a template matches itself better than any other bank member") {
  const auto s = small_spec();
  const auto psd = dsp::white_psd(1.0, 1 / s.fs, s.m_samples);
  const std::uint64_t target = 13;
  const auto data = dsp::forward_fft(waveform(index_to_params(s, target), s.fs, s.m_samples));
  double self = 0, best_other = 0;
  for (std::uint64_t i = 0; i < bank_size(s); ++i) {
    const auto qc = dsp::complex_template(index_to_params(s, i), s.fs, s.m_samples, psd);
    const double rho = dsp::max_snr(dsp::snr_series(data, qc, psd)).rho_max;
    if (i == target) self = rho; else best_other = std::max(best_other, rho);
  }
  CHECK(self > best_other);
}

TEST_CASE("bank spec json round trip") {
  const auto s = small_spec();
  const auto back = bank_spec_from_json(bank_spec_to_json(s));
  CHECK(back.f0_min == s.f0_min);
  CHECK(back.n_f1 == s.n_f1);
  CHECK(back.m_samples == s.m_samples);
  CHECK(back.dur == s.dur);
  CHECK_THROWS_AS(bank_spec_from_json("{\"f0_min\": 1}"), InputError);
  CHECK_THROWS_AS(bank_spec_from_json("not json"), InputError);
}
