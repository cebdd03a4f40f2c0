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

#include "qmf/bank.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "qmf/error.hpp"

namespace qmf::bank {

void ChirpParams::validate() const {
  if (!(f0 > 0.0)) throw InputError("chirp start frequency must be positive");
  if (!(dur > 0.0)) throw InputError("chirp duration must be positive");
  if (!(f0 + f1 * dur > 0.0)) throw InputError("chirp frequency must stay positive");
}

void BankSpec::validate() const {
  if (n_f0 == 0 || n_f1 == 0) throw InputError("bank axis counts must be at least 1");
  if (n_f0 > 1 && !(f0_max > f0_min)) throw InputError("f0 range is degenerate");
  if (n_f1 > 1 && !(f1_max > f1_min)) throw InputError("f1 range is degenerate");
  if (!(fs > 0.0)) throw InputError("fs must be positive");
  if (m_samples < 2) throw InputError("m_samples must be at least 2");
  if (!(dur > 0.0)) throw InputError("template duration must be positive");
  if (dur * fs > static_cast<double>(m_samples) + 1e-9)
    throw InputError("template duration does not fit in m_samples");
}

std::uint64_t bank_size(const BankSpec& spec) {
  spec.validate();
  return static_cast<std::uint64_t>(spec.n_f0) * spec.n_f1;
}

namespace {

double lattice(double lo, double hi, std::size_t n, std::size_t idx) {
  if (n == 1) return lo;
  return lo + (hi - lo) * static_cast<double>(idx) / static_cast<double>(n - 1);
}

}  // namespace

ChirpParams index_to_params(const BankSpec& spec, TemplateIndex i) {
  const auto n = bank_size(spec);
  if (i >= n) throw InputError("template index " + std::to_string(i) + " out of range");
  const std::size_t a = i % spec.n_f0;
  const std::size_t b = i / spec.n_f0;
  ChirpParams p;
  p.f0 = lattice(spec.f0_min, spec.f0_max, spec.n_f0, a);
  p.f1 = lattice(spec.f1_min, spec.f1_max, spec.n_f1, b);
  p.dur = spec.dur;
  p.phi0 = 0.0;
  return p;
}

TimeSeries waveform(const ChirpParams& params, double fs, std::size_t m) {
  params.validate();
  if (!(fs > 0.0)) throw InputError("fs must be positive");
  const double nyquist = fs / 2.0;
  // Linear frequency: the extremes on [0, dur) sit at the endpoints.
  const double f_end = params.frequency_at(params.dur);
  if (params.f0 > nyquist || f_end > nyquist)
    throw InputError("chirp frequency exceeds Nyquist (" + std::to_string(std::max(params.f0, f_end)) +
                     " Hz > " + std::to_string(nyquist) + " Hz)");

  const auto n_wave = static_cast<std::size_t>(std::ceil(params.dur * fs - 1e-9));
  if (n_wave > m) throw InputError("waveform does not fit in the requested length");

  TimeSeries ts;
  ts.dt = 1.0 / fs;
  ts.samples.assign(m, 0.0);
  const auto taper = static_cast<std::size_t>(kTaperFraction * static_cast<double>(n_wave));
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t j = 0; j < n_wave; ++j) {
    const double t = static_cast<double>(j) / fs;
    double w = 1.0;
    if (taper > 0) {
      const std::size_t from_edge = std::min(j, n_wave - 1 - j);
      if (from_edge < taper)
        w = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(from_edge) /
                                  static_cast<double>(taper)));
    }
    ts.samples[j] = w * std::sin(params.phi0 + two_pi * (params.f0 * t + 0.5 * params.f1 * t * t));
  }
  return ts;
}

BankSpec bank_spec_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bank config: ") + e.what());
  }
  BankSpec s;
  try {
    s.f0_min = j.at("f0_min").get<double>();
    s.f0_max = j.at("f0_max").get<double>();
    s.n_f0 = j.at("n_f0").get<std::size_t>();
    s.f1_min = j.at("f1_min").get<double>();
    s.f1_max = j.at("f1_max").get<double>();
    s.n_f1 = j.at("n_f1").get<std::size_t>();
    s.fs = j.at("fs_hz").get<double>();
    s.m_samples = j.at("m_samples").get<std::size_t>();
    s.dur = j.at("dur_s").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bank config: ") + e.what());
  }
  s.validate();
  return s;
}

std::string bank_spec_to_json(const BankSpec& s) {
  nlohmann::json j = {{"f0_min", s.f0_min}, {"f0_max", s.f0_max}, {"n_f0", s.n_f0},
                      {"f1_min", s.f1_min}, {"f1_max", s.f1_max}, {"n_f1", s.n_f1},
                      {"fs_hz", s.fs},      {"m_samples", s.m_samples}, {"dur_s", s.dur}};
  return j.dump();
}

}  // namespace qmf::bank
