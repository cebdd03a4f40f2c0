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

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qmf/series.hpp"

namespace qmf::bank {

/// Linear chirp s(t) = sin(phi0 + 2 pi (f0 t + f1 t^2 / 2)).
struct ChirpParams {
  double f0 = 0.0;    // Hz
  double f1 = 0.0;    // Hz/s
  double dur = 0.0;   // s
  double phi0 = 0.0;  // rad

  double frequency_at(double t) const { return f0 + f1 * t; }
  void validate() const;
};

/// Rectangular (f0, f1) lattice. Index layout is row-major with f0 fastest.
struct BankSpec {
  double f0_min = 0.0, f0_max = 0.0;
  std::size_t n_f0 = 1;
  double f1_min = 0.0, f1_max = 0.0;
  std::size_t n_f1 = 1;
  double fs = 0.0;            // Hz
  std::size_t m_samples = 0;  // samples per data/template series
  double dur = 0.0;           // s

  void validate() const;
};

using TemplateIndex = std::uint64_t;

std::uint64_t bank_size(const BankSpec& spec);

ChirpParams index_to_params(const BankSpec& spec, TemplateIndex i);

/// Tukey-tapered chirp, zero-padded to m samples. Throws InputError when the
/// waveform does not fit or when its frequency leaves (0, fs/2) on [0, dur).
TimeSeries waveform(const ChirpParams& params, double fs, std::size_t m);

/// Fraction of the waveform duration tapered at each end.
inline constexpr double kTaperFraction = 0.05;

/// Parses a BankSpec from a JSON object with keys f0_min, f0_max, n_f0,
/// f1_min, f1_max, n_f1, fs_hz, m_samples, dur_s.
BankSpec bank_spec_from_json(const std::string& json_text);
std::string bank_spec_to_json(const BankSpec& spec);

}  // namespace qmf::bank
