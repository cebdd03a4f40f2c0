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

#include <string>

// Order-of-magnitude cost model for an all-sky coherent continuous-wave
// search, classical versus quantum.  Counts are real-valued estimates.
namespace qmf::cw {

struct CwSearchSpec {
  double f_khz = 1.0;         // signal frequency
  double t_obs_yr = 1.0;      // observation time
  double delta_f_hz = 1.0;    // frequency band
  double delta_f1 = 1e-9;     // spin-down range, Hz/s
  double delta_target = 1e-6; // acceptable false-negative probability

  void validate() const;
};

/// Templates over sky, frequency and spin-down.
double n_total(const CwSearchSpec& spec);
/// Templates over sky and spin-down only; the frequency axis is an FFT.
double n_sky_f1(const CwSearchSpec& spec);
double n_f0(const CwSearchSpec& spec);

struct QuantumCost {
  unsigned p = 0;
  unsigned ell = 0;           // repetitions for the false-negative target
  double iterations = 0.0;    // ell (2^p - 1)
  double gate_factor = 6.0;   // reversible overhead x uncomputation
  double classical_ops = 0.0; // in units of one oracle's classical cost T
  double quantum_ops = 0.0;
  double speedup = 0.0;
};

QuantumCost quantum_cost(const CwSearchSpec& spec);

CwSearchSpec spec_from_json(const std::string& json_text);
std::string report_json(const CwSearchSpec& spec, const QuantumCost& cost);

}  // namespace qmf::cw
