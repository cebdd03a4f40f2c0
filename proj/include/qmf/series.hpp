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

#include <complex>
#include <cstddef>
#include <vector>

namespace qmf {

using cplx = std::complex<double>;

/// Uniformly sampled real strain series.
struct TimeSeries {
  std::vector<double> samples;
  double dt = 0.0;  // seconds per sample
  double t0 = 0.0;  // epoch of samples[0], seconds

  std::size_t size() const { return samples.size(); }

  /// Throws InputError unless M >= 2, dt > 0 and every sample is finite.
  void validate() const;
};

/// One-sided spectrum, bins k = 0..M/2 of an M-point DFT (unnormalized sum).
struct FrequencySeries {
  std::vector<cplx> bins;
  double df = 0.0;
  std::size_t m_time = 0;  // length of the originating time series

  double dt() const { return 1.0 / (df * static_cast<double>(m_time)); }
};

/// One-sided noise power spectral density on a bin grid with spacing df.
struct Psd {
  std::vector<double> values;  // strain^2 / Hz
  double df = 0.0;
};

/// Matched-filter SNR time series rho(t_j).
struct SnrSeries {
  std::vector<double> rho;
  double dt = 0.0;
  double t0 = 0.0;
};

}  // namespace qmf
