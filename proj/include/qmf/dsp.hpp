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
#include <limits>
#include <vector>

#include "qmf/bank.hpp"
#include "qmf/series.hpp"

namespace qmf::dsp {

// Spectral conventions
// --------------------
// FrequencySeries bins hold the raw DFT sum  X_k = sum_j x_j exp(-2 pi i jk/M).
// A normalized template Q is returned in continuous Fourier units, i.e. the
// DFT scaled by dt and divided by sqrt(sum_band |dt s_k|^2 / S_k * df).  The
// SNR series uses the discrete form
//
//   rho(t_j) = 2/(M dt) | sum_{k in band} conj(Qc_k) (dt h_k) / S_k e^{2 pi i jk/M} |
//
// over bins 1 <= k <= (M-1)/2 (DC and Nyquist excluded) intersected with the
// analysis band.  With these conventions a template filtered against itself
// gives rho = 2 sqrt(sum |dt s_k|^2 / S_k df) and unit-variance quadratures
// in Gaussian noise.

/// Analysis band; bins outside [f_low, f_high] are masked out of every sum.
struct Band {
  double f_low = 0.0;
  double f_high = std::numeric_limits<double>::infinity();
};

FrequencySeries forward_fft(const TimeSeries& ts);
TimeSeries inverse_fft(const FrequencySeries& fs, double t0 = 0.0);

/// Bins k in [1, (M-1)/2] whose frequency lies inside the band.
std::vector<std::size_t> band_bins(std::size_t m_time, double df, const Band& band);

enum class PsdAverage { Mean, MedianOfMeans };

/// Welch estimate with Hann windows.  White noise of variance sigma^2 gives
/// S_n = 2 sigma^2 dt.  Throws InputError when seg_len > M or fewer than two
/// segments fit; NumericError when the estimate is not strictly positive.
Psd estimate_psd(const TimeSeries& ts, std::size_t seg_len, double overlap_frac,
                 PsdAverage average = PsdAverage::Mean);

/// Flat PSD 2 sigma^2 dt on the one-sided grid of an M-point series.
Psd white_psd(double sigma, double dt, std::size_t m_time);

/// Linear interpolation of a PSD onto the one-sided grid of an M-point series.
Psd resample_psd(const Psd& psd, std::size_t m_time, double dt);

/// sum_{k in band} |dt s_k|^2 / S_k * df, the discrete noise-weighted energy.
double template_norm_sq(const FrequencySeries& s, const Psd& psd, const Band& band = {});

FrequencySeries normalize_template(const FrequencySeries& s, const Psd& psd,
                                   const Band& band = {});

/// Quadrature template (Q_{phi0=0} - i Q_{phi0=pi/2}) / 2.  On positive
/// frequencies this reduces to the analytic phase-0 template, so |rho| is
/// maximized over the unknown phase.
FrequencySeries complex_template(const bank::ChirpParams& params, double fs, std::size_t m,
                                 const Psd& psd, const Band& band = {});

/// Complex filter output z_j; rho_j = |z_j|.
std::vector<cplx> complex_snr(const FrequencySeries& data, const FrequencySeries& qc,
                              const Psd& psd, const Band& band = {});

SnrSeries snr_series(const FrequencySeries& data, const FrequencySeries& qc, const Psd& psd,
                     const Band& band = {});

struct PeakSnr {
  double rho_max = 0.0;
  std::size_t j_max = 0;
};

/// Maximum and the first index attaining it.
PeakSnr max_snr(const SnrSeries& snr);

/// f(i): 1 iff rho_max >= rho_thr.
bool match_predicate(double rho_max, double rho_thr);

}  // namespace qmf::dsp
