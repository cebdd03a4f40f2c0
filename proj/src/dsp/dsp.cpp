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

#include "qmf/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft_plan.hpp"
#include "qmf/error.hpp"

namespace qmf {

void TimeSeries::validate() const {
  if (samples.size() < 2) throw InputError("time series needs at least 2 samples");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("time series dt must be positive");
  for (std::size_t j = 0; j < samples.size(); ++j) {
    if (!std::isfinite(samples[j]))
      throw InputError("non-finite sample at index " + std::to_string(j));
  }
}

}  // namespace qmf

namespace qmf::dsp {

namespace {

void check_grid(const FrequencySeries& a, const FrequencySeries& b, const Psd& psd) {
  if (a.m_time != b.m_time || a.bins.size() != b.bins.size() ||
      psd.values.size() != a.bins.size())
    throw InputError("frequency grids differ in length");
  const double tol = 1e-9 * a.df;
  if (std::abs(a.df - b.df) > tol || std::abs(a.df - psd.df) > tol)
    throw InputError("frequency grids differ in spacing");
}

void check_psd(const FrequencySeries& s, const Psd& psd) {
  if (psd.values.size() != s.bins.size() || std::abs(psd.df - s.df) > 1e-9 * s.df)
    throw InputError("psd and spectrum are on different grids");
}

double hann(std::size_t j, std::size_t n) {
  return 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(j) /
                              static_cast<double>(n));
}

}  // namespace

FrequencySeries forward_fft(const TimeSeries& ts) {
  ts.validate();
  FrequencySeries out;
  out.m_time = ts.size();
  out.df = 1.0 / (static_cast<double>(ts.size()) * ts.dt);
  out.bins = detail::r2c(ts.samples);
  return out;
}

TimeSeries inverse_fft(const FrequencySeries& fs, double t0) {
  if (fs.m_time < 2 || fs.bins.size() != fs.m_time / 2 + 1)
    throw InputError("frequency series does not describe a one-sided spectrum");
  TimeSeries ts;
  ts.dt = fs.dt();
  ts.t0 = t0;
  ts.samples = detail::c2r(fs.bins, fs.m_time);
  const double scale = 1.0 / static_cast<double>(fs.m_time);
  for (double& x : ts.samples) x *= scale;
  return ts;
}

std::vector<std::size_t> band_bins(std::size_t m_time, double df, const Band& band) {
  std::vector<std::size_t> bins;
  const std::size_t k_max = (m_time - 1) / 2;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double f = static_cast<double>(k) * df;
    if (f >= band.f_low && f <= band.f_high) bins.push_back(k);
  }
  return bins;
}

Psd estimate_psd(const TimeSeries& ts, std::size_t seg_len, double overlap_frac,
                 PsdAverage average) {
  ts.validate();
  if (seg_len < 2 || seg_len > ts.size())
    throw InputError("segment length must lie in [2, M]");
  if (!(overlap_frac >= 0.0 && overlap_frac < 1.0))
    throw InputError("overlap fraction must lie in [0, 1)");

  const auto step = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(static_cast<double>(seg_len) * (1.0 - overlap_frac))));
  const std::size_t n_seg = (ts.size() - seg_len) / step + 1;
  if (n_seg < 2) throw InputError("fewer than two Welch segments fit in the series");

  std::vector<double> window(seg_len);
  double w2 = 0.0;
  for (std::size_t j = 0; j < seg_len; ++j) {
    window[j] = hann(j, seg_len);
    w2 += window[j] * window[j];
  }
  const std::size_t n_bins = seg_len / 2 + 1;
  const double fs = 1.0 / ts.dt;

  std::vector<std::vector<double>> periodograms;
  periodograms.reserve(n_seg);
  std::vector<double> seg(seg_len);
  for (std::size_t s = 0; s < n_seg; ++s) {
    const std::size_t off = s * step;
    for (std::size_t j = 0; j < seg_len; ++j) seg[j] = window[j] * ts.samples[off + j];
    const auto spec = detail::r2c(seg);
    std::vector<double> p(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k) {
      const bool edge = (k == 0) || (seg_len % 2 == 0 && k == seg_len / 2);
      p[k] = (edge ? 1.0 : 2.0) * std::norm(spec[k]) / (fs * w2);
    }
    periodograms.push_back(std::move(p));
  }

  Psd psd;
  psd.df = fs / static_cast<double>(seg_len);
  psd.values.assign(n_bins, 0.0);
  if (average == PsdAverage::Mean || n_seg < 4) {
    for (const auto& p : periodograms)
      for (std::size_t k = 0; k < n_bins; ++k) psd.values[k] += p[k];
    for (double& v : psd.values) v /= static_cast<double>(n_seg);
  } else {
    // Median over groups of consecutive segments, each group averaged.
    const std::size_t n_groups = n_seg >= 9 ? 5 : 3;
    const std::size_t per_group = n_seg / n_groups;
    std::vector<double> means(n_groups);
    for (std::size_t k = 0; k < n_bins; ++k) {
      for (std::size_t g = 0; g < n_groups; ++g) {
        double acc = 0.0;
        for (std::size_t s = 0; s < per_group; ++s) acc += periodograms[g * per_group + s][k];
        means[g] = acc / static_cast<double>(per_group);
      }
      std::nth_element(means.begin(), means.begin() + n_groups / 2, means.end());
      psd.values[k] = means[n_groups / 2];
    }
  }

  for (std::size_t k = 1; k < n_bins; ++k) {
    if (!(psd.values[k] > 0.0) || !std::isfinite(psd.values[k]))
      throw NumericError("estimated psd is not strictly positive at bin " + std::to_string(k));
  }
  return psd;
}

Psd white_psd(double sigma, double dt, std::size_t m_time) {
  if (!(sigma > 0.0) || !(dt > 0.0) || m_time < 2) throw InputError("invalid white psd parameters");
  Psd psd;
  psd.df = 1.0 / (static_cast<double>(m_time) * dt);
  psd.values.assign(m_time / 2 + 1, 2.0 * sigma * sigma * dt);
  return psd;
}

Psd resample_psd(const Psd& psd, std::size_t m_time, double dt) {
  if (psd.values.size() < 2 || !(psd.df > 0.0)) throw InputError("psd too short to resample");
  Psd out;
  out.df = 1.0 / (static_cast<double>(m_time) * dt);
  const std::size_t n = m_time / 2 + 1;
  out.values.resize(n);
  const double last = static_cast<double>(psd.values.size() - 1);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = std::min(static_cast<double>(k) * out.df / psd.df, last);
    const auto i = static_cast<std::size_t>(std::floor(x));
    const std::size_t i1 = std::min(i + 1, psd.values.size() - 1);
    const double w = x - static_cast<double>(i);
    out.values[k] = (1.0 - w) * psd.values[i] + w * psd.values[i1];
  }
  return out;
}

double template_norm_sq(const FrequencySeries& s, const Psd& psd, const Band& band) {
  check_psd(s, psd);
  const double dt = s.dt();
  double acc = 0.0;
  for (std::size_t k : band_bins(s.m_time, s.df, band)) {
    const double sn = psd.values[k];
    if (!(sn > 0.0) || !std::isfinite(sn))
      throw InputError("psd is not positive inside the analysis band (bin " + std::to_string(k) + ")");
    acc += std::norm(dt * s.bins[k]) / sn;
  }
  return acc * s.df;
}

FrequencySeries normalize_template(const FrequencySeries& s, const Psd& psd, const Band& band) {
  const double norm_sq = template_norm_sq(s, psd, band);
  if (!(norm_sq > 0.0)) throw NumericError("template has zero energy in the analysis band");
  FrequencySeries q = s;
  const double scale = s.dt() / std::sqrt(norm_sq);
  for (auto& b : q.bins) b *= scale;
  return q;
}

FrequencySeries complex_template(const bank::ChirpParams& params, double fs, std::size_t m,
                                 const Psd& psd, const Band& band) {
  auto in_phase = params;
  in_phase.phi0 = 0.0;
  auto quadrature = params;
  quadrature.phi0 = std::numbers::pi / 2.0;
  const auto q0 = normalize_template(forward_fft(bank::waveform(in_phase, fs, m)), psd, band);
  const auto q90 = normalize_template(forward_fft(bank::waveform(quadrature, fs, m)), psd, band);
  FrequencySeries qc = q0;
  const cplx i_unit{0.0, 1.0};
  for (std::size_t k = 0; k < qc.bins.size(); ++k) qc.bins[k] = 0.5 * (q0.bins[k] - i_unit * q90.bins[k]);
  return qc;
}

std::vector<cplx> complex_snr(const FrequencySeries& data, const FrequencySeries& qc,
                              const Psd& psd, const Band& band) {
  check_grid(data, qc, psd);
  const std::size_t m = data.m_time;
  const double dt = data.dt();
  std::vector<cplx> integrand(m, cplx{0.0, 0.0});
  for (std::size_t k : band_bins(m, data.df, band)) {
    const double sn = psd.values[k];
    if (!(sn > 0.0)) throw InputError("psd is not positive inside the analysis band");
    integrand[k] = std::conj(qc.bins[k]) * (dt * data.bins[k]) / sn;
  }
  auto z = detail::c2c_backward(integrand);
  const double scale = 2.0 / (static_cast<double>(m) * dt);
  for (auto& v : z) v *= scale;
  return z;
}

SnrSeries snr_series(const FrequencySeries& data, const FrequencySeries& qc, const Psd& psd,
                     const Band& band) {
  const auto z = complex_snr(data, qc, psd, band);
  SnrSeries out;
  out.dt = data.dt();
  out.rho.resize(z.size());
  std::transform(z.begin(), z.end(), out.rho.begin(), [](const cplx& v) { return std::abs(v); });
  return out;
}

PeakSnr max_snr(const SnrSeries& snr) {
  if (snr.rho.empty()) throw InputError("empty snr series");
  const auto it = std::max_element(snr.rho.begin(), snr.rho.end());
  return {*it, static_cast<std::size_t>(it - snr.rho.begin())};
}

bool match_predicate(double rho_max, double rho_thr) { return rho_max >= rho_thr; }

}  // namespace qmf::dsp
