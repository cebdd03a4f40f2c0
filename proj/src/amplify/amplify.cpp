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

#include "qmf/amplify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qmf/error.hpp"

namespace qmf::amplify {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAlignTol = 1e-12;

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

std::uint64_t register_size(unsigned p) {
  if (p > kMaxCountingQubits)
    throw ResourceError("counting register of " + std::to_string(p) + " qubits exceeds the " +
                        std::to_string(kMaxCountingQubits) + "-qubit budget");
  return std::uint64_t{1} << p;
}

}  // namespace

GroverGeometry GroverGeometry::make(std::uint64_t n, std::uint64_t r) {
  return {n, r, theta_of(n, r)};
}

CountingConfig CountingConfig::automatic(std::uint64_t n) {
  CountingConfig cfg;
  cfg.n_total = n;
  cfg.p = choose_p(n);
  cfg.c = std::ldexp(1.0, static_cast<int>(cfg.p)) / std::sqrt(static_cast<double>(n));
  return cfg;
}

double round_half_away(double x) { return std::round(x); }

double theta_of(std::uint64_t n, std::uint64_t r) {
  if (n == 0) throw InputError("template count must be at least 1");
  if (r > n) throw InputError("match count exceeds template count");
  return std::asin(std::sqrt(static_cast<double>(r) / static_cast<double>(n)));
}

Amplitudes amplitude_after(const GroverGeometry& geom, std::uint64_t k) {
  const double angle = static_cast<double>(2 * k + 1) * geom.theta;
  return {std::sin(angle), std::cos(angle)};
}

std::uint64_t optimal_k(std::uint64_t n, std::uint64_t r) {
  if (r == 0) throw InputError("optimal iteration count is undefined for r = 0");
  if (r > n) throw InputError("match count exceeds template count");
  const double k = kPi / 4.0 * std::sqrt(static_cast<double>(n) / static_cast<double>(r)) - 0.5;
  return static_cast<std::uint64_t>(std::max(0.0, round_half_away(k)));
}

unsigned choose_p(std::uint64_t n) {
  if (n < 2) throw InputError("choose_p needs at least 2 templates");
  const double target = kPi * std::sqrt(static_cast<double>(n));
  unsigned p = 1;
  while (std::ldexp(1.0, static_cast<int>(p)) <= target) ++p;
  return p;
}

double branch_probability(double theta, unsigned p, std::uint64_t b) {
  const std::uint64_t m = register_size(p);
  const double md = static_cast<double>(m);
  // sin(2^p theta)^2 == sin(2^p delta)^2 for integer b; the delta form keeps
  // precision near the peak.
  const double delta = theta - kPi * static_cast<double>(b) / md;
  if (std::abs(delta) < kAlignTol) return 1.0;
  const double ratio = std::sin(md * delta) / (md * std::sin(delta));
  return ratio * ratio;
}

CountingDistribution counting_distribution(std::uint64_t n, std::uint64_t r, unsigned p) {
  const double theta = theta_of(n, r);
  const std::uint64_t m = register_size(p);
  CountingDistribution dist;
  dist.p = p;
  dist.theta = theta;
  dist.probs.assign(m, 0.0);
  if (r == 0) {
    dist.probs[0] = 1.0;
    return dist;
  }
  if (r == n && p >= 1) {
    // G acts as -1 on the uniform state: eigenphase pi.
    dist.probs[m / 2] = 1.0;
    return dist;
  }
  std::vector<double> branch(m);
  for (std::uint64_t b = 0; b < m; ++b) branch[b] = branch_probability(theta, p, b);
  for (std::uint64_t b = 0; b < m; ++b) dist.probs[b] = 0.5 * branch[b] + 0.5 * branch[(m - b) % m];
  return dist;
}

std::uint64_t sample_b(const CountingDistribution& dist, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  std::uint64_t last_nonzero = 0;
  for (std::uint64_t b = 0; b < dist.probs.size(); ++b) {
    if (dist.probs[b] <= 0.0) continue;
    acc += dist.probs[b];
    last_nonzero = b;
    if (u < acc) return b;
  }
  return last_nonzero;
}

CountEstimate estimate_from_b(std::uint64_t b, unsigned p, std::uint64_t n) {
  const std::uint64_t m = register_size(p);
  if (b >= m) throw InputError("outcome b out of range for the counting register");
  CountEstimate est;
  est.b = b;
  if (b == 0) return est;
  const double phase = kPi * static_cast<double>(b) / static_cast<double>(m);
  est.theta_star = (2 * b <= m) ? phase : kPi - phase;
  const double s = std::sin(est.theta_star);
  est.r_star = static_cast<std::uint64_t>(round_half_away(static_cast<double>(n) * s * s));
  est.r_star = std::clamp<std::uint64_t>(est.r_star, 1, n);
  est.k_star = optimal_k(n, est.r_star);
  return est;
}

double false_negative_prob(std::uint64_t n, std::uint64_t r, unsigned p) {
  if (r == 0) throw InputError("false negatives need at least one match");
  return counting_distribution(n, r, p).probs[0];
}

unsigned repetitions_for(double delta_target) {
  if (!(delta_target > 0.0 && delta_target < 1.0))
    throw InputError("target probability must lie in (0, 1)");
  // Nearest l on a log scale: pi^{-2l} ~ delta_target.
  const double l = std::log(1.0 / delta_target) / std::log(kPi * kPi);
  return static_cast<unsigned>(std::max(1.0, round_half_away(l)));
}

double p_match(double theta, std::uint64_t k) {
  const double s = std::sin(static_cast<double>(2 * k + 1) * theta);
  return s * s;
}

double p_fail_total(std::uint64_t n, std::uint64_t r, unsigned p) {
  if (r == 0) throw InputError("retrieval failure needs at least one match");
  const auto dist = counting_distribution(n, r, p);
  double fail = dist.probs[0];
  for (std::uint64_t b = 1; b < dist.probs.size(); ++b) {
    if (dist.probs[b] == 0.0) continue;
    const auto est = estimate_from_b(b, p, n);
    fail += dist.probs[b] * (1.0 - p_match(dist.theta, *est.k_star));
  }
  return fail;
}

double fail_bound(std::uint64_t r, double eps_p) {
  if (r == 0) throw InputError("bound needs at least one match");
  if (!(eps_p >= 0.0 && eps_p <= 1.0)) throw InputError("eps_p must lie in [0, 1]");
  const double b_tilde = std::exp2(eps_p) * std::sqrt(static_cast<double>(r));
  const double b_up = std::ceil(b_tilde);
  const double eps = b_up - b_tilde;
  const double b_down = b_up - 1.0;

  const double c_up = std::cos(eps / b_up * kPi / 2.0);
  double bound = 1.0 - std::pow(sinc(eps), 2) * c_up * c_up;
  const double s_down = sinc(1.0 - eps);
  if (b_down > 0.0 && s_down != 0.0) {
    const double c_down = std::cos((1.0 - eps) / b_down * kPi / 2.0);
    bound -= s_down * s_down * c_down * c_down;
  }
  return bound;
}

BoundMaximum max_fail_bound(std::uint64_t r) {
  constexpr int kGrid = 20000;
  BoundMaximum best{0.0, -1.0};
  for (int i = 0; i < kGrid; ++i) {
    const double eps_p = (i + 0.5) / kGrid;
    const double v = fail_bound(r, eps_p);
    if (v > best.bound) best = {eps_p, v};
  }

  // Golden-section refinement within one grid cell either side.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::max(1e-12, best.eps_p - 1.0 / kGrid);
  double hi = std::min(1.0 - 1e-12, best.eps_p + 1.0 / kGrid);
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = fail_bound(r, x1);
  double f2 = fail_bound(r, x2);
  for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = fail_bound(r, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = fail_bound(r, x1);
    }
  }
  const double x = 0.5 * (lo + hi);
  const double fx = fail_bound(r, x);
  if (fx > best.bound) best = {x, fx};
  return best;
}

}  // namespace qmf::amplify
