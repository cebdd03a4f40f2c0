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

#include <cstdint>
#include <optional>
#include <vector>

#include "qmf/rng.hpp"

// Closed-form model of amplitude amplification and quantum counting.
//
// Everything here works directly with the rotation angle
// theta = asin(sqrt(r/N)) of the Grover operator in the two-dimensional span
// of the matched and unmatched superpositions, so N can be arbitrarily large.
namespace qmf::amplify {

struct GroverGeometry {
  std::uint64_t n_total = 1;
  std::uint64_t r_match = 0;
  double theta = 0.0;

  static GroverGeometry make(std::uint64_t n, std::uint64_t r);
};

struct CountingConfig {
  unsigned p = 1;
  std::uint64_t n_total = 1;
  double c = 0.0;  // 2^p / sqrt(N)

  static CountingConfig automatic(std::uint64_t n);
};

struct CountingDistribution {
  unsigned p = 0;
  double theta = 0.0;
  std::vector<double> probs;  // length 2^p
};

struct CountEstimate {
  std::uint64_t b = 0;
  double theta_star = 0.0;
  std::uint64_t r_star = 0;
  std::optional<std::uint64_t> k_star;  // empty for the b = 0 "no match" outcome

  bool detected() const { return b != 0; }
};

struct Amplitudes {
  double a_w = 0.0;     // on the normalized matched superposition
  double a_perp = 0.0;  // on its orthogonal complement
};

/// Rounds half away from zero; the single rounding convention used here.
double round_half_away(double x);

double theta_of(std::uint64_t n, std::uint64_t r);

Amplitudes amplitude_after(const GroverGeometry& geom, std::uint64_t k);

/// round((pi/4) sqrt(n/r) - 1/2), floored at 0.
std::uint64_t optimal_k(std::uint64_t n, std::uint64_t r);

/// Smallest p with 2^p > pi sqrt(n).
unsigned choose_p(std::uint64_t n);

/// Largest counting register accepted by counting_distribution.
inline constexpr unsigned kMaxCountingQubits = 26;

/// Exact outcome distribution of the p-qubit counting register, both
/// eigenvalue branches e^{+-2i theta} mixed with weight 1/2.
CountingDistribution counting_distribution(std::uint64_t n, std::uint64_t r, unsigned p);

/// Single-branch probability P_+(b) including the aligned-outcome limit.
double branch_probability(double theta, unsigned p, std::uint64_t b);

/// Inverse-CDF draw.
std::uint64_t sample_b(const CountingDistribution& dist, Rng& rng);

CountEstimate estimate_from_b(std::uint64_t b, unsigned p, std::uint64_t n);

/// Probability that the counting register reads b = 0 although r >= 1.
double false_negative_prob(std::uint64_t n, std::uint64_t r, unsigned p);

/// Smallest l with pi^{-2l} <= delta_target.
unsigned repetitions_for(double delta_target);

/// sin^2((2k+1) theta).
double p_match(double theta, std::uint64_t k);

/// Probability that detection followed by one retrieval attempt with the
/// estimated k* fails; b = 0 counts as a failure since nothing is retrieved.
double p_fail_total(std::uint64_t n, std::uint64_t r, unsigned p);

/// Large-N upper bound on p_fail_total written in terms of eps_p, where
/// p = log2(pi sqrt N) + eps_p.
double fail_bound(std::uint64_t r, double eps_p);

struct BoundMaximum {
  double eps_p = 0.0;
  double bound = 0.0;
};

/// Supremum of fail_bound(r, .) over eps_p in (0, 1): dense grid followed by
/// golden-section refinement around the best grid point.
BoundMaximum max_fail_bound(std::uint64_t r);

}  // namespace qmf::amplify
