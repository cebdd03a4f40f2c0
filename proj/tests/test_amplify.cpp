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
#include <tuple>
#include <complex>
#include <numbers>
#include <vector>

#include "qmf/amplify.hpp"
#include "qmf/error.hpp"

using namespace qmf;
using namespace qmf::amplify;

namespace {

constexpr double kPi = std::numbers::pi;

// Phase-estimation outcome distribution by direct summation of the register
// amplitudes sum_j exp(2 pi i j (phi - b/2^p)) / 2^p for both eigenphases
// +-theta/pi, each with weight 1/2.  Independent of the closed form.
std::vector<double> brute_counting(std::uint64_t n, std::uint64_t r, unsigned p) {
  const double theta = std::asin(std::sqrt(double(r) / double(n)));
  const std::size_t m = std::size_t{1} << p;
  std::vector<double> probs(m, 0.0);
  for (double sign : {1.0, -1.0}) {
    const double phi = sign * theta / kPi;
    for (std::size_t b = 0; b < m; ++b) {
      std::complex<double> amp{0.0, 0.0};
      for (std::size_t j = 0; j < m; ++j)
        amp += std::polar(1.0, 2.0 * kPi * double(j) * (phi - double(b) / double(m)));
      probs[b] += 0.5 * std::norm(amp / double(m));
    }
  }
  return probs;
}

struct TableRow {
  unsigned q, n, p;
  std::uint64_t b, k_est, r_est, k_theo;
};

// Quantum-counting trial runs (data length n, ignored bits q).
const std::vector<TableRow> kTable = {
    {0, 5, 5, 30, 4, 1, 4},   {0, 6, 5, 1, 6, 1, 6},     {0, 7, 5, 1, 8, 1, 8},
    {0, 8, 6, 1, 12, 1, 12},  {0, 9, 7, 2, 17, 1, 17},   {1, 5, 5, 3, 2, 3, 3},
    {1, 6, 5, 30, 4, 2, 4},   {1, 7, 6, 61, 5, 3, 6},    {1, 8, 6, 2, 8, 2, 8},
    {1, 9, 7, 125, 10, 3, 12}, {1, 10, 7, 126, 17, 2, 17}, {2, 5, 5, 4, 1, 5, 2},
    {2, 6, 5, 29, 2, 5, 3},   {2, 7, 6, 60, 3, 5, 4},    {2, 8, 6, 61, 5, 6, 6},
    {2, 9, 7, 124, 7, 5, 8},  {2, 10, 7, 125, 10, 6, 12},
};

}  // namespace

TEST_CASE("theta_of") {
  CHECK(theta_of(4, 1) == doctest::Approx(kPi / 6).epsilon(1e-15));
  CHECK(theta_of(64, 2) == doctest::Approx(0.17771060084511175).epsilon(1e-12));
  CHECK(theta_of(131072, 9) == doctest::Approx(8.286502425369291e-3).epsilon(1e-12));
  CHECK(theta_of(10, 0) == 0.0);
  CHECK_THROWS_AS(theta_of(4, 5), InputError);
}

TEST_CASE("amplitude_after") {
  const auto g = GroverGeometry::make(64, 2);
  const auto a0 = amplitude_after(g, 0);
  CHECK(a0.a_w == doctest::Approx(std::sqrt(2.0 / 64)).epsilon(1e-14));
  CHECK(a0.a_perp == doctest::Approx(std::sqrt(62.0 / 64)).epsilon(1e-14));
  CHECK(amplitude_after(GroverGeometry::make(4, 1), 1).a_w == doctest::Approx(1.0).epsilon(1e-15));
  const auto a4 = amplitude_after(g, 4);
  CHECK(a4.a_w * a4.a_w == doctest::Approx(0.9991823155432941).epsilon(1e-12));

  for (std::uint64_t k = 0; k < 200; k += 7) {
    const auto a = amplitude_after(GroverGeometry::make(1000, 3), k);
    CHECK(std::abs(a.a_w * a.a_w + a.a_perp * a.a_perp - 1.0) < 1e-12);
  }
}

TEST_CASE("optimal_k and choose_p against the trial table") {
  CHECK(optimal_k(64, 1) == 6);
  CHECK(optimal_k(64, 2) == 4);
  CHECK(optimal_k(32, 4) == 2);
  CHECK(optimal_k(131072, 9) == 94);
  CHECK(optimal_k(8, 8) == 0);
  CHECK_THROWS_AS(optimal_k(64, 0), InputError);

  CHECK(choose_p(std::uint64_t{1} << 17) == 11);
  CHECK(choose_p(64) == 5);
  CHECK(choose_p(1024) == 7);
  for (std::uint64_t n : {2ULL, 3ULL, 100ULL, 12345ULL, 1ULL << 24, 1ULL << 40}) {
    const unsigned p = choose_p(n);
    CHECK(std::ldexp(1.0, int(p)) > kPi * std::sqrt(double(n)));
    CHECK(std::ldexp(1.0, int(p) - 1) <= kPi * std::sqrt(double(n)));
  }
}

TEST_CASE("counting_distribution matches brute-force phase estimation") {
  for (auto [n, r, p] : std::vector<std::tuple<std::uint64_t, std::uint64_t, unsigned>>{
           {64, 2, 5}, {32, 4, 5}, {1024, 3, 7}, {16, 16, 4}, {16, 0, 4}, {4, 1, 3}, {100, 7, 6}}) {
    const auto dist = counting_distribution(n, r, p);
    const auto brute = brute_counting(n, r, p);
    double total = 0.0;
    for (std::size_t b = 0; b < dist.probs.size(); ++b) {
      CHECK(dist.probs[b] == doctest::Approx(brute[b]).epsilon(1e-9).scale(1.0));
      CHECK(dist.probs[b] == doctest::Approx(dist.probs[(dist.probs.size() - b) % dist.probs.size()]));
      CHECK(dist.probs[b] >= 0.0);
      total += dist.probs[b];
    }
    CHECK(std::abs(total - 1.0) < 1e-9);
  }
}

TEST_CASE("counting_distribution special cases") {
  const auto none = counting_distribution(64, 0, 5);
  CHECK(none.probs[0] == 1.0);
  for (std::size_t b = 1; b < none.probs.size(); ++b) CHECK(none.probs[b] == 0.0);

  const auto peaked = counting_distribution(64, 2, 5);
  std::vector<std::size_t> order(peaked.probs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return peaked.probs[a] > peaked.probs[b]; });
  CHECK(((order[0] == 2 && order[1] == 30) || (order[0] == 30 && order[1] == 2)));

  // sin(2^p theta)^2 / (2^{2p} sin^2 theta), both branches coincide at b = 0.
  const double th = theta_of(131072, 9);
  const double direct = std::pow(std::sin(2048 * th) / std::sin(th), 2) / std::pow(2.0, 22);
  CHECK(counting_distribution(131072, 9, 11).probs[0] == doctest::Approx(direct).epsilon(1e-10));
  CHECK(direct == doctest::Approx(3.153e-3).epsilon(1e-3));

  CHECK_THROWS_AS(counting_distribution(64, 2, 40), ResourceError);
}

TEST_CASE("sample_b") {
  CountingDistribution point;
  point.p = 3;
  point.probs = {0, 0, 0, 0, 0, 1, 0, 0};
  Rng rng(5);
  for (int i = 0; i < 100; ++i) CHECK(sample_b(point, rng) == 5);

  const auto dist = counting_distribution(64, 2, 5);
  Rng a(42), b(42);
  for (int i = 0; i < 50; ++i) CHECK(sample_b(dist, a) == sample_b(dist, b));

  // At least 8/pi^2 of the mass within one of either peak.
  const int draws = 100000;
  int near = 0;
  Rng s(7);
  for (int i = 0; i < draws; ++i) {
    const auto v = static_cast<long>(sample_b(dist, s));
    if (std::abs(v - 2) <= 1 || std::abs(v - 30) <= 1) ++near;
  }
  const double bound = 8.0 / (kPi * kPi);
  const double sigma = std::sqrt(bound * (1 - bound) / draws);
  CHECK(double(near) / draws >= bound - 3 * sigma);
}

TEST_CASE("estimate_from_b reproduces every table row") {
  for (const auto& row : kTable) {
    CAPTURE(row.n);
    CAPTURE(row.q);
    const auto n = std::uint64_t{1} << row.n;
    const auto est = estimate_from_b(row.b, row.p, n);
    CHECK(est.r_star == row.r_est);
    REQUIRE(est.k_star.has_value());
    CHECK(*est.k_star == row.k_est);
    CHECK(optimal_k(n, std::uint64_t{1} << row.q) == row.k_theo);
  }
  const auto e30 = estimate_from_b(30, 5, 64);
  CHECK(e30.theta_star == doctest::Approx(kPi / 16));
  const auto e4 = estimate_from_b(4, 5, 32);
  CHECK(e4.theta_star == doctest::Approx(kPi / 8));

  const auto zero = estimate_from_b(0, 5, 64);
  CHECK_FALSE(zero.detected());
  CHECK(zero.r_star == 0);
  CHECK_FALSE(zero.k_star.has_value());
  CHECK_THROWS_AS(estimate_from_b(32, 5, 64), InputError);
}

TEST_CASE("estimates from the outcomes bracketing the peak are within 2 of r") {
  for (const auto& row : kTable) {
    const auto n = std::uint64_t{1} << row.n;
    const auto r = std::uint64_t{1} << row.q;
    const double b_tilde = std::ldexp(1.0, int(row.p)) * theta_of(n, r) / kPi;
    for (double b : {std::floor(b_tilde), std::ceil(b_tilde)}) {
      if (b == 0) continue;
      const auto est = estimate_from_b(std::uint64_t(b), row.p, n);
      CHECK(std::llabs(static_cast<long long>(est.r_star) - static_cast<long long>(r)) <= 2);
    }
  }
}

TEST_CASE("false negative probability stays below 1/pi^2 with auto-selected p") {
  Rng rng(2024);
  for (int i = 0; i < 300; ++i) {
    const double log_n = 6.0 + 18.0 * rng.uniform();
    const auto n = static_cast<std::uint64_t>(std::exp2(log_n));
    const auto r_max = static_cast<std::uint64_t>(std::sqrt(double(n)));
    const auto r = 1 + rng.below(r_max);
    CHECK(false_negative_prob(n, r, choose_p(n)) < 1.0 / (kPi * kPi));
  }
  CHECK(false_negative_prob(131072, 9, 11) == doctest::Approx(3.153e-3).epsilon(1e-3));
  // theta = pi/4 (r/N = 1/2) and p = 2 gives 2^p theta = pi.
  CHECK(false_negative_prob(2, 1, 2) < 1e-30);
}

TEST_CASE("repetitions_for") {
  CHECK(repetitions_for(1e-6) == 6);
  CHECK(repetitions_for(1e-9) == 9);
  CHECK(repetitions_for(0.5) == 1);
  CHECK(repetitions_for(0.09) == 1);
  CHECK_THROWS_AS(repetitions_for(0.0), InputError);
  CHECK_THROWS_AS(repetitions_for(1.0), InputError);
}

TEST_CASE("p_match") {
  CHECK(p_match(kPi / 6, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p_match(theta_of(131072, 9), 94) == doctest::Approx(0.999978402122445).epsilon(1e-12));
  CHECK(p_match(theta_of(1000, 7), 0) == doctest::Approx(0.007).epsilon(1e-12));
}

TEST_CASE("p_fail_total equals an independent summation") {
  auto oracle = [](std::uint64_t n, std::uint64_t r, unsigned p) {
    const auto probs = brute_counting(n, r, p);
    const double theta = std::asin(std::sqrt(double(r) / double(n)));
    const double m = std::ldexp(1.0, int(p));
    double fail = probs[0];
    for (std::size_t b = 1; b < probs.size(); ++b) {
      double th = kPi * double(b) / m;
      if (th > kPi / 2) th = kPi - th;
      const double rs = std::max(1.0, std::round(double(n) * std::sin(th) * std::sin(th)));
      const double k = std::max(0.0, std::round(kPi / 4 * std::sqrt(double(n) / rs) - 0.5));
      fail += probs[b] * std::pow(std::cos((2 * k + 1) * theta), 2);
    }
    return fail;
  };
  for (auto [n, r, p] : std::vector<std::tuple<std::uint64_t, std::uint64_t, unsigned>>{
           {64, 2, 5}, {1024, 3, 7}, {4096, 5, 8}, {1 << 14, 9, 9}}) {
    CHECK(p_fail_total(n, r, p) == doctest::Approx(oracle(n, r, p)).epsilon(1e-9));
  }
  CHECK(p_fail_total(8, 8, 3) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("success probability is at least 0.547 when r << N") {
  for (std::uint64_t n : {1ULL << 12, 1ULL << 14, 1ULL << 17}) {
    for (std::uint64_t r : {1ULL, 2ULL, 3ULL, 5ULL, 9ULL, 16ULL, 30ULL}) {
      CAPTURE(n);
      CAPTURE(r);
      const double fail = p_fail_total(n, r, choose_p(n));
      CHECK(fail < 0.5);
      CHECK(1.0 - fail >= 0.547);
    }
  }
}

TEST_CASE("fail_bound") {
  // eps = 0.5 at r = 1: b_tilde = 1.5, eps_p = log2(1.5)
  const double v = fail_bound(1, std::log2(1.5));
  const double expect = 1 - std::pow(2 / kPi, 2) * std::pow(std::cos(kPi / 8), 2) -
                        std::pow(2 / kPi, 2) * std::pow(std::cos(kPi / 4), 2);
  CHECK(v == doctest::Approx(expect).epsilon(1e-12));
  CHECK(v == doctest::Approx(0.451).epsilon(1e-3));
  // eps -> 0: b_tilde integral, the first term is exactly 1
  CHECK(fail_bound(4, 0.0) == doctest::Approx(0.0).scale(1.0));
  CHECK(fail_bound(1, 0.0) == doctest::Approx(0.0).scale(1.0));
  CHECK(max_fail_bound(100).bound < 0.453);
}

TEST_CASE("max_fail_bound") {
  const auto m1 = max_fail_bound(1);
  CHECK(m1.bound == doctest::Approx(0.453).epsilon(0.002 / 0.453));
  CHECK(fail_bound(1, m1.eps_p) == m1.bound);
  for (std::uint64_t r = 2; r <= 50; ++r) CHECK(max_fail_bound(r).bound <= 0.453);
  CHECK(std::abs(max_fail_bound(10000).bound - (1 - 8 / (kPi * kPi))) < 0.02);
  // Grid refinement never does worse than a coarse scan.
  double coarse = 0.0;
  for (int i = 1; i < 1000; ++i) coarse = std::max(coarse, fail_bound(7, i / 1000.0));
  CHECK(max_fail_bound(7).bound >= coarse);
}
