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
#include <map>
#include <numeric>
#include <vector>

#include "qmf/amplify.hpp"
#include "qmf/error.hpp"
#include "qmf/pipeline.hpp"

using namespace qmf;
using namespace qmf::pipeline;

namespace {

bank::BankSpec tiny_bank() {
  bank::BankSpec s;
  s.f0_min = 20;
  s.f0_max = 50;
  s.n_f0 = 4;
  s.f1_min = 0;
  s.f1_max = 15;
  s.n_f1 = 4;
  s.fs = 256;
  s.m_samples = 2048;
  s.dur = 2.0;
  return s;
}

}  // namespace

TEST_CASE("matched filter oracle and classical search") {
  const auto spec = tiny_bank();
  Injection inj{9, 1.5, 1.0, 17, 600};
  const auto data = make_injection(spec, inj);
  CHECK(data.size() == spec.m_samples);
  const auto psd = dsp::white_psd(1.0, 1 / spec.fs, spec.m_samples);
  MatchedFilterOracle oracle(spec, data, psd, 20.0);
  CHECK(oracle.size() == 16);

  OracleCounter counter;
  std::vector<double> peaks(16);
  for (std::uint64_t i = 0; i < 16; ++i) peaks[i] = oracle.peak(i).rho_max;
  CHECK(std::max_element(peaks.begin(), peaks.end()) - peaks.begin() == 9);
  CHECK(oracle.peak(9).j_max == doctest::Approx(600).epsilon(0.002));

  CHECK(oracle_eval(oracle, 9, counter));
  CHECK(counter.evaluations == 1);
  const auto matches = classical_search(oracle, counter, 3);
  CHECK(counter.evaluations == 17);
  for (auto m : matches) CHECK(peaks[m] >= 20.0);
  for (std::uint64_t i = 0; i < 16; ++i)
    CHECK((std::find(matches.begin(), matches.end(), i) != matches.end()) == (peaks[i] >= 20.0));
  OracleCounter c1;
  CHECK(classical_search(oracle, c1, 1) == matches);
}

TEST_CASE("no false alarms without matches") {
  const CountingEmulator em(std::uint64_t{1} << 17, 0, 11);
  Rng rng(5);
  OracleCounter counter;
  int detections = 0;
  for (int i = 0; i < 20000; ++i) detections += em.detect(rng, counter).detected;
  CHECK(detections == 0);
  CHECK(counter.evaluations == 20000ULL * 2047);
}

TEST_CASE("detection charge and false-negative rate") {
  const CountingEmulator em(std::uint64_t{1} << 12, 3, 5);
  const double fn = amplify::false_negative_prob(1 << 12, 3, 5);
  Rng rng(8);
  OracleCounter counter;
  const int trials = 200000;
  int misses = 0;
  for (int i = 0; i < trials; ++i) misses += !em.detect(rng, counter).detected;
  CHECK(counter.evaluations == std::uint64_t(trials) * 31);
  const double sd = std::sqrt(fn * (1 - fn) / trials);
  CHECK(std::abs(double(misses) / trials - fn) < 3 * sd);
}

TEST_CASE("retrieval is uniform over the match set") {
  const std::vector<bank::TemplateIndex> set{3, 17, 40, 41, 99};
  Rng rng(12);
  OracleCounter counter;
  std::map<bank::TemplateIndex, int> hist;
  int ok = 0;
  const int trials = 50000;
  for (int i = 0; i < trials; ++i) {
    if (auto got = template_retrieval(1024, 5, 11, set, rng, counter)) {
      ++hist[*got];
      ++ok;
    }
  }
  CHECK(counter.evaluations == std::uint64_t(trials) * 12);
  double chi2 = 0;
  for (auto idx : set) {
    const double e = double(ok) / double(set.size());
    chi2 += std::pow(hist[idx] - e, 2) / e;
  }
  CHECK(hist.size() == set.size());
  CHECK(chi2 < 18.47);  // 4 dof, p = 0.001
  const double p = amplify::p_match(amplify::theta_of(1024, 5), 11);
  CHECK(double(ok) / trials == doctest::Approx(p).epsilon(0.02));
  CHECK_THROWS_AS(template_retrieval(1024, 0, 1, set, rng, counter), InputError);
}

TEST_CASE("charge identity for both strategies") {
  std::vector<bank::TemplateIndex> set(9);
  std::iota(set.begin(), set.end(), 0);
  for (auto strat : {RetrievalStrategy::ReuseK, RetrievalStrategy::RecountEachTry}) {
    Rng rng(77);
    for (int t = 0; t < 300; ++t) {
      OracleCounter counter;
      const auto rec = retrieve_until_success(strat, 1 << 14, 9, 9, set, rng, counter);
      CHECK(rec.succeeded);
      CHECK(rec.oracle_evals == counter.evaluations);
      CHECK(rec.oracle_evals == rec.detections * 511 + rec.retrieval_evals);
      CHECK(rec.returned_index.has_value());
      if (strat == RetrievalStrategy::RecountEachTry) CHECK(rec.detections >= rec.attempts);
    }
  }
  CHECK(strategy_from_string("reuse-k") == RetrievalStrategy::ReuseK);
  CHECK(strategy_from_string(to_string(RetrievalStrategy::RecountEachTry)) == RetrievalStrategy::RecountEachTry);
  CHECK_THROWS_AS(strategy_from_string("bogus"), InputError);
}

TEST_CASE("attempt cap counts detections and retrievals together") {
  std::vector<bank::TemplateIndex> set{0, 1, 2};
  Rng rng(1);
  OracleCounter counter;
  const auto rec = retrieve_until_success(RetrievalStrategy::ReuseK, 1 << 10, 3, 7, set, rng, counter, 1);
  CHECK_FALSE(rec.succeeded);
  CHECK(rec.detections == 1);
  CHECK(rec.attempts == 0);
  CHECK(rec.oracle_evals == 127);
}

TEST_CASE("collecting every match behaves like coupon collection") {
  const std::uint64_t r = 9;
  std::vector<bank::TemplateIndex> set(r);
  std::iota(set.begin(), set.end(), 100);
  // p = 12 so that both outcomes around the peak estimate r exactly.
  const CountingEmulator em(std::uint64_t{1} << 14, r, 12);
  Rng rng(31);
  double total_successes = 0;
  int complete_runs = 0;
  for (int t = 0; t < 2000; ++t) {
    OracleCounter counter;
    const auto col = collect_all_matches(em, set, rng, counter, 10000);
    if (!col.complete || col.target != r) continue;
    ++complete_runs;
    CHECK(col.indices.size() == r);
    total_successes += double(col.successes);
  }
  REQUIRE(complete_runs > 500);
  double harmonic = 0;
  for (std::uint64_t i = 1; i <= r; ++i) harmonic += 1.0 / double(i);
  CHECK(total_successes / complete_runs == doctest::Approx(double(r) * harmonic).epsilon(0.08));
}

TEST_CASE("monte carlo is deterministic and thread independent") {
  MonteCarloConfig cfg;
  cfg.n = 1 << 14;
  cfg.r_true = 4;
  const auto a = monte_carlo(cfg, 500, 42, 1);
  const auto b = monte_carlo(cfg, 500, 42, 4);
  REQUIRE(a.records.size() == 500);
  for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i].oracle_evals == b.records[i].oracle_evals);
  CHECK(a.mean == b.mean);
  CHECK(a.histogram == b.histogram);
  const auto c = monte_carlo(cfg, 500, 43, 2);
  CHECK(c.mean != a.mean);

  const auto one = monte_carlo(cfg, 1, 9);
  CHECK(one.records.size() == 1);
  CHECK(one.stddev == 0.0);
  CHECK(one.mean == one.median);
  CHECK_THROWS_AS(monte_carlo(cfg, 0, 9), InputError);
  cfg.r_true = 0;
  CHECK_THROWS_AS(monte_carlo(cfg, 10, 9), InputError);
}
