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
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "qmf/amplify.hpp"
#include "qmf/bank.hpp"
#include "qmf/dsp.hpp"
#include "qmf/rng.hpp"

// Signal detection and template retrieval at realistic bank sizes.
//
// The classical oracle f(i) is the matched filter over the template bank.  The
// quantum measurements are emulated by sampling the exact analytic counting
// distribution (and the exact Grover success probability), with the true match
// count r obtained once, classically, when a scenario is set up.  Every oracle
// query the quantum algorithm would make is charged to an OracleCounter:
//
//   detection          2^p - 1 queries (the controlled-Grover ladder)
//   retrieval attempt  k* queries plus 1 classical verification query
namespace qmf::pipeline {

struct OracleCounter {
  std::uint64_t evaluations = 0;

  void charge(std::uint64_t n = 1) { evaluations += n; }
};

struct DetectionOutcome {
  std::uint64_t b = 0;
  std::uint64_t r_star = 0;
  std::optional<std::uint64_t> k_star;
  bool detected = false;
};

enum class RetrievalStrategy { ReuseK, RecountEachTry };

RetrievalStrategy strategy_from_string(const std::string& name);
std::string to_string(RetrievalStrategy s);

struct TrialRecord {
  std::uint64_t oracle_evals = 0;
  std::uint64_t attempts = 0;    // retrieval attempts
  std::uint64_t detections = 0;  // counting runs, including b = 0 outcomes
  std::uint64_t retrieval_evals = 0;
  bool succeeded = false;
  std::optional<bank::TemplateIndex> returned_index;
};

/// The classical matched-filter oracle f(i) over a template bank.
class MatchedFilterOracle {
 public:
  MatchedFilterOracle(bank::BankSpec spec, const TimeSeries& data, Psd psd, double rho_thr,
                      dsp::Band band = {});

  std::uint64_t size() const { return n_; }
  const bank::BankSpec& spec() const { return spec_; }
  double threshold() const { return rho_thr_; }

  /// max_j rho(t_j) of template i against the data; does not charge.
  dsp::PeakSnr peak(bank::TemplateIndex i) const;

 private:
  bank::BankSpec spec_;
  std::uint64_t n_;
  FrequencySeries data_;
  Psd psd_;
  double rho_thr_;
  dsp::Band band_;
};

/// f(i); charges one evaluation.
bool oracle_eval(const MatchedFilterOracle& oracle, bank::TemplateIndex i, OracleCounter& counter);

/// Evaluates f on every template (N charges) and returns the matches in
/// ascending order.  Templates are processed on `threads` workers.
std::vector<bank::TemplateIndex> classical_search(const MatchedFilterOracle& oracle,
                                                  OracleCounter& counter, unsigned threads = 0);

/// Emulated quantum counting for a fixed (N, r, p).  The exact outcome
/// distribution is computed once at construction.
class CountingEmulator {
 public:
  CountingEmulator(std::uint64_t n, std::uint64_t r_true, unsigned p);

  DetectionOutcome detect(Rng& rng, OracleCounter& counter) const;

  std::uint64_t n() const { return n_; }
  std::uint64_t r_true() const { return r_true_; }
  unsigned p() const { return p_; }
  double theta() const { return dist_.theta; }
  const amplify::CountingDistribution& distribution() const { return dist_; }

 private:
  std::uint64_t n_;
  std::uint64_t r_true_;
  unsigned p_;
  amplify::CountingDistribution dist_;
};

DetectionOutcome signal_detection(std::uint64_t n, std::uint64_t r_true, unsigned p, Rng& rng,
                                  OracleCounter& counter);

/// One Grover retrieval with k_star iterations.  Succeeds with probability
/// sin^2((2k+1) theta) and then returns a uniform element of match_set.
std::optional<bank::TemplateIndex> template_retrieval(std::uint64_t n, std::uint64_t r_true,
                                                      std::uint64_t k_star,
                                                      std::span<const bank::TemplateIndex> match_set,
                                                      Rng& rng, OracleCounter& counter);

inline constexpr std::uint64_t kDefaultMaxAttempts = 10000;

/// Detection plus retrieval, repeated until a match is returned.  ReuseK
/// keeps the first usable k*; RecountEachTry reruns detection before every
/// retrieval attempt.  max_attempts bounds detections plus retrievals.
TrialRecord retrieve_until_success(RetrievalStrategy strategy, const CountingEmulator& counting,
                                   std::span<const bank::TemplateIndex> match_set, Rng& rng,
                                   OracleCounter& counter,
                                   std::uint64_t max_attempts = kDefaultMaxAttempts);

TrialRecord retrieve_until_success(RetrievalStrategy strategy, std::uint64_t n, std::uint64_t r_true,
                                   unsigned p, std::span<const bank::TemplateIndex> match_set,
                                   Rng& rng, OracleCounter& counter,
                                   std::uint64_t max_attempts = kDefaultMaxAttempts);

struct Collection {
  std::set<bank::TemplateIndex> indices;
  std::uint64_t target = 0;      // r* from the detection run
  std::uint64_t successes = 0;   // successful retrievals, duplicates included
  std::uint64_t attempts = 0;
  bool complete = false;
};

/// Coupon-collector retrieval of all matches: one detection fixes r* and k*,
/// then retrieval repeats until r* distinct indices are held or `budget`
/// retrieval attempts have been spent.
Collection collect_all_matches(const CountingEmulator& counting,
                               std::span<const bank::TemplateIndex> match_set, Rng& rng,
                               OracleCounter& counter, std::uint64_t budget);

struct MonteCarloConfig {
  std::uint64_t n = 0;
  std::uint64_t r_true = 0;
  unsigned p = 0;  // 0 selects choose_p(n)
  RetrievalStrategy strategy = RetrievalStrategy::ReuseK;
  std::uint64_t max_attempts = kDefaultMaxAttempts;
  std::vector<bank::TemplateIndex> match_set;  // defaults to 0..r-1 when empty
};

struct MonteCarloSummary {
  std::vector<TrialRecord> records;
  double mean = 0.0;
  double median = 0.0;
  double stddev = 0.0;
  std::uint64_t failures = 0;
  std::map<std::uint64_t, std::uint64_t> histogram;  // oracle_evals -> trials
};

/// Independent trials, trial t drawing from Rng::substream(seed, t); the
/// result does not depend on the thread count.
MonteCarloSummary monte_carlo(const MonteCarloConfig& config, std::uint64_t trials,
                              std::uint64_t seed, unsigned threads = 0);

/// Injected chirp plus white Gaussian noise, for synthetic scenarios.
struct Injection {
  bank::TemplateIndex index = 0;
  double amplitude = 1.0;
  double noise_sigma = 1.0;
  std::uint64_t noise_seed = 0;
  std::size_t offset = 0;  // samples
};

TimeSeries make_injection(const bank::BankSpec& spec, const Injection& inj);

}  // namespace qmf::pipeline
