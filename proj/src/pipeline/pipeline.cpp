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

#include "qmf/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "qmf/error.hpp"

namespace qmf::pipeline {

namespace {

unsigned worker_count(unsigned requested, std::uint64_t jobs) {
  unsigned t = requested ? requested : std::max(1U, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::uint64_t>(t, std::max<std::uint64_t>(jobs, 1)));
}

// Runs body(i) for i in [0, jobs) over a static partition of workers.
template <class Body>
void parallel_for(std::uint64_t jobs, unsigned threads, Body&& body) {
  const unsigned workers = worker_count(threads, jobs);
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < jobs; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::uint64_t i = w; i < jobs; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

RetrievalStrategy strategy_from_string(const std::string& name) {
  if (name == "ReuseK" || name == "reuse-k" || name == "reuse_k") return RetrievalStrategy::ReuseK;
  if (name == "RecountEachTry" || name == "recount-each-try" || name == "recount_each_try")
    return RetrievalStrategy::RecountEachTry;
  throw InputError("unknown retrieval strategy '" + name + "'");
}

std::string to_string(RetrievalStrategy s) {
  return s == RetrievalStrategy::ReuseK ? "ReuseK" : "RecountEachTry";
}

MatchedFilterOracle::MatchedFilterOracle(bank::BankSpec spec, const TimeSeries& data, Psd psd,
                                         double rho_thr, dsp::Band band)
    : spec_(std::move(spec)), n_(bank::bank_size(spec_)), rho_thr_(rho_thr), band_(band) {
  if (!(rho_thr > 0.0)) throw InputError("threshold must be positive");
  if (data.size() != spec_.m_samples) throw InputError("data length does not match the bank's m_samples");
  if (std::abs(data.dt * spec_.fs - 1.0) > 1e-9) throw InputError("data sample rate does not match the bank");
  data_ = dsp::forward_fft(data);
  psd_ = psd.values.size() == data_.bins.size() && std::abs(psd.df - data_.df) <= 1e-9 * data_.df
             ? std::move(psd)
             : dsp::resample_psd(psd, data.size(), data.dt);
}

dsp::PeakSnr MatchedFilterOracle::peak(bank::TemplateIndex i) const {
  const auto params = bank::index_to_params(spec_, i);
  const auto qc = dsp::complex_template(params, spec_.fs, spec_.m_samples, psd_, band_);
  return dsp::max_snr(dsp::snr_series(data_, qc, psd_, band_));
}

bool oracle_eval(const MatchedFilterOracle& oracle, bank::TemplateIndex i, OracleCounter& counter) {
  counter.charge();
  return dsp::match_predicate(oracle.peak(i).rho_max, oracle.threshold());
}

std::vector<bank::TemplateIndex> classical_search(const MatchedFilterOracle& oracle,
                                                  OracleCounter& counter, unsigned threads) {
  const std::uint64_t n = oracle.size();
  std::vector<char> hit(n, 0);
  parallel_for(n, threads, [&](std::uint64_t i) {
    hit[i] = dsp::match_predicate(oracle.peak(i).rho_max, oracle.threshold()) ? 1 : 0;
  });
  counter.charge(n);
  std::vector<bank::TemplateIndex> matches;
  for (std::uint64_t i = 0; i < n; ++i)
    if (hit[i]) matches.push_back(i);
  return matches;
}

CountingEmulator::CountingEmulator(std::uint64_t n, std::uint64_t r_true, unsigned p)
    : n_(n), r_true_(r_true), p_(p), dist_(amplify::counting_distribution(n, r_true, p)) {
  if (p == 0) throw InputError("counting register needs at least one qubit");
}

DetectionOutcome CountingEmulator::detect(Rng& rng, OracleCounter& counter) const {
  counter.charge((std::uint64_t{1} << p_) - 1);
  const auto b = amplify::sample_b(dist_, rng);
  const auto est = amplify::estimate_from_b(b, p_, n_);
  return {b, est.r_star, est.k_star, est.detected()};
}

DetectionOutcome signal_detection(std::uint64_t n, std::uint64_t r_true, unsigned p, Rng& rng,
                                  OracleCounter& counter) {
  return CountingEmulator(n, r_true, p).detect(rng, counter);
}

std::optional<bank::TemplateIndex> template_retrieval(std::uint64_t n, std::uint64_t r_true,
                                                      std::uint64_t k_star,
                                                      std::span<const bank::TemplateIndex> match_set,
                                                      Rng& rng, OracleCounter& counter) {
  if (r_true == 0 || match_set.empty()) throw InputError("retrieval needs at least one match");
  counter.charge(k_star + 1);
  const double success = amplify::p_match(amplify::theta_of(n, r_true), k_star);
  if (rng.uniform() >= success) return std::nullopt;
  return match_set[rng.below(match_set.size())];
}

TrialRecord retrieve_until_success(RetrievalStrategy strategy, const CountingEmulator& counting,
                                   std::span<const bank::TemplateIndex> match_set, Rng& rng,
                                   OracleCounter& counter, std::uint64_t max_attempts) {
  if (counting.r_true() == 0 || match_set.empty())
    throw InputError("retrieval needs at least one match");
  TrialRecord rec;
  const std::uint64_t start = counter.evaluations;
  std::uint64_t k = 0;
  bool have_k = false;
  std::uint64_t steps = 0;
  while (steps < max_attempts) {
    if (!have_k || strategy == RetrievalStrategy::RecountEachTry) {
      ++steps;
      ++rec.detections;
      const auto det = counting.detect(rng, counter);
      have_k = det.detected;
      if (!have_k) continue;
      k = *det.k_star;
      if (steps >= max_attempts) break;
    }
    ++steps;
    ++rec.attempts;
    const std::uint64_t before = counter.evaluations;
    const auto got = template_retrieval(counting.n(), counting.r_true(), k, match_set, rng, counter);
    rec.retrieval_evals += counter.evaluations - before;
    if (got) {
      rec.succeeded = true;
      rec.returned_index = got;
      break;
    }
  }
  rec.oracle_evals = counter.evaluations - start;
  return rec;
}

TrialRecord retrieve_until_success(RetrievalStrategy strategy, std::uint64_t n, std::uint64_t r_true,
                                   unsigned p, std::span<const bank::TemplateIndex> match_set,
                                   Rng& rng, OracleCounter& counter, std::uint64_t max_attempts) {
  return retrieve_until_success(strategy, CountingEmulator(n, r_true, p), match_set, rng, counter,
                                max_attempts);
}

Collection collect_all_matches(const CountingEmulator& counting,
                               std::span<const bank::TemplateIndex> match_set, Rng& rng,
                               OracleCounter& counter, std::uint64_t budget) {
  if (counting.r_true() == 0 || match_set.empty())
    throw InputError("collection needs at least one match");
  Collection out;
  DetectionOutcome det;
  std::uint64_t spent = 0;
  do {
    det = counting.detect(rng, counter);
  } while (!det.detected && ++spent < budget);
  if (!det.detected) return out;
  out.target = det.r_star;

  while (out.attempts < budget && out.indices.size() < out.target) {
    ++out.attempts;
    if (auto got = template_retrieval(counting.n(), counting.r_true(), *det.k_star, match_set, rng, counter)) {
      ++out.successes;
      out.indices.insert(*got);
    }
  }
  out.complete = out.indices.size() >= out.target;
  return out;
}

MonteCarloSummary monte_carlo(const MonteCarloConfig& config, std::uint64_t trials,
                              std::uint64_t seed, unsigned threads) {
  if (trials == 0) throw InputError("at least one trial is required");
  if (config.r_true == 0) throw InputError("monte carlo retrieval needs r >= 1");
  const unsigned p = config.p ? config.p : amplify::choose_p(config.n);
  const CountingEmulator counting(config.n, config.r_true, p);

  std::vector<bank::TemplateIndex> match_set = config.match_set;
  if (match_set.empty())
    for (std::uint64_t i = 0; i < config.r_true; ++i) match_set.push_back(i);

  MonteCarloSummary summary;
  summary.records.resize(trials);
  parallel_for(trials, threads, [&](std::uint64_t t) {
    Rng rng = Rng::substream(seed, t);
    OracleCounter counter;
    summary.records[t] = retrieve_until_success(config.strategy, counting, match_set, rng, counter,
                                                config.max_attempts);
  });

  std::vector<double> evals;
  evals.reserve(trials);
  for (const auto& r : summary.records) {
    evals.push_back(static_cast<double>(r.oracle_evals));
    ++summary.histogram[r.oracle_evals];
    if (!r.succeeded) ++summary.failures;
  }
  double sum = 0.0;
  for (double e : evals) sum += e;
  summary.mean = sum / static_cast<double>(trials);
  double ss = 0.0;
  for (double e : evals) ss += (e - summary.mean) * (e - summary.mean);
  summary.stddev = trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1)) : 0.0;
  std::sort(evals.begin(), evals.end());
  summary.median = trials % 2 ? evals[trials / 2] : 0.5 * (evals[trials / 2 - 1] + evals[trials / 2]);
  return summary;
}

TimeSeries make_injection(const bank::BankSpec& spec, const Injection& inj) {
  const auto params = bank::index_to_params(spec, inj.index);
  const auto wave = bank::waveform(params, spec.fs, spec.m_samples);
  TimeSeries data;
  data.dt = 1.0 / spec.fs;
  data.samples.assign(spec.m_samples, 0.0);
  for (std::size_t j = 0; j + inj.offset < spec.m_samples; ++j)
    data.samples[j + inj.offset] = inj.amplitude * wave.samples[j];
  if (inj.noise_sigma > 0.0) {
    Rng rng(inj.noise_seed);
    for (double& x : data.samples) x += inj.noise_sigma * rng.normal();
  }
  return data;
}

}  // namespace qmf::pipeline
