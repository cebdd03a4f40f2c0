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

#include "qmf/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <optional>
#include <ostream>

#include "qmf/amplify.hpp"
#include "qmf/bank.hpp"
#include "qmf/cw.hpp"
#include "qmf/dsp.hpp"
#include "qmf/error.hpp"
#include "qmf/io.hpp"
#include "qmf/pipeline.hpp"
#include "qmf/qsim.hpp"

namespace qmf::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed, const char* command) {
  if (!seed) throw InputError(std::string(command) + " is stochastic and needs --seed");
  return *seed;
}

fs::path sibling(const fs::path& out, const std::string& suffix) {
  return fs::path(out.string() + suffix);
}

// Scenario shared by detect, retrieve and mc-bench.  Either a bare (n, r)
// pair with a synthetic match set, or a template bank with data (from a file
// or an injection) searched classically to find the true matches.
struct Scenario {
  json config;
  std::uint64_t n = 0;
  std::uint64_t r_true = 0;
  unsigned p = 0;
  pipeline::RetrievalStrategy strategy = pipeline::RetrievalStrategy::ReuseK;
  std::uint64_t trials = 1;
  std::optional<std::uint64_t> seed;
  std::uint64_t max_attempts = pipeline::kDefaultMaxAttempts;
  std::vector<bank::TemplateIndex> match_set;
  std::optional<pipeline::MatchedFilterOracle> oracle;
  std::uint64_t setup_evals = 0;
};

Scenario load_scenario(const std::string& text, const std::optional<std::uint64_t>& seed_flag) {
  Scenario sc;
  try {
    sc.config = json::parse(text);
    const auto& c = sc.config;
    if (c.contains("seed")) sc.seed = c.at("seed").get<std::uint64_t>();
    if (c.contains("trials")) {
      const auto t = c.at("trials").get<std::int64_t>();
      if (t < 1) throw InputError("trials must be at least 1");
      sc.trials = static_cast<std::uint64_t>(t);
    }
    if (c.contains("strategy")) sc.strategy = pipeline::strategy_from_string(c.at("strategy").get<std::string>());
    if (c.contains("max_attempts")) sc.max_attempts = c.at("max_attempts").get<std::uint64_t>();

    if (c.contains("bank")) {
      const auto spec = bank::bank_spec_from_json(c.at("bank").dump());
      const double rho_thr = c.at("rho_thr").get<double>();
      dsp::Band band;
      band.f_low = c.value("f_low", band.f_low);
      if (c.contains("f_high")) band.f_high = c.at("f_high").get<double>();
      TimeSeries data;
      double sigma = 1.0;
      if (c.contains("data")) {
        data = io::read_strain(c.at("data").get<std::string>());
      } else if (c.contains("injection")) {
        const auto& j = c.at("injection");
        pipeline::Injection inj;
        inj.index = j.at("index").get<std::uint64_t>();
        inj.amplitude = j.value("amplitude", 1.0);
        inj.noise_sigma = j.value("noise_sigma", 1.0);
        inj.noise_seed = j.value("noise_seed", std::uint64_t{0});
        inj.offset = j.value("offset", std::size_t{0});
        if (inj.noise_sigma > 0.0) sigma = inj.noise_sigma;
        data = pipeline::make_injection(spec, inj);
      } else {
        throw InputError("bank scenario needs either \"data\" or \"injection\"");
      }
      const Psd psd = c.contains("psd") ? io::read_psd_csv(c.at("psd").get<std::string>())
                                        : dsp::white_psd(sigma, data.dt, data.size());
      sc.oracle.emplace(spec, data, psd, rho_thr, band);
      pipeline::OracleCounter setup;
      sc.match_set = pipeline::classical_search(*sc.oracle, setup);
      sc.setup_evals = setup.evaluations;
      sc.n = sc.oracle->size();
      sc.r_true = sc.match_set.size();
    } else {
      sc.n = c.at("n").get<std::uint64_t>();
      sc.r_true = c.at("r").get<std::uint64_t>();
      if (sc.r_true > sc.n) throw InputError("r exceeds n");
      for (std::uint64_t i = 0; i < sc.r_true; ++i) sc.match_set.push_back(i);
    }
    sc.p = c.contains("p") ? c.at("p").get<unsigned>() : amplify::choose_p(sc.n);
  } catch (const json::exception& e) {
    throw InputError(std::string("scenario: ") + e.what());
  }
  if (seed_flag) sc.seed = seed_flag;
  return sc;
}

std::string read_config(const std::string& path) {
  if (!fs::exists(path)) throw InputError("config file not found: " + path);
  return io::read_text(path);
}

// ----------------------------------------------------------------------------

struct MfSnrArgs {
  std::string data, bank, psd, out;
  std::uint64_t index = 0;
  std::size_t welch_seg = 0;
  double f_low = 0.0, f_high = -1.0;
};

int cmd_mf_snr(const MfSnrArgs& a, std::ostream& out) {
  if (!fs::exists(a.data)) throw InputError("data file not found: " + a.data);
  const auto spec = bank::bank_spec_from_json(read_config(a.bank));
  const auto data = io::read_strain(a.data);
  if (std::abs(data.dt * spec.fs - 1.0) > 1e-9) throw InputError("data sample rate does not match the bank");
  if (data.size() != spec.m_samples) throw InputError("data length does not match m_samples");

  Psd psd;
  if (!a.psd.empty())
    psd = dsp::resample_psd(io::read_psd_csv(a.psd), data.size(), data.dt);
  else if (a.welch_seg > 0)
    psd = dsp::resample_psd(dsp::estimate_psd(data, a.welch_seg, 0.5), data.size(), data.dt);
  else
    psd = dsp::white_psd(1.0, data.dt, data.size());
  dsp::Band band;
  band.f_low = a.f_low;
  if (a.f_high > 0.0) band.f_high = a.f_high;

  const auto params = bank::index_to_params(spec, a.index);
  const auto qc = dsp::complex_template(params, spec.fs, spec.m_samples, psd, band);
  auto snr = dsp::snr_series(dsp::forward_fft(data), qc, psd, band);
  snr.t0 = data.t0;
  const auto peak = dsp::max_snr(snr);

  ordered_json cfg = {{"data", a.data}, {"bank", json::parse(bank::bank_spec_to_json(spec))},
                      {"index", a.index}, {"psd", a.psd}, {"welch_seg", a.welch_seg}};
  io::write_atomic(a.out, io::provenance("mf-snr", cfg.dump(), 0) + io::snr_csv(snr));
  ordered_json summary = {{"rho_max", peak.rho_max},
                          {"t_max", data.t0 + data.dt * static_cast<double>(peak.j_max)},
                          {"j_max", peak.j_max}};
  io::write_atomic(sibling(a.out, ".json"), summary.dump(2) + "\n");
  out << "rho_max=" << io::fmt_double(peak.rho_max) << " j_max=" << peak.j_max << "\n";
  return kOk;
}

struct CountDistArgs {
  std::uint64_t n = 0, r = 0;
  std::optional<unsigned> p;
  std::string out;
};

int cmd_count_dist(const CountDistArgs& a, std::ostream& out) {
  const unsigned p = a.p ? *a.p : amplify::choose_p(a.n);
  const auto dist = amplify::counting_distribution(a.n, a.r, p);
  ordered_json cfg = {{"n", a.n}, {"r", a.r}, {"p", p}};
  std::string body = io::provenance("count-dist", cfg.dump(), 0) + "b,probability\n";
  for (std::size_t b = 0; b < dist.probs.size(); ++b)
    body += std::to_string(b) + "," + io::fmt_double(dist.probs[b]) + "\n";
  io::write_atomic(a.out, body);
  out << "p=" << p << " outcomes=" << dist.probs.size() << "\n";
  return kOk;
}

struct QsimArgs {
  std::string data_bits, out;
  unsigned q = 0;
  std::optional<unsigned> p;
  std::optional<std::uint64_t> k;
  std::uint64_t shots = 2048;
  std::optional<std::uint64_t> seed;
  unsigned qubit_cap = qsim::kDefaultQubitCap;
};

int cmd_qsim(const QsimArgs& a, bool counting, std::ostream& out) {
  const char* name = counting ? "qsim-count" : "qsim-search";
  const auto seed = require_seed(a.seed, name);
  const auto spec = qsim::StringOracleSpec::parse(a.data_bits, a.q);
  const std::uint64_t n_templates = std::uint64_t{1} << spec.n;
  Rng rng(seed);
  qsim::CircuitRun run;
  ordered_json cfg = {{"data", a.data_bits}, {"q", a.q}, {"shots", a.shots}};
  if (counting) {
    const unsigned p = a.p ? *a.p : amplify::choose_p(std::max<std::uint64_t>(n_templates, 2));
    cfg["p"] = p;
    run = qsim::run_counting_circuit(spec, p, a.shots, rng, a.qubit_cap);
  } else {
    const std::uint64_t k = a.k ? *a.k : amplify::optimal_k(n_templates, spec.match_count());
    cfg["k"] = k;
    run = qsim::run_search_circuit(spec, k, a.shots, rng, a.qubit_cap);
  }
  const auto header = io::provenance(name, cfg.dump(), seed);
  std::string shots_csv = header + "outcome_bits,count,probability\n";
  for (const auto& [outcome, count] : run.shots.counts)
    shots_csv += qsim::to_bits(outcome, run.shots.width) + "," + std::to_string(count) + "," +
                 io::fmt_double(static_cast<double>(count) / static_cast<double>(run.shots.shots)) + "\n";
  std::string exact_csv = header + "outcome_int,probability\n";
  for (std::size_t i = 0; i < run.exact.size(); ++i)
    exact_csv += std::to_string(i) + "," + io::fmt_double(run.exact[i]) + "\n";
  io::write_atomic(a.out, shots_csv);
  io::write_atomic(sibling(a.out, ".exact.csv"), exact_csv);
  out << "mode=" << run.shots.mode() << " (" << qsim::to_bits(run.shots.mode(), run.shots.width) << ")\n";
  return kOk;
}

struct ScenarioArgs {
  std::string config, out, hist;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

ordered_json scenario_echo(const Scenario& sc, std::uint64_t seed) {
  ordered_json j = {{"n", sc.n},         {"r_true", sc.r_true}, {"p", sc.p},
                    {"strategy", pipeline::to_string(sc.strategy)},
                    {"trials", sc.trials}, {"seed", seed},      {"max_attempts", sc.max_attempts}};
  return j;
}

int cmd_mc_bench(const ScenarioArgs& a, std::ostream& out) {
  auto sc = load_scenario(read_config(a.config), a.seed);
  const auto seed = require_seed(sc.seed, "mc-bench");
  pipeline::MonteCarloConfig mc;
  mc.n = sc.n;
  mc.r_true = sc.r_true;
  mc.p = sc.p;
  mc.strategy = sc.strategy;
  mc.max_attempts = sc.max_attempts;
  mc.match_set = sc.match_set;
  const auto summary = pipeline::monte_carlo(mc, sc.trials, seed, a.threads);

  const auto echo = scenario_echo(sc, seed);
  ordered_json j;
  j["provenance"] = {{"tool", "qmf"}, {"version", io::kToolVersion}, {"command", "mc-bench"}, {"config", echo}};
  j["mean"] = summary.mean;
  j["median"] = summary.median;
  j["stddev"] = summary.stddev;
  j["failures"] = summary.failures;
  j["classical_evals"] = sc.n;
  j["histogram"] = json::array();
  std::string hist_csv = io::provenance("mc-bench", echo.dump(), seed) + "evals,count\n";
  for (const auto& [evals, count] : summary.histogram) {
    j["histogram"].push_back({{"evals", evals}, {"count", count}});
    hist_csv += std::to_string(evals) + "," + std::to_string(count) + "\n";
  }
  io::write_atomic(a.out, j.dump(2) + "\n");
  io::write_atomic(a.hist.empty() ? sibling(a.out, ".hist.csv") : fs::path(a.hist), hist_csv);
  out << "mean=" << io::fmt_double(summary.mean) << " median=" << io::fmt_double(summary.median)
      << " classical=" << sc.n << "\n";
  return kOk;
}

int cmd_detect(const ScenarioArgs& a, std::ostream& out) {
  auto sc = load_scenario(read_config(a.config), a.seed);
  const auto seed = require_seed(sc.seed, "detect");
  Rng rng(seed);
  pipeline::OracleCounter counter;
  const auto det = pipeline::signal_detection(sc.n, sc.r_true, sc.p, rng, counter);
  ordered_json j;
  j["provenance"] = {{"tool", "qmf"}, {"version", io::kToolVersion}, {"command", "detect"},
                     {"config", scenario_echo(sc, seed)}};
  j["n"] = sc.n;
  j["r_true"] = sc.r_true;
  j["p"] = sc.p;
  j["b"] = det.b;
  j["detected"] = det.detected;
  j["r_star"] = det.r_star;
  j["k_star"] = det.k_star ? json(*det.k_star) : json(nullptr);
  j["oracle_evals"] = counter.evaluations;
  io::write_atomic(a.out, j.dump(2) + "\n");
  out << (det.detected ? "detected" : "no match") << " b=" << det.b << " r*=" << det.r_star << "\n";
  return kOk;
}

int cmd_retrieve(const ScenarioArgs& a, std::ostream& out) {
  auto sc = load_scenario(read_config(a.config), a.seed);
  const auto seed = require_seed(sc.seed, "retrieve");
  if (sc.r_true == 0) throw InputError("no template exceeds the threshold; nothing to retrieve");
  Rng rng(seed);
  pipeline::OracleCounter counter;
  const auto rec = pipeline::retrieve_until_success(sc.strategy, sc.n, sc.r_true, sc.p, sc.match_set,
                                                    rng, counter, sc.max_attempts);
  ordered_json j;
  j["provenance"] = {{"tool", "qmf"}, {"version", io::kToolVersion}, {"command", "retrieve"},
                     {"config", scenario_echo(sc, seed)}};
  j["succeeded"] = rec.succeeded;
  j["index"] = rec.returned_index ? json(*rec.returned_index) : json(nullptr);
  if (rec.returned_index && sc.oracle) {
    const auto peak = sc.oracle->peak(*rec.returned_index);
    j["rho_max"] = peak.rho_max;
    j["verified"] = dsp::match_predicate(peak.rho_max, sc.oracle->threshold());
  }
  j["attempts"] = rec.attempts;
  j["detections"] = rec.detections;
  j["oracle_evals"] = rec.oracle_evals;
  j["classical_evals"] = sc.n;
  io::write_atomic(a.out, j.dump(2) + "\n");
  out << (rec.succeeded ? "retrieved index " + std::to_string(*rec.returned_index) : std::string("failed"))
      << " evals=" << rec.oracle_evals << "\n";
  return rec.succeeded ? kOk : kNumericError;
}

int cmd_fail_bound(std::uint64_t r_max, const std::string& path, std::ostream& out) {
  if (r_max < 1) throw InputError("r-max must be at least 1");
  ordered_json cfg = {{"r_max", r_max}};
  std::string body = io::provenance("fail-bound", cfg.dump(), 0) + "r,eps_p_argmax,max_bound\n";
  double worst = 0.0;
  for (std::uint64_t r = 1; r <= r_max; ++r) {
    const auto m = amplify::max_fail_bound(r);
    worst = std::max(worst, m.bound);
    body += std::to_string(r) + "," + io::fmt_double(m.eps_p) + "," + io::fmt_double(m.bound) + "\n";
  }
  io::write_atomic(path, body);
  out << "max bound over r<=" << r_max << ": " << io::fmt_double(worst) << "\n";
  return kOk;
}

struct CwArgs {
  std::string config, out;
  std::optional<double> f_khz, t_obs, delta_f, delta_f1, delta_target;
};

int cmd_cw_cost(const CwArgs& a, std::ostream& out) {
  auto spec = a.config.empty() ? cw::CwSearchSpec{} : cw::spec_from_json(read_config(a.config));
  if (a.f_khz) spec.f_khz = *a.f_khz;
  if (a.t_obs) spec.t_obs_yr = *a.t_obs;
  if (a.delta_f) spec.delta_f_hz = *a.delta_f;
  if (a.delta_f1) spec.delta_f1 = *a.delta_f1;
  if (a.delta_target) spec.delta_target = *a.delta_target;
  spec.validate();
  const auto cost = cw::quantum_cost(spec);
  const auto report = cw::report_json(spec, cost);
  if (!a.out.empty()) io::write_atomic(a.out, report + "\n");
  out << report << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum matched-filter simulation toolkit", "qmf"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(io::kToolVersion));

  MfSnrArgs mf;
  auto* mf_cmd = app.add_subcommand("mf-snr", "Matched-filter SNR series of one bank template");
  mf_cmd->add_option("--data", mf.data, "Strain file (.csv or raw float64 + .json sidecar)")->required();
  mf_cmd->add_option("--bank,--config", mf.bank, "Bank JSON config")->required();
  mf_cmd->add_option("--index", mf.index, "Template index")->required();
  mf_cmd->add_option("--psd", mf.psd, "PSD CSV (f_hz,sn); default unit-variance white");
  mf_cmd->add_option("--welch-seg", mf.welch_seg, "Estimate the PSD from the data with this segment length");
  mf_cmd->add_option("--f-low", mf.f_low, "Lower band edge, Hz");
  mf_cmd->add_option("--f-high", mf.f_high, "Upper band edge, Hz");
  mf_cmd->add_option("--out", mf.out, "Output CSV (t,rho); summary JSON at <out>.json")->required();

  CountDistArgs cd;
  auto* cd_cmd = app.add_subcommand("count-dist", "Exact counting-register distribution");
  cd_cmd->add_option("--n", cd.n, "Template count N")->required();
  cd_cmd->add_option("--r", cd.r, "Match count r")->required();
  cd_cmd->add_option("--p", cd.p, "Counting qubits (default: smallest with 2^p > pi sqrt N)");
  cd_cmd->add_option("--out", cd.out, "Output CSV (b,probability)")->required();

  QsimArgs qs;
  auto add_qsim = [&qs, &app](const char* name, const char* desc, bool counting) {
    auto* c = app.add_subcommand(name, desc);
    c->add_option("--data", qs.data_bits, "Data bit string, MSB first")->required();
    c->add_option("--q", qs.q, "Ignored low-order bits");
    if (counting)
      c->add_option("--p", qs.p, "Counting qubits");
    else
      c->add_option("--k", qs.k, "Grover iterations (default: optimal for r = 2^q)");
    c->add_option("--shots", qs.shots, "Shots");
    c->add_option("--seed", qs.seed, "RNG seed");
    c->add_option("--qubit-cap", qs.qubit_cap, "Maximum simulated qubits");
    c->add_option("--out", qs.out, "Shot CSV; exact marginals at <out>.exact.csv")->required();
    return c;
  };
  auto* qc_cmd = add_qsim("qsim-count", "State-vector quantum counting circuit", true);
  auto* qsr_cmd = add_qsim("qsim-search", "State-vector Grover search circuit", false);

  ScenarioArgs sa;
  auto add_scenario = [&sa, &app](const char* name, const char* desc) {
    auto* c = app.add_subcommand(name, desc);
    c->add_option("--config", sa.config, "Scenario JSON")->required();
    c->add_option("--seed", sa.seed, "RNG seed (overrides the scenario)");
    c->add_option("--out", sa.out, "Output JSON")->required();
    return c;
  };
  auto* mc_cmd = add_scenario("mc-bench", "Monte Carlo oracle-cost benchmark");
  mc_cmd->add_option("--hist", sa.hist, "Histogram CSV (default <out>.hist.csv)");
  mc_cmd->add_option("--threads", sa.threads, "Worker threads (0 = all cores)");
  auto* det_cmd = add_scenario("detect", "Signal detection (emulated quantum counting)");
  auto* ret_cmd = add_scenario("retrieve", "Template retrieval until success");

  std::uint64_t r_max = 50;
  std::string fb_out;
  auto* fb_cmd = app.add_subcommand("fail-bound", "Retrieval-failure bound sweep over r");
  fb_cmd->add_option("--r-max", r_max, "Largest r")->required();
  fb_cmd->add_option("--out", fb_out, "Output CSV (r,eps_p_argmax,max_bound)")->required();

  CwArgs cwa;
  auto* cw_cmd = app.add_subcommand("cw-cost", "Continuous-wave search cost estimate");
  cw_cmd->add_option("--config", cwa.config, "CW spec JSON");
  cw_cmd->add_option("--f-khz", cwa.f_khz);
  cw_cmd->add_option("--t-obs", cwa.t_obs, "Observation time, years");
  cw_cmd->add_option("--delta-f", cwa.delta_f);
  cw_cmd->add_option("--delta-f1", cwa.delta_f1);
  cw_cmd->add_option("--delta-target", cwa.delta_target);
  cw_cmd->add_option("--out", cwa.out, "Output JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (mf_cmd->parsed()) return cmd_mf_snr(mf, out);
    if (cd_cmd->parsed()) return cmd_count_dist(cd, out);
    if (qc_cmd->parsed()) return cmd_qsim(qs, true, out);
    if (qsr_cmd->parsed()) return cmd_qsim(qs, false, out);
    if (mc_cmd->parsed()) return cmd_mc_bench(sa, out);
    if (det_cmd->parsed()) return cmd_detect(sa, out);
    if (ret_cmd->parsed()) return cmd_retrieve(sa, out);
    if (fb_cmd->parsed()) return cmd_fail_bound(r_max, fb_out, out);
    if (cw_cmd->parsed()) return cmd_cw_cost(cwa, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kResourceCap;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumericError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace qmf::cli
