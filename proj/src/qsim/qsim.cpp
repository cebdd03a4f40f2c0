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

#include "qmf/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qmf/error.hpp"

namespace qmf::qsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::uint64_t bit(unsigned q) { return std::uint64_t{1} << q; }

}  // namespace

RegisterLayout RegisterLayout::make(unsigned n_template, unsigned p_counting) {
  RegisterLayout layout;
  layout.counting = {0, p_counting};
  layout.templ = {p_counting, n_template};
  layout.ancilla = p_counting + n_template;
  return layout;
}

void RegisterLayout::validate() const {
  if (templ.count == 0) throw InputError("template register must hold at least one qubit");
  const auto c = counting.count ? counting.mask() : 0;
  const auto t = templ.mask();
  const auto a = bit(ancilla);
  if ((c & t) || (c & a) || (t & a)) throw InputError("register ranges overlap");
  if ((c | t | a) != bit(num_qubits()) - 1) throw InputError("registers do not cover the state");
}

StringOracleSpec StringOracleSpec::parse(const std::string& bits, unsigned q_ignored) {
  if (bits.empty() || bits.size() > 63) throw InputError("data bit string must hold 1..63 bits");
  StringOracleSpec spec;
  spec.n = static_cast<unsigned>(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw InputError("data bit string may only contain 0 and 1");
    spec.data_bits = (spec.data_bits << 1) | static_cast<std::uint64_t>(c == '1');
  }
  spec.q_ignored = q_ignored;
  spec.validate();
  return spec;
}

void StringOracleSpec::validate() const {
  if (n == 0 || n > 63) throw InputError("oracle width must lie in [1, 63]");
  if (q_ignored > n) throw InputError("cannot ignore more bits than the data holds");
  if (data_bits >> n) throw InputError("data bits wider than the register");
}

bool StringOracleSpec::matches(std::uint64_t templ) const {
  return (templ >> q_ignored) == (data_bits >> q_ignored);
}

StateVector::StateVector(unsigned num_qubits, unsigned qubit_cap) : num_qubits_(num_qubits) {
  if (num_qubits > qubit_cap)
    throw ResourceError(std::to_string(num_qubits) + " qubits exceed the cap of " +
                        std::to_string(qubit_cap));
  amps_.assign(std::size_t{1} << num_qubits, cplx{0.0, 0.0});
  amps_[0] = 1.0;
}

double StateVector::norm_sq() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return acc;
}

void StateVector::check_target(unsigned target, std::uint64_t control_mask) const {
  if (target >= num_qubits_) throw InputError("target qubit out of range");
  if (control_mask >> num_qubits_) throw InputError("control qubit out of range");
  if (control_mask & bit(target)) throw InputError("control coincides with target");
}

// Visits (i0, i1) index pairs differing only in `target`, restricted to
// indices with every control bit set.  Pairs are disjoint, so the loop body
// may be partitioned freely.
template <class Kernel>
void StateVector::for_each_pair(unsigned target, std::uint64_t control_mask, Kernel&& kernel) {
  check_target(target, control_mask);
  const std::uint64_t tbit = bit(target);
  const std::uint64_t low = tbit - 1;
  const std::uint64_t half = amps_.size() / 2;
  for (std::uint64_t i = 0; i < half; ++i) {
    const std::uint64_t i0 = ((i & ~low) << 1) | (i & low);
    if ((i0 & control_mask) != control_mask) continue;
    kernel(amps_[i0], amps_[i0 | tbit]);
  }
}

void StateVector::h(unsigned target, std::uint64_t control_mask) {
  for_each_pair(target, control_mask, [](cplx& a, cplx& b) {
    const cplx s = a + b;
    const cplx d = a - b;
    a = s * kInvSqrt2;
    b = d * kInvSqrt2;
  });
}

void StateVector::x(unsigned target, std::uint64_t control_mask) {
  for_each_pair(target, control_mask, [](cplx& a, cplx& b) { std::swap(a, b); });
}

void StateVector::z(unsigned target, std::uint64_t control_mask) {
  for_each_pair(target, control_mask, [](cplx&, cplx& b) { b = -b; });
}

void StateVector::phase(unsigned target, double angle, std::uint64_t control_mask) {
  const cplx f = std::polar(1.0, angle);
  for_each_pair(target, control_mask, [f](cplx&, cplx& b) { b *= f; });
}

void StateVector::swap(unsigned a, unsigned b) {
  if (a >= num_qubits_ || b >= num_qubits_) throw InputError("swap qubit out of range");
  if (a == b) return;
  const std::uint64_t ba = bit(a), bb = bit(b);
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    // Visit each |..1_a..0_b..> once and exchange with |..0_a..1_b..>.
    if ((i & ba) && !(i & bb)) std::swap(amps_[i], amps_[(i ^ ba) | bb]);
  }
}

void StateVector::scale_if(std::uint64_t mask, cplx factor) {
  if (mask >> num_qubits_) throw InputError("mask out of range");
  for (std::uint64_t i = 0; i < amps_.size(); ++i)
    if ((i & mask) == mask) amps_[i] *= factor;
}

std::uint64_t mask_of(std::span<const unsigned> qubits) {
  std::uint64_t m = 0;
  for (unsigned q : qubits) {
    if (q >= 64) throw InputError("qubit index out of range");
    if (m & bit(q)) throw InputError("duplicate qubit index");
    m |= bit(q);
  }
  return m;
}

void apply_gate(StateVector& state, Gate gate, std::span<const unsigned> controls, unsigned target) {
  switch (gate) {
    case Gate::H:
      state.h(target);
      return;
    case Gate::X:
      state.x(target);
      return;
    case Gate::Z:
      state.z(target);
      return;
    case Gate::CNOT:
      if (controls.size() != 1) throw InputError("CNOT takes exactly one control");
      state.x(target, mask_of(controls));
      return;
    case Gate::MCX:
      state.x(target, mask_of(controls));
      return;
    case Gate::MCZ:
      state.z(target, mask_of(controls));
      return;
  }
}

StateVector init_state(const RegisterLayout& layout, unsigned qubit_cap) {
  layout.validate();
  StateVector state(layout.num_qubits(), qubit_cap);
  for (unsigned t = 0; t < layout.counting.count; ++t) state.h(layout.counting[t]);
  for (unsigned t = 0; t < layout.templ.count; ++t) state.h(layout.templ[t]);
  state.x(layout.ancilla);
  state.h(layout.ancilla);
  return state;
}

void string_oracle(StateVector& state, const RegisterLayout& layout, const StringOracleSpec& spec,
                   std::uint64_t control_mask) {
  if (layout.templ.count != spec.n) throw InputError("oracle width does not match the template register");
  // The data-conditioned flips (X where the data bit is 1) and the X sandwich
  // around the multi-controlled X compose to a single X where the data bit is 0.
  std::uint64_t controls = control_mask;
  std::vector<unsigned> flipped;
  for (unsigned t = spec.q_ignored; t < spec.n; ++t) {
    controls |= bit(layout.templ[t]);
    if (!((spec.data_bits >> t) & 1U)) flipped.push_back(layout.templ[t]);
  }
  for (unsigned q : flipped) state.x(q);
  state.x(layout.ancilla, controls);
  for (unsigned q : flipped) state.x(q);
}

void diffusion(StateVector& state, const RegisterLayout& layout, std::uint64_t control_mask) {
  const auto& reg = layout.templ;
  for (unsigned t = 0; t < reg.count; ++t) state.h(reg[t]);
  for (unsigned t = 0; t < reg.count; ++t) state.x(reg[t]);
  const unsigned last = reg[reg.count - 1];
  state.z(last, control_mask | (reg.mask() & ~bit(last)));
  for (unsigned t = 0; t < reg.count; ++t) state.x(reg[t]);
  for (unsigned t = 0; t < reg.count; ++t) state.h(reg[t]);
  // The H X (C^n Z) X H sequence equals I - 2|s><s|; the overall sign is
  // observable once the operator is controlled.
  state.scale_if(control_mask, -1.0);
}

void grover_iteration(StateVector& state, const RegisterLayout& layout,
                      const StringOracleSpec& spec, std::uint64_t control_mask) {
  string_oracle(state, layout, spec, control_mask);
  diffusion(state, layout, control_mask);
}

std::uint64_t controlled_grover_powers(StateVector& state, const RegisterLayout& layout,
                                       const StringOracleSpec& spec) {
  std::uint64_t applied = 0;
  for (unsigned t = 0; t < layout.counting.count; ++t) {
    const std::uint64_t control = bit(layout.counting[t]);
    const std::uint64_t reps = std::uint64_t{1} << t;
    for (std::uint64_t j = 0; j < reps; ++j) grover_iteration(state, layout, spec, control);
    applied += reps;
  }
  return applied;
}

void qft(StateVector& state, QubitRange range) {
  for (unsigned jj = range.count; jj-- > 0;) {
    state.h(range[jj]);
    for (unsigned m = jj; m-- > 0;)
      state.phase(range[jj], std::numbers::pi / static_cast<double>(bit(jj - m)), bit(range[m]));
  }
  for (unsigned t = 0; t < range.count / 2; ++t) state.swap(range[t], range[range.count - 1 - t]);
}

void inverse_qft(StateVector& state, QubitRange range) {
  for (unsigned t = 0; t < range.count / 2; ++t) state.swap(range[t], range[range.count - 1 - t]);
  for (unsigned jj = 0; jj < range.count; ++jj) {
    for (unsigned m = 0; m < jj; ++m)
      state.phase(range[jj], -std::numbers::pi / static_cast<double>(bit(jj - m)), bit(range[m]));
    state.h(range[jj]);
  }
}

std::uint64_t ShotResult::mode() const {
  std::uint64_t best = 0, best_count = 0;
  for (const auto& [outcome, count] : counts) {
    if (count > best_count) {
      best = outcome;
      best_count = count;
    }
  }
  return best;
}

std::vector<double> marginal(const StateVector& state, QubitRange range) {
  if (range.first + range.count > state.num_qubits()) throw InputError("range outside the state");
  std::vector<double> probs(std::size_t{1} << range.count, 0.0);
  const auto amps = state.amplitudes();
  const std::uint64_t low = (std::uint64_t{1} << range.count) - 1;
  for (std::uint64_t i = 0; i < amps.size(); ++i) probs[(i >> range.first) & low] += std::norm(amps[i]);
  return probs;
}

ShotResult sample_shots(std::span<const double> probs, unsigned width, std::uint64_t shots, Rng& rng) {
  if (shots == 0) throw InputError("at least one shot is required");
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) cdf[i] = (acc += probs[i]);
  ShotResult result;
  result.width = width;
  result.shots = shots;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    // Skip zero-probability outcomes sharing the same cumulative value.
    auto idx = static_cast<std::uint64_t>(it - cdf.begin());
    while (probs[idx] <= 0.0 && idx + 1 < probs.size()) ++idx;
    ++result.counts[idx];
  }
  return result;
}

ShotResult measure(const StateVector& state, QubitRange range, std::uint64_t shots, Rng& rng) {
  const auto probs = marginal(state, range);
  return sample_shots(probs, range.count, shots, rng);
}

CircuitRun run_counting_circuit(const StringOracleSpec& spec, unsigned p, std::uint64_t shots,
                                Rng& rng, unsigned qubit_cap) {
  spec.validate();
  if (p == 0) throw InputError("counting register needs at least one qubit");
  if (spec.n + p + 1 > qubit_cap)
    throw ResourceError("counting circuit needs " + std::to_string(spec.n + p + 1) +
                        " qubits, above the cap of " + std::to_string(qubit_cap));
  const auto layout = RegisterLayout::make(spec.n, p);
  auto state = init_state(layout, qubit_cap);
  CircuitRun run;
  run.oracle_calls = controlled_grover_powers(state, layout, spec);
  inverse_qft(state, layout.counting);
  run.exact = marginal(state, layout.counting);
  run.shots = sample_shots(run.exact, p, shots, rng);
  return run;
}

CircuitRun run_search_circuit(const StringOracleSpec& spec, std::uint64_t k, std::uint64_t shots,
                              Rng& rng, unsigned qubit_cap) {
  spec.validate();
  if (spec.n + 1 > qubit_cap)
    throw ResourceError("search circuit needs " + std::to_string(spec.n + 1) +
                        " qubits, above the cap of " + std::to_string(qubit_cap));
  const auto layout = RegisterLayout::make(spec.n, 0);
  auto state = init_state(layout, qubit_cap);
  for (std::uint64_t j = 0; j < k; ++j) grover_iteration(state, layout, spec);
  CircuitRun run;
  run.oracle_calls = k;
  run.exact = marginal(state, layout.templ);
  run.shots = sample_shots(run.exact, spec.n, shots, rng);
  return run;
}

std::string to_bits(std::uint64_t value, unsigned width) {
  std::string s(width, '0');
  for (unsigned i = 0; i < width; ++i)
    if ((value >> i) & 1U) s[width - 1 - i] = '1';
  return s;
}

}  // namespace qmf::qsim
