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

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qmf/rng.hpp"
#include "qmf/series.hpp"

// Exact state-vector simulation of the string-matching oracle, the Grover
// iteration and the full quantum-counting circuit.
//
// Qubit t addresses bit t of the amplitude index.  The data register of the
// textbook string-matching circuit is not simulated: its bits are classical,
// so the data-controlled CNOT layer is folded into classically chosen X gates
// on the template register.  The resulting unitary on template (x) ancilla is
// the same.
namespace qmf::qsim {

inline constexpr unsigned kDefaultQubitCap = 26;

struct QubitRange {
  unsigned first = 0;
  unsigned count = 0;

  unsigned operator[](unsigned i) const { return first + i; }
  std::uint64_t mask() const { return ((std::uint64_t{1} << count) - 1) << first; }
};

/// Counting register in the low qubits, then template, then one ancilla.
struct RegisterLayout {
  QubitRange counting;
  QubitRange templ;
  unsigned ancilla = 0;

  static RegisterLayout make(unsigned n_template, unsigned p_counting);
  unsigned num_qubits() const { return counting.count + templ.count + 1; }
  void validate() const;
};

/// Matches every template whose n - q high-order bits equal the data's.
struct StringOracleSpec {
  std::uint64_t data_bits = 0;
  unsigned n = 0;
  unsigned q_ignored = 0;

  /// Parses an MSB-first bit string such as "000110".
  static StringOracleSpec parse(const std::string& bits, unsigned q_ignored);
  bool matches(std::uint64_t templ) const;
  std::uint64_t match_count() const { return std::uint64_t{1} << q_ignored; }
  void validate() const;
};

enum class Gate { H, X, Z, CNOT, MCX, MCZ };

class StateVector {
 public:
  /// |0...0> on num_qubits qubits; throws ResourceError above the cap.
  explicit StateVector(unsigned num_qubits, unsigned qubit_cap = kDefaultQubitCap);

  unsigned num_qubits() const { return num_qubits_; }
  std::size_t size() const { return amps_.size(); }
  std::span<const cplx> amplitudes() const { return amps_; }
  std::span<cplx> amplitudes() { return amps_; }
  double norm_sq() const;

  // Every kernel acts only on the subspace where all control bits are 1.
  void h(unsigned target, std::uint64_t control_mask = 0);
  void x(unsigned target, std::uint64_t control_mask = 0);
  void z(unsigned target, std::uint64_t control_mask = 0);
  void phase(unsigned target, double angle, std::uint64_t control_mask = 0);
  void swap(unsigned a, unsigned b);
  /// Multiplies every amplitude whose index contains all of `mask` by factor.
  void scale_if(std::uint64_t mask, cplx factor);

 private:
  void check_target(unsigned target, std::uint64_t control_mask) const;
  template <class Kernel>
  void for_each_pair(unsigned target, std::uint64_t control_mask, Kernel&& kernel);

  unsigned num_qubits_;
  std::vector<cplx> amps_;
};

/// Bit mask over a list of qubit indices.
std::uint64_t mask_of(std::span<const unsigned> qubits);

/// Gate dispatcher.  Single-qubit gates ignore `controls`; CNOT takes exactly
/// one control; MCX and MCZ take any number.  Throws InputError on an out of
/// range index or when a control coincides with the target.
void apply_gate(StateVector& state, Gate gate, std::span<const unsigned> controls, unsigned target);

StateVector init_state(const RegisterLayout& layout, unsigned qubit_cap = kDefaultQubitCap);

/// Phase-flips matching templates via phase kickback on the |-> ancilla.
/// A non-zero control_mask conditions the whole oracle on those qubits.
void string_oracle(StateVector& state, const RegisterLayout& layout, const StringOracleSpec& spec,
                   std::uint64_t control_mask = 0);

/// 2|s><s| - I on the template register.
void diffusion(StateVector& state, const RegisterLayout& layout, std::uint64_t control_mask = 0);

/// Oracle followed by diffusion.
void grover_iteration(StateVector& state, const RegisterLayout& layout,
                      const StringOracleSpec& spec, std::uint64_t control_mask = 0);

/// Counting qubit t controls G^{2^t}; returns the number of controlled-G
/// applications (2^p - 1).
std::uint64_t controlled_grover_powers(StateVector& state, const RegisterLayout& layout,
                                       const StringOracleSpec& spec);

/// QFT|x> = 2^{-p/2} sum_y exp(2 pi i x y / 2^p) |y>, including the final
/// qubit-order reversal, so register integers read directly.
void qft(StateVector& state, QubitRange range);
void inverse_qft(StateVector& state, QubitRange range);

struct ShotResult {
  unsigned width = 0;  // bits per outcome
  std::uint64_t shots = 0;
  std::map<std::uint64_t, std::uint64_t> counts;

  /// Most frequent outcome; ties go to the smaller integer.
  std::uint64_t mode() const;
};

/// Exact outcome distribution of the qubits in range.
std::vector<double> marginal(const StateVector& state, QubitRange range);

/// Multinomial draw of `shots` outcomes from a distribution.
ShotResult sample_shots(std::span<const double> probs, unsigned width, std::uint64_t shots, Rng& rng);

ShotResult measure(const StateVector& state, QubitRange range, std::uint64_t shots, Rng& rng);

struct CircuitRun {
  ShotResult shots;
  std::vector<double> exact;  // exact marginal of the measured register
  std::uint64_t oracle_calls = 0;
};

/// Quantum counting: init, controlled Grover powers, inverse QFT, measure the
/// counting register.
CircuitRun run_counting_circuit(const StringOracleSpec& spec, unsigned p, std::uint64_t shots,
                                Rng& rng, unsigned qubit_cap = kDefaultQubitCap);

/// Grover search: init, k iterations, measure the template register.
CircuitRun run_search_circuit(const StringOracleSpec& spec, std::uint64_t k, std::uint64_t shots,
                              Rng& rng, unsigned qubit_cap = kDefaultQubitCap);

/// MSB-first bit string of `value` with `width` digits.
std::string to_bits(std::uint64_t value, unsigned width);

}  // namespace qmf::qsim
