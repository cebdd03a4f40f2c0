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

#include "fft_plan.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace qmf::dsp::detail {

namespace {

enum class Kind { R2C, C2R, C2CBackward };

// FFTW planning is not thread-safe; execution through the new-array
// interface is.  Plans are created once per (kind, size) and reused.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan get_plan(Kind kind, std::size_t n) {
  static std::map<std::tuple<Kind, std::size_t>, fftw_plan> cache;
  std::lock_guard lock(plan_mutex());
  auto key = std::make_tuple(kind, n);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const int len = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan plan = nullptr;
  switch (kind) {
    case Kind::R2C: {
      auto* in = fftw_alloc_real(n);
      auto* out = fftw_alloc_complex(n / 2 + 1);
      plan = fftw_plan_dft_r2c_1d(len, in, out, flags);
      fftw_free(in);
      fftw_free(out);
      break;
    }
    case Kind::C2R: {
      auto* in = fftw_alloc_complex(n / 2 + 1);
      auto* out = fftw_alloc_real(n);
      plan = fftw_plan_dft_c2r_1d(len, in, out, flags);
      fftw_free(in);
      fftw_free(out);
      break;
    }
    case Kind::C2CBackward: {
      auto* in = fftw_alloc_complex(n);
      auto* out = fftw_alloc_complex(n);
      plan = fftw_plan_dft_1d(len, in, out, FFTW_BACKWARD, flags);
      fftw_free(in);
      fftw_free(out);
      break;
    }
  }
  cache.emplace(key, plan);
  return plan;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

std::vector<cplx> r2c(std::span<const double> x) {
  std::vector<double> in(x.begin(), x.end());
  std::vector<cplx> out(x.size() / 2 + 1);
  fftw_execute_dft_r2c(get_plan(Kind::R2C, x.size()), in.data(), as_fftw(out.data()));
  return out;
}

std::vector<double> c2r(std::span<const cplx> half, std::size_t n) {
  // c2r overwrites its input
  std::vector<cplx> in(half.begin(), half.end());
  std::vector<double> out(n);
  fftw_execute_dft_c2r(get_plan(Kind::C2R, n), as_fftw(in.data()), out.data());
  return out;
}

std::vector<cplx> c2c_backward(std::span<const cplx> x) {
  std::vector<cplx> in(x.begin(), x.end());
  std::vector<cplx> out(x.size());
  fftw_execute_dft(get_plan(Kind::C2CBackward, x.size()), as_fftw(in.data()), as_fftw(out.data()));
  return out;
}

}  // namespace qmf::dsp::detail
