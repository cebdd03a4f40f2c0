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

#include <cstddef>
#include <span>
#include <vector>

#include "qmf/series.hpp"

namespace qmf::dsp::detail {

// Thin wrappers over FFTW.  All transforms are unnormalized.
std::vector<cplx> r2c(std::span<const double> x);
std::vector<double> c2r(std::span<const cplx> half, std::size_t n);
std::vector<cplx> c2c_backward(std::span<const cplx> x);

}  // namespace qmf::dsp::detail
