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
#include <filesystem>
#include <string>
#include <string_view>

#include "qmf/series.hpp"

// File formats: strain as CSV `t,strain` or raw little-endian float64 with a
// JSON sidecar {"fs_hz", "t0_s"}; PSD as CSV `f_hz,sn`; SNR as CSV `t,rho`.
// Lines starting with '#' are comments.
namespace qmf::io {

inline constexpr std::string_view kToolVersion = "0.1.0";

TimeSeries read_strain_csv(const std::filesystem::path& path);
TimeSeries read_strain_raw(const std::filesystem::path& path, const std::filesystem::path& sidecar);
/// CSV when the extension is .csv, otherwise raw with sidecar `<path>.json`.
TimeSeries read_strain(const std::filesystem::path& path);

std::string strain_csv(const TimeSeries& ts);
void write_strain_raw(const std::filesystem::path& path, const TimeSeries& ts);

Psd read_psd_csv(const std::filesystem::path& path);
std::string psd_csv(const Psd& psd);
std::string snr_csv(const SnrSeries& snr);

std::string read_text(const std::filesystem::path& path);

/// Writes through a temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// "# qmf <version> seed=<seed> config=<json>" provenance comment line.
std::string provenance(std::string_view command, std::string_view config_json,
                       std::uint64_t seed);

/// Shortest round-trip decimal form.
std::string fmt_double(double v);

}  // namespace qmf::io
