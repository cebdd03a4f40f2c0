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

#include "qmf/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "qmf/error.hpp"

namespace qmf::io {

namespace fs = std::filesystem;

namespace {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

double parse_number(const std::string& cell, const fs::path& path, std::size_t line_no) {
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw InputError(path.string() + ":" + std::to_string(line_no) + ": not a number '" + cell + "'");
  return v;
}

CsvTable read_csv(const fs::path& path, const std::vector<std::string>& expected) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto cells = split(line);
    if (table.header.empty()) {
      if (cells != expected) {
        std::string want;
        for (const auto& c : expected) want += (want.empty() ? "" : ",") + c;
        throw InputError(path.string() + ": expected header '" + want + "'");
      }
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != expected.size())
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": wrong column count");
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_number(c, path, line_no));
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw InputError(path.string() + ": missing header");
  return table;
}

}  // namespace

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TimeSeries read_strain_csv(const fs::path& path) {
  const auto table = read_csv(path, {"t", "strain"});
  if (table.rows.size() < 2) throw InputError(path.string() + ": need at least 2 samples");
  TimeSeries ts;
  ts.t0 = table.rows.front()[0];
  ts.dt = (table.rows.back()[0] - ts.t0) / static_cast<double>(table.rows.size() - 1);
  for (std::size_t j = 0; j < table.rows.size(); ++j) {
    const double expect = ts.t0 + ts.dt * static_cast<double>(j);
    if (std::abs(table.rows[j][0] - expect) > 1e-6 * ts.dt)
      throw InputError(path.string() + ": samples are not uniformly spaced");
    ts.samples.push_back(table.rows[j][1]);
  }
  ts.validate();
  return ts;
}

TimeSeries read_strain_raw(const fs::path& path, const fs::path& sidecar) {
  static_assert(std::endian::native == std::endian::little, "raw strain reader assumes little-endian");
  TimeSeries ts;
  try {
    const auto meta = nlohmann::json::parse(read_text(sidecar));
    const double fs_hz = meta.at("fs_hz").get<double>();
    if (!(fs_hz > 0.0)) throw InputError(sidecar.string() + ": fs_hz must be positive");
    ts.dt = 1.0 / fs_hz;
    ts.t0 = meta.value("t0_s", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(sidecar.string() + ": " + e.what());
  }
  const auto bytes = read_text(path);
  if (bytes.size() % sizeof(double) != 0) throw InputError(path.string() + ": size is not a multiple of 8");
  ts.samples.resize(bytes.size() / sizeof(double));
  std::memcpy(ts.samples.data(), bytes.data(), bytes.size());
  ts.validate();
  return ts;
}

TimeSeries read_strain(const fs::path& path) {
  if (path.extension() == ".csv") return read_strain_csv(path);
  return read_strain_raw(path, fs::path(path.string() + ".json"));
}

std::string strain_csv(const TimeSeries& ts) {
  std::string out = "t,strain\n";
  for (std::size_t j = 0; j < ts.size(); ++j)
    out += fmt_double(ts.t0 + ts.dt * static_cast<double>(j)) + "," + fmt_double(ts.samples[j]) + "\n";
  return out;
}

void write_strain_raw(const fs::path& path, const TimeSeries& ts) {
  write_atomic(path, std::string_view(reinterpret_cast<const char*>(ts.samples.data()),
                                      ts.samples.size() * sizeof(double)));
  nlohmann::json meta = {{"fs_hz", 1.0 / ts.dt}, {"t0_s", ts.t0}};
  write_atomic(fs::path(path.string() + ".json"), meta.dump());
}

Psd read_psd_csv(const fs::path& path) {
  const auto table = read_csv(path, {"f_hz", "sn"});
  if (table.rows.size() < 2) throw InputError(path.string() + ": need at least 2 psd rows");
  Psd psd;
  psd.df = table.rows[1][0] - table.rows[0][0];
  if (std::abs(table.rows[0][0]) > 1e-9 * psd.df || !(psd.df > 0.0))
    throw InputError(path.string() + ": psd must start at 0 Hz with increasing frequency");
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    if (std::abs(table.rows[k][0] - psd.df * static_cast<double>(k)) > 1e-6 * psd.df)
      throw InputError(path.string() + ": psd frequencies are not uniformly spaced");
    psd.values.push_back(table.rows[k][1]);
  }
  return psd;
}

std::string psd_csv(const Psd& psd) {
  std::string out = "f_hz,sn\n";
  for (std::size_t k = 0; k < psd.values.size(); ++k)
    out += fmt_double(psd.df * static_cast<double>(k)) + "," + fmt_double(psd.values[k]) + "\n";
  return out;
}

std::string snr_csv(const SnrSeries& snr) {
  std::string out = "t,rho\n";
  for (std::size_t j = 0; j < snr.rho.size(); ++j)
    out += fmt_double(snr.t0 + snr.dt * static_cast<double>(j)) + "," + fmt_double(snr.rho[j]) + "\n";
  return out;
}

void write_atomic(const fs::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InputError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw InputError("cannot move " + tmp.string() + " into place: " + ec.message());
}

std::string provenance(std::string_view command, std::string_view config_json, std::uint64_t seed) {
  std::string line = "# qmf ";
  line += kToolVersion;
  line += " command=";
  line += command;
  line += " seed=" + std::to_string(seed);
  line += " config=";
  line += config_json;
  line += "\n";
  return line;
}

}  // namespace qmf::io
