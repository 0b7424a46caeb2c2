// Copyright 2026 The qbc authors
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

#ifndef QBC_IO_HPP
#define QBC_IO_HPP

/// \file io.hpp
/// JSON schemas for the library types and a fixed-format CSV writer.
///
/// Covariance matrices: {"n_modes", "ordering": "xxpp", "data": [row-major]}.
/// Networks: {"l", "unitary": [[[re, im], ...], ...], "input_mode",
/// "receiver_modes"}. Channels: a plain array of transmittances. Rate
/// regions: {"eta", "bounds": {"<subset bitmask>": bits-per-use | null}},
/// null marking an unbounded (lossless-channel) constraint.
///
/// CSV floats are printed with a fixed number of significant digits
/// (default 9) so identical inputs produce byte-identical files.

#include <json.hpp>

#include "qbc/capacity.hpp"
#include "qbc/channel.hpp"
#include "qbc/gaussian.hpp"
#include "qbc/qkd.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qbc::io {

using json = nlohmann::ordered_json;

inline std::string format_double(double v, int precision = 9) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

/// Writes rows of pre-split cells; numeric cells go through format_double.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out, int precision = 9)
      : out_(out), precision_(precision) {}

  void cells(const std::vector<std::string>& row) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out_ << ',';
      out_ << row[k];
    }
    out_ << '\n';
  }

  std::string num(double v) const { return format_double(v, precision_); }

 private:
  std::ostream& out_;
  int precision_;
};

inline json covariance_to_json(const CovarianceMatrix& gamma) {
  json j;
  j["n_modes"] = gamma.n_modes();
  j["ordering"] = "xxpp";
  std::vector<double> data;
  const auto& m = gamma.matrix();
  data.reserve(m.size());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  j["data"] = data;
  return j;
}

inline CovarianceMatrix covariance_from_json(const json& j) {
  if (j.value("ordering", "xxpp") != std::string("xxpp"))
    throw std::invalid_argument("covariance_from_json: unsupported ordering tag");
  const int n = j.at("n_modes").get<int>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (n <= 0 || data.size() != static_cast<std::size_t>(4 * n * n))
    throw std::invalid_argument("covariance_from_json: bad dimensions");
  Eigen::MatrixXd m(2 * n, 2 * n);
  for (int r = 0; r < 2 * n; ++r)
    for (int c = 0; c < 2 * n; ++c) m(r, c) = data[2 * n * r + c];
  return CovarianceMatrix(n, std::move(m));
}

inline json network_to_json(const LinearOpticalNetwork& net) {
  json j;
  const int l = net.n_modes();
  j["l"] = l;
  json rows = json::array();
  for (int r = 0; r < l; ++r) {
    json row = json::array();
    for (int c = 0; c < l; ++c)
      row.push_back({net.unitary()(r, c).real(), net.unitary()(r, c).imag()});
    rows.push_back(std::move(row));
  }
  j["unitary"] = std::move(rows);
  j["input_mode"] = net.input_mode();
  j["receiver_modes"] = net.receiver_modes();
  return j;
}

inline LinearOpticalNetwork network_from_json(const json& j) {
  const int l = j.at("l").get<int>();
  if (l <= 0) throw std::invalid_argument("network_from_json: bad mode count");
  const auto& rows = j.at("unitary");
  if (!rows.is_array() || static_cast<int>(rows.size()) != l)
    throw std::invalid_argument("network_from_json: bad unitary shape");
  Eigen::MatrixXcd u(l, l);
  for (int r = 0; r < l; ++r) {
    const auto& row = rows[r];
    if (!row.is_array() || static_cast<int>(row.size()) != l)
      throw std::invalid_argument("network_from_json: bad unitary shape");
    for (int c = 0; c < l; ++c) {
      const auto& cell = row[c];
      if (!cell.is_array() || cell.size() != 2)
        throw std::invalid_argument(
            "network_from_json: unitary entries must be [re, im] pairs");
      u(r, c) = std::complex<double>(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return LinearOpticalNetwork(std::move(u), j.at("input_mode").get<int>(),
                              j.at("receiver_modes").get<std::vector<int>>());
}

inline json channel_to_json(const BroadcastChannel& ch) {
  return json(ch.transmittances());
}

inline BroadcastChannel channel_from_json(const json& j) {
  return BroadcastChannel(j.get<std::vector<double>>());
}

inline json region_to_json(const RateRegion& region) {
  json j;
  j["eta"] = region.channel().transmittances();
  json bounds = json::object();
  const std::uint32_t n_masks = (1u << region.n_receivers()) - 1;
  for (std::uint32_t mask = 1; mask <= n_masks; ++mask) {
    const double b = region.bound(mask);
    if (std::isinf(b))
      bounds[std::to_string(mask)] = nullptr;
    else
      bounds[std::to_string(mask)] = b;
  }
  j["bounds"] = std::move(bounds);
  return j;
}

inline std::string output_label(int output) {
  return output == kEnvironment ? "E" : "B" + std::to_string(output + 1);
}

inline json cascade_to_json(const BroadcastChannel& ch, const Cascade& casc) {
  json j;
  j["transmittances"] = ch.transmittances();
  j["environment_transmittance"] = ch.environment_transmittance();
  json steps = json::array();
  for (const auto& step : casc.steps) {
    steps.push_back({{"output", output_label(step.output)},
                     {"pass_transmittance", step.pass_transmittance}});
  }
  j["steps"] = std::move(steps);
  j["residual_output"] = output_label(casc.residual_output);
  if (!casc.output_phases.empty()) j["output_phases"] = casc.output_phases;
  return j;
}

inline json scenario_to_json(const QkdScenario& s) {
  return json{{"eta_b", s.eta_b()}, {"eta_c", s.eta_c()}, {"mu", s.mean_photons()}};
}

inline QkdScenario scenario_from_json(const json& j) {
  return QkdScenario(j.at("eta_b").get<double>(), j.at("eta_c").get<double>(),
                     j.at("mu").get<double>());
}

}  // namespace qbc::io

#endif  // QBC_IO_HPP
