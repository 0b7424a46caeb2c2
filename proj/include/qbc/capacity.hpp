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

#ifndef QBC_CAPACITY_HPP
#define QBC_CAPACITY_HPP

/// \file capacity.hpp
/// Rate regions of the pure-loss broadcast channel for combined
/// entanglement-plus-key distillation between the sender and each receiver.
/// The region is cut out by one constraint per nonempty receiver subset T,
///   sum_{i in T} r_i <= log2((1 - eta_Tbar) / (1 - eta_total)),
/// which a TMSV input approaches from below at finite input energy and which
/// a relative-entropy argument matches from above up to an O(1/n) one-shot
/// correction. Also provides the time-sharing baseline and the symmetric
/// m-receiver rate-sum comparison.

#include "qbc/channel.hpp"
#include "qbc/gaussian.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qbc {

/// Nonempty receiver subset T, stored as a bitmask (bit i = receiver i), with
/// its tapped power and the complement's tapped power.
struct SubsetSpec {
  std::uint32_t mask = 0;
  double eta_subset = 0.0;      // total transmittance into T
  double eta_complement = 0.0;  // total transmittance into the other receivers

  SubsetSpec(const BroadcastChannel& ch, std::uint32_t subset_mask)
      : mask(subset_mask) {
    const int m = ch.n_receivers();
    if (mask == 0)
      throw std::invalid_argument("SubsetSpec: subset must be nonempty");
    if (m < 32 && mask >= (std::uint32_t{1} << m))
      throw std::invalid_argument("SubsetSpec: mask addresses unknown receivers");
    for (int i = 0; i < m; ++i) {
      if (mask >> i & 1)
        eta_subset += ch.transmittance(i);
      else
        eta_complement += ch.transmittance(i);
    }
  }
};

/// Upper bound on sum_{i in T} r_i: log2((1 - eta_Tbar) / (1 - eta_total)).
/// Diverges (returns +infinity) when the channel loses nothing.
inline double capacity_bound(const BroadcastChannel& ch, std::uint32_t subset_mask) {
  const SubsetSpec t(ch, subset_mask);
  const double lost = 1.0 - (t.eta_subset + t.eta_complement);
  if (lost <= 0.0) return std::numeric_limits<double>::infinity();
  return kLog2E * (std::log1p(-t.eta_complement) - std::log(lost));
}

/// All 2^m - 1 subset constraints of a channel, with membership queries.
class RateRegion {
 public:
  explicit RateRegion(BroadcastChannel ch) : ch_(std::move(ch)) {
    const int m = ch_.n_receivers();
    if (m > 20)
      throw std::invalid_argument(
          "RateRegion: subset enumeration is capped at 20 receivers");
    bounds_.assign(std::size_t{1} << m, 0.0);
    for (std::uint32_t mask = 1; mask < bounds_.size(); ++mask)
      bounds_[mask] = capacity_bound(ch_, mask);
  }

  const BroadcastChannel& channel() const { return ch_; }
  int n_receivers() const { return ch_.n_receivers(); }

  double bound(std::uint32_t subset_mask) const {
    if (subset_mask == 0 || subset_mask >= bounds_.size())
      throw std::invalid_argument("RateRegion: invalid subset mask");
    return bounds_[subset_mask];
  }

  /// True iff every subset constraint holds within the tolerance.
  bool contains(const std::vector<double>& rates, double tol = 1e-12) const {
    if (static_cast<int>(rates.size()) != n_receivers())
      throw std::invalid_argument("RateRegion::contains: rate vector size mismatch");
    std::vector<double> sum(bounds_.size(), 0.0);
    for (std::uint32_t mask = 1; mask < bounds_.size(); ++mask) {
      const int low = std::countr_zero(mask);
      sum[mask] = sum[mask & (mask - 1)] + rates[low];
      if (sum[mask] > bounds_[mask] + tol) return false;
    }
    return true;
  }

 private:
  BroadcastChannel ch_;
  std::vector<double> bounds_;
};

inline RateRegion capacity_region(const BroadcastChannel& ch) {
  return RateRegion(ch);
}

/// Rate sum achieved on subset T by a TMSV input with the given mean photon
/// number: g((1 - eta_Tbar) N) - g((1 - eta_total) N). Strictly below
/// capacity_bound for finite N and converges to it as N grows.
inline double achievable_rate(const BroadcastChannel& ch, std::uint32_t subset_mask,
                              double mean_photons) {
  if (!(mean_photons >= 0.0))
    throw std::invalid_argument("achievable_rate: mean photon number must be >= 0");
  const SubsetSpec t(ch, subset_mask);
  const double eta_total = t.eta_subset + t.eta_complement;
  return thermal_entropy((1.0 - t.eta_complement) * mean_photons) -
         thermal_entropy((1.0 - eta_total) * mean_photons);
}

/// Same quantity computed from second moments instead of the closed form:
/// sends the TMSV arm through the channel and evaluates the entropy
/// difference H(A, Tbar) - H(A, all receivers) of the output covariances.
inline double achievable_rate_via_entropy(const BroadcastChannel& ch,
                                          std::uint32_t subset_mask,
                                          double mean_photons) {
  if (!(mean_photons >= 0.0))
    throw std::invalid_argument(
        "achievable_rate_via_entropy: mean photon number must be >= 0");
  [[maybe_unused]] const SubsetSpec validated(ch, subset_mask);
  const int m = ch.n_receivers();
  const CovarianceMatrix out =
      channel_apply(ch, tmsv_covariance(TmsvParams(mean_photons)));
  std::vector<int> a_and_complement = {0};
  std::vector<int> a_and_receivers = {0};
  for (int i = 0; i < m; ++i) {
    a_and_receivers.push_back(1 + i);
    if (!(subset_mask >> i & 1)) a_and_complement.push_back(1 + i);
  }
  return von_neumann_entropy(partial_trace(out, a_and_complement)) -
         von_neumann_entropy(partial_trace(out, a_and_receivers));
}

/// Accuracy parameter and block length of the one-shot converse.
struct ConverseParams {
  double epsilon = 0.0;
  long long n_uses = 1;

  ConverseParams(double eps, long long n) : epsilon(eps), n_uses(n) {
    if (!(eps > 0.0 && eps < 1.0))
      throw std::invalid_argument("ConverseParams: epsilon must lie in (0, 1)");
    if (n < 1)
      throw std::invalid_argument("ConverseParams: need at least one channel use");
  }
};

/// log2 6 + 2 log2((1 + eps) / (1 - eps)), the n-independent part of the
/// one-shot correction.
inline double converse_offset(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("converse_offset: epsilon must lie in (0, 1)");
  return std::log2(6.0) +
         2.0 * (std::log2(1.0 + epsilon) - std::log2(1.0 - epsilon));
}

/// Finite-n upper bound: capacity_bound + C(eps)/n.
inline double converse_bound(const BroadcastChannel& ch, std::uint32_t subset_mask,
                             const ConverseParams& params) {
  return capacity_bound(ch, subset_mask) +
         converse_offset(params.epsilon) / static_cast<double>(params.n_uses);
}

/// Convex hull of the origin and the m single-user points: time sharing of
/// the optimal point-to-point protocol.
class TimeSharingRegion {
 public:
  explicit TimeSharingRegion(const BroadcastChannel& ch) {
    intercepts_.reserve(ch.n_receivers());
    for (double eta : ch.transmittances()) {
      if (eta >= 1.0)
        intercepts_.push_back(std::numeric_limits<double>::infinity());
      else
        intercepts_.push_back(-kLog2E * std::log1p(-eta));
    }
  }

  /// Per-receiver axis intercepts -log2(1 - eta_i).
  const std::vector<double>& intercepts() const { return intercepts_; }

  /// The m nontrivial vertices (axis points); the origin is implicit.
  std::vector<std::vector<double>> vertices() const {
    std::vector<std::vector<double>> v;
    const int m = static_cast<int>(intercepts_.size());
    for (int i = 0; i < m; ++i) {
      std::vector<double> p(m, 0.0);
      p[i] = intercepts_[i];
      v.push_back(std::move(p));
    }
    return v;
  }

  bool contains(const std::vector<double>& rates, double tol = 1e-12) const {
    if (rates.size() != intercepts_.size())
      throw std::invalid_argument(
          "TimeSharingRegion::contains: rate vector size mismatch");
    double load = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) {
      if (rates[i] < -tol) return false;
      if (std::isinf(intercepts_[i])) continue;
      if (intercepts_[i] <= 0.0) {
        if (rates[i] > tol) return false;
        continue;
      }
      load += std::max(0.0, rates[i]) / intercepts_[i];
    }
    return load <= 1.0 + tol;
  }

 private:
  std::vector<double> intercepts_;
};

inline TimeSharingRegion time_sharing_region(const BroadcastChannel& ch) {
  return TimeSharingRegion(ch);
}

/// Rate sums of the symmetric 1-to-m channel with per-receiver transmittance
/// eta/m when all receivers demand equal rates: the jointly assisted optimum
/// -log2(1 - eta) versus the time-sharing limit -log2(1 - eta/m).
inline std::pair<double, double> symmetric_rate_sums(double eta, int m) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("symmetric_rate_sums: eta must lie in [0, 1]");
  if (m < 1)
    throw std::invalid_argument("symmetric_rate_sums: need at least one receiver");
  const double optimal = eta >= 1.0 ? std::numeric_limits<double>::infinity()
                                    : -kLog2E * std::log1p(-eta);
  const double shared = -kLog2E * std::log1p(-eta / m);
  return {optimal, shared};
}

/// Equal-rate sum bound from the size-l subset constraints of the symmetric
/// channel, (m/l) log2((1 - (m-l) eta/m) / (1 - eta)); nonincreasing in l,
/// so l = m gives the binding constraint -log2(1 - eta).
inline double symmetric_constraint(double eta, int m, int l) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("symmetric_constraint: eta must lie in [0, 1]");
  if (m < 1 || l < 1 || l > m)
    throw std::invalid_argument("symmetric_constraint: need 1 <= l <= m");
  const double per_receiver = eta / m;
  return (static_cast<double>(m) / l) * kLog2E *
         (std::log1p(-(m - l) * per_receiver) - std::log1p(-eta));
}

/// Corner of a two-receiver rate polyline.
struct BoundaryPoint {
  double rate_b = 0.0;
  double rate_c = 0.0;
};

/// Upper-right boundary of { r >= 0 : r_b <= bound_b, r_c <= bound_c,
/// r_b + r_c <= bound_sum }, walked from the r_c axis to the r_b axis.
/// A positive resolution subdivides the sum-constraint face for plotting.
inline std::vector<BoundaryPoint> pentagon_boundary(double bound_b, double bound_c,
                                                    double bound_sum,
                                                    int resolution = 0) {
  if (std::isinf(bound_b) || std::isinf(bound_c) || std::isinf(bound_sum))
    throw std::domain_error("pentagon_boundary: region is unbounded");
  const double x1 = std::min(std::max(bound_sum - bound_c, 0.0), bound_b);
  const double y2 = std::min(std::max(bound_sum - bound_b, 0.0), bound_c);
  std::vector<BoundaryPoint> pts;
  auto push = [&](double x, double y) {
    if (!pts.empty() && std::abs(pts.back().rate_b - x) < 1e-15 &&
        std::abs(pts.back().rate_c - y) < 1e-15)
      return;
    pts.push_back({x, y});
  };
  push(0.0, bound_c);
  push(x1, bound_c);
  const int slices = std::max(1, resolution);
  for (int k = 1; k < slices; ++k) {
    const double t = static_cast<double>(k) / slices;
    push(x1 + t * (bound_b - x1), bound_c + t * (y2 - bound_c));
  }
  push(bound_b, y2);
  push(bound_b, 0.0);
  return pts;
}

/// Boundary of the two-receiver capacity region (corner points for plotting).
inline std::vector<BoundaryPoint> region_boundary_1to2(const BroadcastChannel& ch,
                                                       int resolution = 0) {
  if (ch.n_receivers() != 2)
    throw std::invalid_argument("region_boundary_1to2: channel must have 2 receivers");
  return pentagon_boundary(capacity_bound(ch, 0b01), capacity_bound(ch, 0b10),
                           capacity_bound(ch, 0b11), resolution);
}

/// Boundary achieved at finite input energy by the same three constraints
/// evaluated with achievable_rate.
inline std::vector<BoundaryPoint> achievable_boundary_1to2(
    const BroadcastChannel& ch, double mean_photons, int resolution = 0) {
  if (ch.n_receivers() != 2)
    throw std::invalid_argument(
        "achievable_boundary_1to2: channel must have 2 receivers");
  return pentagon_boundary(achievable_rate(ch, 0b01, mean_photons),
                           achievable_rate(ch, 0b10, mean_photons),
                           achievable_rate(ch, 0b11, mean_photons), resolution);
}

}  // namespace qbc

#endif  // QBC_CAPACITY_HPP
