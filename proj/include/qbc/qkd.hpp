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

#ifndef QBC_QKD_HPP
#define QBC_QKD_HPP

/// \file qkd.hpp
/// Reverse-reconciliation CV-QKD over a two-receiver pure-loss broadcast
/// channel. Alice homodynes one arm of a TMSV and broadcasts the other to
/// Bob and Charlie, who heterodyne (modeled as 50% loss plus homodyne). Keys
/// are distilled against a conservative adversary holding the channel
/// environment plus the uninvolved receiver's unmeasured mode.
///
/// Every quantity is computed from the symplectic pipeline applied to the
/// derived joint covariance. Closed-form expressions for the same quantities
/// (entries a = v, b = eta_b (v-1)/2 + 1, d = sqrt(eta_b (v^2-1)/2),
/// e = sqrt(eta_b eta_c) (v-1)/2, f = sqrt(eta_c (v^2-1)/2) and the
/// conditional-eigenvalue formulas) are exposed alongside as independent
/// checks; pipeline and closed forms agree to ~1e-12.
///
/// Only the x-quadrature records are evaluated: the p-branch of every
/// covariance here is the same block with the signs of the Alice-receiver
/// correlations flipped, so it contributes identically to all information
/// quantities (asserted once in the test suite).

#include "qbc/channel.hpp"
#include "qbc/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qbc {

/// Transmittances to Bob and Charlie plus the TMSV modulation strength.
class QkdScenario {
 public:
  QkdScenario(double eta_b, double eta_c, double mean_photons)
      : eta_b_(eta_b), eta_c_(eta_c), mu_(mean_photons) {
    if (!(eta_b >= 0.0 && eta_b <= 1.0) || !(eta_c >= 0.0 && eta_c <= 1.0))
      throw std::invalid_argument("QkdScenario: transmittances must lie in [0, 1]");
    if (eta_b + eta_c > 1.0 + 1e-12)
      throw std::invalid_argument(
          "QkdScenario: transmittances sum to more than 1");
    if (!(mean_photons >= 0.0))
      throw std::invalid_argument("QkdScenario: mean photon number must be >= 0");
  }

  double eta_b() const { return eta_b_; }
  double eta_c() const { return eta_c_; }
  double mean_photons() const { return mu_; }
  double v() const { return 2.0 * mu_ + 1.0; }

  BroadcastChannel channel() const { return BroadcastChannel({eta_b_, eta_c_}); }

 private:
  double eta_b_;
  double eta_c_;
  double mu_;
};

/// Joint covariance of (A, B, C, E) before any measurement.
inline CovarianceMatrix qkd_output_covariance(const QkdScenario& s) {
  return channel_apply(s.channel(), tmsv_covariance(TmsvParams(s.mean_photons())));
}

/// Covariance of (A, B, C) with the heterodyne half-loss already applied on
/// B and C and the environment traced out; its xx block is the covariance of
/// the homodyne records (X, Y, Z).
inline CovarianceMatrix build_joint_covariance(const QkdScenario& s) {
  CovarianceMatrix gamma = qkd_output_covariance(s);
  gamma = heterodyne_as_loss(gamma, 1);
  gamma = heterodyne_as_loss(gamma, 2);
  return partial_trace(gamma, {0, 1, 2});
}

inline ClassicalGaussian homodyne_records(const QkdScenario& s) {
  return ClassicalGaussian(build_joint_covariance(s).xx_block(), {"X", "Y", "Z"});
}

/// Differential entropies, mutual informations and quantum leakages of one
/// scenario. Mutual informations can dip a hair below zero only through
/// rounding; values are reported unclamped.
struct InfoReport {
  double h_x = 0.0, h_y = 0.0, h_z = 0.0;
  double h_xy = 0.0, h_xz = 0.0, h_xyz = 0.0;
  double i_xy = 0.0;          // I(X;Y)
  double i_xz = 0.0;          // I(X;Z)
  double i_xz_y = 0.0;        // I(XZ;Y)
  double i_xy_z = 0.0;        // I(XY;Z)
  double i_yz_given_x = 0.0;  // I(Y;Z|X), via the conditional covariance
  double holevo_b = 0.0;      // I(Y;CE)
  double holevo_c = 0.0;      // I(Z;BE)
};

/// Fills the classical part of the report from the homodyne records; the
/// holevo fields stay NaN until info_report computes them.
/// I(Y;Z|X) deliberately takes a different numerical route (conditioning the
/// record covariance on X) than the chain-rule difference I(XZ;Y) - I(X;Y),
/// so their agreement is a real consistency check.
inline InfoReport classical_entropies(const QkdScenario& s) {
  const ClassicalGaussian rec = homodyne_records(s);
  InfoReport r;
  r.holevo_b = r.holevo_c = std::numeric_limits<double>::quiet_NaN();
  r.h_x = gaussian_differential_entropy(rec.marginal({0}));
  r.h_y = gaussian_differential_entropy(rec.marginal({1}));
  r.h_z = gaussian_differential_entropy(rec.marginal({2}));
  r.h_xy = gaussian_differential_entropy(rec.marginal({0, 1}));
  r.h_xz = gaussian_differential_entropy(rec.marginal({0, 2}));
  r.h_xyz = gaussian_differential_entropy(rec);
  r.i_xy = r.h_x + r.h_y - r.h_xy;
  r.i_xz = r.h_x + r.h_z - r.h_xz;
  r.i_xz_y = r.h_xz + r.h_y - r.h_xyz;
  r.i_xy_z = r.h_xy + r.h_z - r.h_xyz;
  const Eigen::MatrixXd& sig = rec.covariance();
  Eigen::Matrix2d cond;  // covariance of (Y, Z) given X
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      cond(a, b) = sig(1 + a, 1 + b) - sig(1 + a, 0) * sig(1 + b, 0) / sig(0, 0);
  r.i_yz_given_x =
      0.5 * std::log2(cond(0, 0) * cond(1, 1) / cond.determinant());
  return r;
}

namespace detail {

/// I(M; eavesdroppers) where mode `measured` (1 = B, 2 = C) is heterodyned
/// and measured while the other receiver and the environment eavesdrop.
inline double holevo_leakage(const QkdScenario& s, int measured) {
  const int other = measured == 1 ? 2 : 1;
  CovarianceMatrix lossy = heterodyne_as_loss(qkd_output_covariance(s), measured);
  const double h_eve =
      von_neumann_entropy(partial_trace(lossy, {other, 3}));
  const CovarianceMatrix joint = partial_trace(lossy, {other, 3, measured});
  const double h_eve_cond =
      von_neumann_entropy(homodyne_condition(joint, 2, Quadrature::x));
  return h_eve - h_eve_cond;
}

inline double holevo_leakage_closed_form(double eta, double v) {
  // eavesdropper power (1 - eta); measured mode carries eta with half loss
  const double h_eve = thermal_entropy((1.0 - eta) * (v - 1.0) / 2.0);
  const double alpha =
      (1.0 - eta) * (v - 1.0) / (eta * (v - 1.0) / 2.0 + 1.0) + 1.0;
  const double beta = (1.0 - eta) * (v - 1.0) + 1.0;
  const double h_eve_cond =
      thermal_entropy((std::sqrt(alpha * beta) - 1.0) / 2.0);
  return h_eve - h_eve_cond;
}

}  // namespace detail

/// I(Y;CE): what Bob's record reveals to Charlie plus the environment.
inline double holevo_leakage_b(const QkdScenario& s) {
  return detail::holevo_leakage(s, 1);
}

/// I(Z;BE): what Charlie's record reveals to Bob plus the environment.
inline double holevo_leakage_c(const QkdScenario& s) {
  return detail::holevo_leakage(s, 2);
}

inline double holevo_leakage_b_closed_form(const QkdScenario& s) {
  return detail::holevo_leakage_closed_form(s.eta_b(), s.v());
}

inline double holevo_leakage_c_closed_form(const QkdScenario& s) {
  return detail::holevo_leakage_closed_form(s.eta_c(), s.v());
}

inline InfoReport info_report(const QkdScenario& s) {
  InfoReport r = classical_entropies(s);
  r.holevo_b = holevo_leakage_b(s);
  r.holevo_c = holevo_leakage_c(s);
  return r;
}

/// Unclamped key-rate pair (clamping at zero is a display choice).
struct KeyRatePair {
  double k_ab = 0.0;
  double k_ac = 0.0;
};

inline KeyRatePair key_rates_simultaneous(const InfoReport& r) {
  return {r.i_xy - r.holevo_b, r.i_xz - r.holevo_c};
}

inline KeyRatePair key_rates_charlie_first(const InfoReport& r) {
  return {r.i_xz_y - r.holevo_b, r.i_xz - r.holevo_c};
}

inline KeyRatePair key_rates_bob_first(const InfoReport& r) {
  return {r.i_xy - r.holevo_b, r.i_xy_z - r.holevo_c};
}

inline KeyRatePair key_rates_simultaneous(const QkdScenario& s) {
  return key_rates_simultaneous(info_report(s));
}
inline KeyRatePair key_rates_charlie_first(const QkdScenario& s) {
  return key_rates_charlie_first(info_report(s));
}
inline KeyRatePair key_rates_bob_first(const QkdScenario& s) {
  return key_rates_bob_first(info_report(s));
}

/// The three comparison regions of one scenario: time sharing of the two
/// ordered-reconciliation rate pairs, the rectangle reachable by running
/// both point-to-point distillations on the same records, and plain time
/// sharing of the point-to-point protocol.
struct BcRegion {
  KeyRatePair charlie_first;
  KeyRatePair bob_first;
  KeyRatePair simultaneous;

  /// Membership in the dominated convex hull of the two ordered pairs.
  bool contains(const KeyRatePair& p, double tol = 1e-12) const {
    if (p.k_ab > charlie_first.k_ab + tol) return false;
    if (p.k_ac > bob_first.k_ac + tol) return false;
    // below the segment from bob_first to charlie_first
    const double dx = charlie_first.k_ab - bob_first.k_ab;
    if (dx <= tol) return p.k_ac <= std::max(bob_first.k_ac, charlie_first.k_ac) + tol;
    const double t =
        std::clamp((p.k_ab - bob_first.k_ab) / dx, 0.0, 1.0);
    const double ceiling = bob_first.k_ac + t * (charlie_first.k_ac - bob_first.k_ac);
    return p.k_ac <= ceiling + tol;
  }

  bool rectangle_contains(const KeyRatePair& p, double tol = 1e-12) const {
    return p.k_ab <= simultaneous.k_ab + tol && p.k_ac <= simultaneous.k_ac + tol;
  }

  bool triangle_contains(const KeyRatePair& p, double tol = 1e-12) const {
    const double a = simultaneous.k_ab, c = simultaneous.k_ac;
    if (a <= tol || c <= tol)
      return p.k_ab <= std::max(a, 0.0) + tol && p.k_ac <= std::max(c, 0.0) + tol &&
             (a > tol || p.k_ab <= tol) && (c > tol || p.k_ac <= tol);
    return p.k_ab / a + p.k_ac / c <= 1.0 + tol;
  }
};

inline BcRegion bc_region(const QkdScenario& s) {
  const InfoReport r = info_report(s);
  return {key_rates_charlie_first(r), key_rates_bob_first(r),
          key_rates_simultaneous(r)};
}

/// Plot-ready polylines for the three regions. A positive resolution
/// subdivides the time-shared segments.
struct QkdRegionCurves {
  std::vector<KeyRatePair> bc;
  std::vector<KeyRatePair> simultaneous;
  std::vector<KeyRatePair> time_sharing;
};

inline QkdRegionCurves bc_rate_region(const QkdScenario& s, int resolution = 0) {
  const BcRegion reg = bc_region(s);
  QkdRegionCurves curves;
  const int slices = std::max(1, resolution);
  curves.bc.push_back({reg.charlie_first.k_ab, 0.0});
  for (int k = 0; k <= slices; ++k) {
    const double t = static_cast<double>(k) / slices;
    curves.bc.push_back(
        {reg.charlie_first.k_ab + t * (reg.bob_first.k_ab - reg.charlie_first.k_ab),
         reg.charlie_first.k_ac + t * (reg.bob_first.k_ac - reg.charlie_first.k_ac)});
  }
  curves.bc.push_back({0.0, reg.bob_first.k_ac});

  curves.simultaneous.push_back({reg.simultaneous.k_ab, 0.0});
  curves.simultaneous.push_back({reg.simultaneous.k_ab, reg.simultaneous.k_ac});
  curves.simultaneous.push_back({0.0, reg.simultaneous.k_ac});

  for (int k = 0; k <= slices; ++k) {
    const double t = static_cast<double>(k) / slices;
    curves.time_sharing.push_back(
        {(1.0 - t) * reg.simultaneous.k_ab, t * reg.simultaneous.k_ac});
  }
  return curves;
}

}  // namespace qbc

#endif  // QBC_QKD_HPP
