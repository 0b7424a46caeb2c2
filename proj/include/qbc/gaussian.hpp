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

#ifndef QBC_GAUSSIAN_HPP
#define QBC_GAUSSIAN_HPP

/// \file gaussian.hpp
/// Covariance-matrix calculus for zero-mean Gaussian bosonic states.
///
/// Conventions, fixed here once and used by every other header:
///  * Quadratures are ordered xxpp: for n modes the covariance matrix is
///    2n x 2n with all x rows first, then all p rows, so mode k owns rows
///    (k, n + k).
///  * The vacuum has unit variance. A thermal mode with mean photon number
///    N has covariance (2N + 1) I_2 and every physical state has symplectic
///    spectrum >= 1.
///  * The symplectic form is Omega = [[0, I_n], [-I_n, 0]].
///  * A beam splitter of transmittance eta keeps sqrt(eta) of the first
///    mode's field on that mode and taps +sqrt(1 - eta) of it into the
///    second mode; the same rotation acts on the x and p blocks.
///  * Differential entropies of homodyne outcomes use the pi*e
///    normalization, H = (1/2) log2((pi e)^n det Sigma), matching an outcome
///    density proportional to exp(-x^T Sigma^{-1} x). Only entropy
///    differences are exposed downstream, so the constant cancels there.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qbc {

inline constexpr double kLog2E = 1.4426950408889634074;  // 1 / ln 2

/// Entropy in bits of a thermal mode with the given mean photon number,
/// (x+1) log2(x+1) - x log2 x, extended by continuity to 0 at x = 0.
/// Strictly increasing and concave; stable up to x ~ 1e15.
inline double thermal_entropy(double mean_photons) {
  if (!(mean_photons >= 0.0))
    throw std::domain_error("thermal_entropy: mean photon number must be >= 0");
  if (mean_photons == 0.0) return 0.0;
  const double x = mean_photons;
  return kLog2E * (x * std::log1p(1.0 / x) + std::log1p(x));
}

/// Symplectic form for xxpp ordering.
inline Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  omega.topRightCorner(n_modes, n_modes).setIdentity();
  omega.bottomLeftCorner(n_modes, n_modes) =
      -Eigen::MatrixXd::Identity(n_modes, n_modes);
  return omega;
}

/// Mean photon numbers of a two-mode squeezed vacuum source.
struct TmsvParams {
  double mean_photons = 0.0;

  TmsvParams() = default;
  explicit TmsvParams(double n) : mean_photons(n) {
    if (!(n >= 0.0))
      throw std::invalid_argument("TmsvParams: mean photon number must be >= 0");
  }
};

/// Second moments of a zero-mean Gaussian state in xxpp ordering.
class CovarianceMatrix {
 public:
  CovarianceMatrix(int n_modes, Eigen::MatrixXd entries)
      : n_modes_(n_modes), m_(std::move(entries)) {
    if (n_modes_ <= 0)
      throw std::invalid_argument("CovarianceMatrix: need at least one mode");
    if (m_.rows() != 2 * n_modes_ || m_.cols() != 2 * n_modes_)
      throw std::invalid_argument("CovarianceMatrix: matrix must be 2n x 2n");
    const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
    if ((m_ - m_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw std::invalid_argument("CovarianceMatrix: matrix is not symmetric");
    m_ = ((m_ + m_.transpose()) / 2.0).eval();
  }

  static CovarianceMatrix vacuum(int n_modes) {
    return CovarianceMatrix(n_modes,
                            Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
  }

  /// Single thermal mode, variance 2N + 1.
  static CovarianceMatrix thermal(double mean_photons) {
    if (!(mean_photons >= 0.0))
      throw std::invalid_argument("CovarianceMatrix::thermal: mean photons < 0");
    return CovarianceMatrix(
        1, (2.0 * mean_photons + 1.0) * Eigen::MatrixXd::Identity(2, 2));
  }

  int n_modes() const { return n_modes_; }
  const Eigen::MatrixXd& matrix() const { return m_; }

  int x_index(int mode) const { return mode; }
  int p_index(int mode) const { return n_modes_ + mode; }

  /// n x n block of x-quadrature second moments (the statistics seen by
  /// simultaneous x homodyne on every mode).
  Eigen::MatrixXd xx_block() const {
    return m_.topLeftCorner(n_modes_, n_modes_);
  }
  Eigen::MatrixXd pp_block() const {
    return m_.bottomRightCorner(n_modes_, n_modes_);
  }

 private:
  int n_modes_;
  Eigen::MatrixXd m_;
};

/// Linear symplectic action on quadratures, S Omega S^T = Omega.
class SymplecticTransform {
 public:
  SymplecticTransform(int n_modes, Eigen::MatrixXd matrix)
      : n_modes_(n_modes), m_(std::move(matrix)) {
    if (n_modes_ <= 0)
      throw std::invalid_argument("SymplecticTransform: need at least one mode");
    if (m_.rows() != 2 * n_modes_ || m_.cols() != 2 * n_modes_)
      throw std::invalid_argument("SymplecticTransform: matrix must be 2n x 2n");
    const Eigen::MatrixXd omega = symplectic_form(n_modes_);
    const double defect =
        (m_ * omega * m_.transpose() - omega).cwiseAbs().maxCoeff();
    if (defect > 1e-10)
      throw std::invalid_argument(
          "SymplecticTransform: S Omega S^T != Omega (defect " +
          std::to_string(defect) + ")");
  }

  static SymplecticTransform identity(int n_modes) {
    return SymplecticTransform(
        n_modes, Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
  }

  /// Symplectic representation [[Re U, -Im U], [Im U, Re U]] of a passive
  /// linear-optical unitary acting on annihilation operators.
  static SymplecticTransform from_unitary(const Eigen::MatrixXcd& u) {
    if (u.rows() != u.cols() || u.rows() == 0)
      throw std::invalid_argument("from_unitary: matrix must be square");
    const int n = static_cast<int>(u.rows());
    Eigen::MatrixXd s(2 * n, 2 * n);
    s.topLeftCorner(n, n) = u.real();
    s.topRightCorner(n, n) = -u.imag();
    s.bottomLeftCorner(n, n) = u.imag();
    s.bottomRightCorner(n, n) = u.real();
    return SymplecticTransform(n, std::move(s));
  }

  int n_modes() const { return n_modes_; }
  const Eigen::MatrixXd& matrix() const { return m_; }

  friend SymplecticTransform operator*(const SymplecticTransform& a,
                                       const SymplecticTransform& b) {
    if (a.n_modes_ != b.n_modes_)
      throw std::invalid_argument("SymplecticTransform: mode count mismatch");
    return SymplecticTransform(a.n_modes_, a.m_ * b.m_);
  }

 private:
  int n_modes_;
  Eigen::MatrixXd m_;
};

/// Beam splitter of transmittance eta mixing modes i and j; identity on all
/// other modes. eta = 1 is the identity, eta = 0 swaps the modes up to sign.
inline SymplecticTransform beam_splitter(double transmittance, int mode_i,
                                         int mode_j, int n_modes) {
  if (!(transmittance >= 0.0 && transmittance <= 1.0))
    throw std::invalid_argument("beam_splitter: transmittance must be in [0,1]");
  if (mode_i == mode_j)
    throw std::invalid_argument("beam_splitter: mode indices must differ");
  if (mode_i < 0 || mode_j < 0 || mode_i >= n_modes || mode_j >= n_modes)
    throw std::invalid_argument("beam_splitter: mode index out of range");
  const double c = std::sqrt(transmittance);
  const double s = std::sqrt(1.0 - transmittance);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  for (int off : {0, n_modes}) {
    m(off + mode_i, off + mode_i) = c;
    m(off + mode_i, off + mode_j) = -s;
    m(off + mode_j, off + mode_i) = s;
    m(off + mode_j, off + mode_j) = c;
  }
  return SymplecticTransform(n_modes, std::move(m));
}

/// Phase-space rotation of one mode by the given angle (phase shifter).
inline SymplecticTransform phase_shift(double angle, int mode, int n_modes) {
  if (mode < 0 || mode >= n_modes)
    throw std::invalid_argument("phase_shift: mode index out of range");
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  m(mode, mode) = c;
  m(mode, n_modes + mode) = -s;
  m(n_modes + mode, mode) = s;
  m(n_modes + mode, n_modes + mode) = c;
  return SymplecticTransform(n_modes, std::move(m));
}

inline CovarianceMatrix apply_symplectic(const SymplecticTransform& s,
                                         const CovarianceMatrix& gamma) {
  if (s.n_modes() != gamma.n_modes())
    throw std::invalid_argument("apply_symplectic: mode count mismatch");
  return CovarianceMatrix(gamma.n_modes(),
                          s.matrix() * gamma.matrix() * s.matrix().transpose());
}

/// Two-mode squeezed vacuum with the given per-arm mean photon number:
/// diagonal blocks v I_2 with v = 2N + 1, x-x correlation +sqrt(v^2 - 1),
/// p-p correlation -sqrt(v^2 - 1). Pure for every N.
inline CovarianceMatrix tmsv_covariance(const TmsvParams& params) {
  const double n = params.mean_photons;
  if (!(n >= 0.0))
    throw std::invalid_argument("tmsv_covariance: mean photon number must be >= 0");
  const double v = 2.0 * n + 1.0;
  const double c = 2.0 * std::sqrt(n * (n + 1.0));  // sqrt(v^2 - 1) without cancellation
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = v;
  m(0, 1) = m(1, 0) = c;
  m(2, 3) = m(3, 2) = -c;
  return CovarianceMatrix(2, std::move(m));
}

inline CovarianceMatrix direct_sum(const CovarianceMatrix& a,
                                   const CovarianceMatrix& b) {
  const int na = a.n_modes(), nb = b.n_modes(), n = na + nb;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  m.block(0, 0, na, na) = a.xx_block();
  m.block(na, na, nb, nb) = b.xx_block();
  m.block(n, n, na, na) = a.pp_block();
  m.block(n + na, n + na, nb, nb) = b.pp_block();
  // x-p cross blocks
  m.block(0, n, na, na) = a.matrix().topRightCorner(na, na);
  m.block(n, 0, na, na) = a.matrix().bottomLeftCorner(na, na);
  m.block(na, n + na, nb, nb) = b.matrix().topRightCorner(nb, nb);
  m.block(n + na, na, nb, nb) = b.matrix().bottomLeftCorner(nb, nb);
  return CovarianceMatrix(n, std::move(m));
}

/// Reorders modes: output mode k is input mode perm[k].
inline CovarianceMatrix permute_modes(const CovarianceMatrix& gamma,
                                      const std::vector<int>& perm) {
  const int n = gamma.n_modes();
  if (static_cast<int>(perm.size()) != n)
    throw std::invalid_argument("permute_modes: permutation size mismatch");
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p])
      throw std::invalid_argument("permute_modes: not a permutation");
    seen[p] = true;
  }
  Eigen::MatrixXd m(2 * n, 2 * n);
  const auto& g = gamma.matrix();
  auto idx = [&](int k) { return std::pair<int, int>(perm[k], n + perm[k]); };
  for (int r = 0; r < n; ++r) {
    auto [rx, rp] = idx(r);
    for (int c = 0; c < n; ++c) {
      auto [cx, cp] = idx(c);
      m(r, c) = g(rx, cx);
      m(r, n + c) = g(rx, cp);
      m(n + r, c) = g(rp, cx);
      m(n + r, n + c) = g(rp, cp);
    }
  }
  return CovarianceMatrix(n, std::move(m));
}

/// Marginal covariance on the given modes, in the order given.
inline CovarianceMatrix partial_trace(const CovarianceMatrix& gamma,
                                      const std::vector<int>& keep_modes) {
  const int n = gamma.n_modes();
  if (keep_modes.empty())
    throw std::invalid_argument("partial_trace: kept mode set must be nonempty");
  std::vector<bool> seen(n, false);
  for (int k : keep_modes) {
    if (k < 0 || k >= n)
      throw std::invalid_argument("partial_trace: mode index out of range");
    if (seen[k])
      throw std::invalid_argument("partial_trace: duplicate mode index");
    seen[k] = true;
  }
  const int nk = static_cast<int>(keep_modes.size());
  Eigen::MatrixXd m(2 * nk, 2 * nk);
  const auto& g = gamma.matrix();
  for (int r = 0; r < nk; ++r) {
    for (int c = 0; c < nk; ++c) {
      m(r, c) = g(keep_modes[r], keep_modes[c]);
      m(r, nk + c) = g(keep_modes[r], n + keep_modes[c]);
      m(nk + r, c) = g(n + keep_modes[r], keep_modes[c]);
      m(nk + r, nk + c) = g(n + keep_modes[r], n + keep_modes[c]);
    }
  }
  return CovarianceMatrix(nk, std::move(m));
}

/// Symplectic spectrum of a physical covariance matrix, ascending, one value
/// per mode. Computed from the Hermitian matrix i W Omega W with W the
/// symmetric square root of gamma, whose spectrum is the +-nu pairs; the
/// mirrored halves are averaged.
inline std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& gamma) {
  const int n = gamma.n_modes();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma.matrix());
  if (es.info() != Eigen::Success)
    throw std::runtime_error("symplectic_eigenvalues: eigensolver failed");
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -1e-9 * scale)
    throw std::runtime_error(
        "symplectic_eigenvalues: covariance matrix is not positive semidefinite");
  const Eigen::MatrixXd w = es.eigenvectors() *
                            es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                            es.eigenvectors().transpose();
  const Eigen::MatrixXd a = w * symplectic_form(n) * w;  // real antisymmetric
  Eigen::MatrixXcd h = std::complex<double>(0.0, 1.0) * a.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(h);
  if (hs.info() != Eigen::Success)
    throw std::runtime_error("symplectic_eigenvalues: eigensolver failed");
  std::vector<double> nu(n);
  for (int k = 0; k < n; ++k)
    nu[k] = 0.5 * (hs.eigenvalues()(n + k) + std::abs(hs.eigenvalues()(n - 1 - k)));
  std::sort(nu.begin(), nu.end());
  if (!nu.empty() && nu.front() < 1.0 - 1e-6)
    throw std::runtime_error(
        "symplectic_eigenvalues: unphysical state, min symplectic eigenvalue " +
        std::to_string(nu.front()));
  return nu;
}

/// Von Neumann entropy in bits: sum of thermal_entropy((nu - 1)/2) over the
/// symplectic spectrum.
inline double von_neumann_entropy(const CovarianceMatrix& gamma) {
  double h = 0.0;
  for (double nu : symplectic_eigenvalues(gamma))
    h += thermal_entropy(std::max(nu - 1.0, 0.0) / 2.0);
  return h;
}

enum class Quadrature { x, p };

/// Conditional covariance of the remaining modes after an ideal (infinitely
/// resolved) homodyne measurement of one quadrature of one mode. This is the
/// exact infinite-squeezing limit: a Schur complement using the pseudoinverse
/// of the measured quadrature's 1x1 block; the orthogonal quadrature
/// decouples and the result is independent of the outcome value.
inline CovarianceMatrix homodyne_condition(const CovarianceMatrix& gamma,
                                           int measured_mode, Quadrature quad) {
  const int n = gamma.n_modes();
  if (measured_mode < 0 || measured_mode >= n)
    throw std::invalid_argument("homodyne_condition: mode index out of range");
  if (n < 2)
    throw std::invalid_argument("homodyne_condition: no modes would remain");
  const auto& g = gamma.matrix();
  const int meas =
      quad == Quadrature::x ? measured_mode : n + measured_mode;
  const double var = g(meas, meas);
  if (!(var > 0.0))
    throw std::runtime_error("homodyne_condition: measured variance <= 0");
  std::vector<int> keep;
  keep.reserve(2 * (n - 1));
  for (int k = 0; k < n; ++k)
    if (k != measured_mode) keep.push_back(k);
  for (int k = 0; k < n; ++k)
    if (k != measured_mode) keep.push_back(n + k);
  const int d = static_cast<int>(keep.size());
  Eigen::MatrixXd m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      m(r, c) = g(keep[r], keep[c]) - g(keep[r], meas) * g(keep[c], meas) / var;
  return CovarianceMatrix(n - 1, std::move(m));
}

/// Models an ideal heterodyne detector on one mode as a 50% pure-loss stage:
/// mixes the mode with a vacuum ancilla on a balanced beam splitter and
/// discards the ancilla. The subsequent measurement is an x homodyne of the
/// surviving mode (see homodyne_condition).
inline CovarianceMatrix heterodyne_as_loss(const CovarianceMatrix& gamma,
                                           int mode) {
  const int n = gamma.n_modes();
  if (mode < 0 || mode >= n)
    throw std::invalid_argument("heterodyne_as_loss: mode index out of range");
  const CovarianceMatrix joint = direct_sum(gamma, CovarianceMatrix::vacuum(1));
  const CovarianceMatrix mixed =
      apply_symplectic(beam_splitter(0.5, mode, n, n + 1), joint);
  std::vector<int> keep(n);
  for (int k = 0; k < n; ++k) keep[k] = k;
  return partial_trace(mixed, keep);
}

/// Display-only conversion from the library's xxpp ordering to xpxp.
inline Eigen::MatrixXd to_xpxp(const CovarianceMatrix& gamma) {
  const int n = gamma.n_modes();
  Eigen::MatrixXd m(2 * n, 2 * n);
  const auto& g = gamma.matrix();
  auto row = [&](int k) { return k % 2 == 0 ? k / 2 : n + k / 2; };
  for (int r = 0; r < 2 * n; ++r)
    for (int c = 0; c < 2 * n; ++c) m(r, c) = g(row(r), row(c));
  return m;
}

/// Covariance of a vector of jointly Gaussian classical outcomes (homodyne
/// records), in the same units as the quadrature blocks they come from.
class ClassicalGaussian {
 public:
  explicit ClassicalGaussian(Eigen::MatrixXd covariance,
                             std::vector<std::string> labels = {})
      : cov_(std::move(covariance)), labels_(std::move(labels)) {
    if (cov_.rows() == 0 || cov_.rows() != cov_.cols())
      throw std::invalid_argument("ClassicalGaussian: covariance must be square");
    const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
    if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
      throw std::invalid_argument("ClassicalGaussian: covariance not symmetric");
    cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov_);
    if (es.eigenvalues().minCoeff() < -1e-10 * scale)
      throw std::invalid_argument(
          "ClassicalGaussian: covariance not positive semidefinite");
    if (!labels_.empty() && labels_.size() != static_cast<size_t>(cov_.rows()))
      throw std::invalid_argument("ClassicalGaussian: label count mismatch");
  }

  int n_vars() const { return static_cast<int>(cov_.rows()); }
  const Eigen::MatrixXd& covariance() const { return cov_; }
  const std::vector<std::string>& labels() const { return labels_; }

  ClassicalGaussian marginal(const std::vector<int>& keep) const {
    if (keep.empty())
      throw std::invalid_argument("ClassicalGaussian::marginal: empty index set");
    const int k = static_cast<int>(keep.size());
    Eigen::MatrixXd m(k, k);
    std::vector<std::string> lab;
    for (int r = 0; r < k; ++r) {
      if (keep[r] < 0 || keep[r] >= n_vars())
        throw std::invalid_argument("ClassicalGaussian::marginal: index out of range");
      if (!labels_.empty()) lab.push_back(labels_[keep[r]]);
      for (int c = 0; c < k; ++c) m(r, c) = cov_(keep[r], keep[c]);
    }
    return ClassicalGaussian(std::move(m), std::move(lab));
  }

 private:
  Eigen::MatrixXd cov_;
  std::vector<std::string> labels_;
};

/// Differential entropy in bits, (1/2) log2((pi e)^n det Sigma).
inline double gaussian_differential_entropy(const ClassicalGaussian& c) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.covariance());
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  double logdet = 0.0;
  for (int k = 0; k < c.n_vars(); ++k) {
    const double ev = es.eigenvalues()(k);
    if (ev <= 1e-13 * scale)
      throw std::runtime_error(
          "gaussian_differential_entropy: singular covariance");
    logdet += std::log2(ev);
  }
  constexpr double kPiE = 8.539734222673567;  // pi * e
  return 0.5 * (c.n_vars() * std::log2(kPiE) + logdet);
}

/// I(A;B) = H(A) + H(B) - H(AB) for disjoint index sets of a joint Gaussian.
/// The normalization constant of gaussian_differential_entropy cancels.
inline double mutual_information(const ClassicalGaussian& joint,
                                 const std::vector<int>& part_a,
                                 const std::vector<int>& part_b) {
  for (int a : part_a)
    for (int b : part_b)
      if (a == b)
        throw std::invalid_argument("mutual_information: overlapping parts");
  std::vector<int> both = part_a;
  both.insert(both.end(), part_b.begin(), part_b.end());
  return gaussian_differential_entropy(joint.marginal(part_a)) +
         gaussian_differential_entropy(joint.marginal(part_b)) -
         gaussian_differential_entropy(joint.marginal(both));
}

}  // namespace qbc

#endif  // QBC_GAUSSIAN_HPP
