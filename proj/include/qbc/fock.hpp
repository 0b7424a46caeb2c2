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

#ifndef QBC_FOCK_HPP
#define QBC_FOCK_HPP

/// \file fock.hpp
/// Brute-force verification oracle in a truncated Fock space. States are
/// kept as pure kets (every state reachable here is a TMSV run through
/// passive elements); reduced density matrices and their spectra come from
/// bipartitions of the ket. Nothing is renormalized after truncation: the
/// discarded tail mass is tracked explicitly and folded into tolerances by
/// the callers, which keeps truncation errors one-sided and auditable.
///
/// This is a verification tool, not a simulator: dimensions grow as
/// (cutoff+1)^modes, so keep the mean photon number small and the receiver
/// count at three or below.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qbc::fock {

/// Pure multimode state with a per-mode photon-number cutoff. Amplitudes are
/// indexed row-major with mode 0 slowest; `tail` is the probability mass
/// lost to truncation (the squared norm is 1 - tail).
struct FockState {
  int n_modes = 0;
  int cutoff = 0;
  Eigen::VectorXcd amplitudes;
  double tail = 0.0;

  int dim_per_mode() const { return cutoff + 1; }
};

namespace detail {

inline long ipow(int base, int exp) {
  long r = 1;
  for (int k = 0; k < exp; ++k) r *= base;
  return r;
}

}  // namespace detail

/// Smallest cutoff whose TMSV tail mass (N/(N+1))^(cutoff+1) is below
/// max_tail.
inline int min_cutoff_for_tail(double mean_photons, double max_tail) {
  if (!(mean_photons >= 0.0) || !(max_tail > 0.0))
    throw std::invalid_argument("min_cutoff_for_tail: bad arguments");
  if (mean_photons == 0.0) return 0;
  const double ratio = mean_photons / (mean_photons + 1.0);
  int d = static_cast<int>(std::ceil(std::log(max_tail) / std::log(ratio))) - 1;
  if (d < 0) d = 0;
  while (std::pow(ratio, d + 1) > max_tail) ++d;
  return d;
}

/// Two-mode squeezed vacuum ket, sum_m sqrt(lambda_m) |m, m> with
/// lambda_m = N^m / (N+1)^(m+1), truncated at the cutoff.
inline FockState tmsv(double mean_photons, int cutoff, double max_tail = 1e-10) {
  if (!(mean_photons >= 0.0))
    throw std::invalid_argument("fock::tmsv: mean photon number must be >= 0");
  if (cutoff < 0) throw std::invalid_argument("fock::tmsv: negative cutoff");
  const double ratio = mean_photons / (mean_photons + 1.0);
  const double tail = mean_photons == 0.0 ? 0.0 : std::pow(ratio, cutoff + 1);
  if (tail > max_tail)
    throw std::invalid_argument(
        "fock::tmsv: cutoff " + std::to_string(cutoff) + " leaves tail mass " +
        std::to_string(tail) + " above the requested bound");
  FockState s;
  s.n_modes = 2;
  s.cutoff = cutoff;
  const int d = cutoff + 1;
  s.amplitudes = Eigen::VectorXcd::Zero(d * d);
  for (int m = 0; m <= cutoff; ++m) {
    const double lambda =
        mean_photons == 0.0
            ? (m == 0 ? 1.0 : 0.0)
            : std::exp(m * std::log(mean_photons) -
                       (m + 1) * std::log(mean_photons + 1.0));
    s.amplitudes(m * d + m) = std::sqrt(lambda);
  }
  s.tail = tail;
  return s;
}

inline FockState with_vacuum_modes(const FockState& s, int extra) {
  if (extra < 0) throw std::invalid_argument("with_vacuum_modes: negative count");
  if (extra == 0) return s;
  FockState out;
  out.n_modes = s.n_modes + extra;
  out.cutoff = s.cutoff;
  out.tail = s.tail;
  const long stride = detail::ipow(s.dim_per_mode(), extra);
  out.amplitudes = Eigen::VectorXcd::Zero(s.amplitudes.size() * stride);
  for (long k = 0; k < s.amplitudes.size(); ++k)
    out.amplitudes(k * stride) = s.amplitudes(k);
  return out;
}

namespace detail {

/// Reorders tensor axes: position k of the result holds original axis
/// new_order[k].
inline Eigen::VectorXcd permute_axes(const Eigen::VectorXcd& v, int n_modes,
                                     int dim, const std::vector<int>& new_order) {
  std::vector<long> dst_stride_of_orig(n_modes, 0);
  {
    std::vector<bool> seen(n_modes, false);
    long stride = 1;
    for (int k = n_modes - 1; k >= 0; --k) {
      const int orig = new_order[k];
      if (orig < 0 || orig >= n_modes || seen[orig])
        throw std::invalid_argument("permute_axes: not a permutation");
      seen[orig] = true;
      dst_stride_of_orig[orig] = stride;
      stride *= dim;
    }
  }
  Eigen::VectorXcd out(v.size());
  std::vector<int> digit(n_modes, 0);
  long dst = 0;
  for (long src = 0; src < v.size(); ++src) {
    out(dst) = v(src);
    // odometer increment over the row-major source digits
    for (int a = n_modes - 1; a >= 0; --a) {
      dst += dst_stride_of_orig[a];
      if (++digit[a] <= dim - 1) break;
      dst -= static_cast<long>(dim) * dst_stride_of_orig[a];
      digit[a] = 0;
    }
  }
  return out;
}

}  // namespace detail

/// Exact two-mode beam-splitter matrix on the truncated space, basis index
/// m * (cutoff+1) + n for |m photons in the first mode, n in the second>.
/// Photon number is conserved blockwise; each full block is the exponential
/// of the rotation generator, evaluated by eigendecomposition and then
/// restricted to the retained indices, so the matrix is orthogonal up to the
/// weight the state carries on blocks that cross the cutoff. The first mode
/// keeps the amplitude fraction sqrt(transmittance), matching the
/// quadrature-level convention.
inline Eigen::MatrixXd beam_splitter_matrix(double transmittance, int cutoff) {
  if (!(transmittance >= 0.0 && transmittance <= 1.0))
    throw std::invalid_argument(
        "fock::beam_splitter_matrix: transmittance must be in [0,1]");
  if (cutoff < 0)
    throw std::invalid_argument("fock::beam_splitter_matrix: negative cutoff");
  const int d = cutoff + 1;
  const double theta = std::acos(std::min(1.0, std::sqrt(transmittance)));
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(d * d, d * d);
  for (int total = 0; total <= 2 * cutoff; ++total) {
    const int dim = total + 1;
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(dim, dim);
    for (int k = 0; k + 1 <= total; ++k) {
      const double t = std::sqrt(static_cast<double>(k + 1) * (total - k));
      gen(k, k + 1) = t;   // b^dag a
      gen(k + 1, k) = -t;  // -a^dag b
    }
    Eigen::MatrixXcd h =
        std::complex<double>(0.0, 1.0) * gen.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::VectorXcd phases(dim);
    for (int k = 0; k < dim; ++k) {
      const double lam = es.eigenvalues()(k);
      phases(k) = std::complex<double>(std::cos(theta * lam), -std::sin(theta * lam));
    }
    const Eigen::MatrixXcd block =
        es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    for (int mrow = std::max(0, total - cutoff); mrow <= std::min(total, cutoff);
         ++mrow)
      for (int mcol = std::max(0, total - cutoff); mcol <= std::min(total, cutoff);
           ++mcol)
        full(mrow * d + (total - mrow), mcol * d + (total - mcol)) =
            block(mrow, mcol).real();
  }
  return full;
}

inline FockState apply_beam_splitter(const FockState& s, double transmittance,
                                     int mode_i, int mode_j) {
  if (mode_i == mode_j || mode_i < 0 || mode_j < 0 || mode_i >= s.n_modes ||
      mode_j >= s.n_modes)
    throw std::invalid_argument("fock::apply_beam_splitter: bad mode indices");
  const int d = s.dim_per_mode();
  std::vector<int> order = {mode_i, mode_j};
  for (int k = 0; k < s.n_modes; ++k)
    if (k != mode_i && k != mode_j) order.push_back(k);
  Eigen::VectorXcd work =
      detail::permute_axes(s.amplitudes, s.n_modes, d, order);
  const long rest = work.size() / (static_cast<long>(d) * d);
  Eigen::Map<Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic,
                           Eigen::RowMajor>>
      mat(work.data(), static_cast<long>(d) * d, rest);
  const Eigen::MatrixXcd bs =
      beam_splitter_matrix(transmittance, s.cutoff).cast<std::complex<double>>();
  mat = (bs * mat).eval();
  std::vector<int> inverse(s.n_modes);
  for (int k = 0; k < s.n_modes; ++k) inverse[order[k]] = k;
  FockState out;
  out.n_modes = s.n_modes;
  out.cutoff = s.cutoff;
  out.tail = s.tail;
  out.amplitudes = detail::permute_axes(work, s.n_modes, d, inverse);
  return out;
}

inline double mean_total_photons(const FockState& s) {
  const int d = s.dim_per_mode();
  double acc = 0.0;
  for (long k = 0; k < s.amplitudes.size(); ++k) {
    const double p = std::norm(s.amplitudes(k));
    if (p == 0.0) continue;
    long rem = k;
    long photons = 0;
    for (int a = 0; a < s.n_modes; ++a) {
      photons += rem % d;
      rem /= d;
    }
    acc += p * static_cast<double>(photons);
  }
  return acc;
}

/// Unnormalized reduced density matrix on the kept modes (trace 1 - tail).
inline Eigen::MatrixXcd reduced_density(const FockState& s,
                                        const std::vector<int>& keep) {
  if (keep.empty())
    throw std::invalid_argument("fock::reduced_density: empty mode set");
  const int d = s.dim_per_mode();
  std::vector<int> order = keep;
  std::vector<bool> used(s.n_modes, false);
  for (int k : keep) {
    if (k < 0 || k >= s.n_modes || used[k])
      throw std::invalid_argument("fock::reduced_density: bad mode set");
    used[k] = true;
  }
  for (int k = 0; k < s.n_modes; ++k)
    if (!used[k]) order.push_back(k);
  const Eigen::VectorXcd work =
      detail::permute_axes(s.amplitudes, s.n_modes, d, order);
  const long dim_keep = detail::ipow(d, static_cast<int>(keep.size()));
  const long rest = work.size() / dim_keep;
  Eigen::Map<const Eigen::Matrix<std::complex<double>, Eigen::Dynamic,
                                 Eigen::Dynamic, Eigen::RowMajor>>
      mat(work.data(), dim_keep, rest);
  return mat * mat.adjoint();
}

/// Entropy in bits of the reduced state on `modes`, from the spectrum of the
/// Gram matrix of the smaller side of the bipartition.
inline double subsystem_entropy(const FockState& s, const std::vector<int>& modes) {
  if (modes.empty())
    throw std::invalid_argument("fock::subsystem_entropy: empty mode set");
  const int d = s.dim_per_mode();
  std::vector<bool> used(s.n_modes, false);
  for (int k : modes) {
    if (k < 0 || k >= s.n_modes || used[k])
      throw std::invalid_argument("fock::subsystem_entropy: bad mode set");
    used[k] = true;
  }
  std::vector<int> order = modes;
  std::vector<int> complement;
  for (int k = 0; k < s.n_modes; ++k)
    if (!used[k]) complement.push_back(k);
  order.insert(order.end(), complement.begin(), complement.end());
  const Eigen::VectorXcd work =
      detail::permute_axes(s.amplitudes, s.n_modes, d, order);
  const long dim_keep = detail::ipow(d, static_cast<int>(modes.size()));
  const long rest = work.size() / dim_keep;
  Eigen::Map<const Eigen::Matrix<std::complex<double>, Eigen::Dynamic,
                                 Eigen::Dynamic, Eigen::RowMajor>>
      mat(work.data(), dim_keep, rest);
  Eigen::MatrixXcd gram;
  if (dim_keep <= rest)
    gram = mat * mat.adjoint();
  else
    gram = (mat.adjoint() * mat).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  double h = 0.0;
  for (int k = 0; k < es.eigenvalues().size(); ++k) {
    const double p = es.eigenvalues()(k);
    if (p > 1e-300) h -= p * std::log2(p);
  }
  return h;
}

/// Brute-force -H(T | A, Tbar): builds the truncated TMSV, taps each
/// receiver off the broadcast line and evaluates the entropy difference
/// H(A, Tbar) - H(A, all receivers) by exact diagonalization. Mode layout is
/// (A, line -> E, B_1, ..., B_m).
inline double conditional_entropy(const std::vector<double>& etas,
                                  double mean_photons, std::uint32_t subset_mask,
                                  int cutoff, double max_tail = 1e-10) {
  const int m = static_cast<int>(etas.size());
  if (m == 0 || m > 3)
    throw std::invalid_argument(
        "fock::conditional_entropy: supports 1 to 3 receivers");
  if (!(mean_photons <= 1.0 + 1e-9))
    throw std::invalid_argument(
        "fock::conditional_entropy: oracle is limited to mean photon numbers <= 1");
  if (subset_mask == 0 || subset_mask >= (1u << m))
    throw std::invalid_argument("fock::conditional_entropy: bad subset mask");
  if (detail::ipow(cutoff + 1, m + 2) > 32'000'000)
    throw std::invalid_argument(
        "fock::conditional_entropy: truncated space too large at this cutoff");
  double sum = 0.0;
  for (double e : etas) {
    if (!(e >= 0.0)) throw std::invalid_argument("fock::conditional_entropy: bad eta");
    sum += e;
  }
  if (sum > 1.0 + 1e-12)
    throw std::invalid_argument("fock::conditional_entropy: etas exceed 1");

  FockState state = with_vacuum_modes(tmsv(mean_photons, cutoff, max_tail), m);
  double remaining = 1.0;
  for (int j = 0; j < m; ++j) {
    double pass;
    if (remaining <= 1e-15) {
      pass = 1.0;
    } else {
      pass = std::max(0.0, (remaining - etas[j]) / remaining);
    }
    state = apply_beam_splitter(state, pass, 1, 2 + j);
    remaining -= etas[j];
  }
  std::vector<int> a_and_complement = {0};
  std::vector<int> a_and_receivers = {0};
  for (int j = 0; j < m; ++j) {
    a_and_receivers.push_back(2 + j);
    if (!(subset_mask >> j & 1)) a_and_complement.push_back(2 + j);
  }
  return subsystem_entropy(state, a_and_complement) -
         subsystem_entropy(state, a_and_receivers);
}

}  // namespace qbc::fock

#endif  // QBC_FOCK_HPP
