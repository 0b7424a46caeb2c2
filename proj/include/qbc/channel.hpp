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

#ifndef QBC_CHANNEL_HPP
#define QBC_CHANNEL_HPP

/// \file channel.hpp
/// Passive linear-optical broadcast channels: a single sender mode entering
/// an l-mode interferometer whose outputs are split between m receivers and
/// the environment. Provides the triangular (Reck-style) decomposition of the
/// interferometer into two-mode elements, the reduction of a single-input
/// network to an equivalent chain of m beam splitters, and symplectic
/// application of either picture to Gaussian input states.

#include "qbc/gaussian.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qbc {

/// Output label used by Cascade for the environment branch.
inline constexpr int kEnvironment = -1;

/// Two-mode element of an interferometer decomposition. Acts on annihilation
/// operators of (mode_i, mode_j) as
///   [[cos(theta), e^{i phi} sin(theta)], [-e^{-i phi} sin(theta), cos(theta)]]
/// so the power transmittance is cos^2(theta).
struct BeamSplitterElement {
  int mode_i = 0;
  int mode_j = 0;
  double theta = 0.0;
  double phi = 0.0;

  double transmittance() const {
    const double c = std::cos(theta);
    return c * c;
  }

  Eigen::Matrix2cd matrix2() const {
    const double c = std::cos(theta), s = std::sin(theta);
    const std::complex<double> e(std::cos(phi), std::sin(phi));
    Eigen::Matrix2cd m;
    m << c, e * s, -std::conj(e) * s, c;
    return m;
  }

  Eigen::MatrixXcd embedded(int l) const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(l, l);
    const Eigen::Matrix2cd b = matrix2();
    m(mode_i, mode_i) = b(0, 0);
    m(mode_i, mode_j) = b(0, 1);
    m(mode_j, mode_i) = b(1, 0);
    m(mode_j, mode_j) = b(1, 1);
    return m;
  }
};

/// An l-mode interferometer with one non-vacuum input (the sender) and m
/// designated receiver outputs; every other output belongs to the
/// environment.
class LinearOpticalNetwork {
 public:
  LinearOpticalNetwork(Eigen::MatrixXcd unitary, int input_mode,
                       std::vector<int> receiver_modes)
      : u_(std::move(unitary)),
        input_mode_(input_mode),
        receivers_(std::move(receiver_modes)) {
    if (u_.rows() == 0 || u_.rows() != u_.cols())
      throw std::invalid_argument("LinearOpticalNetwork: unitary must be square");
    const int l = n_modes();
    const double defect =
        (u_.adjoint() * u_ - Eigen::MatrixXcd::Identity(l, l)).cwiseAbs().maxCoeff();
    if (defect > 1e-10)
      throw std::invalid_argument(
          "LinearOpticalNetwork: matrix is not unitary (defect " +
          std::to_string(defect) + ")");
    if (input_mode_ < 0 || input_mode_ >= l)
      throw std::invalid_argument("LinearOpticalNetwork: input mode out of range");
    if (receivers_.empty())
      throw std::invalid_argument("LinearOpticalNetwork: need at least one receiver");
    std::vector<bool> seen(l, false);
    for (int r : receivers_) {
      if (r < 0 || r >= l)
        throw std::invalid_argument(
            "LinearOpticalNetwork: receiver mode out of range");
      if (seen[r])
        throw std::invalid_argument("LinearOpticalNetwork: duplicate receiver mode");
      seen[r] = true;
    }
  }

  int n_modes() const { return static_cast<int>(u_.rows()); }
  const Eigen::MatrixXcd& unitary() const { return u_; }
  int input_mode() const { return input_mode_; }
  const std::vector<int>& receiver_modes() const { return receivers_; }

 private:
  Eigen::MatrixXcd u_;
  int input_mode_;
  std::vector<int> receivers_;
};

/// Triangular decomposition of an interferometer into two-mode elements plus
/// a final layer of output phases: U = diag(output_phases) * E_K * ... * E_1,
/// with elements listed in application order (elements[0] acts first).
struct ReckDecomposition {
  std::vector<BeamSplitterElement> elements;
  Eigen::VectorXcd output_phases;
};

inline Eigen::MatrixXcd reconstruct_unitary(const ReckDecomposition& dec, int l) {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(l, l);
  for (const auto& e : dec.elements) u = e.embedded(l) * u;
  return dec.output_phases.asDiagonal() * u;
}

/// Decomposes the network unitary into at most l(l-1)/2 two-mode elements by
/// complex Givens rotations that null the lower triangle column by column.
inline ReckDecomposition reck_decompose(const LinearOpticalNetwork& net) {
  const int l = net.n_modes();
  Eigen::MatrixXcd u = net.unitary();
  struct Rotation {
    int i, j;
    double c;
    std::complex<double> s;
  };
  std::vector<Rotation> rotations;
  for (int col = 0; col < l - 1; ++col) {
    for (int row = l - 1; row > col; --row) {
      const std::complex<double> a = u(row - 1, col);
      const std::complex<double> b = u(row, col);
      const double nb = std::abs(b);
      if (nb < 1e-15) continue;
      const double na = std::abs(a);
      const double r = std::hypot(na, nb);
      double c;
      std::complex<double> s;
      if (na < 1e-15) {
        c = 0.0;
        s = b / nb;
      } else {
        c = na / r;
        s = c * b / a;
      }
      // G = [[c, conj(s)], [-s, c]] on rows (row-1, row) zeroes u(row, col)
      for (int k = 0; k < l; ++k) {
        const std::complex<double> top = u(row - 1, k);
        const std::complex<double> bot = u(row, k);
        u(row - 1, k) = c * top + std::conj(s) * bot;
        u(row, k) = -s * top + c * bot;
      }
      rotations.push_back({row - 1, row, c, s});
    }
  }
  // u is now diagonal with unit-modulus entries d. The original unitary is
  // U = G_1^† ... G_K^† D = D (D^† G_1^† D) ... (D^† G_K^† D); conjugating by
  // the phases keeps each factor in beam-splitter form.
  Eigen::VectorXcd d = u.diagonal();
  for (int k = 0; k < l; ++k) d(k) /= std::abs(d(k));
  ReckDecomposition dec;
  dec.output_phases = d;
  dec.elements.reserve(rotations.size());
  for (auto it = rotations.rbegin(); it != rotations.rend(); ++it) {
    const std::complex<double> sij = -std::conj(it->s) * std::conj(d(it->i)) * d(it->j);
    BeamSplitterElement e;
    e.mode_i = it->i;
    e.mode_j = it->j;
    e.theta = std::atan2(std::abs(it->s), it->c);
    e.phi = std::abs(sij) > 0.0 ? std::arg(sij) : 0.0;
    dec.elements.push_back(e);
  }
  return dec;
}

/// Power transmittances from the sender to each receiver; the environment
/// absorbs the remainder 1 - sum.
class BroadcastChannel {
 public:
  explicit BroadcastChannel(std::vector<double> transmittances)
      : etas_(std::move(transmittances)) {
    if (etas_.empty())
      throw std::invalid_argument("BroadcastChannel: need at least one receiver");
    double sum = 0.0;
    for (double e : etas_) {
      if (!(e >= 0.0))
        throw std::invalid_argument(
            "BroadcastChannel: transmittances must be >= 0");
      sum += e;
    }
    if (sum > 1.0 + 1e-12)
      throw std::invalid_argument(
          "BroadcastChannel: transmittances sum to more than 1");
  }

  int n_receivers() const { return static_cast<int>(etas_.size()); }
  double transmittance(int i) const { return etas_.at(i); }
  const std::vector<double>& transmittances() const { return etas_; }
  double total_transmittance() const {
    return std::accumulate(etas_.begin(), etas_.end(), 0.0);
  }
  double environment_transmittance() const {
    return std::max(0.0, 1.0 - total_transmittance());
  }

 private:
  std::vector<double> etas_;
};

/// One stage of the equivalent beam-splitter chain: the stage's splitter
/// passes pass_transmittance of the incoming line power onward and taps the
/// rest into `output` (a receiver index, or kEnvironment).
struct CascadeStep {
  int output = kEnvironment;
  double pass_transmittance = 1.0;
};

/// Chain of m beam splitters equivalent to a broadcast channel: the ordered
/// steps tap all outputs but the last, and the line itself terminates as
/// residual_output. output_phases[i], when present, is an extra phase
/// rotation applied to receiver i's tapped mode, so that a cascade produced
/// by prune_to_cascade reproduces the source network's output covariances
/// exactly rather than up to local phases.
struct Cascade {
  std::vector<CascadeStep> steps;
  int residual_output = kEnvironment;
  std::vector<double> output_phases;
};

/// Builds the equivalent chain for a given ordering of the m + 1 outputs
/// (all receivers plus kEnvironment, each exactly once). The j-th splitter
/// passes (1 - sum_{k<=j} eta_k) / (1 - sum_{k<j} eta_k) of its input.
inline Cascade cascade_from_ordering(const BroadcastChannel& ch,
                                     const std::vector<int>& ordering) {
  const int m = ch.n_receivers();
  if (static_cast<int>(ordering.size()) != m + 1)
    throw std::invalid_argument(
        "cascade_from_ordering: ordering must list every receiver and the environment");
  std::vector<bool> seen(m, false);
  bool seen_env = false;
  for (int o : ordering) {
    if (o == kEnvironment) {
      if (seen_env)
        throw std::invalid_argument("cascade_from_ordering: duplicate environment");
      seen_env = true;
    } else {
      if (o < 0 || o >= m || seen[o])
        throw std::invalid_argument("cascade_from_ordering: invalid ordering");
      seen[o] = true;
    }
  }
  if (!seen_env)
    throw std::invalid_argument("cascade_from_ordering: environment missing");

  auto eta_of = [&](int o) {
    return o == kEnvironment ? ch.environment_transmittance() : ch.transmittance(o);
  };
  Cascade casc;
  casc.residual_output = ordering.back();
  double remaining = 1.0;  // power still on the line, relative to the source
  for (int j = 0; j + 1 < static_cast<int>(ordering.size()); ++j) {
    const double eta = eta_of(ordering[j]);
    double pass;
    if (remaining <= 1e-15) {
      if (eta > 1e-15)
        throw std::domain_error(
            "cascade_from_ordering: earlier outputs exhaust all power");
      pass = 1.0;  // dead line, nothing to tap
    } else {
      pass = (remaining - eta) / remaining;
      if (pass < 0.0 && pass > -1e-12) pass = 0.0;
      if (pass < 0.0)
        throw std::domain_error("cascade_from_ordering: negative pass transmittance");
    }
    casc.steps.push_back({ordering[j], pass});
    remaining -= eta;
  }
  // tapped powers must reproduce the channel exactly
  double line = 1.0;
  for (const auto& step : casc.steps) {
    const double tapped = line * (1.0 - step.pass_transmittance);
    if (std::abs(tapped - eta_of(step.output)) > 1e-12)
      throw std::logic_error("cascade_from_ordering: tapped power mismatch");
    line *= step.pass_transmittance;
  }
  return casc;
}

inline std::vector<int> default_ordering(const BroadcastChannel& ch) {
  std::vector<int> order(ch.n_receivers());
  std::iota(order.begin(), order.end(), 0);
  order.push_back(kEnvironment);
  return order;
}

/// Sends the last mode of `input` through the chain and returns the joint
/// covariance with modes reordered canonically to
/// (spectator modes..., B_1, ..., B_m, E) regardless of the chain's ordering.
inline CovarianceMatrix channel_apply(const BroadcastChannel& ch,
                                      const Cascade& casc,
                                      const CovarianceMatrix& input) {
  const int m = ch.n_receivers();
  if (static_cast<int>(casc.steps.size()) != m)
    throw std::invalid_argument("channel_apply: cascade does not match channel");
  if (!casc.output_phases.empty() &&
      static_cast<int>(casc.output_phases.size()) != m)
    throw std::invalid_argument("channel_apply: bad output phase count");
  const int n_in = input.n_modes();
  const int spectators = n_in - 1;
  const int line = spectators;       // the sender mode being consumed
  const int total = n_in + m;        // spectators + line + one ancilla per step
  CovarianceMatrix gamma = direct_sum(input, CovarianceMatrix::vacuum(m));
  std::vector<int> mode_of_output(m + 1, -1);  // receiver index (m = env slot)
  for (int j = 0; j < m; ++j) {
    const int anc = n_in + j;
    gamma = apply_symplectic(
        beam_splitter(casc.steps[j].pass_transmittance, line, anc, total), gamma);
    const int slot = casc.steps[j].output == kEnvironment ? m : casc.steps[j].output;
    mode_of_output[slot] = anc;
  }
  mode_of_output[casc.residual_output == kEnvironment ? m : casc.residual_output] =
      line;
  if (!casc.output_phases.empty()) {
    for (int r = 0; r < m; ++r) {
      if (casc.output_phases[r] == 0.0) continue;
      gamma = apply_symplectic(
          phase_shift(casc.output_phases[r], mode_of_output[r], total), gamma);
    }
  }
  std::vector<int> perm;
  perm.reserve(total);
  for (int k = 0; k < spectators; ++k) perm.push_back(k);
  for (int slot = 0; slot <= m; ++slot) perm.push_back(mode_of_output[slot]);
  return permute_modes(gamma, perm);
}

/// Same, with the default receiver ordering and no output phases.
inline CovarianceMatrix channel_apply(const BroadcastChannel& ch,
                                      const CovarianceMatrix& input) {
  return channel_apply(ch, cascade_from_ordering(ch, default_ordering(ch)), input);
}

/// Full-interferometer reference path: feeds the last mode of `input` into
/// net.input_mode(), vacuum into every other port, and applies the network
/// unitary symplectically. Returns modes
/// (spectator modes..., network outputs 0..l-1).
inline CovarianceMatrix network_apply(const LinearOpticalNetwork& net,
                                      const CovarianceMatrix& input) {
  const int l = net.n_modes();
  const int spectators = input.n_modes() - 1;
  const int total = spectators + l;
  CovarianceMatrix gamma =
      l > 1 ? direct_sum(input, CovarianceMatrix::vacuum(l - 1)) : input;
  // move the sender mode from position `spectators` to the network input port
  std::vector<int> perm;
  perm.reserve(total);
  for (int k = 0; k < spectators; ++k) perm.push_back(k);
  int next_vacuum = spectators + 1;
  for (int port = 0; port < l; ++port)
    perm.push_back(port == net.input_mode() ? spectators : next_vacuum++);
  gamma = permute_modes(gamma, perm);

  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * total, 2 * total);
  const Eigen::MatrixXcd& u = net.unitary();
  s.block(spectators, spectators, l, l) = u.real();
  s.block(spectators, total + spectators, l, l) = -u.imag();
  s.block(total + spectators, spectators, l, l) = u.imag();
  s.block(total + spectators, total + spectators, l, l) = u.real();
  return apply_symplectic(SymplecticTransform(total, std::move(s)), gamma);
}

/// Reduces a single-input network to its equivalent broadcast channel and
/// beam-splitter chain. The per-receiver power is |U_{r, input}|^2; elements
/// fed by two vacuum ports drop out and the environment outputs merge into
/// the single residual branch. Receiver output phases are chosen so that the
/// chain reproduces the network's (sender, receivers) covariances exactly.
inline std::pair<BroadcastChannel, Cascade> prune_to_cascade(
    const LinearOpticalNetwork& net) {
  const ReckDecomposition dec = reck_decompose(net);
  const double residual =
      (reconstruct_unitary(dec, net.n_modes()) - net.unitary()).norm();
  if (residual > 1e-9)
    throw std::runtime_error("prune_to_cascade: decomposition failed to converge");

  const int m = static_cast<int>(net.receiver_modes().size());
  std::vector<double> etas(m);
  for (int i = 0; i < m; ++i) {
    const std::complex<double> amp =
        net.unitary()(net.receiver_modes()[i], net.input_mode());
    etas[i] = std::min(1.0, std::norm(amp));
  }
  BroadcastChannel ch(std::move(etas));
  Cascade casc = cascade_from_ordering(ch, default_ordering(ch));

  // signed amplitude each receiver picks up from the chain itself
  std::vector<double> chain_amp(m, 0.0);
  double line_amp = 1.0;
  for (const auto& step : casc.steps) {
    const double tap = std::sqrt(1.0 - step.pass_transmittance);
    if (step.output != kEnvironment) chain_amp[step.output] = line_amp * tap;
    line_amp *= std::sqrt(step.pass_transmittance);
  }
  if (casc.residual_output != kEnvironment) chain_amp[casc.residual_output] = line_amp;

  casc.output_phases.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    const std::complex<double> target =
        net.unitary()(net.receiver_modes()[i], net.input_mode());
    if (std::abs(target) < 1e-15 || std::abs(chain_amp[i]) < 1e-15) continue;
    casc.output_phases[i] =
        std::arg(target) - (chain_amp[i] < 0.0 ? M_PI : 0.0);
  }
  return {std::move(ch), std::move(casc)};
}

}  // namespace qbc

#endif  // QBC_CHANNEL_HPP
