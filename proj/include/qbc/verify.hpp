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

#ifndef QBC_VERIFY_HPP
#define QBC_VERIFY_HPP

/// \file verify.hpp
/// Self-check suite behind the CLI `verify` command: every closed form in
/// the library is replayed against an independent route (second-moment
/// pipelines, permutation invariance, full-interferometer simulation, and
/// truncated Fock-space diagonalization) at pinned tolerances.
///
/// Options::entropy_bias is a fault-injection hook for testing the harness
/// itself: it scales the closed-form thermal-entropy evaluations inside the
/// checks, which must trip the comparisons.

#include "qbc/capacity.hpp"
#include "qbc/channel.hpp"
#include "qbc/fock.hpp"
#include "qbc/gaussian.hpp"
#include "qbc/io.hpp"
#include "qbc/qkd.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace qbc::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  double error = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct Options {
  bool quick = false;
  double entropy_bias = 0.0;  // relative perturbation of closed-form entropies
  unsigned seed = 20260808;
};

namespace detail {

inline Eigen::MatrixXcd haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      g(r, c) = std::complex<double>(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) q.col(k) *= r(k, k) / std::abs(r(k, k));
  return q;
}

inline BroadcastChannel random_channel(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.05, 1.0);
  std::vector<double> w(m);
  double tot = 0.0;
  for (double& x : w) tot += (x = uni(rng));
  std::uniform_real_distribution<double> sum_dist(0.2, 0.85);
  const double target = sum_dist(rng);
  for (double& x : w) x *= target / tot;
  return BroadcastChannel(w);
}

}  // namespace detail

/// Runs the suite. `quick` skips the Fock-space checks and shrinks the
/// random sample counts.
inline std::vector<CheckResult> run_checks(const Options& opt) {
  std::vector<CheckResult> results;
  const double bias_scale = 1.0 + opt.entropy_bias;
  auto biased_entropy = [bias_scale](double x) {
    return thermal_entropy(x) * bias_scale;
  };
  auto record = [&results](const std::string& name, double error, double tol) {
    results.push_back({name, error <= tol, error, tol, ""});
  };

  {  // closed form of the thermal entropy against its defining expression
    double err = 0.0;
    for (double x : {1e-6, 0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0}) {
      const double reference = (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
      err = std::max(err, std::abs(biased_entropy(x) - reference));
    }
    record("g_closed_form", err, 1e-12);
  }

  {  // TMSV purity
    double err = 0.0;
    for (double n : {0.0, 0.1, 1.0, 10.0})
      err = std::max(err, std::abs(von_neumann_entropy(
                              tmsv_covariance(TmsvParams(n)))));
    record("tmsv_purity", err, 1e-9);
  }

  {  // entropy additivity over direct sums
    const auto a = partial_trace(tmsv_covariance(TmsvParams(0.4)), {0});
    const auto b = CovarianceMatrix::thermal(1.7);
    const double err =
        std::abs(von_neumann_entropy(direct_sum(a, b)) -
                 von_neumann_entropy(a) - von_neumann_entropy(b));
    record("entropy_additivity", err, 1e-9);
  }

  {  // symplectic transforms preserve the symplectic spectrum
    std::mt19937_64 rng(opt.seed + 1);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double err = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const auto g = direct_sum(tmsv_covariance(TmsvParams(3.0 * uni(rng))),
                                CovarianceMatrix::thermal(2.0 * uni(rng)));
      auto s = beam_splitter(uni(rng), 0, 2, 3);
      s = phase_shift(6.28 * uni(rng), 1, 3) * s;
      s = beam_splitter(uni(rng), 1, 2, 3) * s;
      const auto before = symplectic_eigenvalues(g);
      const auto after = symplectic_eigenvalues(apply_symplectic(s, g));
      for (std::size_t k = 0; k < before.size(); ++k)
        err = std::max(err, std::abs(after[k] - before[k]));
    }
    record("symplectic_invariance", err, 1e-9);
  }

  {  // closed-form rates against the covariance pipeline
    std::mt19937_64 rng(opt.seed + 2);
    std::uniform_real_distribution<double> photons(0.05, 8.0);
    const int triples = opt.quick ? 20 : 100;
    double err = 0.0;
    for (int trial = 0; trial < triples; ++trial) {
      const int m = 1 + trial % 4;
      const auto ch = detail::random_channel(m, rng);
      std::uniform_int_distribution<std::uint32_t> masks(1, (1u << m) - 1);
      const std::uint32_t mask = masks(rng);
      const double n = photons(rng);
      const SubsetSpec spec(ch, mask);
      const double closed_rate =
          biased_entropy((1.0 - spec.eta_complement) * n) -
          biased_entropy((1.0 - ch.total_transmittance()) * n);
      err = std::max(err, std::abs(closed_rate -
                                   achievable_rate_via_entropy(ch, mask, n)));
    }
    record("achievable_dual_path", err, 1e-8);
  }

  {  // cascade ordering invariance
    std::mt19937_64 rng(opt.seed + 3);
    const auto ch = detail::random_channel(3, rng);
    const auto input = tmsv_covariance(TmsvParams(0.7));
    const auto reference = channel_apply(ch, input);
    std::vector<int> order = {kEnvironment, 0, 1, 2};
    double err = 0.0;
    std::sort(order.begin(), order.end());
    do {
      const auto out = channel_apply(ch, cascade_from_ordering(ch, order), input);
      err = std::max(err,
                     (out.matrix() - reference.matrix()).cwiseAbs().maxCoeff());
    } while (std::next_permutation(order.begin(), order.end()));
    record("ordering_invariance", err, 1e-10);
  }

  {  // interferometer decomposition round trip
    std::mt19937_64 rng(opt.seed + 4);
    double err = 0.0;
    for (int l : {4, 5, 6}) {
      const auto u = detail::haar_unitary(l, rng);
      const LinearOpticalNetwork net(u, 0, {l - 1});
      err = std::max(
          err, (reconstruct_unitary(reck_decompose(net), l) - u).norm());
    }
    record("reck_roundtrip", err, 1e-10);
  }

  {  // pruned cascade against the full interferometer simulation
    std::mt19937_64 rng(opt.seed + 5);
    const auto input = tmsv_covariance(TmsvParams(1.1));
    double err = 0.0;
    for (int l : {4, 5, 6}) {
      const LinearOpticalNetwork net(detail::haar_unitary(l, rng), 1, {0, l - 1});
      const auto [ch, casc] = prune_to_cascade(net);
      const auto full = network_apply(net, input);
      const auto reference = partial_trace(full, {0, 1, 1 + l - 1});
      const auto probe =
          partial_trace(channel_apply(ch, casc, input), {0, 1, 2});
      err = std::max(err,
                     (probe.matrix() - reference.matrix()).cwiseAbs().maxCoeff());
    }
    record("prune_equivalence", err, 1e-10);
  }

  {  // leakage closed forms against the conditional-covariance pipeline
    double err = 0.0;
    for (double eta_b : {0.15, 0.3})
      for (double mu : {0.5, 5.0}) {
        const QkdScenario s(eta_b, 0.3, mu);
        const double closed_b =
            biased_entropy((1.0 - s.eta_b()) * (s.v() - 1.0) / 2.0) -
            [&] {
              const double alpha = (1.0 - s.eta_b()) * (s.v() - 1.0) /
                                       (s.eta_b() * (s.v() - 1.0) / 2.0 + 1.0) +
                                   1.0;
              const double beta = (1.0 - s.eta_b()) * (s.v() - 1.0) + 1.0;
              return biased_entropy((std::sqrt(alpha * beta) - 1.0) / 2.0);
            }();
        err = std::max(err, std::abs(closed_b - holevo_leakage_b(s)));
      }
    record("qkd_holevo_dual_path", err, 1e-8);
  }

  {  // ordered-reconciliation gain equals the conditional mutual information
    double err = 0.0;
    for (double mu : {1.0, 5.0, 20.0}) {
      const auto r = info_report(QkdScenario(0.3, 0.3, mu));
      const double gain =
          key_rates_charlie_first(r).k_ab - key_rates_simultaneous(r).k_ab;
      err = std::max(err, std::abs(gain - r.i_yz_given_x));
    }
    record("qkd_gain_identity", err, 1e-10);
  }

  if (!opt.quick) {
    {  // Fock-space TMSV marginal entropy
      const auto s = fock::tmsv(0.5, 40);
      const double err =
          std::abs(fock::subsystem_entropy(s, {0}) - biased_entropy(0.5));
      record("fock_tmsv_marginal", err, 1e-8);
    }
    {  // Fock-space conditional entropies against the loss closed forms
      const std::vector<double> etas = {0.2, 0.3};
      const double n_s = 0.5;
      const int cutoff = fock::min_cutoff_for_tail(n_s, 1e-10);
      double err = 0.0;
      for (std::uint32_t mask = 1; mask <= 3; ++mask) {
        const SubsetSpec spec(BroadcastChannel(etas), mask);
        const double closed =
            biased_entropy((1.0 - spec.eta_complement) * n_s) -
            biased_entropy(0.5 * n_s);
        err = std::max(err, std::abs(fock::conditional_entropy(etas, n_s, mask,
                                                               cutoff) -
                                     closed));
      }
      record("fock_conditional_vs_g", err, 1e-6);
    }
    {  // Fock check of the eavesdropper entropy in the key-rate analysis
      const double mu = 0.5;
      const int cutoff = fock::min_cutoff_for_tail(mu, 1e-10);
      auto state = fock::with_vacuum_modes(fock::tmsv(mu, cutoff), 2);
      state = fock::apply_beam_splitter(state, 0.7, 1, 2);
      state = fock::apply_beam_splitter(state, 0.4 / 0.7, 1, 3);
      const double err = std::abs(fock::subsystem_entropy(state, {1, 3}) -
                                  biased_entropy(0.7 * mu));
      record("fock_qkd_complement", err, 1e-6);
    }
  }

  return results;
}

inline bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

inline io::json report_json(const std::vector<CheckResult>& results,
                            const Options& opt) {
  io::json j;
  j["quick"] = opt.quick;
  if (opt.entropy_bias != 0.0) j["injected_entropy_bias"] = opt.entropy_bias;
  io::json checks = io::json::array();
  for (const auto& r : results) {
    io::json c;
    c["name"] = r.name;
    c["passed"] = r.passed;
    c["error"] = r.error;
    c["tolerance"] = r.tolerance;
    if (!r.note.empty()) c["note"] = r.note;
    checks.push_back(std::move(c));
  }
  j["checks"] = std::move(checks);
  j["passed"] = all_passed(results);
  return j;
}

}  // namespace qbc::verify

#endif  // QBC_VERIFY_HPP
