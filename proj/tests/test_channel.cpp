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

#include <catch2/catch.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qbc/channel.hpp"
#include "qbc/gaussian.hpp"
#include "test_util.hpp"

using namespace qbc;

namespace {

LinearOpticalNetwork random_network(int l, const std::vector<int>& receivers,
                                    int input, std::mt19937_64& rng) {
  return LinearOpticalNetwork(qbc_test::haar_unitary(l, rng), input, receivers);
}

}  // namespace

TEST_CASE("network validation") {
  Eigen::MatrixXcd not_unitary = 2.0 * Eigen::MatrixXcd::Identity(3, 3);
  CHECK_THROWS_AS(LinearOpticalNetwork(not_unitary, 0, {1}), std::invalid_argument);
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(3, 3);
  CHECK_THROWS_AS(LinearOpticalNetwork(id, 3, {1}), std::invalid_argument);
  CHECK_THROWS_AS(LinearOpticalNetwork(id, 0, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(LinearOpticalNetwork(id, 0, {}), std::invalid_argument);
}

TEST_CASE("triangular decomposition") {
  SECTION("identity network needs no elements") {
    const LinearOpticalNetwork net(Eigen::MatrixXcd::Identity(4, 4), 0, {1});
    const auto dec = reck_decompose(net);
    CHECK(dec.elements.empty());
    CHECK((reconstruct_unitary(dec, 4) - net.unitary()).norm() < 1e-12);
  }
  SECTION("a balanced splitter is a single element") {
    Eigen::MatrixXcd u(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    u << r, r, r, -r;
    const LinearOpticalNetwork net(u, 0, {0});
    const auto dec = reck_decompose(net);
    REQUIRE(dec.elements.size() == 1);
    CHECK(dec.elements[0].transmittance() == Approx(0.5).margin(1e-12));
    CHECK((reconstruct_unitary(dec, 2) - u).norm() < 1e-12);
  }
  SECTION("random networks round-trip") {
    std::mt19937_64 rng(2024);
    for (int l : {2, 3, 4, 5, 6}) {
      const auto u = qbc_test::haar_unitary(l, rng);
      const LinearOpticalNetwork net(u, 0, {l - 1});
      const auto dec = reck_decompose(net);
      CHECK(static_cast<int>(dec.elements.size()) <= l * (l - 1) / 2);
      for (const auto& e : dec.elements) {
        CHECK(e.transmittance() >= 0.0);
        CHECK(e.transmittance() <= 1.0);
      }
      CHECK((reconstruct_unitary(dec, l) - u).norm() < 1e-10);
    }
  }
}

TEST_CASE("broadcast channel validation") {
  CHECK_THROWS_AS(BroadcastChannel({0.5, -0.1}), std::invalid_argument);
  CHECK_THROWS_AS(BroadcastChannel({0.7, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(BroadcastChannel(std::vector<double>{}), std::invalid_argument);
  const BroadcastChannel ch({0.2, 0.3});
  CHECK(ch.total_transmittance() == Approx(0.5));
  CHECK(ch.environment_transmittance() == Approx(0.5));
}

TEST_CASE("cascade from an output ordering") {
  const BroadcastChannel ch({0.2, 0.3});
  SECTION("receiver, environment, receiver") {
    const auto casc = cascade_from_ordering(ch, {0, kEnvironment, 1});
    REQUIRE(casc.steps.size() == 2);
    CHECK(casc.steps[0].output == 0);
    CHECK(casc.steps[0].pass_transmittance == Approx(0.8).margin(1e-15));
    CHECK(casc.steps[1].output == kEnvironment);
    CHECK(casc.steps[1].pass_transmittance == Approx(0.375).margin(1e-15));
    CHECK(casc.residual_output == 1);
  }
  SECTION("single receiver uses one splitter passing 1 - eta") {
    const BroadcastChannel one({0.35});
    const auto casc = cascade_from_ordering(one, {0, kEnvironment});
    REQUIRE(casc.steps.size() == 1);
    CHECK(casc.steps[0].pass_transmittance == Approx(0.65).margin(1e-15));
  }
  SECTION("tapped powers reproduce the channel for every ordering") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
      const auto c3 = qbc_test::random_channel(3, rng, 0.2, 0.95);
      std::vector<int> order = {0, 1, 2, kEnvironment};
      std::sort(order.begin(), order.end());
      do {
        const auto casc = cascade_from_ordering(c3, order);
        double line = 1.0;
        for (const auto& step : casc.steps) {
          const double tapped = line * (1.0 - step.pass_transmittance);
          const double expect = step.output == kEnvironment
                                    ? c3.environment_transmittance()
                                    : c3.transmittance(step.output);
          CHECK(std::abs(tapped - expect) < 1e-12);
          line *= step.pass_transmittance;
        }
      } while (std::next_permutation(order.begin(), order.end()));
    }
  }
  SECTION("bad orderings are rejected") {
    CHECK_THROWS_AS(cascade_from_ordering(ch, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(cascade_from_ordering(ch, {0, 0, kEnvironment}),
                    std::invalid_argument);
    CHECK_THROWS_AS(cascade_from_ordering(ch, {0, 1, 2}), std::invalid_argument);
  }
  SECTION("a cascade built for another channel is rejected") {
    const BroadcastChannel other({0.1, 0.2, 0.3});
    const auto casc = cascade_from_ordering(other, default_ordering(other));
    CHECK_THROWS_AS(channel_apply(ch, casc, tmsv_covariance(TmsvParams(1.0))),
                    std::invalid_argument);
  }
}

TEST_CASE("sending a TMSV arm through the channel") {
  const BroadcastChannel ch({0.2, 0.3});
  const auto input = tmsv_covariance(TmsvParams(1.0));
  const auto out = channel_apply(ch, input);
  REQUIRE(out.n_modes() == 4);  // A, B1, B2, E
  SECTION("receiver marginals are thermal with scaled mean photons") {
    const auto b1 = partial_trace(out, {1});
    CHECK(b1.matrix()(0, 0) == Approx(1.4).margin(1e-12));  // 2 * 0.2 * 1 + 1
    const auto b2 = partial_trace(out, {2});
    CHECK(b2.matrix()(0, 0) == Approx(1.6).margin(1e-12));
    const auto env = partial_trace(out, {3});
    CHECK(env.matrix()(0, 0) == Approx(2.0).margin(1e-12));
  }
  SECTION("the joint output is pure") {
    CHECK(von_neumann_entropy(out) == Approx(0.0).margin(1e-9));
  }
  SECTION("zero transmittances leave the arm in the environment") {
    const BroadcastChannel none({0.0, 0.0});
    const auto quiet = channel_apply(none, input);
    const auto ae = partial_trace(quiet, {0, 3});
    CHECK(qbc_test::max_abs_diff(ae.matrix(), input.matrix()) < 1e-12);
    const auto b = partial_trace(quiet, {1, 2});
    CHECK(qbc_test::max_abs_diff(b.matrix(), Eigen::MatrixXd::Identity(4, 4)) < 1e-12);
  }
}

TEST_CASE("cascade ordering does not change the output state") {
  std::mt19937_64 rng(5150);
  const auto input = tmsv_covariance(TmsvParams(0.8));
  for (int trial = 0; trial < 5; ++trial) {
    const auto ch = qbc_test::random_channel(3, rng, 0.3, 0.95);
    const auto reference = channel_apply(ch, input);
    std::vector<int> order = {kEnvironment, 0, 1, 2};
    std::sort(order.begin(), order.end());
    do {
      const auto casc = cascade_from_ordering(ch, order);
      const auto out = channel_apply(ch, casc, input);
      CHECK(qbc_test::max_abs_diff(out.matrix(), reference.matrix()) < 1e-10);
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

TEST_CASE("power conservation after pruning") {
  std::mt19937_64 rng(31337);
  const auto net = random_network(5, {1, 3}, 0, rng);
  const auto [ch, casc] = prune_to_cascade(net);
  CHECK(ch.total_transmittance() + ch.environment_transmittance() ==
        Approx(1.0).margin(1e-12));
  double line = 1.0;
  for (const auto& step : casc.steps) line *= step.pass_transmittance;
  CHECK(line == Approx(ch.environment_transmittance()).margin(1e-12));
}

TEST_CASE("pruning a network to its equivalent cascade") {
  SECTION("identity network passes everything to the receiver on the input line") {
    const LinearOpticalNetwork net(Eigen::MatrixXcd::Identity(3, 3), 1, {1});
    const auto [ch, casc] = prune_to_cascade(net);
    CHECK(ch.transmittance(0) == Approx(1.0));
    REQUIRE(casc.steps.size() == 1);
    CHECK(casc.steps[0].pass_transmittance == Approx(0.0).margin(1e-15));
  }
  SECTION("single splitter network") {
    Eigen::MatrixXcd u(2, 2);
    const double c = std::sqrt(0.7), s = std::sqrt(0.3);
    u << c, -s, s, c;
    const LinearOpticalNetwork net(u, 0, {1});
    const auto [ch, casc] = prune_to_cascade(net);
    CHECK(ch.transmittance(0) == Approx(0.3).margin(1e-12));
    REQUIRE(casc.steps.size() == 1);
  }
  SECTION("random networks: powers match the unitary column") {
    std::mt19937_64 rng(8080);
    const auto net = random_network(4, {0, 2}, 1, rng);
    const auto [ch, casc] = prune_to_cascade(net);
    for (int i = 0; i < 2; ++i) {
      const double expect =
          std::norm(net.unitary()(net.receiver_modes()[i], net.input_mode()));
      CHECK(ch.transmittance(i) == Approx(expect).margin(1e-12));
    }
  }
  SECTION("cascade output covariances match the full network simulation") {
    std::mt19937_64 rng(4242);
    const auto input = tmsv_covariance(TmsvParams(1.3));
    for (int l : {3, 4, 5, 6}) {
      std::vector<int> receivers = {0, l - 1};
      const auto net = random_network(l, receivers, 1, rng);
      const auto [ch, casc] = prune_to_cascade(net);

      const auto full = network_apply(net, input);
      std::vector<int> keep_full = {0};  // sender's retained arm
      for (int r : receivers) keep_full.push_back(1 + r);
      const auto reference = partial_trace(full, keep_full);

      const auto reduced = channel_apply(ch, casc, input);
      const auto probe = partial_trace(reduced, {0, 1, 2});
      CHECK(qbc_test::max_abs_diff(probe.matrix(), reference.matrix()) < 1e-10);
    }
  }
}

TEST_CASE("network_apply consumes the last input mode") {
  const LinearOpticalNetwork net(Eigen::MatrixXcd::Identity(2, 2), 0, {0});
  const auto input = tmsv_covariance(TmsvParams(0.5));
  const auto out = network_apply(net, input);
  REQUIRE(out.n_modes() == 3);  // A, ports 0..1
  const auto kept = partial_trace(out, {0, 1});
  CHECK(qbc_test::max_abs_diff(kept.matrix(), input.matrix()) < 1e-12);
}
