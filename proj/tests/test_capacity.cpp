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

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "qbc/capacity.hpp"
#include "test_util.hpp"

using namespace qbc;

TEST_CASE("subset constraint bounds") {
  const BroadcastChannel ch({0.2, 0.3});
  CHECK(capacity_bound(ch, 0b01) == Approx(0.48542682717024166).margin(1e-12));
  CHECK(capacity_bound(ch, 0b10) == Approx(0.6780719051126377).margin(1e-12));
  CHECK(capacity_bound(ch, 0b11) == Approx(1.0).margin(1e-12));
  SECTION("a channel that transmits nothing supports no rate") {
    CHECK(capacity_bound(BroadcastChannel({0.0, 0.0}), 0b01) ==
          Approx(0.0).margin(1e-15));
  }
  SECTION("a lossless channel is unbounded") {
    CHECK(std::isinf(capacity_bound(BroadcastChannel({0.4, 0.6}), 0b01)));
  }
  CHECK_THROWS_AS(capacity_bound(ch, 0), std::invalid_argument);
  CHECK_THROWS_AS(capacity_bound(ch, 0b100), std::invalid_argument);
}

TEST_CASE("full rate region") {
  SECTION("single receiver") {
    const auto region = capacity_region(BroadcastChannel({0.5}));
    CHECK(region.bound(0b1) == Approx(1.0).margin(1e-12));
  }
  SECTION("two receivers") {
    const auto region = capacity_region(BroadcastChannel({0.2, 0.3}));
    CHECK(region.bound(0b01) == Approx(0.48542682717024166).margin(1e-12));
    CHECK(region.bound(0b10) == Approx(0.6780719051126377).margin(1e-12));
    CHECK(region.bound(0b11) == Approx(1.0).margin(1e-12));
  }
  SECTION("dead channel gives the zero region") {
    const auto region = capacity_region(BroadcastChannel({0.0, 0.0}));
    for (std::uint32_t mask = 1; mask <= 3; ++mask)
      CHECK(region.bound(mask) == Approx(0.0).margin(1e-15));
  }
  SECTION("receiver count cap") {
    CHECK_THROWS_AS(capacity_region(BroadcastChannel(std::vector<double>(21, 0.01))),
                    std::invalid_argument);
  }
}

TEST_CASE("region membership") {
  const auto region = capacity_region(BroadcastChannel({0.2, 0.3}));
  CHECK(region.contains({0.3, 0.5}));
  CHECK_FALSE(region.contains({0.6, 0.5}));   // violates the first single constraint
  CHECK_FALSE(region.contains({0.4, 0.65}));  // violates the sum constraint
  CHECK(region.contains({0.0, 0.0}));
  CHECK_THROWS_AS(region.contains({0.1}), std::invalid_argument);
}

TEST_CASE("finite-energy achievable rates") {
  const BroadcastChannel ch({0.2, 0.3});
  SECTION("vacuum input achieves nothing") {
    for (std::uint32_t mask = 1; mask <= 3; ++mask)
      CHECK(achievable_rate(ch, mask, 0.0) == Approx(0.0).margin(1e-15));
  }
  SECTION("one mean photon on the full set") {
    CHECK(achievable_rate(ch, 0b11, 1.0) ==
          Approx(0.6225562489182657).margin(1e-12));
  }
  SECTION("approaches the capacity bound from below") {
    for (std::uint32_t mask = 1; mask <= 3; ++mask) {
      const double cap = capacity_bound(ch, mask);
      double prev = -1.0;
      for (double n : {1.0, 10.0, 100.0, 1e4}) {
        const double rate = achievable_rate(ch, mask, n);
        CHECK(rate < cap);
        CHECK(rate > prev);
        prev = rate;
      }
      CHECK(cap - achievable_rate(ch, mask, 1e4) < 1e-3);
    }
  }
  SECTION("rate gap decays like 1/N") {
    std::mt19937_64 rng(404);
    for (int m : {1, 2, 3}) {
      const auto rch = qbc_test::random_channel(m, rng);
      const std::uint32_t full = (1u << m) - 1;
      const double c_fit =
          (capacity_bound(rch, full) - achievable_rate(rch, full, 50.0)) * 50.0 * 1.05;
      for (double n : {1e2, 1e3, 1e4})
        CHECK(capacity_bound(rch, full) - achievable_rate(rch, full, n) <= c_fit / n);
    }
  }
}

TEST_CASE("closed form agrees with the covariance pipeline") {
  const BroadcastChannel ch({0.2, 0.3});
  for (std::uint32_t mask = 1; mask <= 3; ++mask)
    CHECK(achievable_rate_via_entropy(ch, mask, 1.0) ==
          Approx(achievable_rate(ch, mask, 1.0)).margin(1e-8));
  SECTION("vacuum input") {
    CHECK(achievable_rate_via_entropy(ch, 0b11, 0.0) == Approx(0.0).margin(1e-9));
  }
  SECTION("global purity identity") {
    // H(A, Tbar) = H(T, E) for the pure joint output
    const auto out = channel_apply(ch, tmsv_covariance(TmsvParams(1.0)));
    const double h_a_complement = von_neumann_entropy(partial_trace(out, {0, 2}));
    const double h_subset_env = von_neumann_entropy(partial_trace(out, {1, 3}));
    CHECK(h_a_complement == Approx(h_subset_env).margin(1e-8));
  }
  SECTION("random channels and subsets") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> photons(0.05, 8.0);
    for (int trial = 0; trial < 12; ++trial) {
      const int m = 1 + static_cast<int>(trial % 4);
      const auto rch = qbc_test::random_channel(m, rng);
      std::uniform_int_distribution<std::uint32_t> masks(1, (1u << m) - 1);
      const std::uint32_t mask = masks(rng);
      const double n = photons(rng);
      CHECK(achievable_rate_via_entropy(rch, mask, n) ==
            Approx(achievable_rate(rch, mask, n)).margin(1e-8));
    }
  }
}

TEST_CASE("one-shot converse correction") {
  CHECK(converse_offset(1.0 / 3.0) == Approx(4.584962500721156).margin(1e-12));
  const BroadcastChannel ch({0.2, 0.3});
  SECTION("finite block length") {
    const double direct = std::log2(6.0) + 2.0 * std::log2(1.01 / 0.99);
    CHECK(converse_bound(ch, 0b11, ConverseParams(0.01, 1000)) ==
          Approx(1.0 + direct / 1000.0).margin(1e-12));
    CHECK(converse_bound(ch, 0b11, ConverseParams(0.01, 1000)) ==
          Approx(1.0026427).margin(1e-7));
  }
  SECTION("vanishes with the block length") {
    CHECK(converse_bound(ch, 0b11, ConverseParams(0.05, 100000000)) ==
          Approx(capacity_bound(ch, 0b11)).margin(1e-7));
  }
  SECTION("sits above every achievable rate") {
    std::mt19937_64 rng(4711);
    for (int trial = 0; trial < 10; ++trial) {
      const auto rch = qbc_test::random_channel(2, rng);
      for (double eps : {0.01, 0.3, 0.9})
        for (long long n : {1LL, 1000LL})
          for (double photons : {0.1, 1.0, 100.0})
            CHECK(converse_bound(rch, 0b11, ConverseParams(eps, n)) >
                  achievable_rate(rch, 0b11, photons));
    }
  }
  CHECK_THROWS_AS(ConverseParams(0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(ConverseParams(1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(ConverseParams(0.5, 0), std::invalid_argument);
}

TEST_CASE("time-sharing baseline") {
  const BroadcastChannel ch({0.2, 0.3});
  const auto ts = time_sharing_region(ch);
  SECTION("axis vertices") {
    const auto v = ts.vertices();
    REQUIRE(v.size() == 2);
    CHECK(v[0][0] == Approx(0.32192809488736235).margin(1e-12));
    CHECK(v[0][1] == 0.0);
    CHECK(v[1][0] == 0.0);
    CHECK(v[1][1] == Approx(0.5145731728297583).margin(1e-12));
  }
  SECTION("single receiver time sharing is already optimal") {
    const BroadcastChannel one({0.5});
    CHECK(time_sharing_region(one).intercepts()[0] ==
          Approx(capacity_bound(one, 0b1)).margin(1e-12));
  }
  SECTION("membership") {
    CHECK(ts.contains({0.16, 0.25}));
    CHECK_FALSE(ts.contains({0.32, 0.51}));
    CHECK(ts.contains({0.0, 0.0}));
  }
  SECTION("hull is contained in the capacity region") {
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
      const int m = 2 + trial % 3;
      const auto rch = qbc_test::random_channel(m, rng);
      const auto hull = time_sharing_region(rch);
      const auto region = capacity_region(rch);
      for (int sample = 0; sample < 40; ++sample) {
        // random convex combination of the hull vertices and the origin
        std::vector<double> weights(m + 1);
        double tot = 0.0;
        for (double& w : weights) tot += (w = uni(rng));
        std::vector<double> p(m, 0.0);
        for (int i = 0; i < m; ++i)
          p[i] = weights[i] / tot * hull.intercepts()[i];
        CHECK(region.contains(p, 1e-9));
      }
    }
  }
  SECTION("strictly inside the region for two or more active receivers") {
    std::mt19937_64 rng(616);
    for (int trial = 0; trial < 8; ++trial) {
      const int m = 2 + trial % 3;
      const auto rch = qbc_test::random_channel(m, rng);
      const auto hull = time_sharing_region(rch);
      double best = 0.0;
      for (double c : hull.intercepts()) best = std::max(best, c);
      const double optimal =
          -std::log2(1.0 - rch.total_transmittance());
      CHECK(best < optimal - 1e-9);
    }
  }
}

TEST_CASE("symmetric channel rate sums") {
  SECTION("reference point") {
    const auto [optimal, shared] = symmetric_rate_sums(0.1, 4);
    CHECK(optimal == Approx(0.15200309344504995).margin(1e-12));
    CHECK(shared == Approx(0.03652587602511404).margin(1e-12));
  }
  SECTION("single receiver has no gap") {
    const auto [optimal, shared] = symmetric_rate_sums(0.1, 1);
    CHECK(optimal == Approx(shared).margin(1e-15));
  }
  SECTION("dead channel") {
    const auto [optimal, shared] = symmetric_rate_sums(0.0, 5);
    CHECK(optimal == 0.0);
    CHECK(shared == 0.0);
  }
  CHECK_THROWS_AS(symmetric_rate_sums(1.5, 2), std::invalid_argument);
}

TEST_CASE("symmetric subset constraints decrease with subset size") {
  SECTION("largest subset reproduces the optimal sum") {
    for (double eta : {0.1, 0.5, 0.9})
      for (int m : {1, 3, 8})
        CHECK(symmetric_constraint(eta, m, m) ==
              Approx(-std::log2(1.0 - eta)).margin(1e-12));
  }
  SECTION("reference value at l = 1") {
    CHECK(symmetric_constraint(0.1, 4, 1) ==
          Approx(0.15811345674655036).margin(1e-12));
  }
  SECTION("monotone over the full grid") {
    for (double eta = 0.05; eta < 0.96; eta += 0.05)
      for (int m = 1; m <= 16; ++m)
        for (int l = 2; l <= m; ++l)
          CHECK(symmetric_constraint(eta, m, l) <=
                symmetric_constraint(eta, m, l - 1) + 1e-12);
  }
  CHECK_THROWS_AS(symmetric_constraint(0.1, 4, 0), std::invalid_argument);
  CHECK_THROWS_AS(symmetric_constraint(0.1, 4, 5), std::invalid_argument);
}

TEST_CASE("two-receiver boundary polyline") {
  SECTION("corner points") {
    const auto pts = region_boundary_1to2(BroadcastChannel({0.2, 0.3}));
    REQUIRE(pts.size() == 4);  // axis endpoints plus the two interior corners
    CHECK(pts[1].rate_b == Approx(0.32192809488736235).margin(1e-12));
    CHECK(pts[1].rate_c == Approx(0.6780719051126377).margin(1e-12));
    CHECK(pts[2].rate_b == Approx(0.48542682717024166).margin(1e-12));
    CHECK(pts[2].rate_c == Approx(0.5145731728297583).margin(1e-12));
  }
  SECTION("every boundary point is a member") {
    const BroadcastChannel ch({0.2, 0.3});
    const auto region = capacity_region(ch);
    for (const auto& p : region_boundary_1to2(ch, 16))
      CHECK(region.contains({p.rate_b, p.rate_c}, 1e-9));
  }
  SECTION("symmetric channel has a symmetric boundary") {
    const auto pts = region_boundary_1to2(BroadcastChannel({0.25, 0.25}));
    const auto n = pts.size();
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(pts[k].rate_b == Approx(pts[n - 1 - k].rate_c).margin(1e-12));
      CHECK(pts[k].rate_c == Approx(pts[n - 1 - k].rate_b).margin(1e-12));
    }
  }
  SECTION("one dead receiver degenerates to an axis segment") {
    const auto pts = region_boundary_1to2(BroadcastChannel({0.5, 0.0}));
    for (const auto& p : pts) CHECK(p.rate_c == Approx(0.0).margin(1e-12));
    CHECK(pts.back().rate_b == Approx(1.0).margin(1e-12));
  }
  SECTION("finite-energy boundary nests inside the capacity boundary") {
    const BroadcastChannel ch({0.2, 0.3});
    const auto region = capacity_region(ch);
    for (double n : {0.5, 2.0, 50.0})
      for (const auto& p : achievable_boundary_1to2(ch, n, 8))
        CHECK(region.contains({p.rate_b, p.rate_c}, 1e-9));
  }
  CHECK_THROWS_AS(region_boundary_1to2(BroadcastChannel({0.1, 0.2, 0.3})),
                  std::invalid_argument);
}

TEST_CASE("growing a receiver's transmittance never shrinks its bounds") {
  std::mt19937_64 rng(999);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 2 + trial % 3;
    const auto ch = qbc_test::random_channel(m, rng, 0.2, 0.8);
    for (int i = 0; i < m; ++i) {
      auto grown = ch.transmittances();
      grown[i] += 0.1;
      const BroadcastChannel bigger(grown);
      for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
        if (!(mask >> i & 1)) continue;
        CHECK(capacity_bound(bigger, mask) >= capacity_bound(ch, mask) - 1e-12);
      }
    }
  }
}
