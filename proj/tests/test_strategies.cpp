#include "test_util.hpp"

using namespace boxsearch;
using bst::rq;

namespace {

// Largest payoff any pure allocation extracts from the policy.
Rat worst_case(const SearcherPolicy<Rat>& pol, const std::vector<Rat>& costs, int k,
               GameVariant variant) {
  Rat worst;
  bool first = true;
  for (const auto& x :
       enumerate_allocations(static_cast<int>(costs.size()), k, variant.look)) {
    Rat v = evaluate(pol, x, costs, variant).expected_payoff;
    if (first || v > worst) worst = v;
    first = false;
  }
  REQUIRE(!first);
  return worst;
}

}  // namespace

TEST_CASE("equalizing hiders put mass proportional to the cost monomial") {
  std::mt19937_64 rng(401);
  for (int rep = 0; rep < 12; ++rep) {
    const int n = 1 + rep % 4, k = 1 + rep % 3;
    auto costs = bst::random_costs(n, rng);
    auto hm = hider_equalizing_multi(costs, k);
    CHECK(hm.support.size() == enumerate_allocations(n, k, LookMode::multi).size());
    CHECK(hm.total_mass() == rq(1));
    const Rat denom = bst::brute_complete(costs, k);
    for (const auto& [x, p] : hm.support)
      CHECK(p == allocation_monomial(costs, x) / denom);

    if (k <= n) {
      auto hs = hider_equalizing_single(costs, k);
      CHECK(hs.support.size() == enumerate_allocations(n, k, LookMode::single).size());
      CHECK(hs.total_mass() == rq(1));
      const Rat sdenom = bst::brute_elementary(costs, k);
      for (const auto& [x, p] : hs.support)
        CHECK(p == allocation_monomial(costs, x) / sdenom);
    }
  }
}

TEST_CASE("restricted equalizing hider validates its support") {
  std::vector<Rat> costs{rq(2), rq(1)};
  using A = std::vector<Allocation>;
  CHECK_THROWS_AS(hider_restricted_equalizing(costs, 2, A{}), invalid_instance_error);
  CHECK_THROWS_AS(hider_restricted_equalizing(costs, 2, A{{1, 0}}), invalid_instance_error);
  CHECK_THROWS_AS(hider_restricted_equalizing(costs, 2, A{{3, -1}}), invalid_instance_error);
  auto hm = hider_restricted_equalizing(costs, 2, A{{2, 0}, {0, 2}, {2, 0}});
  CHECK(hm.support.size() == 2);  // duplicates collapse
  CHECK(hm.total_mass() == rq(1));
}

TEST_CASE("point mass hider") {
  auto hm = hider_point_mass<Rat>({1, 2, 0});
  REQUIRE(hm.support.size() == 1);
  CHECK(hm.support[0].first == Allocation{1, 2, 0});
  CHECK(hm.support[0].second == rq(1));
}

TEST_CASE("set-aside hider for two boxes") {
  SUBCASE("steep costs reserve every extra ball for the dear box") {
    auto hm = hider_set_aside_n2(rq(10), rq(1), 2);  // b = 1
    REQUIRE(hm.support.size() == 2);
    CHECK(hm.support[0].first == Allocation{1, 1});
    CHECK(hm.support[0].second == rq(1, 11));
    CHECK(hm.support[1].first == Allocation{2, 0});
    CHECK(hm.support[1].second == rq(10, 11));
  }
  SUBCASE("equal costs equalize fully") {
    auto a = hider_set_aside_n2(rq(3), rq(3), 3);
    auto b = hider_equalizing_multi(std::vector<Rat>{rq(3), rq(3)}, 3);
    CHECK(a.support == b.support);
  }
  SUBCASE("requires decreasing costs") {
    CHECK_THROWS_AS(hider_set_aside_n2(rq(1), rq(2), 2), invalid_order_error);
  }
}

TEST_CASE("prefill hider for the single-look regret game") {
  SUBCASE("cheap box gets a sure ball") {
    auto hm = hider_prefill_single(std::vector<Rat>{rq(100), rq(100), rq(1)});  // b = 2
    REQUIRE(hm.support.size() == 2);
    CHECK(hm.support[0].first == Allocation{0, 1, 1});
    CHECK(hm.support[0].second == rq(1, 2));
    CHECK(hm.support[1].first == Allocation{1, 0, 1});
    CHECK(hm.support[1].second == rq(1, 2));
  }
  SUBCASE("equal costs leave every box uncertain") {
    auto hm = hider_prefill_single(std::vector<Rat>{rq(2), rq(2), rq(2)});  // b = 3
    CHECK(hm.support.size() == 3);
    for (const auto& [x, p] : hm.support) CHECK(p == rq(1, 3));
  }
}

TEST_CASE("equal-cost searcher guarantees the game value") {
  for (int n = 1; n <= 4; ++n) {
    for (int k = 1; k <= 3; ++k) {
      std::vector<Rat> costs(n, rq(1));
      auto pol = searcher_equal_cost<Rat>(n, k);
      CHECK(worst_case(pol, costs, k, kMultiCost) == value_equal_cost<Rat>(n, k));
    }
  }
}

TEST_CASE("two-box threshold searcher guarantees the cutoff value") {
  std::mt19937_64 rng(402);
  for (int rep = 0; rep < 10; ++rep) {
    auto costs = bst::random_costs(2, rng);
    if (costs[1] > costs[0]) std::swap(costs[0], costs[1]);
    const int k = 1 + rep % 3;
    auto pol = searcher_n2_cost(costs[0], costs[1], k);
    CHECK(worst_case(pol, costs, k, kMultiCost) ==
          cutoff_b_multi_n2(costs[0], costs[1], k).value);
  }
}

TEST_CASE("recursive regret searcher guarantees V") {
  std::mt19937_64 rng(403);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 1 + rep % 4, k = 1 + rep % 3;
    auto costs = bst::random_costs(n, rng);
    auto pol = searcher_multi_regret(costs, k);
    CHECK(worst_case(pol, costs, k, kMultiRegret) == value_multi_regret(costs, k));
  }
}

TEST_CASE("single-look prefill searcher guarantees the cutoff value") {
  std::mt19937_64 rng(404);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 2 + rep % 4;
    auto costs = bst::random_costs(n, rng);
    std::sort(costs.begin(), costs.end(), std::greater<>());
    auto pol = searcher_single_regret_full(costs);
    CHECK(worst_case(pol, costs, n - 1, kSingleRegret) == cutoff_b_single(costs).value);
  }
}

TEST_CASE("normal strategies for one ball guarantee V") {
  std::mt19937_64 rng(405);
  for (int rep = 0; rep < 8; ++rep) {
    const int n = 2 + rep % 4;
    auto costs = bst::random_costs(n, rng);
    auto ns = searcher_normal_k1(costs);
    Rat mass(0);
    for (const auto& [seq, w] : ns.mixture) {
      CHECK(static_cast<int>(seq.size()) == n);
      mass += w;
    }
    CHECK(mass == rq(1));
    Rat worst(0);
    for (const auto& x : enumerate_allocations(n, 1, LookMode::multi))
      worst = std::max(worst, normal_expected_regret(ns, x, costs));
    CHECK(worst == value_multi_regret(costs, 1));
  }
}

TEST_CASE("normal strategies for two balls guarantee V") {
  std::mt19937_64 rng(406);
  for (int n = 2; n <= 5; ++n) {
    auto costs = bst::random_costs(n, rng);
    auto pol = searcher_normal_k2(costs);
    CHECK(worst_case(pol, costs, 2, kMultiRegret) == value_multi_regret(costs, 2));
  }
}

TEST_CASE("two-ball patterns are proper mixtures of valid sequences") {
  std::mt19937_64 rng(407);
  const int n = 4;
  auto costs = bst::random_costs(n, rng);
  for (const auto& y : enumerate_allocations(n, 2, LookMode::multi)) {
    auto ns = normal_k2_pattern(costs, y);
    Rat mass(0);
    for (const auto& [seq, w] : ns.mixture) {
      CHECK_NOTHROW(validate_sequence(seq, n, 2, LookMode::multi));
      CHECK(w > rq(0));
      mass += w;
    }
    CHECK(mass == rq(1));
    // The defining property: sequences end in a way that finishes on y, so
    // an overlapping allocation x (x_i + y_i > 2) pays the other boxes.
    for (const auto& x : enumerate_allocations(n, 2, LookMode::multi)) {
      int witness = -1;
      for (int i = 0; i < n; ++i)
        if (x[i] + y[i] > 2) witness = i;
      if (witness < 0) continue;
      Rat expect(0);
      for (int j = 0; j < n; ++j)
        if (j != witness) expect += costs[j];
      CHECK(normal_expected_regret(ns, x, costs) == expect);
    }
  }
}

TEST_CASE("uniform adaptive policy is admissible everywhere") {
  std::mt19937_64 rng(408);
  for (int n = 1; n <= 4; ++n) {
    auto costs = bst::random_costs(n, rng);
    auto pol = searcher_uniform_adaptive<Rat>(n);
    for (int k = 1; k <= 3; ++k)
      for (const auto& x : enumerate_allocations(n, k, LookMode::multi))
        CHECK_NOTHROW(evaluate(pol, x, costs, kMultiCost));
  }
}

TEST_CASE("relabeling transports payoffs across box orders") {
  std::mt19937_64 rng(409);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 2 + rep % 3, k = 1 + rep % 3;
    auto costs = bst::random_costs(n, rng);
    auto order = decreasing_order(costs);
    auto sorted = permute_costs(costs, order);
    CHECK(std::is_sorted(sorted.begin(), sorted.end(), std::greater<>()));

    auto pol = searcher_multi_regret(sorted, k);
    auto relabeled = relabel_policy(pol, order);
    for (const auto& x : enumerate_allocations(n, k, LookMode::multi)) {
      Allocation x_sorted(n);
      for (int i = 0; i < n; ++i) x_sorted[i] = x[order[i]];
      CHECK(evaluate(relabeled, x, costs, kMultiRegret).expected_payoff ==
            evaluate(pol, x_sorted, sorted, kMultiRegret).expected_payoff);
    }

    auto hm = hider_equalizing_multi(sorted, k);
    auto back = relabel_hider(hm, order);
    CHECK(back.total_mass() == rq(1));
    for (const auto& [x, p] : back.support)
      CHECK(p == allocation_monomial(costs, x) / bst::brute_complete(costs, k));
  }
}

TEST_CASE("allocation monomial") {
  std::vector<Rat> costs{rq(10), rq(1), rq(1, 2)};
  CHECK(allocation_monomial(costs, {2, 0, 1}) == rq(50));
  CHECK(allocation_monomial(costs, {0, 0, 0}) == rq(1));
}
