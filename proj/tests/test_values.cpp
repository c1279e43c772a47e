#include "test_util.hpp"

using namespace boxsearch;
using bst::rq;

TEST_CASE("equalizing expected cost U") {
  SUBCASE("hand values for costs (10,1)") {
    std::vector<Rat> costs{rq(10), rq(1)};
    CHECK(value_multi_cost_equalizing(costs, 1) == rq(111, 11));
    CHECK(value_multi_cost_equalizing(costs, 2) == rq(2222, 111));
  }
  SUBCASE("direct symmetric-function form on random costs") {
    std::mt19937_64 rng(201);
    for (int rep = 0; rep < 10; ++rep) {
      const int n = 1 + rep % 4, k = 1 + rep % 3;
      auto costs = bst::random_costs(n, rng);
      CHECK(value_multi_cost_equalizing(costs, k) ==
            Rat(k) * bst::brute_complete(costs, k + 1) / bst::brute_complete(costs, k));
    }
  }
  SUBCASE("equal costs reduce to (n+k)(1 - 1/(k+1)) per unit cost") {
    for (int n = 1; n <= 5; ++n) {
      for (int k = 1; k <= 4; ++k) {
        std::vector<Rat> costs(n, rq(7, 3));
        CHECK(value_multi_cost_equalizing(costs, k) ==
              rq(7, 3) * value_equal_cost<Rat>(n, k));
        CHECK(value_equal_cost<Rat>(n, k) == Rat(n + k) * (Rat(1) - Rat(1, k + 1)));
      }
    }
  }
  SUBCASE("zero balls cost nothing") {
    CHECK(value_multi_cost_equalizing(std::vector<Rat>{rq(3)}, 0) == rq(0));
  }
}

TEST_CASE("multi-look regret value V") {
  SUBCASE("unit costs") {
    std::vector<Rat> costs{rq(1), rq(1), rq(1)};
    CHECK(value_multi_regret(costs, 2) == rq(4, 3));  // 3 - 10/6
  }
  SUBCASE("V = T_1 - T_{k+1}/T_k on random costs") {
    std::mt19937_64 rng(202);
    for (int rep = 0; rep < 10; ++rep) {
      const int n = 1 + rep % 4, k = 1 + rep % 3;
      auto costs = bst::random_costs(n, rng);
      Rat t1(0);
      for (const Rat& c : costs) t1 += c;
      CHECK(value_multi_regret(costs, k) ==
            t1 - bst::brute_complete(costs, k + 1) / bst::brute_complete(costs, k));
    }
  }
  SUBCASE("one box never produces regret") {
    CHECK(value_multi_regret(std::vector<Rat>{rq(5)}, 3) == rq(0));
  }
}

TEST_CASE("single-look regret value W") {
  SUBCASE("hand values") {
    std::vector<Rat> costs{rq(100), rq(100), rq(1)};
    CHECK(value_single_regret(costs, 1) == rq(10200, 201));
    CHECK(value_single_regret(costs, 2) == rq(100, 51));
    CHECK(value_single_regret(std::vector<Rat>{rq(100), rq(100)}, 1) == rq(50));
  }
  SUBCASE("boundaries vanish") {
    std::vector<Rat> costs{rq(2), rq(3)};
    CHECK(value_single_regret(costs, 0) == rq(0));
    CHECK(value_single_regret(costs, 2) == rq(0));
    CHECK_THROWS_AS(value_single_regret(costs, 3), invalid_instance_error);
  }
  SUBCASE("W = k S_{k+1}/S_k on random costs") {
    std::mt19937_64 rng(203);
    for (int rep = 0; rep < 10; ++rep) {
      const int n = 2 + rep % 3;
      const int k = 1 + rep % (n - 1);
      auto costs = bst::random_costs(n, rng);
      CHECK(value_single_regret(costs, k) ==
            Rat(k) * bst::brute_elementary(costs, k + 1) / bst::brute_elementary(costs, k));
    }
  }
}

TEST_CASE("threshold polynomials f_m") {
  CHECK(fm_value(1, rq(2, 5)) == rq(2, 5));
  CHECK(fm_value(2, rq(1)) == rq(1));           // -1 + 1 + 1
  CHECK(fm_value(2, rq(1, 2)) == rq(-1, 4));    // -1 + 1/2 + 1/4
  CHECK(fm_value(3, rq(1, 2)) == rq(-9, 8));    // -2 + 1/2 + 1/4 + 1/8
  SUBCASE("roots are increasing and bracket sign changes") {
    double prev = 0.0;
    for (int m = 2; m <= 6; ++m) {
      const double r = root_fm(m);
      CHECK(r > prev);
      CHECK(r < 1.0);
      CHECK(std::abs(fm_value(m, r)) < 1e-9);
      prev = r;
    }
    // Golden-ratio root of f_2.
    CHECK(root_fm(2) == doctest::Approx(0.6180339887).epsilon(1e-9));
  }
}

TEST_CASE("two-box commit weights") {
  SUBCASE("weights sum to one") {
    std::mt19937_64 rng(204);
    for (int rep = 0; rep < 10; ++rep) {
      auto costs = bst::random_costs(2, rng);
      const int k = 1 + rep % 4;
      auto q = n2_commit_weights(costs[0], costs[1], k);
      REQUIRE(static_cast<int>(q.size()) == k + 1);
      Rat sum(0);
      for (const Rat& w : q) sum += w;
      CHECK(sum == rq(1));
    }
  }
  SUBCASE("equal costs give the uniform mixture") {
    auto q = n2_commit_weights(rq(1), rq(1), 3);
    for (const Rat& w : q) CHECK(w == rq(1, 4));
  }
}

TEST_CASE("two-box cutoff") {
  SUBCASE("costs (10,1): every extra ball is set aside") {
    for (int k = 1; k <= 4; ++k) {
      auto thr = cutoff_b_multi_n2(rq(10), rq(1), k);
      CHECK(thr.b == 1);
      CHECK(thr.value == Rat(k - 1) * rq(10) + rq(111, 11));
    }
    CHECK(cutoff_b_multi_n2(rq(10), rq(1), 2).value == rq(221, 11));
    CHECK(cutoff_b_multi_n2(rq(10), rq(1), 3).value == rq(331, 11));
  }
  SUBCASE("cost ratio above the golden ratio equalizes two balls") {
    auto thr = cutoff_b_multi_n2(rq(10), rq(7), 3);  // 0.618 < 0.7 < r_3
    CHECK(thr.b == 2);
    CHECK(thr.value == rq(10) + value_multi_cost_equalizing(std::vector<Rat>{rq(10), rq(7)}, 2));
  }
  SUBCASE("equal costs never set aside") {
    for (int k = 1; k <= 4; ++k) {
      auto thr = cutoff_b_multi_n2(rq(2), rq(2), k);
      CHECK(thr.b == k);
      CHECK(thr.value == value_multi_cost_equalizing(std::vector<Rat>{rq(2), rq(2)}, k));
    }
  }
  SUBCASE("rejects increasing costs") {
    CHECK_THROWS_AS(cutoff_b_multi_n2(rq(1), rq(2), 2), invalid_order_error);
  }
}

TEST_CASE("two-box matrix entries and restricted game value") {
  const Rat c1 = rq(10), c2 = rq(1);
  SUBCASE("hand entries") {
    CHECK(n2_cost_matrix_entry(1, 1, c1, c2, 2) == rq(11));        // no empty reveal
    CHECK(n2_cost_matrix_entry(0, 2, c1, c2, 2) == rq(12));        // box 1 found empty
    CHECK(n2_cost_matrix_entry(2, 0, c1, c2, 2) == rq(21));        // box 2 found empty
    CHECK_THROWS_AS(n2_cost_matrix_entry(3, 0, c1, c2, 2), invalid_instance_error);
  }
  SUBCASE("matrix game over commitments equals the threshold value") {
    std::mt19937_64 rng(205);
    for (int rep = 0; rep < 8; ++rep) {
      auto costs = bst::random_costs(2, rng);
      if (costs[1] > costs[0]) std::swap(costs[0], costs[1]);
      const int k = 1 + rep % 3;
      std::vector<std::vector<Rat>> m(k + 1, std::vector<Rat>(k + 1));
      for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k; ++j) m[i][j] = n2_cost_matrix_entry(i, j, costs[0], costs[1], k);
      CHECK(solve_matrix_game(m).value == cutoff_b_multi_n2(costs[0], costs[1], k).value);
    }
  }
}

TEST_CASE("single-look cutoff") {
  SUBCASE("two sharp boxes and one cheap box") {
    auto thr = cutoff_b_single(std::vector<Rat>{rq(100), rq(100), rq(1)});
    CHECK(thr.b == 2);
    CHECK(thr.value == rq(50));
  }
  SUBCASE("equal costs keep every box") {
    auto thr = cutoff_b_single(std::vector<Rat>{rq(3), rq(3), rq(3), rq(3)});
    CHECK(thr.b == 4);
    CHECK(thr.value == value_single_regret(std::vector<Rat>{rq(3), rq(3), rq(3), rq(3)}, 3));
  }
  SUBCASE("requires decreasing costs") {
    CHECK_THROWS_AS(cutoff_b_single(std::vector<Rat>{rq(1), rq(2)}), invalid_order_error);
  }
}

TEST_CASE("regret reduction matrix and column weights") {
  SUBCASE("hand matrix for costs (2,1), one ball") {
    auto m = regret_reduction_matrix(std::vector<Rat>{rq(2), rq(1)}, 1);
    REQUIRE(m.size() == 2);
    CHECK(m[0][0] == rq(0));
    CHECK(m[0][1] == rq(1));
    CHECK(m[1][0] == rq(2));
    CHECK(m[1][1] == rq(0));
    CHECK(solve_matrix_game(m).value == value_multi_regret(std::vector<Rat>{rq(2), rq(1)}, 1));
  }
  SUBCASE("weights equalize every hider row") {
    std::mt19937_64 rng(206);
    for (int rep = 0; rep < 10; ++rep) {
      const int n = 2 + rep % 3, k = 1 + rep % 3;
      auto costs = bst::random_costs(n, rng);
      auto w = regret_reduction_weights(costs, k);
      auto m = regret_reduction_matrix(costs, k);
      Rat sum(0);
      for (const Rat& p : w) {
        CHECK(p >= rq(0));
        sum += p;
      }
      CHECK(sum == rq(1));
      const Rat v = value_multi_regret(costs, k);
      for (int t = 0; t <= k; ++t) {
        Rat row(0);
        for (int s = 0; s <= k; ++s) row += w[s] * m[t][s];
        CHECK(row == v);
      }
    }
  }
}

TEST_CASE("single-look last-box weights") {
  SUBCASE("sum to one") {
    std::mt19937_64 rng(207);
    for (int rep = 0; rep < 10; ++rep) {
      auto costs = bst::random_costs(2 + rep % 4, rng);
      auto q = single_regret_last_box_weights(costs);
      Rat sum(0);
      for (const Rat& w : q) sum += w;
      CHECK(sum == rq(1));
    }
  }
  SUBCASE("equal costs give the uniform mixture") {
    auto q = single_regret_last_box_weights(std::vector<Rat>{rq(2), rq(2), rq(2)});
    for (const Rat& w : q) CHECK(w == rq(1, 3));
  }
}
