#include "test_util.hpp"

using namespace boxsearch;
using bst::rq;

namespace {

// Certifies a solution by weak duality: the row mix must secure >= value
// against every column and the column mix must cap the payoff at <= value
// against every row.  Exact arithmetic makes these checks decisive.
void certify(const std::vector<std::vector<Rat>>& a, const MatrixGameSolution<Rat>& sol) {
  const std::size_t rows = a.size(), cols = a[0].size();
  Rat rmass(0), cmass(0);
  for (const Rat& p : sol.row_strategy) {
    CHECK(p >= rq(0));
    rmass += p;
  }
  for (const Rat& q : sol.col_strategy) {
    CHECK(q >= rq(0));
    cmass += q;
  }
  CHECK(rmass == rq(1));
  CHECK(cmass == rq(1));
  for (std::size_t j = 0; j < cols; ++j) {
    Rat payoff(0);
    for (std::size_t i = 0; i < rows; ++i) payoff += sol.row_strategy[i] * a[i][j];
    CHECK(payoff >= sol.value);
  }
  for (std::size_t i = 0; i < rows; ++i) {
    Rat payoff(0);
    for (std::size_t j = 0; j < cols; ++j) payoff += sol.col_strategy[j] * a[i][j];
    CHECK(payoff <= sol.value);
  }
}

}  // namespace

TEST_CASE("matching pennies") {
  std::vector<std::vector<Rat>> a{{rq(1), rq(-1)}, {rq(-1), rq(1)}};
  auto sol = solve_matrix_game(a);
  CHECK(sol.value == rq(0));
  CHECK(sol.row_strategy == std::vector<Rat>{rq(1, 2), rq(1, 2)});
  CHECK(sol.col_strategy == std::vector<Rat>{rq(1, 2), rq(1, 2)});
  certify(a, sol);
}

TEST_CASE("rock paper scissors") {
  std::vector<std::vector<Rat>> a{{rq(0), rq(-1), rq(1)},
                                  {rq(1), rq(0), rq(-1)},
                                  {rq(-1), rq(1), rq(0)}};
  auto sol = solve_matrix_game(a);
  CHECK(sol.value == rq(0));
  for (const Rat& p : sol.row_strategy) CHECK(p == rq(1, 3));
  certify(a, sol);
}

TEST_CASE("dominated rows and saddle points") {
  SUBCASE("strictly dominant row") {
    std::vector<std::vector<Rat>> a{{rq(3), rq(3)}, {rq(1), rq(1)}};
    auto sol = solve_matrix_game(a);
    CHECK(sol.value == rq(3));
    CHECK(sol.row_strategy[0] == rq(1));
    certify(a, sol);
  }
  SUBCASE("pure saddle point") {
    std::vector<std::vector<Rat>> a{{rq(4), rq(2)}, {rq(1), rq(3)}};
    // Row 1 guarantees 2; column 2 caps at... mixed: value between.
    auto sol = solve_matrix_game(a);
    certify(a, sol);
    CHECK(sol.value == rq(5, 2));  // classic 2x2 mixed value
  }
  SUBCASE("single entry") {
    std::vector<std::vector<Rat>> a{{rq(-7, 3)}};
    auto sol = solve_matrix_game(a);
    CHECK(sol.value == rq(-7, 3));
    certify(a, sol);
  }
}

TEST_CASE("rectangular game") {
  std::vector<std::vector<Rat>> a{{rq(1), rq(0), rq(2)}, {rq(0), rq(2), rq(1)}};
  auto sol = solve_matrix_game(a);
  CHECK(sol.value == rq(2, 3));
  certify(a, sol);
}

TEST_CASE("random exact games certify by duality") {
  std::mt19937_64 rng(501);
  std::uniform_int_distribution<int> size(1, 5), num(-12, 12), den(1, 4);
  for (int rep = 0; rep < 30; ++rep) {
    const int m = size(rng), n = size(rng);
    std::vector<std::vector<Rat>> a(m, std::vector<Rat>(n));
    for (auto& row : a)
      for (auto& e : row) e = Rat(num(rng), den(rng));
    certify(a, solve_matrix_game(a));
  }
}

TEST_CASE("value shifts with the payoffs") {
  std::mt19937_64 rng(502);
  std::uniform_int_distribution<int> num(-9, 9);
  std::vector<std::vector<Rat>> a(3, std::vector<Rat>(3));
  for (auto& row : a)
    for (auto& e : row) e = Rat(num(rng));
  auto base = solve_matrix_game(a);
  auto shifted = a;
  for (auto& row : shifted)
    for (auto& e : row) e += rq(17, 5);
  CHECK(solve_matrix_game(shifted).value == base.value + rq(17, 5));
}

TEST_CASE("double arithmetic stays within tolerance") {
  std::vector<std::vector<double>> a{{0.0, -1.0, 1.0}, {1.0, 0.0, -1.0}, {-1.0, 1.0, 0.0}};
  auto sol = solve_matrix_game(a);
  CHECK(std::abs(sol.value) < 1e-9);
}

TEST_CASE("malformed matrices are rejected") {
  CHECK_THROWS_AS(solve_matrix_game(std::vector<std::vector<Rat>>{}), invalid_instance_error);
  CHECK_THROWS_AS(solve_matrix_game(std::vector<std::vector<Rat>>{{}}), invalid_instance_error);
  std::vector<std::vector<Rat>> ragged{{rq(1), rq(2)}, {rq(3)}};
  CHECK_THROWS_AS(solve_matrix_game(ragged), invalid_instance_error);
}
