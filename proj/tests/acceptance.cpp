// Acceptance gate: one pass/fail line per criterion, final verdict line.
//
// 1. multi-look cost examples reproduce (values, supports, proportionality)
// 2. single-look regret examples reproduce (values, supports)
// 3. equalizing hiders make every admissible policy indifferent (exact)
// 4. solver agrees with the closed forms on random instances (exact)
// 5. worked micro-examples for the n=k=2 equal-cost game
// 6. structural-lemma property suites run with zero counterexamples
// 7. best response equals exhaustive pure-policy enumeration (exact)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "boxsearch/engine.hpp"
#include "boxsearch/matrix_game.hpp"
#include "boxsearch/model.hpp"
#include "boxsearch/number.hpp"
#include "boxsearch/solver.hpp"
#include "boxsearch/strategies.hpp"
#include "boxsearch/values.hpp"

using namespace boxsearch;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

Rat rq(long long num, long long den = 1) { return Rat(num, den); }

std::vector<Rat> random_costs(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(1, 24), den(1, 6);
  std::vector<Rat> costs(n);
  for (auto& c : costs) c = Rat(num(rng), den(rng));
  return costs;
}

std::string alloc_str(const Allocation& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
  return s + ")";
}

// Valid search sequence whose last k opens realize the pattern x.
std::vector<int> sequence_ending_with(const Allocation& x, int k) {
  std::vector<int> seq;
  for (int i = 0; i < static_cast<int>(x.size()); ++i)
    for (int t = 0; t < k - x[i]; ++t) seq.push_back(i);
  for (int i = 0; i < static_cast<int>(x.size()); ++i)
    for (int t = 0; t < x[i]; ++t) seq.push_back(i);
  return seq;
}

std::set<Allocation> support_of(const HiderMixed<Rat>& hm) {
  std::set<Allocation> s;
  for (const auto& [x, p] : hm.support)
    if (p > Rat(0)) s.insert(x);
  return s;
}

// The support probabilities are exactly proportional to prod_i c_i^{x_i}.
bool proportional_to_monomial(const HiderMixed<Rat>& hm, const std::vector<Rat>& costs) {
  if (hm.support.empty()) return false;
  const auto& [x0, p0] = hm.support.front();
  Rat m0 = allocation_monomial(costs, x0);
  for (const auto& [x, p] : hm.support)
    if (p * m0 != p0 * allocation_monomial(costs, x)) return false;
  return true;
}

struct ExampleSpec {
  std::vector<Rat> costs;
  int balls;
  GameVariant variant;
  double target;                             // published 4-decimal value
  std::set<Allocation> support;              // exact expected support (empty = skip)
  std::vector<Allocation> excluded;          // allocations that must not appear
  bool check_proportionality = false;
};

// Solves one published example and appends any discrepancies to `why`.
void check_example(const ExampleSpec& ex, const std::string& name, std::ostringstream& why) {
  auto start = clock_type::now();
  auto sol = solve_game(ex.costs, ex.balls, ex.variant);
  double elapsed = seconds_since(start);
  double got = to_double(sol.value);
  if (std::abs(got - ex.target) >= 5e-5)
    why << " [" << name << ": value " << got << " vs " << ex.target << "]";
  if (elapsed >= 30.0) why << " [" << name << ": took " << elapsed << "s]";
  auto support = support_of(sol.hider);
  if (!ex.support.empty() && support != ex.support)
    why << " [" << name << ": support has " << support.size() << " allocations, expected "
        << ex.support.size() << "]";
  for (const auto& x : ex.excluded)
    if (support.count(x)) why << " [" << name << ": support contains " << alloc_str(x) << "]";
  if (ex.check_proportionality && !proportional_to_monomial(sol.hider, ex.costs))
    why << " [" << name << ": probabilities not proportional to the cost monomial]";
}

std::string criterion1() {
  std::ostringstream why;
  ExampleSpec ex1;
  ex1.costs = {rq(10), rq(9), rq(1), rq(1)};
  ex1.balls = 2;
  ex1.variant = kMultiCost;
  ex1.target = 25.9515;
  for (const auto& x : enumerate_allocations(4, 2, LookMode::multi))
    if (x != Allocation{0, 0, 2, 0} && x != Allocation{0, 0, 1, 1} && x != Allocation{0, 0, 0, 2})
      ex1.support.insert(x);
  ex1.check_proportionality = true;
  check_example(ex1, "example 1", why);

  ExampleSpec ex2;
  ex2.costs = {rq(100), rq(10), rq(1), rq(99, 100)};
  ex2.balls = 2;
  ex2.variant = kMultiCost;
  ex2.target = 201.0972;
  ex2.support = {{2, 0, 0, 0}, {1, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, 0, 1}};
  ex2.check_proportionality = true;
  check_example(ex2, "example 2", why);
  return why.str();
}

std::string criterion2() {
  std::ostringstream why;
  ExampleSpec ex3;
  ex3.costs = {rq(100), rq(10), rq(1), rq(99, 100)};
  ex3.balls = 2;
  ex3.variant = kSingleRegret;
  ex3.target = 10.0405;
  ex3.excluded = {{1, 1, 0, 0}};
  check_example(ex3, "example 3", why);

  ExampleSpec ex4;
  ex4.costs = {rq(100), rq(10), rq(99, 10), rq(1)};
  ex4.balls = 2;
  ex4.variant = kSingleRegret;
  ex4.target = 17.4229;
  ex4.support = {{1, 0, 0, 1}, {0, 1, 0, 1}, {0, 0, 1, 1}};
  check_example(ex4, "example 4", why);
  return why.str();
}

std::string criterion3() {
  std::ostringstream why;
  auto start = clock_type::now();
  std::mt19937_64 rng(424242);
  int checked = 0;
  for (int n = 1; n <= 4 && why.str().empty(); ++n) {
    for (int k = 1; k <= 3 && why.str().empty(); ++k) {
      auto costs = random_costs(n, rng);
      std::sort(costs.begin(), costs.end(), std::greater<>());
      const std::string tag = "n=" + std::to_string(n) + " k=" + std::to_string(k);

      // Multi-look: every named constructor plus 50 random decision trees
      // must see exactly U (cost) and V (regret) against the equalizer.
      auto hm = hider_equalizing_multi(costs, k);
      const Rat u = value_multi_cost_equalizing(costs, k);
      const Rat v = value_multi_regret(costs, k);
      std::vector<std::pair<std::string, SearcherPolicy<Rat>>> pols;
      pols.emplace_back("equal-cost", searcher_equal_cost<Rat>(n, k));
      pols.emplace_back("regret-search", searcher_multi_regret(costs, k));
      pols.emplace_back("uniform", searcher_uniform_adaptive<Rat>(n));
      if (n == 2) pols.emplace_back("two-box", searcher_n2_cost(costs[0], costs[1], k));
      if (k == 1) pols.emplace_back("normal-k1", policy_from_normal(searcher_normal_k1(costs), n));
      if (k == 2 && n >= 2) pols.emplace_back("normal-k2", searcher_normal_k2(costs));
      {
        std::vector<int> seq;
        for (int i = 0; i < n; ++i)
          for (int r = 0; r < k; ++r) seq.push_back(i);
        std::shuffle(seq.begin(), seq.end(), rng);
        pols.emplace_back("sequence", policy_from_sequence<Rat>(seq, n));
      }
      for (int t = 0; t < 50; ++t)
        pols.emplace_back("random tree #" + std::to_string(t),
                          dt_to_policy<Rat>(random_decision_tree(n, k, LookMode::multi, rng)));
      for (const auto& [name, pol] : pols) {
        ++checked;
        if (evaluate_mixed(pol, hm, costs, kMultiCost).expected_payoff != u) {
          why << " [" << tag << " " << name << ": cost payoff != U]";
          break;
        }
        if (evaluate_mixed(pol, hm, costs, kMultiRegret).expected_payoff != v) {
          why << " [" << tag << " " << name << ": regret payoff != V]";
          break;
        }
      }

      // Single look: same game sizes capped at one ball per box, payoff W.
      const int ks = std::min(k, n);
      auto hs = hider_equalizing_single(costs, ks);
      const Rat w = value_single_regret(costs, ks);
      std::vector<std::pair<std::string, SearcherPolicy<Rat>>> spols;
      spols.emplace_back("uniform", searcher_uniform_adaptive<Rat>(n));
      if (ks == n - 1) spols.emplace_back("single-regret", searcher_single_regret_full(costs));
      {
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        spols.emplace_back("permutation", policy_from_sequence<Rat>(perm, n));
      }
      for (int t = 0; t < 50; ++t)
        spols.emplace_back("random tree #" + std::to_string(t),
                           dt_to_policy<Rat>(random_decision_tree(n, ks, LookMode::single, rng)));
      for (const auto& [name, pol] : spols) {
        ++checked;
        if (evaluate_mixed(pol, hs, costs, kSingleRegret).expected_payoff != w) {
          why << " [" << tag << " " << name << ": single-look regret != W]";
          break;
        }
      }
    }
  }
  double elapsed = seconds_since(start);
  if (elapsed >= 60.0) why << " [took " << elapsed << "s]";
  if (why.str().empty() && checked < 12 * 100) why << " [only " << checked << " policies checked]";
  return why.str();
}

std::string criterion4() {
  std::ostringstream why;
  std::mt19937_64 rng(515151);
  auto off = [&](const std::string& regime, int rep, const Rat& got, const Rat& want) {
    why << " [" << regime << " #" << rep << ": " << rat_to_string(got) << " != "
        << rat_to_string(want) << "]";
  };
  for (int rep = 0; rep < 25 && why.str().empty(); ++rep) {
    {
      std::uniform_int_distribution<int> pick_n(1, 4), pick_k(1, 3);
      const int n = pick_n(rng), k = pick_k(rng);
      const Rat c = random_costs(1, rng)[0];
      auto sol = solve_game(std::vector<Rat>(n, c), k, kMultiCost);
      if (sol.value != c * value_equal_cost<Rat>(n, k))
        off("equal-cost", rep, sol.value, c * value_equal_cost<Rat>(n, k));
    }
    {
      std::uniform_int_distribution<int> pick_k(1, 4);
      const int k = pick_k(rng);
      auto costs = random_costs(2, rng);
      if (costs[1] > costs[0]) std::swap(costs[0], costs[1]);
      auto sol = solve_game(costs, k, kMultiCost);
      auto cut = cutoff_b_multi_n2(costs[0], costs[1], k);
      if (sol.value != cut.value) off("two-box threshold", rep, sol.value, cut.value);
    }
    {
      std::uniform_int_distribution<int> pick_n(1, 4), pick_k(1, 3);
      const int n = pick_n(rng), k = pick_k(rng);
      const auto costs = random_costs(n, rng);
      auto sol = solve_game(costs, k, kMultiRegret);
      if (sol.value != value_multi_regret(costs, k))
        off("multi-regret", rep, sol.value, value_multi_regret(costs, k));
    }
    {
      std::uniform_int_distribution<int> pick_n(2, 5);
      const int n = pick_n(rng);
      auto costs = random_costs(n, rng);
      std::sort(costs.begin(), costs.end(), std::greater<>());
      auto sol = solve_game(costs, n - 1, kSingleRegret);
      auto cut = cutoff_b_single(costs);
      if (sol.value != cut.value) off("single-regret cutoff", rep, sol.value, cut.value);
    }
  }
  return why.str();
}

std::string criterion5() {
  std::ostringstream why;
  const std::vector<Rat> unit{rq(1), rq(1)};
  auto pol = searcher_equal_cost<Rat>(2, 2);
  HiderMixed<Rat> spread = hider_equalizing_multi(unit, 2);  // uniform over all three
  HiderMixed<Rat> corners;
  corners.support.emplace_back(Allocation{2, 0}, rq(1, 2));
  corners.support.emplace_back(Allocation{0, 2}, rq(1, 2));
  if (evaluate_mixed(pol, spread, unit, kMultiCost).expected_payoff != rq(8, 3))
    why << " [equal-cost policy vs uniform hider != 8/3]";
  if (evaluate_mixed(pol, corners, unit, kMultiCost).expected_payoff != rq(8, 3))
    why << " [equal-cost policy vs two-corner hider != 8/3]";
  auto uni = searcher_uniform_adaptive<Rat>(2);
  if (evaluate(uni, Allocation{2, 0}, unit, kMultiCost).expected_payoff != rq(11, 4))
    why << " [uniform-adaptive vs (2,0) != 11/4]";
  const std::vector<Rat> ten{rq(10), rq(1)};
  if (value_multi_cost_equalizing(ten, 2) != rq(2222, 111))
    why << " [U([2],2) != 2222/111 at costs (10,1)]";
  if (!(rq(10) + value_multi_cost_equalizing(ten, 1) > value_multi_cost_equalizing(ten, 2)))
    why << " [10 + U([2],1) is not above U([2],2)]";
  return why.str();
}

std::string criterion6() {
  std::ostringstream why;
  std::mt19937_64 rng(616161);

  // First/last-k permutation invariance of a sequence's regret.
  for (int t = 0; t < 40 && why.str().empty(); ++t) {
    std::uniform_int_distribution<int> pick_n(2, 3), pick_k(1, 3);
    const int n = pick_n(rng), k = pick_k(rng);
    const auto costs = random_costs(n, rng);
    std::vector<int> seq;
    for (int i = 0; i < n; ++i)
      for (int r = 0; r < k; ++r) seq.push_back(i);
    std::shuffle(seq.begin(), seq.end(), rng);
    std::vector<int> first_perm = seq, last_perm = seq;
    std::shuffle(first_perm.begin(), first_perm.begin() + k, rng);
    std::shuffle(last_perm.end() - k, last_perm.end(), rng);
    for (const auto& x : enumerate_allocations(n, k, LookMode::multi)) {
      Rat base = sequence_regret(seq, x, costs);
      if (sequence_regret(first_perm, x, costs) != base ||
          sequence_regret(last_perm, x, costs) != base) {
        why << " [sequence regret changed under a first/last-k permutation]";
        break;
      }
    }
  }

  // Overlapping patterns: both cross regrets collapse to sum of other costs.
  for (int t = 0; t < 30 && why.str().empty(); ++t) {
    std::uniform_int_distribution<int> pick_n(2, 4), pick_k(1, 3);
    const int n = pick_n(rng), k = pick_k(rng);
    const auto costs = random_costs(n, rng);
    auto allocs = enumerate_allocations(n, k, LookMode::multi);
    for (const auto& x : allocs) {
      for (const auto& y : allocs) {
        int witness = -1;
        for (int i = 0; i < n; ++i)
          if (x[i] + y[i] > k) witness = i;
        if (witness < 0) continue;
        Rat expect(0);
        for (int j = 0; j < n; ++j)
          if (j != witness) expect += costs[j];
        if (sequence_regret(sequence_ending_with(y, k), x, costs) != expect ||
            sequence_regret(sequence_ending_with(x, k), y, costs) != expect) {
          why << " [overlap regret != sum of other costs at x=" << alloc_str(x)
              << " y=" << alloc_str(y) << "]";
          break;
        }
      }
      if (!why.str().empty()) break;
    }
  }

  // The seven two-ball pattern-vs-pattern case values, n up to 5.
  auto tail = [](const std::vector<Rat>& c, int from) {
    Rat s(0);
    for (std::size_t i = from; i < c.size(); ++i) s += c[i];
    return s;
  };
  for (int t = 0; t < 40 && why.str().empty(); ++t) {
    const int n = 2 + t % 4;
    const auto costs = random_costs(n, rng);
    auto e = [&](int i, int j) {
      Allocation y(n, 0);
      y[i] += 1;
      y[j] += 1;
      return y;
    };
    auto R = [&](const Allocation& y, const Allocation& x) {
      return normal_expected_regret(normal_k2_pattern(costs, y), x, costs);
    };
    // Identical patterns (cases 1 and 5) are symmetric by construction; the
    // remaining cases have closed values, checked here, plus full pairwise
    // symmetry below.
    bool ok = R(e(0, 0), e(1, 1)) == tail(costs, 2) / 2;   // case 2
    ok = ok && R(e(0, 0), e(0, 1)) == tail(costs, 1);      // case 3 (overlap rule)
    if (n >= 3) {
      ok = ok && R(e(0, 0), e(1, 2)) == (costs[1] + costs[2]) / 2 + Rat(2, 3) * tail(costs, 3);
      ok = ok && R(e(0, 1), e(1, 2)) == (costs[0] + costs[2]) / 2 + Rat(5, 6) * tail(costs, 3);
    }
    if (n >= 4)
      ok = ok && R(e(0, 1), e(2, 3)) ==
                     (costs[0] + costs[1] + costs[2] + costs[3]) / 3 + Rat(2, 3) * tail(costs, 4);
    if (n <= 4) {
      auto patterns = enumerate_allocations(n, 2, LookMode::multi);
      for (const auto& y : patterns)
        for (const auto& x : patterns) ok = ok && R(y, x) == R(x, y);
    }
    if (!ok) why << " [two-ball pattern case value mismatch at n=" << n << "]";
  }

  // The last-stage column weights equalize the reduction matrix at V.
  for (int t = 0; t < 40 && why.str().empty(); ++t) {
    std::uniform_int_distribution<int> pick_n(2, 4), pick_k(1, 3);
    const int n = pick_n(rng), k = pick_k(rng);
    const auto costs = random_costs(n, rng);
    auto wts = regret_reduction_weights(costs, k);
    auto m = regret_reduction_matrix(costs, k);
    const Rat v = value_multi_regret(costs, k);
    Rat total(0);
    bool ok = true;
    for (const Rat& p : wts) {
      total += p;
      ok = ok && p >= Rat(0);
    }
    ok = ok && total == Rat(1);
    for (int s = 0; s <= k && ok; ++s) {
      Rat row(0);
      for (int c = 0; c <= k; ++c) row += wts[c] * m[s][c];
      ok = ok && row == v;
    }
    ok = ok && solve_matrix_game(m).value == v;
    if (!ok) why << " [reduction-matrix weights are not optimal at n=" << n
                 << " k=" << k << "]";
  }
  return why.str();
}

std::string criterion7() {
  std::ostringstream why;
  std::mt19937_64 rng(717171);
  const GameVariant variants[] = {kMultiCost, kMultiRegret, kSingleCost, kSingleRegret};
  for (int t = 0; t < 32 && why.str().empty(); ++t) {
    const int k = 1 + t % 2;
    const GameVariant variant = variants[(t / 2) % 4];
    const auto costs = random_costs(2, rng);
    auto allocs = enumerate_allocations(2, k, variant.look);
    HiderMixed<Rat> hm;
    std::uniform_int_distribution<int> coin(0, 1), weight(1, 9);
    Rat total(0);
    for (const auto& x : allocs) {
      if (coin(rng)) continue;
      Rat w(weight(rng));
      hm.support.emplace_back(x, w);
      total += w;
    }
    if (hm.support.empty()) {
      hm.support.emplace_back(allocs[0], Rat(1));
      total = Rat(1);
    }
    for (auto& [x, p] : hm.support) p /= total;

    Rat br = best_response(hm, costs, variant).value;
    bool first = true;
    Rat brute(0);
    for (const auto& dt : enumerate_decision_trees(2, k, variant.look)) {
      Rat val = evaluate_mixed(dt_to_policy<Rat>(dt), hm, costs, variant).expected_payoff;
      if (first || val < brute) brute = val;
      first = false;
    }
    if (br != brute)
      why << " [" << to_string(variant) << " k=" << k << ": best response "
          << rat_to_string(br) << " != enumerated " << rat_to_string(brute) << "]";
  }
  return why.str();
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    std::string (*run)();
  };
  const Criterion criteria[] = {
      {"criterion 1: multi-look cost examples reproduce", criterion1},
      {"criterion 2: single-look regret examples reproduce", criterion2},
      {"criterion 3: equalizing hiders level every policy at U/V/W", criterion3},
      {"criterion 4: solver matches the closed forms exactly", criterion4},
      {"criterion 5: worked micro-examples check out", criterion5},
      {"criterion 6: structural property suites find no counterexamples", criterion6},
      {"criterion 7: best response equals pure-policy enumeration", criterion7},
  };
  bool all_pass = true;
  for (const auto& c : criteria) {
    std::string why;
    try {
      why = c.run();
    } catch (const std::exception& e) {
      why = std::string(" [exception: ") + e.what() + "]";
    }
    if (why.empty()) {
      std::cout << "PASS " << c.label << "\n";
    } else {
      std::cout << "FAIL " << c.label << why << "\n";
      all_pass = false;
    }
    std::cout.flush();
  }
  std::cout << (all_pass ? "ALL ACCEPTANCE CRITERIA PASS" : "ACCEPTANCE FAILED") << std::endl;
  return all_pass ? 0 : 1;
}
