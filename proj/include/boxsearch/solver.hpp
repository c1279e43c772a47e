#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "boxsearch/engine.hpp"
#include "boxsearch/matrix_game.hpp"
#include "boxsearch/model.hpp"
#include "boxsearch/strategies.hpp"

namespace boxsearch {

// Pure adaptive searcher strategy: at each reachable information state,
// which box to open next.  Off-map states fall back to the lowest-index
// live box, so the policy is admissible everywhere.
struct DecisionTreePolicy {
  int boxes = 0;
  std::map<std::uint64_t, int> action;  // InfoState::key() -> box

  friend bool operator==(const DecisionTreePolicy& a, const DecisionTreePolicy& b) {
    return a.boxes == b.boxes && a.action == b.action;
  }
};

namespace detail {

template <typename T>
class DtNode final : public PolicyNode<T>,
                     public std::enable_shared_from_this<DtNode<T>> {
 public:
  explicit DtNode(std::shared_ptr<const DecisionTreePolicy> dt) : dt_(std::move(dt)) {}
  typename PolicyNode<T>::Choice choose(const InfoState& s) const override {
    int box = -1;
    if (auto it = dt_->action.find(s.key()); it != dt_->action.end()) {
      box = it->second;
    } else {
      for (int i = 0; i < s.boxes(); ++i)
        if (s.live(i)) {
          box = i;
          break;
        }
    }
    if (box < 0) return typename PolicyNode<T>::Stop{};
    PolicyPtr<T> self = this->shared_from_this();
    return typename PolicyNode<T>::Open{box, self, self};
  }

 private:
  std::shared_ptr<const DecisionTreePolicy> dt_;
};

}  // namespace detail

template <typename T>
SearcherPolicy<T> dt_to_policy(const DecisionTreePolicy& dt) {
  auto shared = std::make_shared<const DecisionTreePolicy>(dt);
  return {std::make_shared<detail::DtNode<T>>(shared), "decision-tree policy"};
}

// ---------------------------------------------------------------------------
// Best response: exact DP over the searcher's information states
// ---------------------------------------------------------------------------

template <typename T>
struct BestResponseResult {
  T value{};
  DecisionTreePolicy policy;
  long long states = 0;
};

inline constexpr long long kDefaultStateBudget = 2'000'000;

namespace detail {

// x can still be the true allocation at `state`: dead boxes are fully
// accounted for, live boxes hold at least what was already found.
inline bool consistent(const Allocation& x, const InfoState& s) {
  for (int i = 0; i < s.boxes(); ++i) {
    if (s.dead[i] ? x[i] != s.found[i] : x[i] < s.found[i]) return false;
  }
  return true;
}

template <typename T>
class BestResponseSolver {
 public:
  BestResponseSolver(const HiderMixed<T>& hider, const std::vector<T>& costs,
                     GameVariant variant, long long budget)
      : hider_(hider), costs_(costs), variant_(variant), budget_(budget) {}

  BestResponseResult<T> run() {
    const int n = static_cast<int>(costs_.size());
    int k = 0;
    for (const auto& [x, p] : hider_.support) {
      if (static_cast<int>(x.size()) != n)
        throw invalid_instance_error("hider allocation length mismatch");
      k = std::max(k, total_balls(x));
    }
    check_state_packable(n, k);
    BestResponseResult<T> out;
    out.policy.boxes = n;
    InfoState s = initial_state(n, k);
    out.value = eval(s, out.policy);
    out.states = static_cast<long long>(memo_.size());
    return out;
  }

 private:
  T eval(InfoState& s, DecisionTreePolicy& dt) {
    if (s.remaining == 0) return T(0);
    const std::uint64_t key = s.key();
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (static_cast<long long>(memo_.size()) >= budget_)
      throw std::runtime_error("best response exceeded the state budget");

    // Posterior masses of "box i still holds another ball", conditioned on
    // reaching this state.
    T mass(0);
    std::vector<T> mass_more(s.boxes(), T(0));
    for (const auto& [x, p] : hider_.support) {
      if (!consistent(x, s)) continue;
      mass += p;
      for (int i = 0; i < s.boxes(); ++i)
        if (x[i] > s.found[i]) mass_more[i] += p;
    }
    if (mass <= T(0)) throw std::logic_error("best response reached a zero-mass state");

    bool have = false;
    T best(0);
    int best_box = -1;
    for (int i = 0; i < s.boxes(); ++i) {
      if (!s.live(i)) continue;
      const T f = mass_more[i] / mass;
      T v(0);
      if (f > T(0)) {  // ball branch
        s.found[i] += 1;
        s.remaining -= 1;
        const bool exhaust = variant_.look == LookMode::single;
        if (exhaust) s.dead[i] = 1;
        v += f * eval(s, dt);
        if (exhaust) s.dead[i] = 0;
        s.found[i] -= 1;
        s.remaining += 1;
      }
      if (f < T(1)) {  // empty branch
        T sub(0);
        s.dead[i] = 1;
        sub = eval(s, dt);
        s.dead[i] = 0;
        if (variant_.payoff == PayoffMode::regret) sub += costs_[i];
        v += (T(1) - f) * sub;
      }
      if (variant_.payoff == PayoffMode::cost) v += costs_[i];
      if (!have || v < best) {  // ties keep the lowest box index
        have = true;
        best = v;
        best_box = i;
      }
    }
    if (!have) throw std::logic_error("no live box with balls still missing");
    dt.action.emplace(key, best_box);
    memo_.emplace(key, best);
    return best;
  }

  const HiderMixed<T>& hider_;
  const std::vector<T>& costs_;
  GameVariant variant_;
  long long budget_;
  std::unordered_map<std::uint64_t, T> memo_;
};

}  // namespace detail

// Minimizes expected payoff against a known hider mixture over all adaptive
// searcher strategies, by dynamic programming on the posterior.
template <typename T>
BestResponseResult<T> best_response(const HiderMixed<T>& hider, const std::vector<T>& costs,
                                    GameVariant variant,
                                    long long state_budget = kDefaultStateBudget) {
  validate_costs(costs);
  if (hider.support.empty()) throw invalid_instance_error("hider mixture is empty");
  detail::BestResponseSolver<T> solver(hider, costs, variant, state_budget);
  return solver.run();
}

// ---------------------------------------------------------------------------
// Double oracle over (all allocations) x (generated decision trees)
// ---------------------------------------------------------------------------

template <typename T>
struct SolveOptions {
  T eps = num_traits<T>::exact ? T(0) : T(1e-9);
  long long state_budget = kDefaultStateBudget;
  bool refine_support = true;  // lexicographic-minimal hider support
};

template <typename T>
struct SolveResult {
  T value{};
  HiderMixed<T> hider;
  std::vector<std::pair<DecisionTreePolicy, T>> searcher;
  int iterations = 0;
  T duality_gap{};
  long long columns = 0;
};

namespace detail {

template <typename T>
HiderMixed<T> hider_from_weights(const std::vector<Allocation>& rows, const std::vector<T>& p,
                                 const T& cutoff) {
  HiderMixed<T> hm;
  hm.description = "matrix-game optimal hider";
  T total(0);
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (p[i] > cutoff) total += p[i];
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (p[i] > cutoff) hm.support.emplace_back(rows[i], p[i] / total);
  return hm;
}

}  // namespace detail

template <typename T>
SolveResult<T> solve_game(const std::vector<T>& costs, int k, GameVariant variant,
                          SolveOptions<T> opts = {}) {
  validate_costs(costs);
  const int n = static_cast<int>(costs.size());
  if (k < 1) throw invalid_instance_error("need at least one ball");
  if (variant.look == LookMode::single && k > n)
    throw invalid_instance_error("single-look games need at most one ball per box");
  check_state_packable(n, k);

  const std::vector<Allocation> rows = enumerate_allocations(n, k, variant.look);
  const int m = static_cast<int>(rows.size());
  Evaluator<T> evaluator(costs, variant);

  std::vector<DecisionTreePolicy> cols;
  std::vector<SearcherPolicy<T>> col_policies;
  std::vector<std::vector<T>> matrix(m);  // matrix[i][j] = payoff(row i, col j)

  auto add_column = [&](const DecisionTreePolicy& dt) {
    for (const DecisionTreePolicy& c : cols)
      if (c == dt) return false;
    cols.push_back(dt);
    col_policies.push_back(dt_to_policy<T>(dt));
    for (int i = 0; i < m; ++i)
      matrix[i].push_back(evaluator.run(col_policies.back().root, rows[i]).expected_payoff);
    return true;
  };

  // Seed with the best response to the equalizing hider; the paper's
  // constructive optima are mixtures, so their pure backbone enters through
  // LP best responses instead.
  {
    HiderMixed<T> seed = variant.look == LookMode::single
                             ? hider_equalizing_single(costs, k)
                             : hider_equalizing_multi(costs, k);
    add_column(best_response(seed, costs, variant, opts.state_budget).policy);
  }

  const T cutoff = num_traits<T>::exact ? T(0) : T(1e-12);
  SolveResult<T> out;
  MatrixGameSolution<T> lp;

  for (int guard = 0;; ++guard) {
    if (guard > 10000) throw std::logic_error("double oracle failed to converge");
    lp = solve_matrix_game(matrix);
    HiderMixed<T> hm = detail::hider_from_weights(rows, lp.row_strategy, cutoff);
    BestResponseResult<T> br = best_response(hm, costs, variant, opts.state_budget);
    out.iterations = guard + 1;
    out.duality_gap = lp.value - br.value;
    if (out.duality_gap < T(0)) out.duality_gap = T(0);
    if (out.duality_gap <= opts.eps) {
      bool refined_ok = true;
      if (opts.refine_support) {
        // Shrink the hider support reproducibly: walk rows from
        // lexicographically largest down, dropping each row whose removal
        // keeps the restricted game value intact.  The surviving support is
        // lexicographically minimal among optimal vertices.
        std::vector<bool> allowed(m, true);
        auto restricted_value = [&](const std::vector<bool>& mask) {
          std::vector<std::vector<T>> sub;
          for (int i = 0; i < m; ++i)
            if (mask[i]) sub.push_back(matrix[i]);
          return solve_matrix_game(sub);
        };
        for (int i = m - 1; i >= 0; --i) {
          int left = 0;
          for (int t = 0; t < m; ++t)
            if (allowed[t]) ++left;
          if (left == 1) break;
          allowed[i] = false;
          MatrixGameSolution<T> sub = restricted_value(allowed);
          if (sub.value < lp.value - opts.eps) allowed[i] = true;  // needed
        }
        MatrixGameSolution<T> sub = restricted_value(allowed);
        std::vector<T> p(m, T(0));
        int at = 0;
        for (int i = 0; i < m; ++i)
          if (allowed[i]) p[i] = sub.row_strategy[at++];
        HiderMixed<T> refined = detail::hider_from_weights(rows, p, cutoff);
        BestResponseResult<T> check = best_response(refined, costs, variant, opts.state_budget);
        if (check.value < lp.value - opts.eps && add_column(check.policy)) {
          // The shrunk mixture is exploitable by a policy outside the
          // column set; add it and keep iterating.
          refined_ok = false;
        } else if (check.value < lp.value - opts.eps) {
          // Numerically stuck: fall back to the unrefined mixture.
          out.hider = detail::hider_from_weights(rows, lp.row_strategy, cutoff);
        } else {
          out.hider = std::move(refined);
        }
      } else {
        out.hider = detail::hider_from_weights(rows, lp.row_strategy, cutoff);
      }
      if (refined_ok) {
        out.value = lp.value;
        break;
      }
      continue;
    }
    if (!add_column(br.policy)) {
      // Numerically stuck: the improving column is already present.
      out.hider = detail::hider_from_weights(rows, lp.row_strategy, cutoff);
      out.value = lp.value;
      break;
    }
  }

  out.hider.description = "optimal hider";
  for (std::size_t j = 0; j < cols.size(); ++j)
    if (lp.col_strategy[j] > cutoff) out.searcher.emplace_back(cols[j], lp.col_strategy[j]);
  T stotal(0);
  for (auto& [dt, w] : out.searcher) stotal += w;
  for (auto& [dt, w] : out.searcher) w /= stotal;
  out.columns = static_cast<long long>(cols.size());
  return out;
}

// ---------------------------------------------------------------------------
// Pure-policy enumeration and sampling (test oracles, desk scale only)
// ---------------------------------------------------------------------------

namespace detail {

inline bool feasible_branch(const std::vector<Allocation>& all, const InfoState& s) {
  for (const Allocation& x : all)
    if (consistent(x, s)) return true;
  return false;
}

inline void enumerate_dt_rec(const std::vector<Allocation>& all, InfoState& s, LookMode look,
                             std::vector<std::map<std::uint64_t, int>>& out, long long limit) {
  if (s.remaining == 0) {
    out.push_back({});
    return;
  }
  const std::uint64_t key = s.key();
  std::vector<std::map<std::uint64_t, int>> mine;
  for (int i = 0; i < s.boxes(); ++i) {
    if (!s.live(i)) continue;
    std::vector<std::map<std::uint64_t, int>> subf{{}}, sube{{}};
    s.found[i] += 1;
    s.remaining -= 1;
    if (look == LookMode::single) s.dead[i] = 1;
    bool found_possible = feasible_branch(all, s);
    if (found_possible) {
      subf.clear();
      enumerate_dt_rec(all, s, look, subf, limit);
    }
    if (look == LookMode::single) s.dead[i] = 0;
    s.found[i] -= 1;
    s.remaining += 1;
    s.dead[i] = 1;
    bool empty_possible = feasible_branch(all, s);
    if (empty_possible) {
      sube.clear();
      enumerate_dt_rec(all, s, look, sube, limit);
    }
    s.dead[i] = 0;
    if (!found_possible && !empty_possible) continue;  // box i can never be opened here
    for (const auto& f : subf) {
      for (const auto& e : sube) {
        std::map<std::uint64_t, int> merged = f;
        merged.insert(e.begin(), e.end());
        merged.emplace(key, i);
        mine.push_back(std::move(merged));
        if (static_cast<long long>(mine.size()) > limit)
          throw std::runtime_error("decision-tree enumeration exceeded its limit");
      }
    }
  }
  out = std::move(mine);
}

}  // namespace detail

// Every pure adaptive searcher strategy, as an action map over the states it
// can reach.  Exponential; intended for tiny oracle instances only.
inline std::vector<DecisionTreePolicy> enumerate_decision_trees(int n, int k, LookMode look,
                                                                long long limit = 200000) {
  check_state_packable(n, k);
  const std::vector<Allocation> all = enumerate_allocations(n, k, look);
  InfoState s = initial_state(n, k);
  std::vector<std::map<std::uint64_t, int>> maps;
  detail::enumerate_dt_rec(all, s, look, maps, limit);
  std::vector<DecisionTreePolicy> out;
  out.reserve(maps.size());
  for (auto& m : maps) {
    DecisionTreePolicy dt;
    dt.boxes = n;
    dt.action = std::move(m);
    out.push_back(std::move(dt));
  }
  return out;
}

// Uniformly random action at every state reachable under the chosen actions.
template <typename Rng>
DecisionTreePolicy random_decision_tree(int n, int k, LookMode look, Rng& rng) {
  check_state_packable(n, k);
  const std::vector<Allocation> all = enumerate_allocations(n, k, look);
  DecisionTreePolicy dt;
  dt.boxes = n;
  InfoState s = initial_state(n, k);
  struct Walker {
    const std::vector<Allocation>& all;
    LookMode look;
    Rng& rng;
    DecisionTreePolicy& dt;
    void visit(InfoState& s) {
      if (s.remaining == 0) return;
      const std::uint64_t key = s.key();
      if (dt.action.count(key)) return;
      std::vector<int> live;
      for (int i = 0; i < s.boxes(); ++i)
        if (s.live(i)) live.push_back(i);
      if (live.empty()) return;
      const int i = live[std::uniform_int_distribution<std::size_t>(0, live.size() - 1)(rng)];
      dt.action.emplace(key, i);
      s.found[i] += 1;
      s.remaining -= 1;
      if (look == LookMode::single) s.dead[i] = 1;
      if (detail::feasible_branch(all, s)) visit(s);
      if (look == LookMode::single) s.dead[i] = 0;
      s.found[i] -= 1;
      s.remaining += 1;
      s.dead[i] = 1;
      if (detail::feasible_branch(all, s)) visit(s);
      s.dead[i] = 0;
    }
  } walker{all, look, rng, dt};
  walker.visit(s);
  return dt;
}

// ---------------------------------------------------------------------------
// Equalizing-property check (support probabilities proportional to the
// allocation monomials)
// ---------------------------------------------------------------------------

template <typename T>
struct EqualizingReport {
  bool equalizing = false;
  std::vector<Allocation> support;
  double max_ratio_deviation = 0.0;
};

template <typename T>
EqualizingReport<T> check_equalizing_property(const HiderMixed<T>& hm,
                                              const std::vector<T>& costs,
                                              double tol = 1e-6) {
  validate_costs(costs);
  EqualizingReport<T> rep;
  std::vector<std::pair<Allocation, T>> ratios;
  for (const auto& [x, p] : hm.support) {
    if (p <= T(0)) continue;
    rep.support.push_back(x);
    ratios.emplace_back(x, p / allocation_monomial(costs, x));
  }
  std::sort(rep.support.begin(), rep.support.end());
  if (ratios.empty()) return rep;
  rep.equalizing = true;
  const T& base = ratios.front().second;
  for (const auto& [x, r] : ratios) {
    double dev = std::abs(to_double(r / base) - 1.0);
    rep.max_ratio_deviation = std::max(rep.max_ratio_deviation, dev);
    if (num_traits<T>::exact ? r != base : dev > tol) rep.equalizing = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Normal-strategy restriction (multi-look regret): full matrix over all
// search sequences
// ---------------------------------------------------------------------------

template <typename T>
struct NormalOnlyResult {
  T value{};
  HiderMixed<T> hider;
  NormalStrategy<T> searcher;
  long long sequences = 0;
};

template <typename T>
NormalOnlyResult<T> solve_normal_only(const std::vector<T>& costs, int k,
                                      long long sequence_budget = 200000) {
  validate_costs(costs);
  const int n = static_cast<int>(costs.size());
  if (k < 1) throw invalid_instance_error("need at least one ball");

  std::vector<int> base;
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < k; ++t) base.push_back(i);
  std::vector<std::vector<int>> seqs;
  do {
    seqs.push_back(base);
    if (static_cast<long long>(seqs.size()) > sequence_budget)
      throw std::runtime_error("normal-strategy matrix exceeds the sequence budget");
  } while (std::next_permutation(base.begin(), base.end()));

  const std::vector<Allocation> rows = enumerate_allocations(n, k, LookMode::multi);
  std::vector<std::vector<T>> matrix(rows.size(), std::vector<T>(seqs.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < seqs.size(); ++j)
      matrix[i][j] = sequence_regret(seqs[j], rows[i], costs, LookMode::multi);

  MatrixGameSolution<T> lp = solve_matrix_game(matrix);
  NormalOnlyResult<T> out;
  out.value = lp.value;
  out.sequences = static_cast<long long>(seqs.size());
  const T cutoff = num_traits<T>::exact ? T(0) : T(1e-12);
  out.hider = detail::hider_from_weights(rows, lp.row_strategy, cutoff);
  out.hider.description = "optimal hider (normal-strategy game)";
  T total(0);
  for (std::size_t j = 0; j < seqs.size(); ++j)
    if (lp.col_strategy[j] > cutoff) total += lp.col_strategy[j];
  for (std::size_t j = 0; j < seqs.size(); ++j)
    if (lp.col_strategy[j] > cutoff)
      out.searcher.mixture.emplace_back(seqs[j], lp.col_strategy[j] / total);
  out.searcher.description = "optimal normal strategy";
  return out;
}

}  // namespace boxsearch
