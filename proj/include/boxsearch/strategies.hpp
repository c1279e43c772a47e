#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "boxsearch/engine.hpp"
#include "boxsearch/model.hpp"
#include "boxsearch/policy.hpp"
#include "boxsearch/values.hpp"

namespace boxsearch {

// ---------------------------------------------------------------------------
// Hider strategies
// ---------------------------------------------------------------------------

template <typename T>
T allocation_monomial(const std::vector<T>& costs, const Allocation& x) {
  T m(1);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (int t = 0; t < x[i]; ++t) m *= costs[i];
  return m;
}

// Probabilities proportional to prod c_i^{x_i} over an explicit support.
template <typename T>
HiderMixed<T> hider_restricted_equalizing(const std::vector<T>& costs, int k,
                                          std::vector<Allocation> support,
                                          LookMode look = LookMode::multi) {
  validate_costs(costs);
  if (support.empty()) throw invalid_instance_error("support must be non-empty");
  const int n = static_cast<int>(costs.size());
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  const int cap = look == LookMode::single ? 1 : k;
  for (const Allocation& x : support) {
    if (static_cast<int>(x.size()) != n) throw invalid_instance_error("allocation length mismatch");
    if (total_balls(x) != k) throw invalid_instance_error("allocation has wrong ball total");
    for (int b : x)
      if (b < 0 || b > cap) throw invalid_instance_error("allocation entry out of range");
  }
  T denom(0);
  for (const Allocation& x : support) denom += allocation_monomial(costs, x);
  HiderMixed<T> hm;
  hm.description = "equalizing weights on a restricted support";
  for (Allocation& x : support) {
    T p = allocation_monomial(costs, x) / denom;
    hm.support.emplace_back(std::move(x), std::move(p));
  }
  return hm;
}

// Eq.-(1) equalizing hider: every multi-look allocation with probability
// prod c_i^{x_i} / T_k([n]).
template <typename T>
HiderMixed<T> hider_equalizing_multi(const std::vector<T>& costs, int k) {
  validate_costs(costs);
  if (k < 1) throw invalid_instance_error("need at least one ball");
  auto hm = hider_restricted_equalizing(
      costs, k, enumerate_allocations(static_cast<int>(costs.size()), k, LookMode::multi),
      LookMode::multi);
  hm.description = "equalizing hider (multi-look)";
  return hm;
}

// Eq.-(11) equalizing hider: every 0/1 allocation with probability
// prod c_i^{x_i} / S_k([n]).
template <typename T>
HiderMixed<T> hider_equalizing_single(const std::vector<T>& costs, int k) {
  validate_costs(costs);
  const int n = static_cast<int>(costs.size());
  if (k < 1) throw invalid_instance_error("need at least one ball");
  if (k > n) throw invalid_instance_error("single-look games need at most one ball per box");
  auto hm = hider_restricted_equalizing(costs, k, enumerate_allocations(n, k, LookMode::single),
                                        LookMode::single);
  hm.description = "equalizing hider (single-look)";
  return hm;
}

template <typename T>
HiderMixed<T> hider_point_mass(Allocation x) {
  HiderMixed<T> hm;
  hm.description = "point mass";
  hm.support.emplace_back(std::move(x), T(1));
  return hm;
}

// Two-box cost game: put k-b balls in box 1 outright, spread the rest with
// the equalizing weights (b from the r_m cutoff).
template <typename T>
HiderMixed<T> hider_set_aside_n2(const T& c1, const T& c2, int k) {
  if (c2 > c1) throw invalid_order_error("set-aside hider expects c1 >= c2");
  const int b = cutoff_b_multi_n2(c1, c2, k).b;
  const T t_b = complete_homogeneous(std::vector<T>{c1, c2}, b);
  HiderMixed<T> hm;
  hm.description = "set aside " + std::to_string(k - b) + " balls in box 1, equalize the rest";
  for (int j = 0; j <= b; ++j) {  // j balls of the equalized part go to box 1
    Allocation x{k - b + j, b - j};
    T p(1);
    for (int t = 0; t < j; ++t) p *= c1;
    for (int t = 0; t < b - j; ++t) p *= c2;
    hm.support.emplace_back(std::move(x), p / t_b);
  }
  return hm;
}

// Single-look regret game with k = n-1: put a ball in each of boxes b+1..n
// outright, spread the remaining b-1 balls over boxes 1..b with the
// equalizing weights (b from the a_m cutoff).  Costs must be sorted
// decreasing.
template <typename T>
HiderMixed<T> hider_prefill_single(const std::vector<T>& costs) {
  const int n = static_cast<int>(costs.size());
  const int b = cutoff_b_single(costs).b;  // validates order and positivity
  T s_b1(0);  // S_{b-1}([b]) via leave-one-out products
  std::vector<T> leave_out(b);
  for (int i = 0; i < b; ++i) {
    T prod(1);
    for (int j = 0; j < b; ++j)
      if (j != i) prod *= costs[j];
    leave_out[i] = prod;
    s_b1 += prod;
  }
  HiderMixed<T> hm;
  hm.description = "prefill boxes " + std::to_string(b + 1) + ".." + std::to_string(n) +
                   ", equalize the rest";
  for (int i = 0; i < b; ++i) {  // leave box i empty
    Allocation x(n, 1);
    x[i] = 0;
    hm.support.emplace_back(std::move(x), leave_out[i] / s_b1);
  }
  return hm;
}

// ---------------------------------------------------------------------------
// Searcher policies
// ---------------------------------------------------------------------------

namespace detail {

using NodeKey = std::array<std::uint64_t, 4>;

constexpr long long kNodeBudget = 2'000'000;

// Equal-cost recursive policy of the multi-look cost game: with k' balls
// left, pick one of the live boxes uniformly, then commit to it until it
// either reveals empty or yields j balls, j drawn with weight 2(k'+1-j) /
// (k'(k'+1)).
template <typename T>
class EqualCostBuilder {
 public:
  PolicyPtr<T> build(int n, int k) {
    n_ = n;
    std::uint64_t full = (1ULL << n) - 1;
    return mix(full, k);
  }

 private:
  PolicyPtr<T> mix(std::uint64_t mask, int kr) {
    if (kr == 0) return stop_;
    const NodeKey key{0, mask, static_cast<std::uint64_t>(kr), 0};
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    std::vector<std::pair<T, PolicyPtr<T>>> branches;
    int live = 0;
    for (int i = 0; i < n_; ++i)
      if (mask & (1ULL << i)) ++live;
    if (live == 0) return stop_;  // unreachable against consistent hiders
    const T box_w = T(1) / T(live);
    for (int i = 0; i < n_; ++i) {
      if (!(mask & (1ULL << i))) continue;
      for (int j = 1; j <= kr; ++j) {
        T jw = T(2) * T(kr + 1 - j) / (T(kr) * T(kr + 1));
        branches.emplace_back(box_w * jw, commit(mask, kr, i, j));
      }
    }
    auto node = make_chance<T>(std::move(branches));
    cache_.emplace(key, node);
    bump();
    return node;
  }

  PolicyPtr<T> commit(std::uint64_t mask, int kr, int box, int j_left) {
    const NodeKey key{1, mask,
                      (static_cast<std::uint64_t>(kr) << 32) | static_cast<std::uint64_t>(box),
                      static_cast<std::uint64_t>(j_left)};
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    PolicyPtr<T> on_found =
        j_left > 1 ? commit(mask, kr - 1, box, j_left - 1) : mix(mask, kr - 1);
    PolicyPtr<T> on_empty = mix(mask & ~(1ULL << box), kr);
    auto node = make_open<T>(box, std::move(on_found), std::move(on_empty));
    cache_.emplace(key, node);
    bump();
    return node;
  }

  void bump() {
    if (static_cast<long long>(cache_.size()) > kNodeBudget)
      throw std::runtime_error("policy construction exceeded the node budget");
  }

  int n_ = 0;
  PolicyPtr<T> stop_ = make_stop<T>();
  std::map<NodeKey, PolicyPtr<T>> cache_;
};

// Multi-look regret policy Search([m], kappa) in continuation style: succ is
// played once the quota is met, fall when boxes 1..m are exhausted short of
// it (the caller's "reopen my set-aside box" chain).
template <typename T>
class RegretSearchBuilder {
 public:
  explicit RegretSearchBuilder(std::vector<T> costs) : costs_(std::move(costs)) {}

  PolicyPtr<T> build(int k) {
    PolicyPtr<T> done = make_stop<T>();       // only reached with all balls found
    PolicyPtr<T> shortfall = make_stop<T>();  // unreachable: nowhere left to fall back to
    return search(static_cast<int>(costs_.size()), k, done, shortfall);
  }

 private:
  PolicyPtr<T> search(int m, int kappa, PolicyPtr<T> succ, PolicyPtr<T> fall) {
    if (kappa == 0) return succ;
    const NodeKey key{static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(kappa),
                      succ->id(), fall->id()};
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    PolicyPtr<T> node;
    if (m == 1) {
      node = quota_chain(0, kappa, succ, fall);
    } else {
      std::vector<T> prefix(costs_.begin(), costs_.begin() + m);
      std::vector<T> weights = regret_reduction_weights(prefix, kappa);
      std::vector<std::pair<T, PolicyPtr<T>>> branches;
      for (int s = 0; s <= kappa; ++s)
        branches.emplace_back(weights[s], commit(m, kappa, s, succ, fall));
      node = make_chance<T>(std::move(branches));
    }
    cache_.emplace(key, node);
    if (static_cast<long long>(cache_.size()) > kNodeBudget)
      throw std::runtime_error("policy construction exceeded the node budget");
    return node;
  }

  // Open box m-1 until s balls are found (then set it aside and search the
  // prefix, falling back to box m-1 on a shortfall) or until it reveals
  // empty after t < s balls (then the remaining kappa-t balls are all in the
  // prefix, but a parent quota may still be wrong, so propagate `fall`).
  PolicyPtr<T> commit(int m, int kappa, int s, const PolicyPtr<T>& succ, const PolicyPtr<T>& fall) {
    const int box = m - 1;
    PolicyPtr<T> after = search(m - 1, kappa - s, succ, make_sweep<T>(box, fall));
    for (int t = s - 1; t >= 0; --t) {
      PolicyPtr<T> on_empty = search(m - 1, kappa - t, succ, fall);
      after = make_open<T>(box, after, on_empty);
    }
    return after;
  }

  // Open `box` until kappa balls are found (-> succ) or it reveals empty
  // (-> fall).
  PolicyPtr<T> quota_chain(int box, int kappa, PolicyPtr<T> succ, PolicyPtr<T> fall) {
    PolicyPtr<T> node = std::move(succ);
    for (int t = 0; t < kappa; ++t) node = make_open<T>(box, node, fall);
    return node;
  }

  std::vector<T> costs_;
  std::map<NodeKey, PolicyPtr<T>> cache_;
};

// Bounces back to a parent node after one open; the weak reference breaks
// the ownership cycle parent -> bounce -> parent.
template <typename T>
class BounceNode final : public PolicyNode<T> {
 public:
  BounceNode(int box, std::weak_ptr<const PolicyNode<T>> target)
      : box_(box), target_(std::move(target)) {}
  typename PolicyNode<T>::Choice choose(const InfoState&) const override {
    PolicyPtr<T> t = target_.lock();
    return typename PolicyNode<T>::Open{box_, t, t};
  }

 private:
  int box_;
  std::weak_ptr<const PolicyNode<T>> target_;
};

}  // namespace detail

template <typename T>
SearcherPolicy<T> searcher_equal_cost(int n, int k) {
  if (n < 1) throw invalid_instance_error("need at least one box");
  if (k < 1) throw invalid_instance_error("need at least one ball");
  check_state_packable(n, k);
  detail::EqualCostBuilder<T> builder;
  return {builder.build(n, k), "equal-cost recursive commitment policy"};
}

// Two-box cost-game policy: open box 1 for up to k-b committed looks (an
// empty reveal hands the rest to box 2), then mix "open box 1 at most j more
// times" with the q_b(j) weights.
template <typename T>
SearcherPolicy<T> searcher_n2_cost(const T& c1, const T& c2, int k) {
  if (c2 > c1) throw invalid_order_error("two-box policy expects c1 >= c2");
  const int b = cutoff_b_multi_n2(c1, c2, k).b;
  const std::vector<T> q = n2_commit_weights(c1, c2, b);
  for (const T& w : q)
    if (w < T(0)) throw std::logic_error("negative commit weight despite cutoff");
  // Box 2 endgame: sweep box 2; if it reveals empty early, box 1 has the rest.
  PolicyPtr<T> box2 = make_sweep<T>(1, make_sweep<T>(0, make_stop<T>()));
  std::vector<std::pair<T, PolicyPtr<T>>> branches;
  for (int j = 0; j <= b; ++j) {
    PolicyPtr<T> node = box2;  // after j balls from box 1, switch to box 2
    for (int t = 0; t < j; ++t) node = make_open<T>(0, node, box2);
    branches.emplace_back(q[j], std::move(node));
  }
  PolicyPtr<T> mixture = make_chance<T>(std::move(branches));
  PolicyPtr<T> root = mixture;
  for (int t = 0; t < k - b; ++t) root = make_open<T>(0, root, box2);
  return {std::move(root), "two-box threshold policy (set aside " + std::to_string(k - b) + ")"};
}

// The recursive multi-look regret policy Search([n], k) driven by the
// column weights P_s of the box-n reduction.
template <typename T>
SearcherPolicy<T> searcher_multi_regret(const std::vector<T>& costs, int k) {
  validate_costs(costs);
  if (k < 1) throw invalid_instance_error("need at least one ball");
  detail::RegretSearchBuilder<T> builder(costs);
  return {builder.build(k), "recursive set-aside regret policy"};
}

// Uniform baseline: at every step open one of the live boxes uniformly.
template <typename T>
SearcherPolicy<T> searcher_uniform_adaptive(int n) {
  if (n < 1) throw invalid_instance_error("need at least one box");
  auto opens = std::make_shared<std::vector<PolicyPtr<T>>>();
  PolicyPtr<T> root = make_adaptive<T>([opens](const InfoState& s) ->
                                       typename PolicyNode<T>::Choice {
    int live = 0;
    for (int i = 0; i < s.boxes(); ++i)
      if (s.live(i)) ++live;
    typename PolicyNode<T>::Chance mix;
    for (int i = 0; i < s.boxes(); ++i)
      if (s.live(i)) mix.branches.emplace_back(T(1) / T(live), (*opens)[i]);
    return mix;
  });
  for (int i = 0; i < n; ++i)
    opens->push_back(std::make_shared<detail::BounceNode<T>>(
        i, std::weak_ptr<const PolicyNode<T>>(root)));
  return {std::move(root), "uniform over live boxes"};
}

// Plays a fixed search sequence with the skip rule.
template <typename T>
SearcherPolicy<T> policy_from_sequence(const std::vector<int>& seq, int n) {
  for (int b : seq)
    if (b < 0 || b >= n) throw invalid_order_error("sequence contains a box out of range");
  PolicyPtr<T> node = make_stop<T>();
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
    const int box = *it;
    PolicyPtr<T> next = std::move(node);
    node = make_adaptive<T>([box, next](const InfoState& s) ->
                            typename PolicyNode<T>::Choice {
      if (s.dead[box]) return next->choose(s);  // skip rule
      return typename PolicyNode<T>::Open{box, next, next};
    });
  }
  return {std::move(node), "fixed search sequence"};
}

template <typename T>
SearcherPolicy<T> policy_from_normal(const NormalStrategy<T>& ns, int n) {
  if (ns.mixture.empty()) throw invalid_instance_error("normal strategy has empty mixture");
  std::vector<std::pair<T, PolicyPtr<T>>> branches;
  for (const auto& [seq, w] : ns.mixture)
    branches.emplace_back(w, policy_from_sequence<T>(seq, n).root);
  return {make_chance<T>(std::move(branches)),
          ns.description.empty() ? "normal strategy" : ns.description};
}

// Optimal normal strategy for k = 1: play a uniformly random order among the
// sequences ending at box j, with probability c_j / sum_t c_t.
template <typename T>
NormalStrategy<T> searcher_normal_k1(const std::vector<T>& costs) {
  validate_costs(costs);
  const int n = static_cast<int>(costs.size());
  T total(0);
  for (const T& c : costs) total += c;
  long long fact = 1;
  for (int i = 2; i < n; ++i) fact *= i;  // (n-1)!
  NormalStrategy<T> ns;
  ns.description = "k=1 normal strategy (last box weighted by cost)";
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    ns.mixture.emplace_back(perm, costs[perm.back()] / (total * T(fact)));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return ns;
}

namespace detail {

inline void foreach_permutation(std::vector<int> items,
                                const std::function<void(const std::vector<int>&)>& f) {
  std::sort(items.begin(), items.end());
  if (items.empty()) {
    f(items);
    return;
  }
  do {
    f(items);
  } while (std::next_permutation(items.begin(), items.end()));
}

}  // namespace detail

// The ending-pattern strategy T_y of the k = 2 normal solution: fixes the
// last two opens to the pattern y and randomizes the start so that the
// expected regret is symmetric in (y, hider allocation).
template <typename T>
NormalStrategy<T> normal_k2_pattern(const std::vector<T>& costs, const Allocation& y) {
  validate_costs(costs);
  const int n = static_cast<int>(costs.size());
  if (static_cast<int>(y.size()) != n || total_balls(y) != 2)
    throw invalid_instance_error("ending pattern must place exactly two opens");
  NormalStrategy<T> ns;
  std::vector<int> two, one, others;
  for (int i = 0; i < n; ++i) {
    if (y[i] == 2) two.push_back(i);
    else if (y[i] == 1) one.push_back(i);
    else if (y[i] == 0) others.push_back(i);
    else throw invalid_instance_error("ending pattern entries must be 0, 1 or 2");
  }
  if (!two.empty()) {
    // y = 2 e_i: start with paired opens of every other box in random order.
    const int i = two[0];
    ns.description = "ending pattern: twice box " + std::to_string(i + 1);
    long long count = 0;
    detail::foreach_permutation(others, [&](const std::vector<int>&) { ++count; });
    const T w = T(1) / T(count);
    detail::foreach_permutation(others, [&](const std::vector<int>& rho) {
      std::vector<int> seq;
      for (int b : rho) {
        seq.push_back(b);
        seq.push_back(b);
      }
      seq.push_back(i);
      seq.push_back(i);
      ns.mixture.emplace_back(std::move(seq), w);
    });
  } else {
    // y = e_i + e_j: three equally likely starts per Definition 1.
    const int i = one[0], j = one[1];
    ns.description =
        "ending pattern: boxes " + std::to_string(i + 1) + " and " + std::to_string(j + 1);
    long long n_others = 0, n_all = 0;
    detail::foreach_permutation(others, [&](const std::vector<int>&) { ++n_others; });
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    detail::foreach_permutation(all, [&](const std::vector<int>&) { ++n_all; });
    const T third = T(1) / T(3);
    const T wa = third / (T(n_others) * T(n_all));
    detail::foreach_permutation(others, [&](const std::vector<int>& alpha) {
      detail::foreach_permutation(all, [&](const std::vector<int>& beta) {
        std::vector<int> seq(alpha);
        seq.insert(seq.end(), beta.begin(), beta.end());
        seq.push_back(i);
        seq.push_back(j);
        ns.mixture.emplace_back(std::move(seq), wa);
      });
    });
    const T wb = third / T(n_others);
    for (int first : {i, j}) {
      const int second = first == i ? j : i;
      detail::foreach_permutation(others, [&](const std::vector<int>& gamma) {
        std::vector<int> seq{first};
        for (int b : gamma) {
          seq.push_back(b);
          seq.push_back(b);
        }
        seq.push_back(second);
        seq.push_back(i);
        seq.push_back(j);
        ns.mixture.emplace_back(std::move(seq), wb);
      });
    }
  }
  return ns;
}

// Optimal searcher for the multi-look regret game with k = 2: mix the ending
// patterns T_y with the Eq.-(1) weights prod c_i^{y_i} / T_2([n]).
template <typename T>
SearcherPolicy<T> searcher_normal_k2(const std::vector<T>& costs) {
  validate_costs(costs);
  const int n = static_cast<int>(costs.size());
  const T t2 = complete_homogeneous(costs, 2);
  std::vector<std::pair<T, PolicyPtr<T>>> branches;
  for (const Allocation& y : enumerate_allocations(n, 2, LookMode::multi)) {
    T w = allocation_monomial(costs, y) / t2;
    branches.emplace_back(std::move(w), policy_from_normal(normal_k2_pattern(costs, y), n).root);
  }
  return {make_chance<T>(std::move(branches)), "k=2 normal strategy (ending-pattern mixture)"};
}

// Single-look regret policy for k = n-1 (costs sorted decreasing): open the
// prefilled boxes b+1..n first; any empty reveal there pins the rest, so
// finish deterministically; otherwise save box j for last with the q_b(j)
// weights.
template <typename T>
SearcherPolicy<T> searcher_single_regret_full(const std::vector<T>& costs) {
  const int n = static_cast<int>(costs.size());
  const int b = cutoff_b_single(costs).b;  // validates order
  std::vector<T> prefix(costs.begin(), costs.begin() + b);
  const std::vector<T> q = single_regret_last_box_weights(prefix);
  for (const T& w : q)
    if (w < T(0)) throw std::logic_error("negative last-box weight despite cutoff");

  // Opens `boxes` in order, ignoring outcomes (used once nothing can branch).
  auto chain = [](const std::vector<int>& boxes) {
    PolicyPtr<T> node = make_stop<T>();
    for (auto it = boxes.rbegin(); it != boxes.rend(); ++it)
      node = make_open<T>(*it, node, node);
    return node;
  };

  // Last-box mixture over boxes 1..b.
  std::vector<std::pair<T, PolicyPtr<T>>> branches;
  for (int j = 0; j < b; ++j) {
    std::vector<int> order;
    for (int t = 0; t < b; ++t)
      if (t != j) order.push_back(t);
    order.push_back(j);
    branches.emplace_back(q[j], chain(order));
  }
  PolicyPtr<T> mixture = make_chance<T>(std::move(branches));

  // Prefill phase: open boxes b..n-1 (0-based); an empty reveal at box i
  // means every other box holds a ball, so finish the remaining boxes in
  // fixed order.
  PolicyPtr<T> node = mixture;
  for (int i = n - 1; i >= b; --i) {
    std::vector<int> rest;
    for (int t = i + 1; t < n; ++t) rest.push_back(t);
    for (int t = 0; t < b; ++t) rest.push_back(t);
    node = make_open<T>(i, node, chain(rest));
  }
  return {std::move(node), "prefill sweep then saved-box mixture"};
}

// ---------------------------------------------------------------------------
// Cost-order canonicalization
// ---------------------------------------------------------------------------

// Indices that sort `costs` into (weakly) decreasing order, ties stable.
template <typename T>
std::vector<int> decreasing_order(const std::vector<T>& costs) {
  std::vector<int> order(costs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return costs[b] < costs[a]; });
  return order;
}

template <typename T>
std::vector<T> permute_costs(const std::vector<T>& costs, const std::vector<int>& order) {
  std::vector<T> out(costs.size());
  for (std::size_t i = 0; i < order.size(); ++i) out[i] = costs[order[i]];
  return out;
}

// Maps a hider built on sorted costs back to the caller's box order:
// sorted index i corresponds to original box order[i].
template <typename T>
HiderMixed<T> relabel_hider(const HiderMixed<T>& hm, const std::vector<int>& order) {
  HiderMixed<T> out;
  out.description = hm.description;
  for (const auto& [x, p] : hm.support) {
    Allocation y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[order[i]] = x[i];
    out.support.emplace_back(std::move(y), p);
  }
  std::sort(out.support.begin(), out.support.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

namespace detail {

// Presents a policy built on sorted costs as one on the caller's box order.
// Wrapped successor nodes are cached so engine memoization stays effective.
template <typename T>
class RelabelNode final : public PolicyNode<T> {
 public:
  struct Shared {
    std::vector<int> order;  // sorted index -> original box
    std::unordered_map<std::uint64_t, PolicyPtr<T>> cache;
    std::mutex mu;
  };

  RelabelNode(PolicyPtr<T> inner, std::shared_ptr<Shared> shared)
      : inner_(std::move(inner)), shared_(std::move(shared)) {}

  typename PolicyNode<T>::Choice choose(const InfoState& s) const override {
    InfoState t = s;
    for (int i = 0; i < s.boxes(); ++i) {
      t.found[i] = s.found[shared_->order[i]];
      t.dead[i] = s.dead[shared_->order[i]];
    }
    typename PolicyNode<T>::Choice c = inner_->choose(t);
    if (auto* mix = std::get_if<typename PolicyNode<T>::Chance>(&c)) {
      for (auto& [w, child] : mix->branches) child = wrap(child, shared_);
      return c;
    }
    if (auto* open = std::get_if<typename PolicyNode<T>::Open>(&c)) {
      return typename PolicyNode<T>::Open{shared_->order[open->box],
                                          wrap(open->on_found, shared_),
                                          wrap(open->on_empty, shared_)};
    }
    return c;
  }

  static PolicyPtr<T> wrap(const PolicyPtr<T>& inner, const std::shared_ptr<Shared>& shared) {
    if (!inner) return inner;
    std::lock_guard<std::mutex> lock(shared->mu);
    auto it = shared->cache.find(inner->id());
    if (it != shared->cache.end()) return it->second;
    auto node = std::make_shared<RelabelNode<T>>(inner, shared);
    shared->cache.emplace(inner->id(), node);
    return node;
  }

 private:
  PolicyPtr<T> inner_;
  std::shared_ptr<Shared> shared_;
};

}  // namespace detail

template <typename T>
SearcherPolicy<T> relabel_policy(const SearcherPolicy<T>& p, const std::vector<int>& order) {
  bool identity = true;
  for (std::size_t i = 0; i < order.size(); ++i) identity = identity && order[i] == static_cast<int>(i);
  if (identity) return p;
  auto shared = std::make_shared<typename detail::RelabelNode<T>::Shared>();
  shared->order = order;
  return {detail::RelabelNode<T>::wrap(p.root, shared), p.description + " (relabeled)"};
}

}  // namespace boxsearch
