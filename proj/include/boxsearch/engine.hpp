#pragma once

#include <unordered_map>
#include <utility>
#include <vector>

#include "boxsearch/model.hpp"
#include "boxsearch/policy.hpp"

namespace boxsearch {

template <typename T>
struct EvalResult {
  T expected_payoff{0};
  long long node_count = 0;  // distinct (policy node, info state) pairs
};

template <typename T>
struct MixedEvalResult {
  T expected_payoff{0};
  long long node_count = 0;
  std::vector<std::pair<Allocation, T>> breakdown;  // conditional payoff per allocation
};

namespace detail {

struct NodeStateHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const {
    std::uint64_t h = k.first * 0x9e3779b97f4a7c15ULL;
    h ^= k.second + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace detail

// Computes the exact expected payoff of a policy against a fixed allocation:
// outcomes are deterministic given x (opening box i yields a ball iff
// found_i < x_i), so the only randomness is the policy's own mixing.
template <typename T>
class Evaluator {
 public:
  Evaluator(std::vector<T> costs, GameVariant variant)
      : costs_(std::move(costs)), variant_(variant) {
    validate_costs(costs_);
  }

  EvalResult<T> run(const PolicyPtr<T>& root, const Allocation& x) {
    const int n = static_cast<int>(costs_.size());
    if (static_cast<int>(x.size()) != n) throw invalid_instance_error("allocation length mismatch");
    const int k = total_balls(x);
    check_state_packable(n, k);
    for (int b : x) {
      if (b < 0) throw invalid_instance_error("negative ball count");
      if (variant_.look == LookMode::single && b > 1)
        throw invalid_instance_error("single-look allocations are 0/1 vectors");
    }
    memo_.clear();
    x_ = &x;
    InfoState s = initial_state(n, k);
    EvalResult<T> result;
    result.expected_payoff = eval(root, s, 0);
    result.node_count = static_cast<long long>(memo_.size());
    return result;
  }

 private:
  T eval(const PolicyPtr<T>& node, InfoState& s, int depth) {
    if (s.remaining == 0) return T(0);
    if (!node) throw policy_violation_error("policy has no successor for a reachable state");
    if (depth > kMaxDepth) throw policy_violation_error("policy does not make progress");
    const std::pair<std::uint64_t, std::uint64_t> key{node->id(), s.key()};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    typename PolicyNode<T>::Choice choice = node->choose(s);
    T out(0);
    if (auto* stop = std::get_if<typename PolicyNode<T>::Stop>(&choice)) {
      (void)stop;
      throw policy_violation_error("policy stopped before finding all balls");
    } else if (auto* mix = std::get_if<typename PolicyNode<T>::Chance>(&choice)) {
      T total(0);
      for (const auto& [w, child] : mix->branches) {
        if (w < T(0)) throw policy_violation_error("negative branch probability");
        if (w == T(0)) continue;
        total += w;
        out += w * eval(child, s, depth + 1);
      }
      check_distribution(total);
    } else {
      const auto& open = std::get<typename PolicyNode<T>::Open>(choice);
      const int i = open.box;
      if (i < 0 || i >= s.boxes()) throw policy_violation_error("policy opened a box out of range");
      if (s.dead[i]) throw policy_violation_error("policy opened an exhausted box");
      const bool ball = s.found[i] < (*x_)[i];
      if (ball) {
        if (variant_.payoff == PayoffMode::cost) out += costs_[i];
        ++s.found[i];
        --s.remaining;
        const bool exhaust = variant_.look == LookMode::single;
        if (exhaust) s.dead[i] = 1;
        out += eval(open.on_found, s, depth + 1);
        if (exhaust) s.dead[i] = 0;
        ++s.remaining;
        --s.found[i];
      } else {
        out += costs_[i];  // both payoff modes charge an empty-reveal
        s.dead[i] = 1;
        out += eval(open.on_empty, s, depth + 1);
        s.dead[i] = 0;
      }
    }
    memo_.emplace(key, out);
    return out;
  }

  void check_distribution(const T& total) const {
    if constexpr (num_traits<T>::exact) {
      if (total != T(1)) throw policy_violation_error("branch probabilities do not sum to 1");
    } else {
      if (abs_value(total - T(1)) > T(1e-9))
        throw policy_violation_error("branch probabilities do not sum to 1");
    }
  }

  static constexpr int kMaxDepth = 10000;
  std::vector<T> costs_;
  GameVariant variant_;
  const Allocation* x_ = nullptr;
  std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, T, detail::NodeStateHash> memo_;
};

template <typename T>
EvalResult<T> evaluate(const SearcherPolicy<T>& policy, const Allocation& x,
                       const std::vector<T>& costs, GameVariant variant) {
  Evaluator<T> ev(costs, variant);
  return ev.run(policy.root, x);
}

// Expectation over a mixed hider: support-weighted sum of pure evaluations.
template <typename T>
MixedEvalResult<T> evaluate_mixed(const SearcherPolicy<T>& policy, const HiderMixed<T>& hider,
                                  const std::vector<T>& costs, GameVariant variant) {
  if (hider.support.empty()) throw invalid_instance_error("hider strategy has empty support");
  Evaluator<T> ev(costs, variant);
  MixedEvalResult<T> out;
  T mass(0);
  for (const auto& [x, p] : hider.support) {
    if (p < T(0)) throw invalid_instance_error("negative hider probability");
    EvalResult<T> r = ev.run(policy.root, x);
    out.expected_payoff += p * r.expected_payoff;
    out.node_count += r.node_count;
    out.breakdown.emplace_back(x, r.expected_payoff);
    mass += p;
  }
  if constexpr (num_traits<T>::exact) {
    if (mass != T(1)) throw invalid_instance_error("hider probabilities do not sum to 1");
  } else {
    if (abs_value(mass - T(1)) > T(1e-9))
      throw invalid_instance_error("hider probabilities do not sum to 1");
  }
  return out;
}

// Validates a multi-look search sequence (each box exactly k times, 0-based)
// or a single-look one (a permutation of the boxes).
inline void validate_sequence(const std::vector<int>& seq, int n, int k, LookMode look) {
  std::vector<int> count(n, 0);
  for (int b : seq) {
    if (b < 0 || b >= n) throw invalid_order_error("sequence contains a box out of range");
    ++count[b];
  }
  const int want = look == LookMode::multi ? k : 1;
  const std::size_t want_len = static_cast<std::size_t>(n) * static_cast<std::size_t>(want);
  if (seq.size() != want_len) throw invalid_order_error("sequence has the wrong length");
  for (int c : count)
    if (c != want) throw invalid_order_error("sequence has wrong box multiplicities");
}

// Total regret R(a, x) of following sequence `a` with the skip rule: a box
// known to be exhausted is skipped; play stops once all balls are found.
template <typename T>
T sequence_regret(const std::vector<int>& seq, const Allocation& x, const std::vector<T>& costs,
                  LookMode look = LookMode::multi) {
  validate_costs(costs);
  const int n = static_cast<int>(costs.size());
  if (static_cast<int>(x.size()) != n) throw invalid_instance_error("allocation length mismatch");
  int k = total_balls(x);
  if (look == LookMode::single)
    for (int b : x)
      if (b > 1) throw invalid_instance_error("single-look allocations are 0/1 vectors");
  validate_sequence(seq, n, look == LookMode::multi ? k : 1, look);
  std::vector<int> found(n, 0);
  std::vector<char> dead(n, 0);
  T regret(0);
  int remaining = k;
  for (int b : seq) {
    if (remaining == 0) break;
    if (dead[b]) continue;  // skip rule
    if (found[b] < x[b]) {
      ++found[b];
      --remaining;
      if (look == LookMode::single) dead[b] = 1;
    } else {
      regret += costs[b];
      dead[b] = 1;
    }
  }
  if (remaining != 0) throw invalid_order_error("sequence does not cover the allocation");
  return regret;
}

template <typename T>
struct NormalStrategy {
  std::vector<std::pair<std::vector<int>, T>> mixture;  // (sequence, probability)
  std::string description;
};

template <typename T>
T normal_expected_regret(const NormalStrategy<T>& m, const Allocation& x,
                         const std::vector<T>& costs, LookMode look = LookMode::multi) {
  if (m.mixture.empty()) throw invalid_instance_error("normal strategy has empty mixture");
  T out(0), mass(0);
  for (const auto& [seq, w] : m.mixture) {
    if (w < T(0)) throw invalid_instance_error("negative mixture probability");
    out += w * sequence_regret(seq, x, costs, look);
    mass += w;
  }
  if constexpr (num_traits<T>::exact) {
    if (mass != T(1)) throw invalid_instance_error("mixture probabilities do not sum to 1");
  } else {
    if (abs_value(mass - T(1)) > T(1e-9))
      throw invalid_instance_error("mixture probabilities do not sum to 1");
  }
  return out;
}

}  // namespace boxsearch
