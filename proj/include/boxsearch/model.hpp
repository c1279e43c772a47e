#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "boxsearch/number.hpp"

namespace boxsearch {

// A hider places k balls into n boxes; the searcher opens boxes (paying the
// box cost each time) until every ball is found.  "multi" look allows several
// balls per box and each open uncovers at most one of them; "single" look
// allows at most one ball per box.  Under "cost" the payoff is the total cost
// spent; under "regret" it is the total cost minus the clairvoyant cost of
// retrieving the balls from known locations.
enum class LookMode { multi, single };
enum class PayoffMode { cost, regret };

struct GameVariant {
  LookMode look = LookMode::multi;
  PayoffMode payoff = PayoffMode::cost;

  bool operator==(const GameVariant&) const = default;
};

inline constexpr GameVariant kMultiCost{LookMode::multi, PayoffMode::cost};
inline constexpr GameVariant kMultiRegret{LookMode::multi, PayoffMode::regret};
inline constexpr GameVariant kSingleCost{LookMode::single, PayoffMode::cost};
inline constexpr GameVariant kSingleRegret{LookMode::single, PayoffMode::regret};

inline std::string to_string(GameVariant v) {
  std::string s = v.look == LookMode::multi ? "multi-" : "single-";
  s += v.payoff == PayoffMode::cost ? "cost" : "regret";
  return s;
}

inline GameVariant variant_from_string(std::string_view s) {
  if (s == "multi-cost") return kMultiCost;
  if (s == "multi-regret") return kMultiRegret;
  if (s == "single-cost") return kSingleCost;
  if (s == "single-regret") return kSingleRegret;
  throw invalid_instance_error("unknown variant '" + std::string(s) +
                               "' (expected multi-cost, multi-regret, single-cost or single-regret)");
}

// x[i] = number of balls hidden in box i (0-based internally, box 1 in text).
using Allocation = std::vector<int>;

template <typename T>
void validate_costs(const std::vector<T>& costs) {
  if (costs.empty()) throw invalid_instance_error("need at least one box");
  for (const T& c : costs)
    if (!(c > T(0))) throw invalid_instance_error("box costs must be positive");
}

template <typename T>
struct Instance {
  std::vector<T> costs;
  int balls = 0;
  GameVariant variant;

  int boxes() const { return static_cast<int>(costs.size()); }

  void validate() const {
    validate_costs(costs);
    if (balls < 0) throw invalid_instance_error("ball count must be nonnegative");
    if (variant.look == LookMode::single && balls > boxes())
      throw invalid_instance_error("single-look games need at most one ball per box");
  }
};

inline long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// All ball placements in lexicographic order, e.g. n=2,k=2 multi-look gives
// (0,2),(1,1),(2,0).  Single-look restricts every coordinate to {0,1}.
inline std::vector<Allocation> enumerate_allocations(int n, int k, LookMode look) {
  if (n < 1) throw invalid_instance_error("need at least one box");
  if (k < 0) throw invalid_instance_error("ball count must be nonnegative");
  if (look == LookMode::single && k > n)
    throw invalid_instance_error("single-look games need at most one ball per box");
  std::vector<Allocation> out;
  Allocation x(n, 0);
  const int cap = look == LookMode::single ? 1 : k;
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == n - 1) {
      if (left <= cap) {
        x[i] = left;
        out.push_back(x);
      }
      return;
    }
    for (int b = 0; b <= std::min(left, cap); ++b) {
      x[i] = b;
      self(self, i + 1, left - b);
    }
  };
  rec(rec, 0, k);
  return out;
}

// Cost of retrieving the balls when the searcher knows the allocation: each
// ball in box i takes one open of box i.
template <typename T>
T clairvoyant_cost(const Allocation& x, const std::vector<T>& costs) {
  if (x.size() != costs.size()) throw invalid_instance_error("allocation/cost size mismatch");
  T total(0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0) throw invalid_instance_error("negative ball count");
    total += T(x[i]) * costs[i];
  }
  return total;
}

inline int total_balls(const Allocation& x) { return std::accumulate(x.begin(), x.end(), 0); }

// A mixed hider strategy: probability over allocations, support kept in
// lexicographic order with strictly positive weights.
template <typename T>
struct HiderMixed {
  std::vector<std::pair<Allocation, T>> support;
  std::string description;

  T total_mass() const {
    T m(0);
    for (const auto& [x, p] : support) m += p;
    return m;
  }
};

// What the searcher has observed so far: how many balls each box has yielded
// and which boxes have come up empty ("dead" -- a dead box holds nothing
// more under either look mode).  `remaining` counts balls still hidden.
struct InfoState {
  std::vector<int> found;
  std::vector<std::uint8_t> dead;
  int remaining = 0;

  int boxes() const { return static_cast<int>(found.size()); }
  bool live(int i) const { return !dead[i]; }
  int balls_found() const { return std::accumulate(found.begin(), found.end(), 0); }

  bool operator==(const InfoState&) const = default;

  // Packs the state into 5 bits per box (4 for the found count, 1 for the
  // dead flag); the engine rejects instances too large for this.
  std::uint64_t key() const {
    std::uint64_t k = 0;
    for (int i = 0; i < boxes(); ++i) {
      k = (k << 5) | (static_cast<std::uint64_t>(found[i]) << 1) | (dead[i] ? 1u : 0u);
    }
    return k;
  }
};

inline InfoState initial_state(int n, int k) {
  InfoState s;
  s.found.assign(n, 0);
  s.dead.assign(n, 0);
  s.remaining = k;
  return s;
}

inline void check_state_packable(int n, int k) {
  if (n > 12 || k > 15)
    throw invalid_instance_error("instance too large (at most 12 boxes and 15 balls)");
}

}  // namespace boxsearch
