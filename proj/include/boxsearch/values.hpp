#pragma once

#include <vector>

#include "boxsearch/model.hpp"
#include "boxsearch/symfun.hpp"

namespace boxsearch {

// Expected cost of the multi-look cost game under the hider's equalizing
// strategy, U([n],k) = k * T_{k+1} / T_k.  This equals the game value
// whenever the equalizing strategy is optimal (e.g. equal costs, or n=2 with
// c2/c1 above the cutoff root).
template <typename T>
T value_multi_cost_equalizing(const std::vector<T>& costs, int k) {
  validate_costs(costs);
  if (k < 0) throw invalid_instance_error("ball count must be nonnegative");
  if (k == 0) return T(0);
  const int n = static_cast<int>(costs.size());
  auto tab = sym_table(costs, k + 1, SymKind::complete);
  return T(k) * tab.at(k + 1, n) / tab.at(k, n);
}

// Value of the multi-look cost game with n unit-cost boxes:
// (n+k)(1 - 1/(k+1)).
template <typename T>
T value_equal_cost(int n, int k) {
  if (n < 1) throw invalid_instance_error("need at least one box");
  if (k < 0) throw invalid_instance_error("ball count must be nonnegative");
  return T(n + k) * T(k) / T(k + 1);
}

// Value of the multi-look regret game, V([n],k) = T_1 - T_{k+1}/T_k.
template <typename T>
T value_multi_regret(const std::vector<T>& costs, int k) {
  validate_costs(costs);
  if (k < 0) throw invalid_instance_error("ball count must be nonnegative");
  const int n = static_cast<int>(costs.size());
  auto tab = sym_table(costs, k + 1, SymKind::complete);
  return tab.at(1, n) - tab.at(k + 1, n) / tab.at(k, n);
}

// Expected regret of the single-look game under the hider's equalizing
// strategy, W([n],k) = k * S_{k+1} / S_k.  Equals the game value when the
// equalizing strategy is optimal (e.g. k = n-1 with the last cutoff
// condition satisfied, or k = 1, or k = n).
template <typename T>
T value_single_regret(const std::vector<T>& costs, int k) {
  validate_costs(costs);
  const int n = static_cast<int>(costs.size());
  if (k < 0 || k > n)
    throw invalid_instance_error("single-look games need 0 <= balls <= boxes");
  if (k == 0 || k == n) return T(0);
  auto tab = sym_table(costs, k + 1, SymKind::elementary);
  return T(k) * tab.at(k + 1, n) / tab.at(k, n);
}

// f_m(r) = -(m-1) + r + r^2 + ... + r^m.  For m >= 2 it has a unique root
// r_m in (0,1), and r_2 < r_3 < ... ; by convention r_1 = 0.
template <typename T>
T fm_value(int m, const T& r) {
  if (m < 1) throw invalid_instance_error("f_m needs m >= 1");
  T sum(1 - m);
  T power(1);
  for (int i = 1; i <= m; ++i) {
    power *= r;
    sum += power;
  }
  return sum;
}

// Root r_m of f_m in (0,1) by bisection to within `tol`; r_1 = 0 exactly.
inline double root_fm(int m, double tol = 1e-12) {
  if (m < 1) throw invalid_instance_error("f_m needs m >= 1");
  if (m == 1) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (fm_value(m, mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Cutoff index plus the threshold sequence that determined it (r_m roots or
// a_m values, converted to double for display) and the resulting game value.
template <typename T>
struct ThresholdResult {
  int b = 0;
  std::vector<double> sequence;
  T value{0};
};

// Mixture weights q_k(j) = 1 - k * c1^{k-j} c2^j / T_k([2]) over j = 0..k for
// the two-box multi-look cost game ("open box 1 at most j times").
// Non-negative exactly when c2/c1 >= r_k.
template <typename T>
std::vector<T> n2_commit_weights(const T& c1, const T& c2, int k) {
  if (!(c1 > T(0)) || !(c2 > T(0))) throw invalid_instance_error("box costs must be positive");
  if (k < 1) throw invalid_instance_error("weights need at least one ball");
  const T t_k = complete_homogeneous(std::vector<T>{c1, c2}, k);
  std::vector<T> q(k + 1);
  T mono = T(1);
  for (int i = 0; i < k; ++i) mono *= c1;  // c1^k
  for (int j = 0; j <= k; ++j) {
    q[j] = T(1) - T(k) * mono / t_k;
    mono = mono / c1 * c2;  // advance to c1^(k-j-1) c2^(j+1)
  }
  return q;
}

// Largest m in {1,...,k} with r_m <= c2/c1, i.e. with f_m(c2/c1) >= 0 (with
// the convention r_1 = 0).  The hider of the two-box multi-look cost game
// sets aside k-b balls for box 1 and the game value is (k-b)c1 + U([2],b).
// The decision is exact in rational mode: only signs of f_m at the cost
// ratio are used; the returned root sequence is informational.
template <typename T>
ThresholdResult<T> cutoff_b_multi_n2(const T& c1, const T& c2, int k) {
  if (!(c1 > T(0)) || !(c2 > T(0))) throw invalid_instance_error("box costs must be positive");
  if (c2 > c1) throw invalid_order_error("two-box cutoff expects c1 >= c2");
  if (k < 1) throw invalid_instance_error("cutoff needs at least one ball");
  const T r = c2 / c1;
  ThresholdResult<T> res;
  res.b = 1;
  res.sequence.push_back(0.0);  // r_1
  for (int m = 2; m <= k; ++m) {
    res.sequence.push_back(root_fm(m));
    if (res.b == m - 1 && fm_value(m, r) >= T(0)) res.b = m;
  }
  if (res.b == k) {
    // Equalizing regime: q_k(0) >= 0 must hold (Lemma 2's condition).
    if (n2_commit_weights(c1, c2, k)[0] < T(0))
      throw std::logic_error("cutoff inconsistency: q_k(0) < 0 despite b = k");
  }
  res.value = T(k - res.b) * c1 +
              value_multi_cost_equalizing(std::vector<T>{c1, c2}, res.b);
  return res;
}

// a_m = sum_{i<m} 1/c_i - (m-2)/c_m for costs sorted in decreasing order;
// weakly decreasing in m.  b = max {m: a_m >= 0} tells the hider of the
// single-look regret game with k = n-1 to prefill boxes b+1..n (b >= 2
// always since a_2 = 1/c_1 > 0); the game value is W([b], b-1).
template <typename T>
ThresholdResult<T> cutoff_b_single(const std::vector<T>& costs) {
  validate_costs(costs);
  const int n = static_cast<int>(costs.size());
  if (n < 2) throw invalid_instance_error("cutoff needs at least two boxes");
  for (int i = 1; i < n; ++i)
    if (costs[i] > costs[i - 1])
      throw invalid_order_error("single-look cutoff expects costs sorted in decreasing order");
  ThresholdResult<T> res;
  res.b = 2;
  T inv_sum = T(1) / costs[0];  // sum_{i<m} 1/c_i as m grows
  res.sequence.push_back(to_double(inv_sum));  // a_2 = 1/c_1
  for (int m = 3; m <= n; ++m) {
    inv_sum += T(1) / costs[m - 2];
    const T a_m = inv_sum - T(m - 2) / costs[m - 1];
    res.sequence.push_back(to_double(a_m));
    if (res.b == m - 1 && a_m >= T(0)) res.b = m;
  }
  std::vector<T> prefix(costs.begin(), costs.begin() + res.b);
  res.value = value_single_regret(prefix, res.b - 1);
  return res;
}

// Total cost in the two-box multi-look cost game when the hider puts i balls
// in box 1 and the searcher opens box 1 at most j times before committing to
// box 2 (returning to box 1 afterwards if needed), for i,j in 0..k.
template <typename T>
T n2_cost_matrix_entry(int i, int j, const T& c1, const T& c2, int k) {
  if (i < 0 || i > k || j < 0 || j > k) throw invalid_instance_error("matrix entry out of range");
  T base = T(i) * c1 + T(k - i) * c2;
  if (i < j) return base + c1;  // box 1 turns up empty once
  if (i > j) return base + c2;  // box 2 turns up empty once
  return base;
}

// Matrix of the box-n reduction of the multi-look regret game: the hider
// picks row t (balls in box n), the searcher picks column s (maximum opens
// of box n before setting it aside), both in 0..k.
template <typename T>
std::vector<std::vector<T>> regret_reduction_matrix(const std::vector<T>& costs, int k) {
  validate_costs(costs);
  if (k < 0) throw invalid_instance_error("ball count must be nonnegative");
  const int n = static_cast<int>(costs.size());
  if (n < 2) throw invalid_instance_error("reduction needs at least two boxes");
  std::vector<T> rest(costs.begin(), costs.end() - 1);
  T rest_sum(0);
  for (const T& c : rest) rest_sum += c;
  const T& cn = costs.back();
  std::vector<std::vector<T>> m(k + 1, std::vector<T>(k + 1));
  for (int t = 0; t <= k; ++t) {
    const T v_rest = value_multi_regret(rest, k - t);
    for (int s = 0; s <= k; ++s) {
      if (t < s) {
        m[t][s] = cn + v_rest;
      } else if (t == s) {
        m[t][s] = v_rest;
      } else {
        m[t][s] = rest_sum;
      }
    }
  }
  return m;
}

// Column weights P_s, s = 0..k, that make the reduction matrix rows equal:
// P_s = [T_{k-s}([n])/T_{k-s+1}([n-1]) - T_{k-s-1}([n])/T_{k-s}([n-1])]
//       / [T_k([n])/T_{k+1}([n-1])].
// Needs n >= 2; the one-box game degenerates to opening box 1 throughout.
template <typename T>
std::vector<T> regret_reduction_weights(const std::vector<T>& costs, int k) {
  validate_costs(costs);
  if (k < 0) throw invalid_instance_error("ball count must be nonnegative");
  const int n = static_cast<int>(costs.size());
  if (n < 2) throw invalid_instance_error("reduction needs at least two boxes");
  auto tab = sym_table(costs, k + 1, SymKind::complete);
  const T denom = tab.at(k, n) / tab.at(k + 1, n - 1);
  std::vector<T> p(k + 1);
  for (int s = 0; s <= k; ++s) {
    T term = tab.at(k - s, n) / tab.at(k - s + 1, n - 1);
    if (k - s - 1 >= 0) term -= tab.at(k - s - 1, n) / tab.at(k - s, n - 1);
    p[s] = term / denom;
  }
  return p;
}

// Last-box weights for the single-look regret game with k = n-1:
// q_n(j) = 1 - ((n-1)/c_j) / sum_i (1/c_i).
template <typename T>
std::vector<T> single_regret_last_box_weights(const std::vector<T>& costs) {
  validate_costs(costs);
  const int n = static_cast<int>(costs.size());
  T inv_sum(0);
  for (const T& c : costs) inv_sum += T(1) / c;
  std::vector<T> q(n);
  for (int j = 0; j < n; ++j) q[j] = T(1) - (T(n - 1) / costs[j]) / inv_sum;
  return q;
}

}  // namespace boxsearch
