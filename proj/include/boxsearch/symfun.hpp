#pragma once

#include <vector>

#include "boxsearch/number.hpp"

namespace boxsearch {

enum class SymKind { complete, elementary };

// Prefix table of symmetric polynomials in the box costs.
//
// complete:    T_j([m]) = sum over multisets of size j from costs 1..m of the
//              product, via T_j([m]) = c_m * T_{j-1}([m]) + T_j([m-1]).
// elementary:  S_j([m]) = sum over subsets of size j from costs 1..m of the
//              product, via S_j([m]) = c_m * S_{j-1}([m-1]) + S_j([m-1]).
//
// Degrees run 0..k_max and prefixes 0..n; degree -1 reads as 0 by convention.
template <typename T>
class SymTable {
 public:
  SymTable(std::vector<T> costs, int k_max, SymKind kind)
      : costs_(std::move(costs)), k_max_(k_max), kind_(kind) {
    validate_costs_nonempty();
    if (k_max_ < 0) throw invalid_instance_error("symmetric table needs degree >= 0");
    const int n = boxes();
    table_.assign(k_max_ + 1, std::vector<T>(n + 1, T(0)));
    for (int m = 0; m <= n; ++m) table_[0][m] = T(1);
    for (int j = 1; j <= k_max_; ++j) {
      for (int m = 1; m <= n; ++m) {
        const T& c = costs_[m - 1];
        if (kind_ == SymKind::complete) {
          table_[j][m] = c * table_[j - 1][m] + table_[j][m - 1];
        } else {
          table_[j][m] = c * table_[j - 1][m - 1] + table_[j][m - 1];
        }
      }
    }
  }

  int boxes() const { return static_cast<int>(costs_.size()); }
  int max_degree() const { return k_max_; }
  SymKind kind() const { return kind_; }
  const std::vector<T>& costs() const { return costs_; }

  // Value of the degree-j polynomial over the first `prefix` costs.
  const T& at(int degree, int prefix) const {
    static const T zero(0);
    if (prefix < 0 || prefix > boxes()) throw invalid_instance_error("prefix out of range");
    if (degree == -1) return zero;
    if (degree < 0 || degree > k_max_) throw invalid_instance_error("degree out of range");
    return table_[degree][prefix];
  }

 private:
  void validate_costs_nonempty() const {
    for (const T& c : costs_)
      if (!(c > T(0))) throw invalid_instance_error("box costs must be positive");
  }

  std::vector<T> costs_;
  int k_max_;
  SymKind kind_;
  std::vector<std::vector<T>> table_;
};

template <typename T>
SymTable<T> sym_table(const std::vector<T>& costs, int k_max, SymKind kind) {
  return SymTable<T>(costs, k_max, kind);
}

// T_k of all costs: sum over all ways to pick k costs with repetition.
template <typename T>
T complete_homogeneous(const std::vector<T>& costs, int k) {
  if (k < 0) throw invalid_instance_error("degree must be nonnegative");
  return sym_table(costs, k, SymKind::complete).at(k, static_cast<int>(costs.size()));
}

// S_k of all costs: sum over all k-subsets (0 when k exceeds the box count).
template <typename T>
T elementary_symmetric(const std::vector<T>& costs, int k) {
  if (k < 0) throw invalid_instance_error("degree must be nonnegative");
  return sym_table(costs, k, SymKind::elementary).at(k, static_cast<int>(costs.size()));
}

}  // namespace boxsearch
