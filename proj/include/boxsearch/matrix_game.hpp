#pragma once

#include <stdexcept>
#include <vector>

#include "boxsearch/number.hpp"

namespace boxsearch {

// Zero-sum matrix game: the row player picks i to maximize payoffs[i][j],
// the column player picks j to minimize it.
template <typename T>
struct MatrixGameSolution {
  T value{};
  std::vector<T> row_strategy;
  std::vector<T> col_strategy;
};

namespace detail {

// Primal simplex (dense tableau, Bland's rule) for
//   maximize sum(w)  subject to  A w <= 1, w >= 0
// with every entry of A strictly positive.  Returns the optimal w and the
// dual values y of the constraints.  Exact for rational T; for double a
// small pivot tolerance stands in for exact sign tests.
template <typename T>
void simplex_positive(const std::vector<std::vector<T>>& a, std::vector<T>& w,
                      std::vector<T>& y) {
  const int m = static_cast<int>(a.size());
  const int p = static_cast<int>(a[0].size());
  const int ncols = p + m;
  const T eps = num_traits<T>::exact ? T(0) : T(1e-12);

  std::vector<std::vector<T>> tab(m + 1, std::vector<T>(ncols + 1, T(0)));
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < p; ++j) tab[i][j] = a[i][j];
    tab[i][p + i] = T(1);
    tab[i][ncols] = T(1);
    basis[i] = p + i;
  }
  for (int j = 0; j < p; ++j) tab[m][j] = T(-1);  // reduced costs of w_j

  const long long max_pivots = 200000;
  for (long long iter = 0;; ++iter) {
    if (iter > max_pivots) throw std::logic_error("simplex failed to converge");
    int enter = -1;
    for (int j = 0; j < ncols; ++j) {
      if (tab[m][j] < -eps) {  // Bland: first improving column
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    T best_ratio(0);
    for (int i = 0; i < m; ++i) {
      if (tab[i][enter] > eps) {
        T ratio = tab[i][ncols] / tab[i][enter];
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) throw std::logic_error("simplex unbounded on a positive matrix");
    // Pivot on (leave, enter).
    T piv = tab[leave][enter];
    for (int j = 0; j <= ncols; ++j) tab[leave][j] /= piv;
    for (int i = 0; i <= m; ++i) {
      if (i == leave) continue;
      T f = tab[i][enter];
      if (f == T(0)) continue;
      for (int j = 0; j <= ncols; ++j) tab[i][j] -= f * tab[leave][j];
    }
    basis[leave] = enter;
  }

  w.assign(p, T(0));
  for (int i = 0; i < m; ++i)
    if (basis[i] < p) w[basis[i]] = tab[i][ncols] < T(0) ? T(0) : tab[i][ncols];
  y.assign(m, T(0));
  for (int i = 0; i < m; ++i) {
    T v = tab[m][p + i];  // dual value = reduced cost of slack i
    y[i] = v < T(0) ? T(0) : v;
  }
}

}  // namespace detail

template <typename T>
MatrixGameSolution<T> solve_matrix_game(const std::vector<std::vector<T>>& payoffs) {
  if (payoffs.empty() || payoffs[0].empty())
    throw invalid_instance_error("matrix game must be non-empty");
  const int m = static_cast<int>(payoffs.size());
  const int p = static_cast<int>(payoffs[0].size());
  for (const auto& row : payoffs)
    if (static_cast<int>(row.size()) != p)
      throw invalid_instance_error("matrix game rows must have equal length");

  // Shift so every entry is >= 1; the game value shifts by the same amount.
  T shift(0);
  for (const auto& row : payoffs)
    for (const T& v : row)
      if (v < shift) shift = v;
  shift = T(1) - shift;
  std::vector<std::vector<T>> a(m, std::vector<T>(p));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < p; ++j) a[i][j] = payoffs[i][j] + shift;

  std::vector<T> w, y;
  detail::simplex_positive(a, w, y);
  T total(0);
  for (const T& v : w) total += v;
  if (total <= T(0)) throw std::logic_error("positive matrix game with non-positive LP optimum");

  MatrixGameSolution<T> sol;
  sol.value = T(1) / total - shift;
  sol.col_strategy.resize(p);
  for (int j = 0; j < p; ++j) sol.col_strategy[j] = w[j] / total;
  T ytotal(0);
  for (const T& v : y) ytotal += v;
  if (ytotal <= T(0)) throw std::logic_error("degenerate duals in matrix game");
  sol.row_strategy.resize(m);
  for (int i = 0; i < m; ++i) sol.row_strategy[i] = y[i] / ytotal;
  return sol;
}

}  // namespace boxsearch
