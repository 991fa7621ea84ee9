#include "uam/assignment.hpp"

#include "uam/core/errors.hpp"

#include <algorithm>
#include <limits>

namespace uam {

Assignment solve_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols())
    throw Error(ErrorCode::InvalidArgument, "solve_assignment: cost matrix must be square");
  const Index n = cost.rows();
  constexpr double inf = std::numeric_limits<double>::infinity();

  // Potentials u (rows), v (columns); p[j] = row matched to column j (1-based, 0 = free).
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<Index> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (Index i = 1; i <= n; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const Index i0 = p[j0];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const Index j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment out;
  out.column_of_row.assign(n, 0);
  for (Index j = 1; j <= n; ++j) out.column_of_row[p[j] - 1] = j - 1;
  for (Index i = 0; i < n; ++i) out.cost += cost(i, out.column_of_row[i]);
  return out;
}

double smallest_swap_gap(const Eigen::MatrixXd& cost, const Assignment& a) {
  const Index n = cost.rows();
  double gap = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    for (Index k = i + 1; k < n; ++k) {
      const Index ci = a.column_of_row[i];
      const Index ck = a.column_of_row[k];
      const double delta = cost(i, ck) + cost(k, ci) - cost(i, ci) - cost(k, ck);
      gap = std::min(gap, delta);
    }
  }
  return gap;
}

}  // namespace uam
