#pragma once

#include "uam/core/types.hpp"

#include <vector>

namespace uam {

struct Assignment {
  std::vector<Index> column_of_row;  // row i is matched with column column_of_row[i]
  double cost = 0.0;
};

/// Minimum-cost perfect matching on a square cost matrix (Hungarian algorithm,
/// O(n^3)). Deterministic: among equal-cost optima the scan order favours lower
/// indices.
Assignment solve_assignment(const Eigen::MatrixXd& cost);

/// Smallest cost increase obtained by swapping the partners of two rows of an
/// optimal assignment; +inf for n < 2.
double smallest_swap_gap(const Eigen::MatrixXd& cost, const Assignment& assignment);

}  // namespace uam
