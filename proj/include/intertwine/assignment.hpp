#pragma once

#include <cstddef>
#include <vector>

#include "intertwine/complex_matrix.hpp"

namespace intertwine {

// Minimum-cost perfect matching on a square cost matrix (Hungarian algorithm,
// O(n^3)). Returns column assigned to each row.
std::vector<std::size_t> optimal_assignment(const std::vector<std::vector<double>>& cost);

// Largest |a_i - b_pi(i)| under the assignment minimizing sum |a_i - b_pi(i)|.
double matched_distance(const ComplexVector& a, const ComplexVector& b);

}  // namespace intertwine
