#pragma once

#include <vector>

#include "annealot/transport.hpp"

namespace annealot {

struct Assignment {
  std::vector<int> permutation;  // row i -> column permutation[i]
  bool exact_match = false;      // true when the exact n <= 10 path ran
};

inline constexpr int kExactAssignmentLimit = 10;

// Maximum-weight assignment of the plan read as a profit matrix.
Assignment round_to_assignment(const Matrix& plan);
inline Assignment round_to_assignment(const TransportSolution& sol) { return round_to_assignment(sol.plan); }

double assignment_weight(const Matrix& plan, const std::vector<int>& permutation);

// Fraction of rows whose column agrees with the reference.
double assignment_accuracy(const std::vector<int>& got, const std::vector<int>& reference);

}  // namespace annealot
