#pragma once

#include <vector>

namespace eplrank {

/// Eigen-decomposition of a small symmetric matrix, eigenvalues sorted in
/// descending order. vectors[c] is the unit eigenvector for values[c], with
/// the sign canonicalized so its largest-magnitude component is positive.
struct SymmetricEigen {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
};

/// Cyclic Jacobi rotations; intended for the K-by-K matrices that arise
/// here (K up to a few dozen). The input must be symmetric.
SymmetricEigen eigen_symmetric(const std::vector<std::vector<double>>& matrix);

}  // namespace eplrank
