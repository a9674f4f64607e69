#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "eplrank/dataset.hpp"
#include "eplrank/diagnostics.hpp"
#include "eplrank/models.hpp"

namespace eplrank {

enum class HeuristicMethod { kPca, kMds };

std::string_view to_string(HeuristicMethod m);
HeuristicMethod heuristic_method_from_string(std::string_view name);

/// Likelihood-free reference-order estimate. The scores are the first
/// principal-axis (or first MDS) coordinates of the K positions computed
/// from the D matrix; rho_hat sorts the reported scores non-decreasingly.
/// The sign of the axis is arbitrary, so both rho_hat candidates (sorted
/// and reversed) are fitted and the one with the higher profile
/// log-likelihood is kept; `orientation_loglik` holds {sorted, reversed}.
struct HeuristicResult {
  Permutation rho_hat;
  std::vector<double> scores;
  HeuristicMethod method = HeuristicMethod::kPca;
  double orientation_loglik[2] = {0.0, 0.0};
  bool degenerate = false;
  TMatrix tmatrix;
};

HeuristicResult heuristic_rho(const Dataset& data, HeuristicMethod method);

/// Support weights fitted by minorization-maximization at a fixed rho.
/// Weights are normalized to sum to one. Items never selected before the
/// final stage cannot be estimated away from the boundary; their weight is
/// pinned to kWeightFloor and reported in boundary_items.
struct WeightFit {
  std::vector<double> weights;
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<int> boundary_items;
};

inline constexpr double kWeightFloor = 1e-8;

WeightFit fit_weights_given_rho(const Dataset& data, const Permutation& rho,
                                double tol = 1e-8, int max_iter = 500);

enum class FitStrategy { kExhaustive, kLocalSearch, kHeuristicSeeded };

std::string_view to_string(FitStrategy s);
FitStrategy fit_strategy_from_string(std::string_view name);

/// Exhaustive search is limited to this many items (K! profile fits).
inline constexpr int kExhaustiveLimit = 6;

struct FitResult {
  EplParams params;
  double loglik = 0.0;
  FitStrategy strategy = FitStrategy::kHeuristicSeeded;
  long long iterations = 0;  // total MM iterations across evaluated candidates
  bool converged = false;
  bool boundary = false;
};

/// Maximum-likelihood EPL fit by profile search over the reference order:
/// exhaustive enumeration (K <= kExhaustiveLimit), hill-climbing local
/// search over position transpositions from n_starts random starts, or
/// local search seeded at the PCA heuristic estimate.
FitResult fit_epl_mle(const Dataset& data,
                      FitStrategy strategy = FitStrategy::kHeuristicSeeded,
                      int n_starts = 5, std::uint64_t seed = 1,
                      double tol = 1e-8, int max_iter = 500);

}  // namespace eplrank
