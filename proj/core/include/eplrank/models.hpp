#pragma once

#include <cstdint>
#include <vector>

#include "eplrank/dataset.hpp"
#include "eplrank/permutation.hpp"
#include "eplrank/rng.hpp"

namespace eplrank {

/// Extended Plackett-Luce parameters: a reference order rho (the position
/// filled at each stage) and K positive support weights. The distribution
/// is invariant under rescaling the weights by a positive constant.
struct EplParams {
  Permutation rho;
  std::vector<double> weights;

  EplParams() = default;
  EplParams(Permutation rho_in, std::vector<double> weights_in);

  int k() const { return rho.size(); }

  /// Copy with weights scaled to sum to one.
  EplParams normalized() const;
};

/// Probability of a complete ordering under EPL(rho, p): the product over
/// stages t of p_selected / sum of weights still available, where the item
/// selected at stage t is ordering(rho(t)).
double epl_pmf(const Permutation& ordering, const EplParams& params);

/// Sequential sampling without replacement: at stage t an item is drawn
/// from the remaining set with probability proportional to its weight and
/// assigned position rho(t). Deterministic given seed.
Dataset epl_sample(const EplParams& params, int n, std::uint64_t seed);

/// Exact marginal item distribution at every stage, by enumeration of all
/// selection sequences. Row t-1 holds q^[t], the probability of each item
/// being the stage-t selection. Requires K <= kEnumerationLimit.
std::vector<std::vector<double>> epl_exact_marginal_matrix(
    const EplParams& params);

/// Single stage slice of epl_exact_marginal_matrix (stage in 1..K).
std::vector<double> epl_exact_stage_marginals(const EplParams& params,
                                              int stage);

/// Distance-based (Mallows-type) parameters: modal sequence, concentration
/// theta >= 0 (theta = 0 is the uniform distribution), and metric.
struct MallowsParams {
  Permutation center;
  double theta = 1.0;
  DistanceMetric metric = DistanceMetric::kKendall;

  MallowsParams() = default;
  MallowsParams(Permutation center_in, double theta_in, DistanceMetric metric_in);

  int k() const { return center.size(); }
};

/// Options for the Metropolis fallback used by Hamming sampling at
/// K > kEnumerationLimit. Kendall and Cayley sampling is always exact.
struct MallowsSampleOptions {
  int burn_in = 2000;
  int thin = 20;
};

/// exp(-theta * d(x, center)) / Z with the exact partition sum
/// (closed-form products for Kendall and Cayley, fixed-point/derangement
/// sum for Hamming).
double mallows_pmf(const Permutation& ordering, const MallowsParams& params);

/// Exact partition sum of the distance-based model.
double mallows_partition(const MallowsParams& params);

Dataset mallows_sample(const MallowsParams& params, int n, std::uint64_t seed,
                       const MallowsSampleOptions& options = {});

/// Order-statistics parameters: independent normal latent scores with the
/// given means and unit variance.
struct ThurstoneParams {
  std::vector<double> means;

  int k() const { return static_cast<int>(means.size()); }
};

/// Draws z_i ~ Normal(mean_i, 1) and returns the ordering of items by
/// decreasing z.
Dataset thurstone_sample(const ThurstoneParams& params, int n,
                         std::uint64_t seed);

/// rho uniform on S_K; weights iid Uniform(0,1) with exact zeros redrawn.
/// Requires K >= 2.
EplParams draw_uniform_epl(int k, std::uint64_t seed);

}  // namespace eplrank
