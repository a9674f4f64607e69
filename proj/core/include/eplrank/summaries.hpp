#pragma once

#include <vector>

#include "eplrank/dataset.hpp"
#include "eplrank/permutation.hpp"

namespace eplrank {

/// First-order marginals: counts[j-1][i-1] is the number of sample units
/// ranking item i in position j. Every row and column sums to N.
struct MarginalMatrix {
  int k = 0;
  long long n = 0;
  std::vector<std::vector<long long>> counts;

  const std::vector<long long>& row(int position) const {
    return counts[static_cast<std::size_t>(position - 1)];
  }
};

MarginalMatrix first_order_marginals(const Dataset& data);

/// Row j=1 of the marginal matrix: how often each item is ranked first.
std::vector<long long> top_frequencies(const Dataset& data);

/// wins[i-1][i'-1] counts the units ranking item i better than item i'.
/// wins[i][i'] + wins[i'][i] = N for i != i'.
struct PairwiseCounts {
  int k = 0;
  long long n = 0;
  std::vector<std::vector<long long>> wins;
};

PairwiseCounts pairwise_counts(const Dataset& data);

/// Stagewise pairwise counts under a reference order rho. For stage t in
/// 1..K-1, tau(t,i,i') counts units where both items are still available
/// at stage t and i is selected before i'; pairs(t,i,i') counts units
/// where both are available (tau(t,i,i') + tau(t,i',i) = pairs(t,i,i')).
struct StagewisePairwise {
  int k = 0;
  long long n = 0;
  std::vector<std::vector<std::vector<long long>>> tau;    // [t-1][i-1][i'-1]
  std::vector<std::vector<std::vector<long long>>> pairs;  // symmetric

  int stages() const { return k - 1; }
};

/// The stage at which unit s selects item i is rho^-1(pi_s(i)); an item is
/// available at stage t if it has not been selected at an earlier stage.
StagewisePairwise stagewise_pairwise(const Dataset& data,
                                     const Permutation& rho);

}  // namespace eplrank
