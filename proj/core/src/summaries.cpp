#include "eplrank/summaries.hpp"

#include <stdexcept>

namespace eplrank {

MarginalMatrix first_order_marginals(const Dataset& data) {
  const int k = data.k;
  MarginalMatrix out;
  out.k = k;
  out.n = data.n();
  out.counts.assign(static_cast<std::size_t>(k),
                    std::vector<long long>(static_cast<std::size_t>(k), 0));
  for (const Permutation& ordering : data.rows) {
    for (int j = 1; j <= k; ++j) {
      ++out.counts[static_cast<std::size_t>(j - 1)]
                  [static_cast<std::size_t>(ordering.entry(j) - 1)];
    }
  }
  return out;
}

std::vector<long long> top_frequencies(const Dataset& data) {
  std::vector<long long> tops(static_cast<std::size_t>(data.k), 0);
  for (const Permutation& ordering : data.rows) {
    ++tops[static_cast<std::size_t>(ordering.entry(1) - 1)];
  }
  return tops;
}

PairwiseCounts pairwise_counts(const Dataset& data) {
  const int k = data.k;
  PairwiseCounts out;
  out.k = k;
  out.n = data.n();
  out.wins.assign(static_cast<std::size_t>(k),
                  std::vector<long long>(static_cast<std::size_t>(k), 0));
  for (const Permutation& ordering : data.rows) {
    for (int u = 1; u <= k; ++u) {
      const int winner = ordering.entry(u);
      for (int v = u + 1; v <= k; ++v) {
        ++out.wins[static_cast<std::size_t>(winner - 1)]
                  [static_cast<std::size_t>(ordering.entry(v) - 1)];
      }
    }
  }
  return out;
}

StagewisePairwise stagewise_pairwise(const Dataset& data,
                                     const Permutation& rho) {
  const int k = data.k;
  if (rho.size() != k) {
    throw std::invalid_argument("stagewise_pairwise: rho dimension mismatch");
  }
  StagewisePairwise out;
  out.k = k;
  out.n = data.n();
  const int stages = k - 1;
  out.tau.assign(static_cast<std::size_t>(stages),
                 std::vector<std::vector<long long>>(
                     static_cast<std::size_t>(k),
                     std::vector<long long>(static_cast<std::size_t>(k), 0)));
  out.pairs = out.tau;

  const Permutation rho_inv = rho.inverse();
  std::vector<int> stage_of(static_cast<std::size_t>(k));
  for (const Permutation& ordering : data.rows) {
    // stage_of[i-1]: the stage at which item i is selected.
    for (int j = 1; j <= k; ++j) {
      stage_of[static_cast<std::size_t>(ordering.entry(j) - 1)] =
          rho_inv.entry(j);
    }
    for (int i = 1; i <= k; ++i) {
      const int ti = stage_of[static_cast<std::size_t>(i - 1)];
      for (int ip = i + 1; ip <= k; ++ip) {
        const int tip = stage_of[static_cast<std::size_t>(ip - 1)];
        const int last_shared = std::min({ti, tip, stages});
        const bool i_first = ti < tip;
        for (int t = 1; t <= last_shared; ++t) {
          ++out.pairs[static_cast<std::size_t>(t - 1)]
                     [static_cast<std::size_t>(i - 1)]
                     [static_cast<std::size_t>(ip - 1)];
          ++out.pairs[static_cast<std::size_t>(t - 1)]
                     [static_cast<std::size_t>(ip - 1)]
                     [static_cast<std::size_t>(i - 1)];
          if (i_first) {
            ++out.tau[static_cast<std::size_t>(t - 1)]
                     [static_cast<std::size_t>(i - 1)]
                     [static_cast<std::size_t>(ip - 1)];
          } else {
            ++out.tau[static_cast<std::size_t>(t - 1)]
                     [static_cast<std::size_t>(ip - 1)]
                     [static_cast<std::size_t>(i - 1)];
          }
        }
      }
    }
  }
  return out;
}

}  // namespace eplrank
