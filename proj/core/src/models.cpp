#include "eplrank/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace eplrank {

EplParams::EplParams(Permutation rho_in, std::vector<double> weights_in)
    : rho(std::move(rho_in)), weights(std::move(weights_in)) {
  if (rho.size() != static_cast<int>(weights.size())) {
    throw std::invalid_argument("EplParams: rho and weights dimension mismatch");
  }
  for (const double w : weights) {
    if (!(w > 0.0)) {
      throw std::invalid_argument("EplParams: weights must be strictly positive");
    }
  }
}

EplParams EplParams::normalized() const {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  EplParams out = *this;
  for (double& w : out.weights) w /= total;
  return out;
}

double epl_pmf(const Permutation& ordering, const EplParams& params) {
  const int k = params.k();
  if (ordering.size() != k) {
    throw std::invalid_argument("epl_pmf: dimension mismatch");
  }
  // Weight of the item selected at each stage.
  std::vector<double> staged(static_cast<std::size_t>(k));
  for (int t = 1; t <= k; ++t) {
    const int item = ordering.entry(params.rho.entry(t));
    staged[static_cast<std::size_t>(t - 1)] =
        params.weights[static_cast<std::size_t>(item - 1)];
  }
  double suffix = 0.0;
  std::vector<double> suffix_sums(static_cast<std::size_t>(k));
  for (int t = k; t >= 1; --t) {
    suffix += staged[static_cast<std::size_t>(t - 1)];
    suffix_sums[static_cast<std::size_t>(t - 1)] = suffix;
  }
  double prob = 1.0;
  for (int t = 1; t <= k; ++t) {
    prob *= staged[static_cast<std::size_t>(t - 1)] /
            suffix_sums[static_cast<std::size_t>(t - 1)];
  }
  return prob;
}

Dataset epl_sample(const EplParams& params, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("epl_sample: n >= 1 required");
  const int k = params.k();
  Rng rng(seed);
  std::vector<Permutation> rows;
  rows.reserve(static_cast<std::size_t>(n));
  std::vector<int> remaining(static_cast<std::size_t>(k));
  std::vector<int> ordering(static_cast<std::size_t>(k));
  for (int s = 0; s < n; ++s) {
    std::iota(remaining.begin(), remaining.end(), 1);
    int live = k;
    double total = std::accumulate(params.weights.begin(), params.weights.end(), 0.0);
    for (int t = 1; t <= k; ++t) {
      const double u = rng.uniform() * total;
      double cum = 0.0;
      int pick = live - 1;
      for (int idx = 0; idx < live; ++idx) {
        cum += params.weights[static_cast<std::size_t>(remaining[static_cast<std::size_t>(idx)] - 1)];
        if (u < cum) {
          pick = idx;
          break;
        }
      }
      const int item = remaining[static_cast<std::size_t>(pick)];
      ordering[static_cast<std::size_t>(params.rho.entry(t) - 1)] = item;
      total -= params.weights[static_cast<std::size_t>(item - 1)];
      remaining[static_cast<std::size_t>(pick)] = remaining[static_cast<std::size_t>(live - 1)];
      --live;
    }
    rows.emplace_back(ordering);
  }
  return Dataset{k, std::move(rows)};
}

std::vector<std::vector<double>> epl_exact_marginal_matrix(
    const EplParams& params) {
  const int k = params.k();
  if (k > kEnumerationLimit) {
    throw std::invalid_argument("epl_exact_marginal_matrix: K above enumeration limit");
  }
  std::vector<std::vector<double>> marginals(
      static_cast<std::size_t>(k),
      std::vector<double>(static_cast<std::size_t>(k), 0.0));
  const double total =
      std::accumulate(params.weights.begin(), params.weights.end(), 0.0);
  // Enumerate selection sequences; stage marginals do not depend on rho.
  for_each_permutation(k, [&](const Permutation& selection) {
    double prob = 1.0;
    double available = total;
    for (int t = 1; t <= k; ++t) {
      const double w =
          params.weights[static_cast<std::size_t>(selection.entry(t) - 1)];
      prob *= w / available;
      available -= w;
    }
    for (int t = 1; t <= k; ++t) {
      marginals[static_cast<std::size_t>(t - 1)]
               [static_cast<std::size_t>(selection.entry(t) - 1)] += prob;
    }
  });
  return marginals;
}

std::vector<double> epl_exact_stage_marginals(const EplParams& params,
                                              int stage) {
  if (stage < 1 || stage > params.k()) {
    throw std::invalid_argument("epl_exact_stage_marginals: stage outside 1..K");
  }
  return epl_exact_marginal_matrix(params)[static_cast<std::size_t>(stage - 1)];
}

MallowsParams::MallowsParams(Permutation center_in, double theta_in,
                             DistanceMetric metric_in)
    : center(std::move(center_in)), theta(theta_in), metric(metric_in) {
  if (!(theta >= 0.0)) {
    throw std::invalid_argument("MallowsParams: theta must be >= 0");
  }
}

double mallows_partition(const MallowsParams& params) {
  const int k = params.k();
  const double e = std::exp(-params.theta);
  switch (params.metric) {
    case DistanceMetric::kKendall: {
      // Mahonian generating function: prod_j (1 + e + ... + e^{j-1}).
      double z = 1.0;
      for (int j = 2; j <= k; ++j) {
        double factor = 0.0;
        double power = 1.0;
        for (int l = 0; l < j; ++l) {
          factor += power;
          power *= e;
        }
        z *= factor;
      }
      return z;
    }
    case DistanceMetric::kCayley: {
      double z = 1.0;
      for (int j = 1; j <= k - 1; ++j) z *= 1.0 + j * e;
      return z;
    }
    case DistanceMetric::kHamming: {
      // Count permutations by number of displaced elements m: C(K,m) * !m.
      std::vector<double> subfactorial(static_cast<std::size_t>(k + 1));
      subfactorial[0] = 1.0;
      if (k >= 1) subfactorial[1] = 0.0;
      for (int m = 2; m <= k; ++m) {
        subfactorial[static_cast<std::size_t>(m)] =
            (m - 1) * (subfactorial[static_cast<std::size_t>(m - 1)] +
                       subfactorial[static_cast<std::size_t>(m - 2)]);
      }
      double z = 0.0;
      double binom = 1.0;
      double power = 1.0;
      for (int m = 0; m <= k; ++m) {
        z += binom * subfactorial[static_cast<std::size_t>(m)] * power;
        binom = binom * (k - m) / (m + 1);
        power *= e;
      }
      return z;
    }
  }
  throw std::invalid_argument("mallows_partition: unknown metric");
}

double mallows_pmf(const Permutation& ordering, const MallowsParams& params) {
  if (ordering.size() != params.k()) {
    throw std::invalid_argument("mallows_pmf: dimension mismatch");
  }
  const long long d = perm_distance(ordering, params.center, params.metric);
  return std::exp(-params.theta * static_cast<double>(d)) /
         mallows_partition(params);
}

namespace {

/// Repeated insertion at the identity center: item j is inserted at
/// position r in 1..j with probability proportional to exp(-theta*(j-r)),
/// which adds exactly j-r inversions.
Permutation rim_identity(int k, double theta, Rng& rng) {
  std::vector<int> list;
  list.reserve(static_cast<std::size_t>(k));
  const double e = std::exp(-theta);
  std::vector<double> cumulative(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) {
    // weights e^{j-1}, ..., e, 1 for r = 1..j
    double total = 0.0;
    double power = 1.0;
    for (int r = j; r >= 1; --r) {
      total += power;
      cumulative[static_cast<std::size_t>(r - 1)] = power;
      power *= e;
    }
    double cum = 0.0;
    for (int r = 1; r <= j; ++r) {
      cum += cumulative[static_cast<std::size_t>(r - 1)];
      cumulative[static_cast<std::size_t>(r - 1)] = cum;
    }
    const double u = rng.uniform() * total;
    int pick = j;
    for (int r = 1; r <= j; ++r) {
      if (u < cumulative[static_cast<std::size_t>(r - 1)]) {
        pick = r;
        break;
      }
    }
    list.insert(list.begin() + (pick - 1), j);
  }
  return Permutation(std::move(list));
}

/// Chinese-restaurant construction of an identity-centered Cayley sample:
/// P(Y) is proportional to exp(theta)^cycles(Y), i.e. exp(-theta * d_C).
Permutation cayley_identity(int k, double theta, Rng& rng) {
  const double strength = std::exp(theta);
  std::vector<int> next(static_cast<std::size_t>(k + 1));
  std::vector<int> seated;
  seated.reserve(static_cast<std::size_t>(k));
  for (int t = 1; t <= k; ++t) {
    const double u = rng.uniform() * (strength + static_cast<double>(t - 1));
    if (u < strength || seated.empty()) {
      next[static_cast<std::size_t>(t)] = t;  // new singleton cycle
    } else {
      const int host = seated[static_cast<std::size_t>(
          std::min<int>(static_cast<int>(u - strength), t - 2))];
      next[static_cast<std::size_t>(t)] = next[static_cast<std::size_t>(host)];
      next[static_cast<std::size_t>(host)] = t;
    }
    seated.push_back(t);
  }
  std::vector<int> entries(static_cast<std::size_t>(k));
  for (int i = 1; i <= k; ++i) {
    entries[static_cast<std::size_t>(i - 1)] = next[static_cast<std::size_t>(i)];
  }
  return Permutation(std::move(entries));
}

int hamming_to_identity(const std::vector<int>& entries) {
  int moved = 0;
  for (int i = 0; i < static_cast<int>(entries.size()); ++i) {
    if (entries[static_cast<std::size_t>(i)] != i + 1) ++moved;
  }
  return moved;
}

}  // namespace

Dataset mallows_sample(const MallowsParams& params, int n, std::uint64_t seed,
                       const MallowsSampleOptions& options) {
  if (n < 1) throw std::invalid_argument("mallows_sample: n >= 1 required");
  const int k = params.k();
  Rng rng(seed);
  std::vector<Permutation> rows;
  rows.reserve(static_cast<std::size_t>(n));

  switch (params.metric) {
    case DistanceMetric::kKendall: {
      for (int s = 0; s < n; ++s) {
        rows.push_back(compose(rim_identity(k, params.theta, rng), params.center));
      }
      break;
    }
    case DistanceMetric::kCayley: {
      for (int s = 0; s < n; ++s) {
        rows.push_back(compose(cayley_identity(k, params.theta, rng), params.center));
      }
      break;
    }
    case DistanceMetric::kHamming: {
      if (k <= kEnumerationLimit) {
        // Exact: cumulative table over all K! identity-centered outcomes.
        std::vector<Permutation> support = enumerate_permutations(k);
        std::vector<double> cumulative(support.size());
        double total = 0.0;
        for (std::size_t idx = 0; idx < support.size(); ++idx) {
          total += std::exp(-params.theta *
                            hamming_to_identity(support[idx].entries()));
          cumulative[idx] = total;
        }
        for (int s = 0; s < n; ++s) {
          const double u = rng.uniform() * total;
          const std::size_t idx = static_cast<std::size_t>(
              std::lower_bound(cumulative.begin(), cumulative.end(), u) -
              cumulative.begin());
          rows.push_back(compose(support[std::min(idx, support.size() - 1)],
                                 params.center));
        }
      } else {
        // Metropolis with random transposition proposals.
        std::vector<int> state(static_cast<std::size_t>(k));
        std::iota(state.begin(), state.end(), 1);
        int distance = 0;
        const auto step = [&]() {
          const int i = rng.uniform_int(0, k - 1);
          int j = rng.uniform_int(0, k - 2);
          if (j >= i) ++j;
          const auto mismatch = [&](int pos, int value) {
            return value != pos + 1 ? 1 : 0;
          };
          const int before = mismatch(i, state[static_cast<std::size_t>(i)]) +
                             mismatch(j, state[static_cast<std::size_t>(j)]);
          const int after = mismatch(i, state[static_cast<std::size_t>(j)]) +
                            mismatch(j, state[static_cast<std::size_t>(i)]);
          const int delta = after - before;
          if (delta <= 0 || rng.uniform() < std::exp(-params.theta * delta)) {
            std::swap(state[static_cast<std::size_t>(i)],
                      state[static_cast<std::size_t>(j)]);
            distance += delta;
          }
        };
        for (int warm = 0; warm < options.burn_in; ++warm) step();
        for (int s = 0; s < n; ++s) {
          for (int move = 0; move < options.thin; ++move) step();
          rows.push_back(compose(Permutation(state), params.center));
        }
      }
      break;
    }
  }
  return Dataset{k, std::move(rows)};
}

Dataset thurstone_sample(const ThurstoneParams& params, int n,
                         std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("thurstone_sample: n >= 1 required");
  const int k = params.k();
  if (k < 1) throw std::invalid_argument("thurstone_sample: empty means");
  Rng rng(seed);
  std::vector<Permutation> rows;
  rows.reserve(static_cast<std::size_t>(n));
  std::vector<double> scores(static_cast<std::size_t>(k));
  for (int s = 0; s < n; ++s) {
    for (int i = 0; i < k; ++i) {
      scores[static_cast<std::size_t>(i)] =
          params.means[static_cast<std::size_t>(i)] + rng.normal();
    }
    const RankVector ranking = rank_vector(std::span<const double>(scores), true);
    rows.push_back(ranking.as_permutation().inverse());
  }
  return Dataset{k, std::move(rows)};
}

EplParams draw_uniform_epl(int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("draw_uniform_epl: K >= 2 required");
  Rng rng(seed);
  std::vector<int> entries(static_cast<std::size_t>(k));
  std::iota(entries.begin(), entries.end(), 1);
  rng.shuffle(entries);
  std::vector<double> weights(static_cast<std::size_t>(k));
  for (double& w : weights) w = rng.uniform_open01();
  return EplParams(Permutation(std::move(entries)), std::move(weights));
}

}  // namespace eplrank
