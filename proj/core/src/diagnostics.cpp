#include "eplrank/diagnostics.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace eplrank {

long long u_k(int k) {
  if (k < 1) throw std::invalid_argument("u_k: K >= 1 required");
  long long total = 0;
  for (int l = 1; l <= k; ++l) {
    total += std::llabs(2LL * l - (k + 1));
  }
  return total;
}

TMatrix t_matrix(const Dataset& data) {
  const int k = data.k;
  const MarginalMatrix marginals = first_order_marginals(data);
  std::vector<std::vector<int>> row_ranks(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) {
    row_ranks[static_cast<std::size_t>(j - 1)] =
        rank_vector(std::span<const long long>(marginals.row(j)), true).ranks;
  }
  TMatrix out;
  out.k = k;
  out.u_k = u_k(k);
  out.t.assign(static_cast<std::size_t>(k),
               std::vector<long long>(static_cast<std::size_t>(k), 0));
  out.d = out.t;
  for (int j = 1; j <= k; ++j) {
    const auto& rj = row_ranks[static_cast<std::size_t>(j - 1)];
    for (int jp = 1; jp <= k; ++jp) {
      const auto& rjp = row_ranks[static_cast<std::size_t>(jp - 1)];
      long long sum = 0;
      for (int i = 0; i < k; ++i) {
        sum += std::llabs(static_cast<long long>(rj[static_cast<std::size_t>(i)]) +
                          rjp[static_cast<std::size_t>(i)] - (k + 1));
      }
      out.t[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(jp - 1)] = sum;
      out.d[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(jp - 1)] =
          std::llabs(sum - out.u_k);
    }
  }
  return out;
}

TMinResult t_min(const TMatrix& tm) {
  if (tm.k < 2) throw std::invalid_argument("t_min: K >= 2 required");
  TMinResult best;
  bool first = true;
  for (int j = 1; j <= tm.k; ++j) {
    for (int jp = j + 1; jp <= tm.k; ++jp) {
      const long long value =
          tm.t[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(jp - 1)];
      if (first || value < best.value) {
        best = TMinResult{value, j, jp};
        first = false;
      }
    }
  }
  return best;
}

std::string_view to_string(StatisticId id) {
  switch (id) {
    case StatisticId::kTm: return "t_m";
    case StatisticId::kX2Iia: return "x2_iia";
    case StatisticId::kX2Top: return "x2_top";
    case StatisticId::kX2Pc: return "x2_pc";
    case StatisticId::kX2Marginals: return "x2_m";
  }
  return "unknown";
}

StatisticId statistic_from_string(std::string_view name) {
  if (name == "t_m") return StatisticId::kTm;
  if (name == "x2_iia") return StatisticId::kX2Iia;
  if (name == "x2_top") return StatisticId::kX2Top;
  if (name == "x2_pc") return StatisticId::kX2Pc;
  if (name == "x2_m") return StatisticId::kX2Marginals;
  throw std::invalid_argument("unknown statistic: " + std::string(name));
}

std::vector<StatisticId> all_statistics() {
  return {StatisticId::kTm, StatisticId::kX2Iia, StatisticId::kX2Top,
          StatisticId::kX2Pc, StatisticId::kX2Marginals};
}

DiagnosticValue chi2_iia(const Dataset& data, const EplParams& params,
                         double min_expected) {
  const int k = data.k;
  const StagewisePairwise sp = stagewise_pairwise(data, params.rho);
  double value = 0.0;
  long long cells = 0;
  for (int t = 1; t <= k - 1; ++t) {
    for (int i = 1; i <= k; ++i) {
      const double pi = params.weights[static_cast<std::size_t>(i - 1)];
      for (int ip = i + 1; ip <= k; ++ip) {
        const long long n_pair =
            sp.pairs[static_cast<std::size_t>(t - 1)]
                    [static_cast<std::size_t>(i - 1)]
                    [static_cast<std::size_t>(ip - 1)];
        if (n_pair == 0) continue;
        const double pip = params.weights[static_cast<std::size_t>(ip - 1)];
        const double expected = static_cast<double>(n_pair) * pi / (pi + pip);
        if (expected <= 0.0 || expected < min_expected) continue;
        const long long observed =
            sp.tau[static_cast<std::size_t>(t - 1)]
                  [static_cast<std::size_t>(i - 1)]
                  [static_cast<std::size_t>(ip - 1)];
        const double diff = static_cast<double>(observed) - expected;
        value += diff * diff / expected;
        ++cells;
      }
    }
  }
  return DiagnosticValue{StatisticId::kX2Iia, value, cells, params};
}

DiagnosticValue chi2_top(const Dataset& data, const EplParams& params,
                         const DiagnosticOptions& options) {
  const Dataset composed = compose_with(data, params.rho);
  const std::vector<long long> tops = top_frequencies(composed);
  const EplParams norm = params.normalized();
  const double n = static_cast<double>(data.n());
  double value = 0.0;
  long long cells = 0;
  for (int i = 0; i < data.k; ++i) {
    const double expected = n * norm.weights[static_cast<std::size_t>(i)];
    if (expected <= 0.0 || expected < options.min_expected) continue;
    const double diff = static_cast<double>(tops[static_cast<std::size_t>(i)]) - expected;
    value += diff * diff / expected;
    ++cells;
  }
  return DiagnosticValue{StatisticId::kX2Top, value, cells, params};
}

DiagnosticValue chi2_pc(const Dataset& data, const EplParams& params,
                        const DiagnosticOptions& options) {
  const Dataset composed = compose_with(data, params.rho);
  const PairwiseCounts pc = pairwise_counts(composed);
  const double n = static_cast<double>(data.n());
  double value = 0.0;
  long long cells = 0;
  for (int i = 1; i <= data.k; ++i) {
    const double pi = params.weights[static_cast<std::size_t>(i - 1)];
    for (int ip = i + 1; ip <= data.k; ++ip) {
      const double pip = params.weights[static_cast<std::size_t>(ip - 1)];
      const double expected = n * pi / (pi + pip);
      if (expected <= 0.0 || expected < options.min_expected) continue;
      const double diff =
          static_cast<double>(pc.wins[static_cast<std::size_t>(i - 1)]
                                     [static_cast<std::size_t>(ip - 1)]) -
          expected;
      value += diff * diff / expected;
      ++cells;
    }
  }
  return DiagnosticValue{StatisticId::kX2Pc, value, cells, params};
}

DiagnosticValue chi2_marginals(const Dataset& data, const EplParams& params,
                               const DiagnosticOptions& options) {
  const int k = data.k;
  const Dataset composed = compose_with(data, params.rho);
  const MarginalMatrix observed = first_order_marginals(composed);
  const EplParams norm = params.normalized();
  const double n = static_cast<double>(data.n());

  // Expected position frequencies of the composed (forward-order) data:
  // the stage marginals of PL(p).
  std::vector<std::vector<double>> expected;
  if (k <= options.exact_marginal_limit) {
    const EplParams forward(Permutation::identity(k), norm.weights);
    expected = epl_exact_marginal_matrix(forward);
  } else {
    if (options.mc_size < 1) {
      throw std::invalid_argument("chi2_marginals: mc_size >= 1 required");
    }
    const EplParams forward(Permutation::identity(k), norm.weights);
    const Dataset draws =
        epl_sample(forward, static_cast<int>(options.mc_size), options.mc_seed);
    const MarginalMatrix mc = first_order_marginals(draws);
    expected.assign(static_cast<std::size_t>(k),
                    std::vector<double>(static_cast<std::size_t>(k), 0.0));
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < k; ++i) {
        expected[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
            static_cast<double>(mc.counts[static_cast<std::size_t>(j)]
                                         [static_cast<std::size_t>(i)]) /
            static_cast<double>(options.mc_size);
      }
    }
  }

  double value = 0.0;
  long long cells = 0;
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < k; ++i) {
      const double cell =
          n * expected[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      if (cell <= 0.0 || cell < options.min_expected) continue;
      const double diff =
          static_cast<double>(observed.counts[static_cast<std::size_t>(j)]
                                             [static_cast<std::size_t>(i)]) -
          cell;
      value += diff * diff / cell;
      ++cells;
    }
  }
  return DiagnosticValue{StatisticId::kX2Marginals, value, cells, params};
}

DiagnosticValue compute_statistic(StatisticId id, const Dataset& data,
                                  const EplParams& params,
                                  const DiagnosticOptions& options) {
  switch (id) {
    case StatisticId::kTm:
      return t_min(t_matrix(data)).as_diagnostic();
    case StatisticId::kX2Iia:
      return chi2_iia(data, params, options.min_expected);
    case StatisticId::kX2Top:
      return chi2_top(data, params, options);
    case StatisticId::kX2Pc:
      return chi2_pc(data, params, options);
    case StatisticId::kX2Marginals:
      return chi2_marginals(data, params, options);
  }
  throw std::invalid_argument("compute_statistic: unknown statistic");
}

}  // namespace eplrank
