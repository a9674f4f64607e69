#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "eplrank/dataset.hpp"
#include "eplrank/models.hpp"
#include "eplrank/summaries.hpp"

namespace eplrank {

/// T-matrix of rank-sum discrepancies between candidate first/last stage
/// positions. t[j-1][j'-1] = sum_i |rank(row_j)_i + rank(row_j')_i - (K+1)|
/// over the rank vectors of the marginal-matrix rows. Symmetric, diagonal
/// identically u_k, entries in [0, u_k]. d = |t - u_k| reads as a distance
/// between positions in the rank attribution path.
struct TMatrix {
  int k = 0;
  long long u_k = 0;
  std::vector<std::vector<long long>> t;
  std::vector<std::vector<long long>> d;
};

/// u_K = sum_{l=1..K} |2l - (K+1)|, the analytic maximum of the T entries.
long long u_k(int k);

TMatrix t_matrix(const Dataset& data);

enum class StatisticId { kTm, kX2Iia, kX2Top, kX2Pc, kX2Marginals };

std::string_view to_string(StatisticId id);
StatisticId statistic_from_string(std::string_view name);

/// A computed test statistic. `cells_used` is the number of cells included
/// in a chi-squared sum (K*K, pair, or stage-pair cells); zero-expected
/// cells are skipped and excluded from the count. For T_m the fitted
/// parameters are absent (the statistic is parameter-free).
struct DiagnosticValue {
  StatisticId id = StatisticId::kTm;
  double value = 0.0;
  long long cells_used = 0;
  std::optional<EplParams> fitted_params;
};

/// Minimum of the strict upper triangle of T with its argmin pair (j < j');
/// ties resolved lexicographically.
struct TMinResult {
  long long value = 0;
  int j = 0;
  int j_prime = 0;

  DiagnosticValue as_diagnostic() const {
    return DiagnosticValue{StatisticId::kTm, static_cast<double>(value), 0, {}};
  }
};

TMinResult t_min(const TMatrix& tm);

/// Knobs shared by the chi-squared statistics.
struct DiagnosticOptions {
  /// Cells with expected count below this are skipped (0 keeps every cell
  /// with a positive expected count).
  double min_expected = 0.0;
  /// Exact expected marginals by enumeration up to this K; Monte Carlo above.
  int exact_marginal_limit = 7;
  long long mc_size = 100000;
  std::uint64_t mc_seed = 1;
};

/// Stagewise IIA chi-squared at the given parameters: expected stage-t
/// pairwise wins are N_ii't * p_i / (p_i + p_i'), summed over stages and
/// item pairs i < i'.
DiagnosticValue chi2_iia(const Dataset& data, const EplParams& params,
                         double min_expected = 0.0);

/// Classical chi-squared statistics, computed on the rho-composed dataset
/// so the closed-form expected frequencies are exact under the model.
DiagnosticValue chi2_top(const Dataset& data, const EplParams& params,
                         const DiagnosticOptions& options = {});
DiagnosticValue chi2_pc(const Dataset& data, const EplParams& params,
                        const DiagnosticOptions& options = {});
DiagnosticValue chi2_marginals(const Dataset& data, const EplParams& params,
                               const DiagnosticOptions& options = {});

/// Dispatch by statistic id; params are ignored for T_m.
DiagnosticValue compute_statistic(StatisticId id, const Dataset& data,
                                  const EplParams& params,
                                  const DiagnosticOptions& options = {});

/// All five statistics in a fixed order (T_m, IIA, TOP, PC, M).
std::vector<StatisticId> all_statistics();

}  // namespace eplrank
