#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "eplrank/dataset.hpp"
#include "eplrank/diagnostics.hpp"
#include "eplrank/inference.hpp"
#include "eplrank/models.hpp"

namespace eplrank {

struct BootstrapOptions {
  FitStrategy fit_strategy = FitStrategy::kHeuristicSeeded;
  int n_starts = 1;
  double fit_tol = 1e-8;
  int fit_max_iter = 500;
  DiagnosticOptions diag;
  int threads = 1;  // parallelism over bootstrap replicates; <=0 = hardware
};

/// Parametric-bootstrap calibration of one statistic. The p-value uses the
/// (1 + #{replicate >= observed}) / (B + 1) convention, so it is never 0
/// and lies in [1/(B+1), 1].
struct BootstrapReport {
  StatisticId statistic_id = StatisticId::kTm;
  double observed = 0.0;
  std::vector<double> replicates;
  double p_value = 1.0;
  int b = 0;
  bool refit = true;
  EplParams fit_used;
  std::uint64_t seed = 0;
  long long cells_used = 0;
};

/// Fits the EPL to the data, computes the observed statistic at the fit,
/// draws B datasets of size N from it, optionally refits each, and
/// recomputes the statistic. Deterministic given seed.
BootstrapReport bootstrap_pvalue(const Dataset& data, StatisticId statistic,
                                 int B, bool refit, std::uint64_t seed,
                                 const BootstrapOptions& options = {});

/// Same protocol for several statistics at once, sharing the per-replicate
/// fits. Equivalent to calling bootstrap_pvalue per statistic.
std::vector<BootstrapReport> bootstrap_pvalues(
    const Dataset& data, const std::vector<StatisticId>& statistics, int B,
    bool refit, std::uint64_t seed, const BootstrapOptions& options = {});

enum class Scenario { kEpl, kDbKendall, kDbCayley, kDbHamming, kThurstone };

std::string_view to_string(Scenario s);
Scenario scenario_from_string(std::string_view name);

/// Shared configuration for the two simulation studies. Scenario parameter
/// ranges are the artifact's documented defaults; the source they stand in
/// for states only that true values were uniformly generated.
struct StudyConfig {
  Scenario scenario = Scenario::kEpl;
  int k = 5;
  int n = 300;
  int replicates = 50;
  int b = 200;
  double alpha = 0.05;
  std::vector<StatisticId> statistics = all_statistics();
  std::uint64_t master_seed = 1;
  bool refit = true;
  int threads = 0;  // <=0: hardware concurrency

  double theta_min = 0.1;
  double theta_max = 1.0;
  double mean_min = 0.0;
  double mean_max = 1.0;

  // recovery study
  std::vector<HeuristicMethod> methods = {HeuristicMethod::kPca,
                                          HeuristicMethod::kMds};
  bool include_mle = false;
  FitStrategy mle_strategy = FitStrategy::kExhaustive;
  int mle_starts = 5;

  DiagnosticOptions diag;
};

/// Plain-text key = value file; '#' starts a comment. Unknown keys are
/// rejected.
StudyConfig load_study_config(const std::string& path);
StudyConfig load_study_config(std::istream& in);

struct GofReplicateRow {
  int replicate = 0;
  std::uint64_t seed = 0;
  std::vector<double> observed;  // parallel to config.statistics
  std::vector<double> p_value;
  std::vector<int> reject;
};

struct GofStudyResult {
  StudyConfig config;
  std::vector<GofReplicateRow> rows;
  std::vector<double> rejection_rate;  // parallel to config.statistics
};

/// Per replicate: draw scenario parameters uniformly, draw a dataset, run
/// the bootstrap for every configured statistic, and tabulate rejections
/// at alpha.
GofStudyResult rejection_rate_study(const StudyConfig& config);

struct RecoveryReplicateRow {
  int replicate = 0;
  std::uint64_t seed = 0;
  Permutation rho_true;
  std::vector<Permutation> rho_hat;  // parallel to method names
  std::vector<int> match;
  std::vector<double> spearman;
};

struct RecoveryStudyResult {
  StudyConfig config;
  std::vector<std::string> method_names;  // "pca", "mds", and/or "mle"
  std::vector<RecoveryReplicateRow> rows;
  std::vector<double> recovery_pct;
  std::vector<double> mean_spearman;
};

/// Reference-order recovery: per replicate draw rho and weights uniformly,
/// sample a dataset, estimate rho with each method, and score exact matches
/// and Spearman correlation.
RecoveryStudyResult recovery_study(const StudyConfig& config);

/// One row per replicate. Permutations serialize as dash-joined integers;
/// reals carry 12 significant digits.
void write_gof_csv(std::ostream& out, const GofStudyResult& result);
void write_recovery_csv(std::ostream& out, const RecoveryStudyResult& result);

/// JSON summaries embedding the tool version, the fully resolved config,
/// and the master seed.
std::string gof_summary_json(const GofStudyResult& result);
std::string recovery_summary_json(const RecoveryStudyResult& result);

/// %.12g formatting used by every report writer.
std::string format_real(double value);

/// Runs fn(0..count-1) on `threads` workers (inline when threads == 1).
/// Results must be written to index-addressed slots so the outcome is
/// independent of scheduling.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

/// Resolves a thread-count request: values <= 0 mean hardware concurrency.
int resolve_threads(int requested);

}  // namespace eplrank
