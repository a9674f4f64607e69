#include "eplrank/study.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "eplrank/rng.hpp"
#include "eplrank/version.hpp"

namespace eplrank {

using nlohmann::json;

std::string format_real(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::min(resolve_threads(threads), count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto worker = [&]() {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

double pvalue_from_counts(long long at_least_as_extreme, int b) {
  return static_cast<double>(1 + at_least_as_extreme) /
         static_cast<double>(b + 1);
}

struct ReplicateDraw {
  std::vector<std::vector<double>> values;  // [b][statistic]
};

}  // namespace

std::vector<BootstrapReport> bootstrap_pvalues(
    const Dataset& data, const std::vector<StatisticId>& statistics, int B,
    bool refit, std::uint64_t seed, const BootstrapOptions& options) {
  if (B < 1) throw std::invalid_argument("bootstrap: B >= 1 required");
  if (statistics.empty()) {
    throw std::invalid_argument("bootstrap: at least one statistic required");
  }
  const FitResult fit =
      fit_epl_mle(data, options.fit_strategy, options.n_starts,
                  derive_seed(seed, 0, "fit"), options.fit_tol,
                  options.fit_max_iter);

  const std::size_t n_stats = statistics.size();
  std::vector<DiagnosticValue> observed(n_stats);
  {
    DiagnosticOptions diag = options.diag;
    diag.mc_seed = derive_seed(seed, 0, "mc_observed");
    for (std::size_t i = 0; i < n_stats; ++i) {
      observed[i] = compute_statistic(statistics[i], data, fit.params, diag);
    }
  }

  std::vector<std::vector<double>> draws(
      static_cast<std::size_t>(B), std::vector<double>(n_stats, 0.0));
  parallel_for(B, options.threads, [&](int b) {
    const std::uint64_t replicate_seed =
        derive_seed(seed, static_cast<std::uint64_t>(b) + 1, "boot");
    const Dataset resampled =
        epl_sample(fit.params, data.n(), derive_seed(replicate_seed, 0, "data"));
    EplParams params = fit.params;
    if (refit) {
      params = fit_epl_mle(resampled, options.fit_strategy, options.n_starts,
                           derive_seed(replicate_seed, 0, "refit"),
                           options.fit_tol, options.fit_max_iter)
                   .params;
    }
    DiagnosticOptions diag = options.diag;
    diag.mc_seed = derive_seed(replicate_seed, 0, "mc");
    for (std::size_t i = 0; i < n_stats; ++i) {
      draws[static_cast<std::size_t>(b)][i] =
          compute_statistic(statistics[i], resampled, params, diag).value;
    }
  });

  std::vector<BootstrapReport> reports(n_stats);
  for (std::size_t i = 0; i < n_stats; ++i) {
    BootstrapReport& report = reports[i];
    report.statistic_id = statistics[i];
    report.observed = observed[i].value;
    report.cells_used = observed[i].cells_used;
    report.b = B;
    report.refit = refit;
    report.fit_used = fit.params;
    report.seed = seed;
    report.replicates.resize(static_cast<std::size_t>(B));
    long long extreme = 0;
    for (int b = 0; b < B; ++b) {
      const double value = draws[static_cast<std::size_t>(b)][i];
      report.replicates[static_cast<std::size_t>(b)] = value;
      if (value >= report.observed) ++extreme;
    }
    report.p_value = pvalue_from_counts(extreme, B);
  }
  return reports;
}

BootstrapReport bootstrap_pvalue(const Dataset& data, StatisticId statistic,
                                 int B, bool refit, std::uint64_t seed,
                                 const BootstrapOptions& options) {
  return bootstrap_pvalues(data, {statistic}, B, refit, seed, options)[0];
}

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::kEpl: return "epl";
    case Scenario::kDbKendall: return "db_kend";
    case Scenario::kDbCayley: return "db_cay";
    case Scenario::kDbHamming: return "db_ham";
    case Scenario::kThurstone: return "th_norm";
  }
  return "unknown";
}

Scenario scenario_from_string(std::string_view name) {
  if (name == "epl") return Scenario::kEpl;
  if (name == "db_kend") return Scenario::kDbKendall;
  if (name == "db_cay") return Scenario::kDbCayley;
  if (name == "db_ham") return Scenario::kDbHamming;
  if (name == "th_norm") return Scenario::kThurstone;
  throw std::invalid_argument("unknown scenario: " + std::string(name));
}

namespace {

Dataset draw_scenario_dataset(const StudyConfig& config,
                              std::uint64_t param_seed,
                              std::uint64_t data_seed) {
  switch (config.scenario) {
    case Scenario::kEpl: {
      const EplParams params = draw_uniform_epl(config.k, param_seed);
      return epl_sample(params, config.n, data_seed);
    }
    case Scenario::kDbKendall:
    case Scenario::kDbCayley:
    case Scenario::kDbHamming: {
      Rng rng(param_seed);
      std::vector<int> entries(static_cast<std::size_t>(config.k));
      std::iota(entries.begin(), entries.end(), 1);
      rng.shuffle(entries);
      const double theta = rng.uniform(config.theta_min, config.theta_max);
      const DistanceMetric metric =
          config.scenario == Scenario::kDbKendall  ? DistanceMetric::kKendall
          : config.scenario == Scenario::kDbCayley ? DistanceMetric::kCayley
                                                   : DistanceMetric::kHamming;
      const MallowsParams params(Permutation(std::move(entries)), theta, metric);
      return mallows_sample(params, config.n, data_seed);
    }
    case Scenario::kThurstone: {
      Rng rng(param_seed);
      std::vector<double> means(static_cast<std::size_t>(config.k));
      for (double& m : means) m = rng.uniform(config.mean_min, config.mean_max);
      return thurstone_sample(ThurstoneParams{std::move(means)}, config.n,
                              data_seed);
    }
  }
  throw std::invalid_argument("draw_scenario_dataset: unknown scenario");
}

void validate_common(const StudyConfig& config) {
  if (config.k < 2) throw std::invalid_argument("study: k >= 2 required");
  if (config.n < 1) throw std::invalid_argument("study: n >= 1 required");
  if (config.replicates < 1) {
    throw std::invalid_argument("study: replicates >= 1 required");
  }
  if (config.b < 1) throw std::invalid_argument("study: b >= 1 required");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw std::invalid_argument("study: alpha in (0,1) required");
  }
}

}  // namespace

GofStudyResult rejection_rate_study(const StudyConfig& config) {
  validate_common(config);
  if (config.statistics.empty()) {
    throw std::invalid_argument("study: statistics list is empty");
  }
  GofStudyResult result;
  result.config = config;
  result.rows.assign(static_cast<std::size_t>(config.replicates), {});

  parallel_for(config.replicates, config.threads, [&](int r) {
    const std::uint64_t replicate_seed =
        derive_seed(config.master_seed, static_cast<std::uint64_t>(r), "rep");
    const Dataset data =
        draw_scenario_dataset(config, derive_seed(replicate_seed, 0, "scenario"),
                              derive_seed(replicate_seed, 0, "data"));
    BootstrapOptions options;
    options.threads = 1;  // parallelism lives at the replicate level
    options.diag = config.diag;
    const std::vector<BootstrapReport> reports = bootstrap_pvalues(
        data, config.statistics, config.b, config.refit,
        derive_seed(replicate_seed, 0, "boot"), options);
    GofReplicateRow row;
    row.replicate = r + 1;
    row.seed = replicate_seed;
    for (const BootstrapReport& report : reports) {
      row.observed.push_back(report.observed);
      row.p_value.push_back(report.p_value);
      row.reject.push_back(report.p_value <= config.alpha ? 1 : 0);
    }
    result.rows[static_cast<std::size_t>(r)] = std::move(row);
  });

  result.rejection_rate.assign(config.statistics.size(), 0.0);
  for (const GofReplicateRow& row : result.rows) {
    for (std::size_t i = 0; i < config.statistics.size(); ++i) {
      result.rejection_rate[i] += row.reject[i];
    }
  }
  for (double& rate : result.rejection_rate) rate /= config.replicates;
  return result;
}

RecoveryStudyResult recovery_study(const StudyConfig& config) {
  validate_common(config);
  RecoveryStudyResult result;
  result.config = config;
  for (const HeuristicMethod m : config.methods) {
    result.method_names.emplace_back(to_string(m));
  }
  if (config.include_mle) {
    if (config.mle_strategy == FitStrategy::kExhaustive &&
        config.k > kExhaustiveLimit) {
      throw std::invalid_argument(
          "recovery_study: exhaustive MLE requires K <= " +
          std::to_string(kExhaustiveLimit) +
          "; set mle_strategy = local_search explicitly for larger K");
    }
    result.method_names.emplace_back("mle");
  }
  if (result.method_names.empty()) {
    throw std::invalid_argument("recovery_study: no methods selected");
  }

  const std::size_t n_methods = result.method_names.size();
  result.rows.assign(static_cast<std::size_t>(config.replicates), {});
  parallel_for(config.replicates, config.threads, [&](int r) {
    const std::uint64_t replicate_seed =
        derive_seed(config.master_seed, static_cast<std::uint64_t>(r), "rec");
    const EplParams truth =
        draw_uniform_epl(config.k, derive_seed(replicate_seed, 0, "truth"));
    const Dataset data =
        epl_sample(truth, config.n, derive_seed(replicate_seed, 0, "data"));
    RecoveryReplicateRow row;
    row.replicate = r + 1;
    row.seed = replicate_seed;
    row.rho_true = truth.rho;
    for (const HeuristicMethod m : config.methods) {
      row.rho_hat.push_back(heuristic_rho(data, m).rho_hat);
    }
    if (config.include_mle) {
      row.rho_hat.push_back(fit_epl_mle(data, config.mle_strategy,
                                        config.mle_starts,
                                        derive_seed(replicate_seed, 0, "mle"))
                                .params.rho);
    }
    for (const Permutation& estimate : row.rho_hat) {
      row.match.push_back(estimate == truth.rho ? 1 : 0);
      row.spearman.push_back(spearman(truth.rho, estimate));
    }
    result.rows[static_cast<std::size_t>(r)] = std::move(row);
  });

  result.recovery_pct.assign(n_methods, 0.0);
  result.mean_spearman.assign(n_methods, 0.0);
  for (const RecoveryReplicateRow& row : result.rows) {
    for (std::size_t m = 0; m < n_methods; ++m) {
      result.recovery_pct[m] += row.match[m];
      result.mean_spearman[m] += row.spearman[m];
    }
  }
  for (std::size_t m = 0; m < n_methods; ++m) {
    result.recovery_pct[m] *= 100.0 / config.replicates;
    result.mean_spearman[m] /= config.replicates;
  }
  return result;
}

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    std::size_t begin = 0, end = item.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(item[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(item[end - 1]))) --end;
    if (end > begin) items.push_back(item.substr(begin, end - begin));
  }
  return items;
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw std::invalid_argument("config: invalid boolean '" + text + "'");
}

std::string join_rho(const Permutation& p) {
  std::string out;
  for (int i = 1; i <= p.size(); ++i) {
    if (i > 1) out += '-';
    out += std::to_string(p.entry(i));
  }
  return out;
}

}  // namespace

StudyConfig load_study_config(std::istream& in) {
  StudyConfig config;
  std::string line;
  long line_number = 0;
  bool methods_set = false;
  while (std::getline(in, line)) {
    ++line_number;
    const std::size_t comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    std::size_t begin = 0, end = line.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(line[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(line[end - 1]))) --end;
    if (begin == end) continue;
    const std::string content = line.substr(begin, end - begin);
    const std::size_t eq = content.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_number) +
                                  ": expected key = value");
    }
    std::string key = content.substr(0, eq);
    std::string value = content.substr(eq + 1);
    while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
    std::size_t vb = 0;
    while (vb < value.size() && std::isspace(static_cast<unsigned char>(value[vb]))) ++vb;
    value.erase(0, vb);

    try {
      if (key == "scenario") {
        config.scenario = scenario_from_string(value);
      } else if (key == "k") {
        config.k = std::stoi(value);
      } else if (key == "n") {
        config.n = std::stoi(value);
      } else if (key == "replicates") {
        config.replicates = std::stoi(value);
      } else if (key == "b") {
        config.b = std::stoi(value);
      } else if (key == "alpha") {
        config.alpha = std::stod(value);
      } else if (key == "statistics") {
        config.statistics.clear();
        for (const std::string& name : split_list(value)) {
          config.statistics.push_back(statistic_from_string(name));
        }
      } else if (key == "master_seed") {
        config.master_seed = std::stoull(value);
      } else if (key == "refit") {
        config.refit = parse_bool(value);
      } else if (key == "threads") {
        config.threads = std::stoi(value);
      } else if (key == "theta_min") {
        config.theta_min = std::stod(value);
      } else if (key == "theta_max") {
        config.theta_max = std::stod(value);
      } else if (key == "mean_min") {
        config.mean_min = std::stod(value);
      } else if (key == "mean_max") {
        config.mean_max = std::stod(value);
      } else if (key == "methods") {
        config.methods.clear();
        config.include_mle = false;
        methods_set = true;
        for (const std::string& name : split_list(value)) {
          if (name == "mle") {
            config.include_mle = true;
          } else {
            config.methods.push_back(heuristic_method_from_string(name));
          }
        }
      } else if (key == "mle_strategy") {
        config.mle_strategy = fit_strategy_from_string(value);
      } else if (key == "mle_starts") {
        config.mle_starts = std::stoi(value);
      } else if (key == "min_expected") {
        config.diag.min_expected = std::stod(value);
      } else if (key == "mc_size") {
        config.diag.mc_size = std::stoll(value);
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception& e) {
      throw std::invalid_argument("config line " + std::to_string(line_number) +
                                  ": " + e.what());
    }
  }
  (void)methods_set;
  return config;
}

StudyConfig load_study_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return load_study_config(in);
}

void write_gof_csv(std::ostream& out, const GofStudyResult& result) {
  out << "replicate,seed";
  for (const StatisticId id : result.config.statistics) {
    const std::string_view name = to_string(id);
    out << ',' << name << "_observed," << name << "_p," << name << "_reject";
  }
  out << '\n';
  for (const GofReplicateRow& row : result.rows) {
    out << row.replicate << ',' << row.seed;
    for (std::size_t i = 0; i < result.config.statistics.size(); ++i) {
      out << ',' << format_real(row.observed[i]) << ','
          << format_real(row.p_value[i]) << ',' << row.reject[i];
    }
    out << '\n';
  }
}

void write_recovery_csv(std::ostream& out, const RecoveryStudyResult& result) {
  out << "replicate,seed,rho_true";
  for (const std::string& name : result.method_names) {
    out << ',' << name << "_rho_hat," << name << "_match," << name << "_spearman";
  }
  out << '\n';
  for (const RecoveryReplicateRow& row : result.rows) {
    out << row.replicate << ',' << row.seed << ',' << join_rho(row.rho_true);
    for (std::size_t m = 0; m < result.method_names.size(); ++m) {
      out << ',' << join_rho(row.rho_hat[m]) << ',' << row.match[m] << ','
          << format_real(row.spearman[m]);
    }
    out << '\n';
  }
}

namespace {

json config_to_json(const StudyConfig& config, bool recovery) {
  json out;
  out["scenario"] = std::string(to_string(config.scenario));
  out["k"] = config.k;
  out["n"] = config.n;
  out["replicates"] = config.replicates;
  out["b"] = config.b;
  out["alpha"] = config.alpha;
  json stats = json::array();
  for (const StatisticId id : config.statistics) stats.push_back(std::string(to_string(id)));
  out["statistics"] = stats;
  out["master_seed"] = config.master_seed;
  out["refit"] = config.refit;
  out["threads"] = config.threads;
  out["theta_min"] = config.theta_min;
  out["theta_max"] = config.theta_max;
  out["mean_min"] = config.mean_min;
  out["mean_max"] = config.mean_max;
  out["min_expected"] = config.diag.min_expected;
  out["mc_size"] = config.diag.mc_size;
  if (recovery) {
    json methods = json::array();
    for (const HeuristicMethod m : config.methods) methods.push_back(std::string(to_string(m)));
    if (config.include_mle) methods.push_back("mle");
    out["methods"] = methods;
    out["mle_strategy"] = std::string(to_string(config.mle_strategy));
    out["mle_starts"] = config.mle_starts;
  }
  return out;
}

}  // namespace

std::string gof_summary_json(const GofStudyResult& result) {
  json out;
  out["tool"] = "eplrank";
  out["version"] = kVersion;
  out["study"] = "gof";
  out["master_seed"] = result.config.master_seed;
  out["config"] = config_to_json(result.config, false);
  json rates;
  for (std::size_t i = 0; i < result.config.statistics.size(); ++i) {
    rates[std::string(to_string(result.config.statistics[i]))] =
        result.rejection_rate[i];
  }
  out["rejection_rates"] = rates;
  return out.dump(2) + "\n";
}

std::string recovery_summary_json(const RecoveryStudyResult& result) {
  json out;
  out["tool"] = "eplrank";
  out["version"] = kVersion;
  out["study"] = "recovery";
  out["master_seed"] = result.config.master_seed;
  out["config"] = config_to_json(result.config, true);
  json methods;
  for (std::size_t m = 0; m < result.method_names.size(); ++m) {
    json entry;
    entry["recovery_pct"] = result.recovery_pct[m];
    entry["mean_spearman"] = result.mean_spearman[m];
    methods[result.method_names[m]] = entry;
  }
  out["results"] = methods;
  return out.dump(2) + "\n";
}

}  // namespace eplrank
