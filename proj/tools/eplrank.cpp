// Command-line front end: dataset I/O, model sampling, fitting,
// diagnostics, bootstrap goodness-of-fit, heuristic reference-order
// estimation, and the two study runners.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "eplrank/dataset.hpp"
#include "eplrank/diagnostics.hpp"
#include "eplrank/inference.hpp"
#include "eplrank/models.hpp"
#include "eplrank/study.hpp"
#include "eplrank/version.hpp"

namespace {

using eplrank::Dataset;
using eplrank::EplParams;
using eplrank::Permutation;
using json = nlohmann::json;

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    values.push_back(std::stoi(item));
  }
  return values;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    values.push_back(std::stod(item));
  }
  return values;
}

json permutation_to_json(const Permutation& p) {
  json out = json::array();
  for (int i = 1; i <= p.size(); ++i) out.push_back(p.entry(i));
  return out;
}

Permutation permutation_from_json(const json& array) {
  std::vector<int> entries;
  for (const auto& v : array) entries.push_back(v.get<int>());
  return Permutation(std::move(entries));
}

json params_to_json(const EplParams& params) {
  json out;
  out["rho"] = permutation_to_json(params.rho);
  out["weights"] = params.weights;
  return out;
}

void emit(const std::string& path, const json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
}

struct IngestArgs {
  std::string input;
  std::string orientation;

  Dataset load() const {
    return eplrank::read_dataset_csv(
        input, eplrank::orientation_from_string(orientation));
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("-i,--input", input, "Dataset CSV path")->required();
    cmd->add_option("--orientation", orientation,
                    "Row interpretation: ordering | ranking")
        ->required()
        ->check(CLI::IsMember({"ordering", "ranking"}));
  }
};

int env_threads() {
  if (const char* value = std::getenv("EPLRANK_THREADS")) {
    try {
      return std::stoi(value);
    } catch (const std::exception&) {
      throw std::runtime_error("EPLRANK_THREADS is not an integer");
    }
  }
  return 0;
}

json base_doc(const std::string& subcommand) {
  json doc;
  doc["tool"] = "eplrank";
  doc["version"] = eplrank::kVersion;
  doc["subcommand"] = subcommand;
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extended Plackett-Luce ranking models: sampling, fitting, "
               "goodness-of-fit diagnostics, and simulation studies"};
  app.set_version_flag("--version", std::string("eplrank ") + eplrank::kVersion);
  app.require_subcommand(1);

  int cli_threads = 0;
  app.add_option("--threads", cli_threads,
                 "Worker threads (overrides EPLRANK_THREADS; 0 = auto)");

  // ---------------------------------------------------------------- sample
  auto* sample = app.add_subcommand("sample", "Draw a dataset from a model");
  std::string sample_model = "epl";
  std::string sample_rho, sample_weights, sample_center, sample_means;
  double sample_theta = 1.0;
  int sample_n = 100;
  std::uint64_t sample_seed = 1;
  std::string sample_out;
  int sample_burn_in = 2000, sample_thin = 20;
  sample->add_option("--model", sample_model, "epl | db_kend | db_cay | db_ham | th_norm")
      ->required()
      ->check(CLI::IsMember({"epl", "db_kend", "db_cay", "db_ham", "th_norm"}));
  sample->add_option("--rho", sample_rho, "EPL reference order, e.g. 1,5,2,4,3");
  sample->add_option("--weights", sample_weights, "EPL support weights");
  sample->add_option("--center", sample_center, "Distance-based modal sequence");
  sample->add_option("--theta", sample_theta, "Distance-based concentration");
  sample->add_option("--means", sample_means, "Thurstone latent means");
  sample->add_option("-n,--size", sample_n, "Sample size")->required();
  sample->add_option("--seed", sample_seed, "RNG seed");
  sample->add_option("--burn-in", sample_burn_in, "Metropolis burn-in (db_ham, K>8)");
  sample->add_option("--thin", sample_thin, "Metropolis thinning (db_ham, K>8)");
  sample->add_option("-o,--output", sample_out, "Output CSV path")->required();

  // ------------------------------------------------------------------- fit
  auto* fit_cmd = app.add_subcommand("fit", "Maximum-likelihood EPL fit");
  IngestArgs fit_in;
  fit_in.attach(fit_cmd);
  std::string fit_strategy = "heuristic_seeded";
  int fit_starts = 5;
  std::uint64_t fit_seed = 1;
  double fit_tol = 1e-8;
  int fit_max_iter = 500;
  std::string fit_out;
  fit_cmd->add_option("--strategy", fit_strategy,
                      "exhaustive | local_search | heuristic_seeded")
      ->check(CLI::IsMember({"exhaustive", "local_search", "heuristic_seeded"}));
  fit_cmd->add_option("--starts", fit_starts, "Random starts for local_search");
  fit_cmd->add_option("--seed", fit_seed, "RNG seed");
  fit_cmd->add_option("--tol", fit_tol, "Relative log-likelihood tolerance");
  fit_cmd->add_option("--max-iter", fit_max_iter, "MM iteration cap");
  fit_cmd->add_option("-o,--output", fit_out, "Output JSON path (default stdout)");

  // ------------------------------------------------------------- heuristic
  auto* heur_cmd = app.add_subcommand(
      "heuristic", "Likelihood-free reference-order estimate");
  IngestArgs heur_in;
  heur_in.attach(heur_cmd);
  std::string heur_method = "pca";
  std::string heur_out;
  heur_cmd->add_option("--method", heur_method, "pca | mds")
      ->check(CLI::IsMember({"pca", "mds"}));
  heur_cmd->add_option("-o,--output", heur_out, "Output JSON path (default stdout)");

  // -------------------------------------------------------------- diagnose
  auto* diag_cmd = app.add_subcommand(
      "diagnose", "Test statistics for a dataset at a fitted model");
  IngestArgs diag_in;
  diag_in.attach(diag_cmd);
  std::string diag_fit_path;
  std::string diag_stats = "t_m,x2_iia,x2_top,x2_pc,x2_m";
  double diag_min_expected = 0.0;
  long long diag_mc_size = 100000;
  std::uint64_t diag_mc_seed = 1;
  std::string diag_out;
  diag_cmd->add_option("--fit", diag_fit_path, "Fit JSON produced by `fit`")
      ->required();
  diag_cmd->add_option("--statistics", diag_stats, "Comma list of statistics");
  diag_cmd->add_option("--min-expected", diag_min_expected,
                       "Skip cells with expected count below this");
  diag_cmd->add_option("--mc-size", diag_mc_size,
                       "Monte Carlo draws for x2_m expected counts (K > 7)");
  diag_cmd->add_option("--mc-seed", diag_mc_seed, "Monte Carlo seed");
  diag_cmd->add_option("-o,--output", diag_out, "Output JSON path (default stdout)");

  // ------------------------------------------------------------------- gof
  auto* gof_cmd = app.add_subcommand(
      "gof", "Parametric-bootstrap goodness-of-fit p-values");
  IngestArgs gof_in;
  gof_in.attach(gof_cmd);
  std::string gof_stats = "t_m,x2_iia,x2_top,x2_pc,x2_m";
  int gof_b = 200;
  bool gof_refit = true;
  std::uint64_t gof_seed = 1;
  std::string gof_strategy = "heuristic_seeded";
  std::string gof_out;
  gof_cmd->add_option("--statistics", gof_stats, "Comma list of statistics");
  gof_cmd->add_option("-B,--bootstrap", gof_b, "Bootstrap replicates");
  gof_cmd->add_flag("--refit,!--no-refit", gof_refit,
                    "Refit the EPL inside each bootstrap replicate");
  gof_cmd->add_option("--seed", gof_seed, "Master seed");
  gof_cmd->add_option("--strategy", gof_strategy,
                      "Fit strategy used for the model and refits")
      ->check(CLI::IsMember({"exhaustive", "local_search", "heuristic_seeded"}));
  gof_cmd->add_option("-o,--output", gof_out, "Output JSON path (default stdout)");

  // ------------------------------------------------------------ study-gof
  auto* sgof_cmd = app.add_subcommand(
      "study-gof", "Rejection-rate study from a config file");
  std::string sgof_config, sgof_dir;
  sgof_cmd->add_option("--config", sgof_config, "Study config path")->required();
  sgof_cmd->add_option("--out-dir", sgof_dir, "Output directory")->required();

  // ------------------------------------------------------- study-recovery
  auto* srec_cmd = app.add_subcommand(
      "study-recovery", "Reference-order recovery study from a config file");
  std::string srec_config, srec_dir;
  srec_cmd->add_option("--config", srec_config, "Study config path")->required();
  srec_cmd->add_option("--out-dir", srec_dir, "Output directory")->required();

  std::string active = "";
  try {
    app.parse(argc, argv);
    active = app.get_subcommands().front()->get_name();
    const int threads = cli_threads > 0 ? cli_threads : env_threads();

    if (*sample) {
      Dataset data;
      if (sample_model == "epl") {
        if (sample_rho.empty() || sample_weights.empty()) {
          throw std::runtime_error("epl sampling requires --rho and --weights");
        }
        const EplParams params(Permutation(parse_int_list(sample_rho)),
                               parse_double_list(sample_weights));
        data = eplrank::epl_sample(params, sample_n, sample_seed);
      } else if (sample_model == "th_norm") {
        if (sample_means.empty()) {
          throw std::runtime_error("th_norm sampling requires --means");
        }
        data = eplrank::thurstone_sample(
            eplrank::ThurstoneParams{parse_double_list(sample_means)},
            sample_n, sample_seed);
      } else {
        if (sample_center.empty()) {
          throw std::runtime_error("distance-based sampling requires --center");
        }
        const eplrank::DistanceMetric metric =
            sample_model == "db_kend"  ? eplrank::DistanceMetric::kKendall
            : sample_model == "db_cay" ? eplrank::DistanceMetric::kCayley
                                       : eplrank::DistanceMetric::kHamming;
        const eplrank::MallowsParams params(
            Permutation(parse_int_list(sample_center)), sample_theta, metric);
        data = eplrank::mallows_sample(params, sample_n, sample_seed,
                                       {sample_burn_in, sample_thin});
      }
      eplrank::write_dataset_csv(sample_out, data);
      return 0;
    }

    if (*fit_cmd) {
      const Dataset data = fit_in.load();
      const eplrank::FitResult result = eplrank::fit_epl_mle(
          data, eplrank::fit_strategy_from_string(fit_strategy), fit_starts,
          fit_seed, fit_tol, fit_max_iter);
      json doc = base_doc("fit");
      doc["seed"] = fit_seed;
      doc["config"] = {{"input", fit_in.input},
                       {"orientation", fit_in.orientation},
                       {"strategy", fit_strategy},
                       {"starts", fit_starts},
                       {"seed", fit_seed},
                       {"tol", fit_tol},
                       {"max_iter", fit_max_iter}};
      json res = params_to_json(result.params);
      res["loglik"] = result.loglik;
      res["strategy"] = std::string(to_string(result.strategy));
      res["iterations"] = result.iterations;
      res["converged"] = result.converged;
      res["boundary"] = result.boundary;
      doc["result"] = res;
      emit(fit_out, doc);
      return 0;
    }

    if (*heur_cmd) {
      const Dataset data = heur_in.load();
      const eplrank::HeuristicResult result = eplrank::heuristic_rho(
          data, eplrank::heuristic_method_from_string(heur_method));
      json doc = base_doc("heuristic");
      doc["config"] = {{"input", heur_in.input},
                       {"orientation", heur_in.orientation},
                       {"method", heur_method}};
      json res;
      res["rho_hat"] = permutation_to_json(result.rho_hat);
      res["scores"] = result.scores;
      res["method"] = std::string(to_string(result.method));
      res["orientation_loglik"] = {result.orientation_loglik[0],
                                   result.orientation_loglik[1]};
      res["degenerate"] = result.degenerate;
      res["u_k"] = result.tmatrix.u_k;
      res["t_matrix"] = result.tmatrix.t;
      res["d_matrix"] = result.tmatrix.d;
      doc["result"] = res;
      emit(heur_out, doc);
      return 0;
    }

    if (*diag_cmd) {
      const Dataset data = diag_in.load();
      std::ifstream fit_file(diag_fit_path);
      if (!fit_file) {
        throw std::runtime_error("cannot open fit file: " + diag_fit_path);
      }
      const json fit_doc = json::parse(fit_file);
      const EplParams params(
          permutation_from_json(fit_doc.at("result").at("rho")),
          fit_doc.at("result").at("weights").get<std::vector<double>>());
      eplrank::DiagnosticOptions options;
      options.min_expected = diag_min_expected;
      options.mc_size = diag_mc_size;
      options.mc_seed = diag_mc_seed;
      json doc = base_doc("diagnose");
      doc["config"] = {{"input", diag_in.input},
                       {"orientation", diag_in.orientation},
                       {"fit", diag_fit_path},
                       {"statistics", diag_stats},
                       {"min_expected", diag_min_expected},
                       {"mc_size", diag_mc_size},
                       {"mc_seed", diag_mc_seed}};
      doc["fit_used"] = params_to_json(params);
      json values = json::array();
      std::stringstream names(diag_stats);
      std::string name;
      while (std::getline(names, name, ',')) {
        const eplrank::DiagnosticValue value = eplrank::compute_statistic(
            eplrank::statistic_from_string(name), data, params, options);
        json entry;
        entry["statistic"] = std::string(to_string(value.id));
        entry["value"] = value.value;
        entry["cells_used"] = value.cells_used;
        values.push_back(entry);
      }
      doc["statistics"] = values;
      emit(diag_out, doc);
      return 0;
    }

    if (*gof_cmd) {
      const Dataset data = gof_in.load();
      std::vector<eplrank::StatisticId> ids;
      std::stringstream names(gof_stats);
      std::string name;
      while (std::getline(names, name, ',')) {
        ids.push_back(eplrank::statistic_from_string(name));
      }
      eplrank::BootstrapOptions options;
      options.fit_strategy = eplrank::fit_strategy_from_string(gof_strategy);
      options.threads = threads;
      const std::vector<eplrank::BootstrapReport> reports =
          eplrank::bootstrap_pvalues(data, ids, gof_b, gof_refit, gof_seed,
                                     options);
      json doc = base_doc("gof");
      doc["seed"] = gof_seed;
      doc["config"] = {{"input", gof_in.input},
                       {"orientation", gof_in.orientation},
                       {"statistics", gof_stats},
                       {"b", gof_b},
                       {"refit", gof_refit},
                       {"strategy", gof_strategy},
                       {"seed", gof_seed},
                       {"threads", threads}};
      json out_reports = json::array();
      for (const eplrank::BootstrapReport& report : reports) {
        json entry;
        entry["statistic"] = std::string(to_string(report.statistic_id));
        entry["observed"] = report.observed;
        entry["p_value"] = report.p_value;
        entry["b"] = report.b;
        entry["refit"] = report.refit;
        entry["cells_used"] = report.cells_used;
        entry["seed"] = report.seed;
        entry["fit_used"] = params_to_json(report.fit_used);
        entry["replicates"] = report.replicates;
        out_reports.push_back(entry);
      }
      doc["reports"] = out_reports;
      emit(gof_out, doc);
      return 0;
    }

    if (*sgof_cmd || *srec_cmd) {
      const bool recovery = static_cast<bool>(*srec_cmd);
      const std::string config_path = recovery ? srec_config : sgof_config;
      const std::string out_dir = recovery ? srec_dir : sgof_dir;
      eplrank::StudyConfig config = eplrank::load_study_config(config_path);
      if (threads > 0) config.threads = threads;
      std::filesystem::create_directories(out_dir);
      const std::filesystem::path dir(out_dir);
      if (recovery) {
        const eplrank::RecoveryStudyResult result =
            eplrank::recovery_study(config);
        std::ofstream csv(dir / "replicates.csv");
        eplrank::write_recovery_csv(csv, result);
        std::ofstream summary(dir / "summary.json");
        summary << eplrank::recovery_summary_json(result);
      } else {
        const eplrank::GofStudyResult result =
            eplrank::rejection_rate_study(config);
        std::ofstream csv(dir / "replicates.csv");
        eplrank::write_gof_csv(csv, result);
        std::ofstream summary(dir / "summary.json");
        summary << eplrank::gof_summary_json(result);
      }
      return 0;
    }

    throw std::runtime_error("no subcommand selected");
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    json err;
    err["error"] = e.what();
    err["subcommand"] = active;
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    json err;
    err["error"] = e.what();
    err["subcommand"] = active;
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
