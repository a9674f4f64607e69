#include "eplrank/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "eplrank/linalg.hpp"
#include "eplrank/rng.hpp"

namespace eplrank {

std::string_view to_string(HeuristicMethod m) {
  return m == HeuristicMethod::kPca ? "pca" : "mds";
}

HeuristicMethod heuristic_method_from_string(std::string_view name) {
  if (name == "pca") return HeuristicMethod::kPca;
  if (name == "mds") return HeuristicMethod::kMds;
  throw std::invalid_argument("unknown heuristic method: " + std::string(name));
}

std::string_view to_string(FitStrategy s) {
  switch (s) {
    case FitStrategy::kExhaustive: return "exhaustive";
    case FitStrategy::kLocalSearch: return "local_search";
    case FitStrategy::kHeuristicSeeded: return "heuristic_seeded";
  }
  return "unknown";
}

FitStrategy fit_strategy_from_string(std::string_view name) {
  if (name == "exhaustive") return FitStrategy::kExhaustive;
  if (name == "local_search") return FitStrategy::kLocalSearch;
  if (name == "heuristic_seeded") return FitStrategy::kHeuristicSeeded;
  throw std::invalid_argument("unknown fit strategy: " + std::string(name));
}

namespace {

/// Flat 0-based selection sequences: seq[s*k + (t-1)] is the item selected
/// by unit s at stage t under the given rho.
std::vector<int> selection_sequences(const Dataset& data,
                                     const Permutation& rho) {
  const int k = data.k;
  std::vector<int> seq(static_cast<std::size_t>(data.n()) *
                       static_cast<std::size_t>(k));
  std::size_t at = 0;
  for (const Permutation& ordering : data.rows) {
    for (int t = 1; t <= k; ++t) {
      seq[at++] = ordering.entry(rho.entry(t)) - 1;
    }
  }
  return seq;
}

double loglik_of_sequences(const std::vector<int>& seq, int k,
                           const std::vector<double>& weights) {
  const std::size_t n = seq.size() / static_cast<std::size_t>(k);
  double ll = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const int* row = seq.data() + s * static_cast<std::size_t>(k);
    double suffix = 0.0;
    for (int t = k - 1; t >= 0; --t) {
      suffix += weights[static_cast<std::size_t>(row[t])];
      if (t <= k - 2) {
        ll += std::log(weights[static_cast<std::size_t>(row[t])] / suffix);
      }
    }
  }
  return ll;
}

}  // namespace

WeightFit fit_weights_given_rho(const Dataset& data, const Permutation& rho,
                                double tol, int max_iter) {
  const int k = data.k;
  if (rho.size() != k) {
    throw std::invalid_argument("fit_weights_given_rho: rho dimension mismatch");
  }
  WeightFit out;
  if (k == 1) {
    out.weights = {1.0};
    out.converged = true;
    return out;
  }
  const std::vector<int> seq = selection_sequences(data, rho);
  const std::size_t n = static_cast<std::size_t>(data.n());

  // Selections in stages 1..K-1 (the final stage is forced).
  std::vector<long long> wins(static_cast<std::size_t>(k), 0);
  for (std::size_t s = 0; s < n; ++s) {
    const int* row = seq.data() + s * static_cast<std::size_t>(k);
    for (int t = 0; t <= k - 2; ++t) {
      ++wins[static_cast<std::size_t>(row[t])];
    }
  }
  for (int i = 0; i < k; ++i) {
    if (wins[static_cast<std::size_t>(i)] == 0) {
      out.boundary_items.push_back(i + 1);
    }
  }
  const int n_boundary = static_cast<int>(out.boundary_items.size());

  std::vector<double> p(static_cast<std::size_t>(k), 1.0 / k);
  std::vector<double> denom(static_cast<std::size_t>(k));
  std::vector<double> suffix(static_cast<std::size_t>(k));
  std::vector<double> cum_inv(static_cast<std::size_t>(k));

  const auto renormalize = [&]() {
    if (n_boundary > 0) {
      double live_total = 0.0;
      for (int i = 0; i < k; ++i) {
        if (wins[static_cast<std::size_t>(i)] > 0) {
          live_total += p[static_cast<std::size_t>(i)];
        }
      }
      const double live_target = 1.0 - n_boundary * kWeightFloor;
      for (int i = 0; i < k; ++i) {
        if (wins[static_cast<std::size_t>(i)] > 0) {
          p[static_cast<std::size_t>(i)] *= live_target / live_total;
        } else {
          p[static_cast<std::size_t>(i)] = kWeightFloor;
        }
      }
    } else {
      const double total = std::accumulate(p.begin(), p.end(), 0.0);
      for (double& w : p) w /= total;
    }
  };
  renormalize();

  double prev_ll = -std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= max_iter; ++iter) {
    std::fill(denom.begin(), denom.end(), 0.0);
    double ll = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      const int* row = seq.data() + s * static_cast<std::size_t>(k);
      double acc = 0.0;
      for (int t = k - 1; t >= 0; --t) {
        acc += p[static_cast<std::size_t>(row[t])];
        suffix[static_cast<std::size_t>(t)] = acc;
      }
      double cum = 0.0;
      for (int t = 0; t <= k - 2; ++t) {
        cum += 1.0 / suffix[static_cast<std::size_t>(t)];
        cum_inv[static_cast<std::size_t>(t)] = cum;
        ll += std::log(p[static_cast<std::size_t>(row[t])] /
                       suffix[static_cast<std::size_t>(t)]);
      }
      cum_inv[static_cast<std::size_t>(k - 1)] =
          cum_inv[static_cast<std::size_t>(k - 2)];
      for (int t = 0; t <= k - 1; ++t) {
        denom[static_cast<std::size_t>(row[t])] +=
            cum_inv[static_cast<std::size_t>(t)];
      }
    }
    out.iterations = iter;
    if (std::fabs(ll - prev_ll) < tol * (1.0 + std::fabs(ll))) {
      out.converged = true;
      break;
    }
    prev_ll = ll;
    for (int i = 0; i < k; ++i) {
      if (wins[static_cast<std::size_t>(i)] > 0) {
        p[static_cast<std::size_t>(i)] =
            static_cast<double>(wins[static_cast<std::size_t>(i)]) /
            denom[static_cast<std::size_t>(i)];
      }
    }
    renormalize();
  }

  out.weights = std::move(p);
  out.loglik = loglik_of_sequences(seq, k, out.weights);
  return out;
}

namespace {

struct RhoEvaluator {
  const Dataset& data;
  double tol;
  int max_iter;
  long long total_iterations = 0;
  std::map<std::vector<int>, WeightFit> cache;

  const WeightFit& evaluate(const Permutation& rho) {
    auto it = cache.find(rho.entries());
    if (it == cache.end()) {
      WeightFit fit = fit_weights_given_rho(data, rho, tol, max_iter);
      total_iterations += fit.iterations;
      it = cache.emplace(rho.entries(), std::move(fit)).first;
    }
    return it->second;
  }
};

struct SearchState {
  Permutation rho;
  WeightFit fit;
  bool valid = false;

  void consider(const Permutation& candidate, const WeightFit& fit_in) {
    if (!valid || fit_in.loglik > fit.loglik ||
        (fit_in.loglik == fit.loglik && candidate < rho)) {
      rho = candidate;
      fit = fit_in;
      valid = true;
    }
  }
};

/// Best-improvement hill climbing over all position transpositions of rho
/// (the pair-swap neighborhood, which contains the adjacent one).
void local_search_from(const Permutation& start, RhoEvaluator& eval,
                       SearchState& best) {
  Permutation current = start;
  WeightFit current_fit = eval.evaluate(current);
  best.consider(current, current_fit);
  const int k = start.size();
  bool improved = true;
  while (improved) {
    improved = false;
    SearchState step;
    for (int a = 0; a < k; ++a) {
      for (int b = a + 1; b < k; ++b) {
        std::vector<int> entries = current.entries();
        std::swap(entries[static_cast<std::size_t>(a)],
                  entries[static_cast<std::size_t>(b)]);
        Permutation neighbor(std::move(entries));
        step.consider(neighbor, eval.evaluate(neighbor));
      }
    }
    if (step.valid && step.fit.loglik > current_fit.loglik + 1e-12) {
      current = step.rho;
      current_fit = step.fit;
      best.consider(current, current_fit);
      improved = true;
    }
  }
}

}  // namespace

HeuristicResult heuristic_rho(const Dataset& data, HeuristicMethod method) {
  const int k = data.k;
  if (k < 2) throw std::invalid_argument("heuristic_rho: K >= 2 required");

  HeuristicResult out;
  out.method = method;
  out.tmatrix = t_matrix(data);
  out.scores.assign(static_cast<std::size_t>(k), 0.0);

  bool all_rows_identical = true;
  for (const Permutation& row : data.rows) {
    if (!(row == data.rows.front())) {
      all_rows_identical = false;
      break;
    }
  }
  bool d_all_zero = true;
  for (const auto& row : out.tmatrix.d) {
    for (const long long v : row) {
      if (v != 0) {
        d_all_zero = false;
        break;
      }
    }
    if (!d_all_zero) break;
  }

  const auto finish_degenerate = [&]() {
    out.degenerate = true;
    out.rho_hat = Permutation::identity(k);
    const double ll = fit_weights_given_rho(data, out.rho_hat).loglik;
    out.orientation_loglik[0] = ll;
    out.orientation_loglik[1] = ll;
    return out;
  };
  if (all_rows_identical || d_all_zero) return finish_degenerate();

  std::vector<std::vector<double>> dist(
      static_cast<std::size_t>(k),
      std::vector<double>(static_cast<std::size_t>(k), 0.0));
  for (int j = 0; j < k; ++j) {
    for (int jp = 0; jp < k; ++jp) {
      dist[static_cast<std::size_t>(j)][static_cast<std::size_t>(jp)] =
          static_cast<double>(
              out.tmatrix.d[static_cast<std::size_t>(j)][static_cast<std::size_t>(jp)]);
    }
  }

  std::vector<double> scores(static_cast<std::size_t>(k), 0.0);
  if (method == HeuristicMethod::kPca) {
    // Rows of D are K observation points; center the columns and take the
    // scores on the first principal axis.
    std::vector<std::vector<double>> centered = dist;
    for (int col = 0; col < k; ++col) {
      double mean = 0.0;
      for (int row = 0; row < k; ++row) {
        mean += centered[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
      }
      mean /= k;
      for (int row = 0; row < k; ++row) {
        centered[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] -= mean;
      }
    }
    std::vector<std::vector<double>> cov(
        static_cast<std::size_t>(k),
        std::vector<double>(static_cast<std::size_t>(k), 0.0));
    for (int a = 0; a < k; ++a) {
      for (int b = a; b < k; ++b) {
        double sum = 0.0;
        for (int row = 0; row < k; ++row) {
          sum += centered[static_cast<std::size_t>(row)][static_cast<std::size_t>(a)] *
                 centered[static_cast<std::size_t>(row)][static_cast<std::size_t>(b)];
        }
        cov[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = sum / (k - 1);
        cov[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = sum / (k - 1);
      }
    }
    double cov_scale = 0.0;
    for (const auto& row : cov) {
      for (const double x : row) cov_scale = std::max(cov_scale, std::fabs(x));
    }
    const SymmetricEigen eig = eigen_symmetric(cov);
    if (eig.values[0] <= 1e-12 * std::max(1.0, cov_scale)) {
      return finish_degenerate();
    }
    for (int row = 0; row < k; ++row) {
      double score = 0.0;
      for (int col = 0; col < k; ++col) {
        score += centered[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] *
                 eig.vectors[0][static_cast<std::size_t>(col)];
      }
      scores[static_cast<std::size_t>(row)] = score;
    }
  } else {
    // Classical scaling: double-center the squared distances.
    std::vector<std::vector<double>> b(
        static_cast<std::size_t>(k),
        std::vector<double>(static_cast<std::size_t>(k), 0.0));
    std::vector<double> row_mean(static_cast<std::size_t>(k), 0.0);
    double grand_mean = 0.0;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        const double sq =
            dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
            dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = sq;
        row_mean[static_cast<std::size_t>(i)] += sq;
        grand_mean += sq;
      }
    }
    for (double& m : row_mean) m /= k;
    grand_mean /= static_cast<double>(k) * k;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            -0.5 * (b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                    row_mean[static_cast<std::size_t>(i)] -
                    row_mean[static_cast<std::size_t>(j)] + grand_mean);
      }
    }
    double b_scale = 0.0;
    for (const auto& row : b) {
      for (const double x : row) b_scale = std::max(b_scale, std::fabs(x));
    }
    const SymmetricEigen eig = eigen_symmetric(b);
    if (eig.values[0] <= 1e-12 * std::max(1.0, b_scale)) {
      return finish_degenerate();
    }
    const double radius = std::sqrt(eig.values[0]);
    for (int i = 0; i < k; ++i) {
      scores[static_cast<std::size_t>(i)] =
          radius * eig.vectors[0][static_cast<std::size_t>(i)];
    }
  }

  std::vector<int> positions(static_cast<std::size_t>(k));
  std::iota(positions.begin(), positions.end(), 1);
  std::sort(positions.begin(), positions.end(), [&](int lhs, int rhs) {
    const double sl = scores[static_cast<std::size_t>(lhs - 1)];
    const double sr = scores[static_cast<std::size_t>(rhs - 1)];
    if (sl != sr) return sl < sr;
    return lhs < rhs;
  });
  Permutation candidate(positions);
  Permutation reversed = candidate.reversed();

  const double ll_sorted = fit_weights_given_rho(data, candidate).loglik;
  const double ll_reversed = fit_weights_given_rho(data, reversed).loglik;
  out.orientation_loglik[0] = ll_sorted;
  out.orientation_loglik[1] = ll_reversed;
  if (ll_sorted >= ll_reversed) {
    out.rho_hat = candidate;
    out.scores = scores;
  } else {
    out.rho_hat = reversed;
    for (double& s : scores) s = -s;
    out.scores = scores;
  }
  return out;
}

FitResult fit_epl_mle(const Dataset& data, FitStrategy strategy, int n_starts,
                      std::uint64_t seed, double tol, int max_iter) {
  const int k = data.k;
  if (k < 1) throw std::invalid_argument("fit_epl_mle: empty dataset");
  RhoEvaluator eval{data, tol, max_iter};
  SearchState best;

  switch (strategy) {
    case FitStrategy::kExhaustive: {
      if (k > kExhaustiveLimit) {
        throw std::invalid_argument(
            "fit_epl_mle: exhaustive search limited to K <= " +
            std::to_string(kExhaustiveLimit));
      }
      for_each_permutation(k, [&](const Permutation& rho) {
        best.consider(rho, eval.evaluate(rho));
      });
      break;
    }
    case FitStrategy::kLocalSearch: {
      if (n_starts < 1) {
        throw std::invalid_argument("fit_epl_mle: n_starts >= 1 required");
      }
      for (int s = 0; s < n_starts; ++s) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s), "ls_start"));
        std::vector<int> entries(static_cast<std::size_t>(k));
        std::iota(entries.begin(), entries.end(), 1);
        rng.shuffle(entries);
        local_search_from(Permutation(std::move(entries)), eval, best);
      }
      break;
    }
    case FitStrategy::kHeuristicSeeded: {
      const HeuristicResult h = heuristic_rho(data, HeuristicMethod::kPca);
      local_search_from(h.rho_hat, eval, best);
      break;
    }
  }

  FitResult out;
  out.params = EplParams(best.rho, best.fit.weights);
  out.loglik = best.fit.loglik;
  out.strategy = strategy;
  out.iterations = eval.total_iterations;
  out.converged = best.fit.converged;
  out.boundary = !best.fit.boundary_items.empty();
  return out;
}

}  // namespace eplrank
