#include "eplrank/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace eplrank {

Permutation::Permutation(std::vector<int> entries) : entries_(std::move(entries)) {
  const int k = static_cast<int>(entries_.size());
  std::vector<char> seen(static_cast<std::size_t>(k), 0);
  for (const int value : entries_) {
    if (value < 1 || value > k) {
      throw std::invalid_argument("permutation entry " + std::to_string(value) +
                                  " outside 1.." + std::to_string(k));
    }
    if (seen[static_cast<std::size_t>(value - 1)]) {
      throw std::invalid_argument("duplicate permutation entry " +
                                  std::to_string(value));
    }
    seen[static_cast<std::size_t>(value - 1)] = 1;
  }
}

Permutation Permutation::identity(int k) {
  std::vector<int> entries(static_cast<std::size_t>(k));
  std::iota(entries.begin(), entries.end(), 1);
  Permutation p;
  p.entries_ = std::move(entries);
  return p;
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(entries_.size());
  for (int i = 1; i <= size(); ++i) {
    inv[static_cast<std::size_t>(entry(i) - 1)] = i;
  }
  Permutation p;
  p.entries_ = std::move(inv);
  return p;
}

Permutation Permutation::reversed() const {
  std::vector<int> rev(entries_.rbegin(), entries_.rend());
  Permutation p;
  p.entries_ = std::move(rev);
  return p;
}

std::string Permutation::to_string() const {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i > 0) out << ',';
    out << entries_[i];
  }
  out << ')';
  return out.str();
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("compose: dimension mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
  std::vector<int> out(static_cast<std::size_t>(a.size()));
  for (int i = 1; i <= a.size(); ++i) {
    out[static_cast<std::size_t>(i - 1)] = a.entry(b.entry(i));
  }
  Permutation p(std::move(out));
  return p;
}

namespace {

template <typename T>
RankVector rank_vector_impl(std::span<const T> values, bool descending) {
  if (values.empty()) {
    throw std::invalid_argument("rank_vector: empty input");
  }
  const int k = static_cast<int>(values.size());
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
    const T a = values[static_cast<std::size_t>(lhs)];
    const T b = values[static_cast<std::size_t>(rhs)];
    if (a != b) return descending ? a > b : a < b;
    return lhs < rhs;  // smaller index gets the better rank
  });
  std::vector<int> ranks(static_cast<std::size_t>(k));
  for (int r = 0; r < k; ++r) {
    ranks[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r + 1;
  }
  return RankVector{std::move(ranks)};
}

}  // namespace

RankVector rank_vector(std::span<const double> values, bool descending) {
  return rank_vector_impl(values, descending);
}

RankVector rank_vector(std::span<const long long> values, bool descending) {
  return rank_vector_impl(values, descending);
}

double spearman(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("spearman: dimension mismatch");
  }
  const int k = a.size();
  if (k < 2) {
    throw std::invalid_argument("spearman: requires K >= 2");
  }
  long long sum_sq = 0;
  for (int i = 1; i <= k; ++i) {
    const long long d = a.entry(i) - b.entry(i);
    sum_sq += d * d;
  }
  const double denom = static_cast<double>(k) *
                       (static_cast<double>(k) * k - 1.0);
  return 1.0 - 6.0 * static_cast<double>(sum_sq) / denom;
}

std::string_view to_string(DistanceMetric m) {
  switch (m) {
    case DistanceMetric::kKendall: return "kendall";
    case DistanceMetric::kCayley: return "cayley";
    case DistanceMetric::kHamming: return "hamming";
  }
  return "unknown";
}

DistanceMetric distance_metric_from_string(std::string_view name) {
  if (name == "kendall") return DistanceMetric::kKendall;
  if (name == "cayley") return DistanceMetric::kCayley;
  if (name == "hamming") return DistanceMetric::kHamming;
  throw std::invalid_argument("unknown distance metric: " + std::string(name));
}

int cycle_count(const Permutation& p) {
  const int k = p.size();
  std::vector<char> visited(static_cast<std::size_t>(k), 0);
  int cycles = 0;
  for (int start = 1; start <= k; ++start) {
    if (visited[static_cast<std::size_t>(start - 1)]) continue;
    ++cycles;
    int node = start;
    while (!visited[static_cast<std::size_t>(node - 1)]) {
      visited[static_cast<std::size_t>(node - 1)] = 1;
      node = p.entry(node);
    }
  }
  return cycles;
}

long long perm_distance(const Permutation& a, const Permutation& b,
                        DistanceMetric metric) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("perm_distance: dimension mismatch");
  }
  const int k = a.size();
  switch (metric) {
    case DistanceMetric::kKendall: {
      long long discordant = 0;
      for (int i = 1; i <= k; ++i) {
        for (int j = i + 1; j <= k; ++j) {
          const long long da = a.entry(i) - a.entry(j);
          const long long db = b.entry(i) - b.entry(j);
          if (da * db < 0) ++discordant;
        }
      }
      return discordant;
    }
    case DistanceMetric::kCayley:
      return k - cycle_count(compose(a, b.inverse()));
    case DistanceMetric::kHamming: {
      long long differing = 0;
      for (int i = 1; i <= k; ++i) {
        if (a.entry(i) != b.entry(i)) ++differing;
      }
      return differing;
    }
  }
  throw std::invalid_argument("perm_distance: unknown metric");
}

void for_each_permutation(int k,
                          const std::function<void(const Permutation&)>& fn) {
  if (k < 1 || k > kEnumerationLimit) {
    throw std::invalid_argument("enumeration supports 1 <= K <= " +
                                std::to_string(kEnumerationLimit) + ", got " +
                                std::to_string(k));
  }
  std::vector<int> entries(static_cast<std::size_t>(k));
  std::iota(entries.begin(), entries.end(), 1);
  Permutation p;
  do {
    p = Permutation(entries);
    fn(p);
  } while (std::next_permutation(entries.begin(), entries.end()));
}

std::vector<Permutation> enumerate_permutations(int k) {
  std::vector<Permutation> all;
  for_each_permutation(k, [&](const Permutation& p) { all.push_back(p); });
  return all;
}

}  // namespace eplrank
