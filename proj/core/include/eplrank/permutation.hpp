#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eplrank {

/// A permutation of {1..K}, stored as its 1-based image vector.
///
/// The same type serves as ranking pi (position of each item), ordering
/// pi^-1 (item in each position), and reference order rho (position filled
/// at each stage); the interpretation is up to the caller.
class Permutation {
 public:
  Permutation() = default;

  /// Validates that `entries` is a bijection of {1..K}.
  explicit Permutation(std::vector<int> entries);

  static Permutation identity(int k);

  int size() const { return static_cast<int>(entries_.size()); }

  /// Value at 1-based index `pos` (pos in 1..K).
  int entry(int pos) const { return entries_[static_cast<std::size_t>(pos - 1)]; }

  const std::vector<int>& entries() const { return entries_; }

  /// result[entry(i)] = i for all i.
  Permutation inverse() const;

  /// Entries in reverse index order: (e_K, ..., e_1).
  Permutation reversed() const;

  bool operator==(const Permutation&) const = default;

  /// Strict lexicographic order on entries; deterministic tie-breaks.
  bool operator<(const Permutation& other) const {
    return entries_ < other.entries_;
  }

  std::string to_string() const;

 private:
  std::vector<int> entries_;
};

/// Composition (a o b): result(i) = a(b(i)). Throws on size mismatch.
Permutation compose(const Permutation& a, const Permutation& b);

/// Ranks assigned to a real-valued vector. With `descending`, rank 1 goes
/// to the largest value. Ties are broken deterministically: the smaller
/// index receives the better (smaller) rank, so `ranks` is always a valid
/// permutation of {1..K}.
struct RankVector {
  std::vector<int> ranks;

  static constexpr std::string_view kTieRule = "smaller-index-first";

  Permutation as_permutation() const { return Permutation(ranks); }
};

RankVector rank_vector(std::span<const double> values, bool descending = true);
RankVector rank_vector(std::span<const long long> values,
                       bool descending = true);

/// Spearman rank correlation 1 - 6*sum((a_i-b_i)^2) / (K(K^2-1)).
/// Requires K >= 2.
double spearman(const Permutation& a, const Permutation& b);

enum class DistanceMetric { kKendall, kCayley, kHamming };

std::string_view to_string(DistanceMetric m);
DistanceMetric distance_metric_from_string(std::string_view name);

/// Kendall: pairwise discordances; Cayley: K minus the number of cycles of
/// a o b^-1; Hamming: positions where a and b differ.
long long perm_distance(const Permutation& a, const Permutation& b,
                        DistanceMetric metric);

/// Number of cycles of a permutation.
int cycle_count(const Permutation& p);

/// Permutations with more than this many elements are refused by the exact
/// enumeration helpers (8! = 40320).
inline constexpr int kEnumerationLimit = 8;

/// All K! permutations of {1..K} in lexicographic order. K <= kEnumerationLimit.
std::vector<Permutation> enumerate_permutations(int k);

/// Streaming variant of enumerate_permutations.
void for_each_permutation(int k,
                          const std::function<void(const Permutation&)>& fn);

}  // namespace eplrank
