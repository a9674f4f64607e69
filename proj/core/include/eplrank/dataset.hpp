#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "eplrank/permutation.hpp"

namespace eplrank {

/// N complete orderings over K items. Each row is a Permutation read as
/// pi^-1: row.entry(j) is the item ranked in position j.
struct Dataset {
  int k = 0;
  std::vector<Permutation> rows;

  int n() const { return static_cast<int>(rows.size()); }
};

/// Validates row dimensions and N >= 1.
Dataset make_dataset(int k, std::vector<Permutation> rows);

/// How rows of a CSV file are to be interpreted on ingestion.
enum class Orientation { kOrdering, kRanking };

std::string_view to_string(Orientation o);
Orientation orientation_from_string(std::string_view name);

/// Reads a dataset from CSV: one row per unit, K integer columns, optional
/// single header row. Rows recorded as rankings are inverted to orderings.
/// Malformed or non-permutation rows raise std::runtime_error with the
/// 1-based data row number.
Dataset read_dataset_csv(const std::string& path, Orientation orientation);
Dataset read_dataset_csv(std::istream& in, Orientation orientation);

/// Writes orderings as plain comma-separated integers, one row per unit.
void write_dataset_csv(const std::string& path, const Dataset& data);
void write_dataset_csv(std::ostream& out, const Dataset& data);

/// Composes every row with rho: out_row = row o rho. Under the EPL identity
/// this maps EPL-distributed orderings to forward-order PL form.
Dataset compose_with(const Dataset& data, const Permutation& rho);

}  // namespace eplrank
