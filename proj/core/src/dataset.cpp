#include "eplrank/dataset.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eplrank {

Dataset make_dataset(int k, std::vector<Permutation> rows) {
  if (rows.empty()) {
    throw std::invalid_argument("dataset: N >= 1 required");
  }
  for (const Permutation& row : rows) {
    if (row.size() != k) {
      throw std::invalid_argument("dataset: row of size " +
                                  std::to_string(row.size()) +
                                  " in a K=" + std::to_string(k) + " dataset");
    }
  }
  return Dataset{k, std::move(rows)};
}

std::string_view to_string(Orientation o) {
  return o == Orientation::kOrdering ? "ordering" : "ranking";
}

Orientation orientation_from_string(std::string_view name) {
  if (name == "ordering" || name == "orderings") return Orientation::kOrdering;
  if (name == "ranking" || name == "rankings") return Orientation::kRanking;
  throw std::invalid_argument("unknown orientation: " + std::string(name) +
                              " (expected 'ordering' or 'ranking')");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    // trim surrounding whitespace
    std::size_t begin = 0;
    std::size_t end = field.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(field[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(field[end - 1]))) --end;
    fields.push_back(field.substr(begin, end - begin));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_int(const std::string& text, int& out) {
  if (text.empty()) return false;
  std::size_t pos = 0;
  try {
    const long value = std::stol(text, &pos);
    if (pos != text.size()) return false;
    out = static_cast<int>(value);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

Dataset read_dataset_csv(std::istream& in, Orientation orientation) {
  std::vector<Permutation> rows;
  int k = 0;
  std::string line;
  long line_number = 0;
  long data_row = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_number == 1 && line.size() >= 3 &&
        static_cast<unsigned char>(line[0]) == 0xEF) {
      line.erase(0, 3);  // UTF-8 BOM
    }
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    std::vector<int> values(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (!parse_int(fields[i], values[i])) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first_content_line) {
        first_content_line = false;  // optional header row
        continue;
      }
      throw std::runtime_error("row " + std::to_string(data_row + 1) +
                               ": non-integer field");
    }
    first_content_line = false;
    ++data_row;
    if (k == 0) {
      k = static_cast<int>(values.size());
    } else if (static_cast<int>(values.size()) != k) {
      throw std::runtime_error("row " + std::to_string(data_row) +
                               ": expected " + std::to_string(k) +
                               " columns, got " +
                               std::to_string(values.size()));
    }
    try {
      rows.emplace_back(std::move(values));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("row " + std::to_string(data_row) + ": " +
                               e.what());
    }
  }
  if (rows.empty()) {
    throw std::runtime_error("dataset: no data rows");
  }
  if (orientation == Orientation::kRanking) {
    for (Permutation& row : rows) row = row.inverse();
  }
  return Dataset{k, std::move(rows)};
}

Dataset read_dataset_csv(const std::string& path, Orientation orientation) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open dataset file: " + path);
  }
  return read_dataset_csv(in, orientation);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  for (const Permutation& row : data.rows) {
    for (int j = 1; j <= data.k; ++j) {
      if (j > 1) out << ',';
      out << row.entry(j);
    }
    out << '\n';
  }
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  write_dataset_csv(out, data);
}

Dataset compose_with(const Dataset& data, const Permutation& rho) {
  if (rho.size() != data.k) {
    throw std::invalid_argument("compose_with: dimension mismatch");
  }
  std::vector<Permutation> rows;
  rows.reserve(data.rows.size());
  for (const Permutation& row : data.rows) {
    rows.push_back(compose(row, rho));
  }
  return Dataset{data.k, std::move(rows)};
}

}  // namespace eplrank
