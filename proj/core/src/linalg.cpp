#include "eplrank/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace eplrank {

SymmetricEigen eigen_symmetric(const std::vector<std::vector<double>>& matrix) {
  const int n = static_cast<int>(matrix.size());
  if (n == 0) throw std::invalid_argument("eigen_symmetric: empty matrix");
  for (const auto& row : matrix) {
    if (static_cast<int>(row.size()) != n) {
      throw std::invalid_argument("eigen_symmetric: matrix not square");
    }
  }
  std::vector<std::vector<double>> a = matrix;
  std::vector<std::vector<double>> v(
      static_cast<std::size_t>(n),
      std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;

  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      scale = std::max(scale, std::fabs(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
    }
  }
  if (scale == 0.0) scale = 1.0;

  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        off += std::fabs(a[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)]);
      }
    }
    if (off <= 1e-14 * scale * n) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
        if (std::fabs(apq) <= 1e-300) continue;
        const double app = a[static_cast<std::size_t>(p)][static_cast<std::size_t>(p)];
        const double aqq = a[static_cast<std::size_t>(q)][static_cast<std::size_t>(q)];
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double aip = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)];
          const double aiq = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)];
          a[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)] = c * aip - s * aiq;
          a[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)] = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = a[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)];
          const double aqi = a[static_cast<std::size_t>(q)][static_cast<std::size_t>(i)];
          a[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)] = c * api - s * aqi;
          a[static_cast<std::size_t>(q)][static_cast<std::size_t>(i)] = s * api + c * aqi;
        }
        for (int i = 0; i < n; ++i) {
          const double vip = v[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)];
          const double viq = v[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)];
          v[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)] = c * vip - s * viq;
          v[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)] = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
    const double dl = a[static_cast<std::size_t>(lhs)][static_cast<std::size_t>(lhs)];
    const double dr = a[static_cast<std::size_t>(rhs)][static_cast<std::size_t>(rhs)];
    if (dl != dr) return dl > dr;
    return lhs < rhs;
  });

  SymmetricEigen out;
  out.values.resize(static_cast<std::size_t>(n));
  out.vectors.assign(static_cast<std::size_t>(n),
                     std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int c = 0; c < n; ++c) {
    const int col = order[static_cast<std::size_t>(c)];
    out.values[static_cast<std::size_t>(c)] =
        a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
    std::vector<double>& vec = out.vectors[static_cast<std::size_t>(c)];
    for (int i = 0; i < n; ++i) {
      vec[static_cast<std::size_t>(i)] =
          v[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)];
    }
    int lead = 0;
    for (int i = 1; i < n; ++i) {
      if (std::fabs(vec[static_cast<std::size_t>(i)]) >
          std::fabs(vec[static_cast<std::size_t>(lead)])) {
        lead = i;
      }
    }
    if (vec[static_cast<std::size_t>(lead)] < 0.0) {
      for (double& x : vec) x = -x;
    }
  }
  return out;
}

}  // namespace eplrank
