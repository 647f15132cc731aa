#pragma once

#include "copreg/copula.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace copreg {

/// Raw regression data: response plus d predictor columns.
struct Dataset {
  std::vector<double> y;
  std::vector<std::vector<double>> x; // x[j][i] = X_{ij}

  std::size_t n() const { return y.size(); }
  std::size_t d() const { return x.size(); }
};

/// Rank-transformed sample. Every pseudo-observation is
/// #{k : Z_k <= Z_i} / (n + 1) within its column.
struct PseudoSample {
  std::vector<double> y_raw;
  std::vector<double> u_y;
  std::vector<std::vector<double>> u_x;    // u_x[j][i]
  std::vector<std::vector<double>> x_sorted; // sorted raw predictor columns, for evaluating F_j at new points
  std::size_t n = 0;
  std::size_t d = 0;

  /// (u_y[i], u_x[j][i]) pairs for fitting a bivariate copula of (Y, X_j).
  std::vector<UV> response_pairs(std::size_t j = 0) const;
  /// (u_x[a][i], u_x[b][i]) pairs.
  std::vector<UV> predictor_pairs(std::size_t a, std::size_t b) const;
};

/// count(column <= value) / (n + 1) for every entry; ties share the maximal
/// count. Throws DomainError if the column has fewer than 2 values.
std::vector<double> pseudo_observations(std::span<const double> column);

/// Applies pseudo_observations to the response and every predictor.
PseudoSample ecdf_transform(const Dataset& data);

/// count(column <= query) / (n + 1).
double ecdf_eval(std::span<const double> column, double query);

/// Same as ecdf_eval but for a column that is already sorted ascending.
double ecdf_eval_sorted(std::span<const double> sorted_column, double query);

/// Smallest sample value x with ecdf_eval(column, x) >= p. Saturates at the
/// sample maximum once p exceeds n / (n + 1).
double empirical_quantile(std::span<const double> column, double p);

/// Kendall's tau-b of two equally long columns.
double empirical_kendall_tau(std::span<const double> a, std::span<const double> b);
double empirical_kendall_tau(std::span<const UV> points);

} // namespace copreg
