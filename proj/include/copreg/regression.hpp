#pragma once

#include "copreg/copula.hpp"
#include "copreg/fitting.hpp"
#include "copreg/margins.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace copreg {

/// Copula-based regression estimate on a grid. For d = 2 the grid is the
/// Cartesian product of grid[0] and grid[1] and values are stored row-major,
/// values[i1 * grid[1].size() + i2].
struct RegressionEstimate {
  std::vector<std::vector<double>> grid;
  std::vector<double> values;
  std::vector<bool> extrapolation; // some coordinate lies outside the sample range
  std::vector<bool> valid;         // false where the 2-d denominator underflowed
};

/// Conditional mean E[V | U = u] of a copula with uniform margins, where V is
/// the first copula argument (the response) and U the second.
struct PopulationCurve {
  std::vector<double> u_grid;
  std::vector<double> m_values;
  CopulaSpec spec;
  double max_doubling_diff = 0.0; // |m_N - m_2N| over the grid
  bool warning = false;           // max_doubling_diff exceeded 1e-5
};

using JointDensity = std::function<double(double w0, double w1, double w2)>;

/// m(x) = (1/n) sum_i Y_i c(F_Y(Y_i), F_1(x)) with `spec` the copula of
/// (Y, X_1). Grid points outside the sample range are flagged and evaluated
/// with F_1(x) clamped to [1/(n+1), n/(n+1)].
RegressionEstimate estimate_regression_1d(const CopulaSpec& spec, const PseudoSample& pseudo,
                                          std::span<const double> x_grid);

/// m(x1, x2) = sum_i Y_i c_i / sum_j c_j with c_i = joint(F_Y(Y_i), F_1(x1), F_2(x2)).
RegressionEstimate estimate_regression_2d(const JointDensity& joint, const PseudoSample& pseudo,
                                          std::span<const double> x1_grid, std::span<const double> x2_grid);

/// E[V | U = u] = int_0^1 Q(p | u) dp, Q the conditional quantile of the
/// response. The integral runs over normal scores p = Phi(s) with
/// Gauss-Legendre on s in [-8.5, 8.5]; it is repeated with twice the nodes
/// and the difference is reported. Needs at least 32 nodes.
PopulationCurve population_curve(const CopulaSpec& spec, std::span<const double> u_grid,
                                 std::size_t quadrature_nodes = 64);

/// `count` equally spaced interior points k / (count + 1).
std::vector<double> interior_grid(std::size_t count);

using CopulaSampler = std::function<std::vector<UV>(std::uint64_t seed, std::size_t n)>;

/// Maximizes the Monte-Carlo average of log c(.; theta) over mc_size draws of
/// the true copula. Needs mc_size >= 10^4.
FitResult pseudo_true_parameter(const CopulaSampler& true_sampler, Family family, Rotation rotation,
                                std::size_t mc_size, std::uint64_t seed);

enum class Direction { Flat, Increasing, Decreasing };

struct MonotonicityReport {
  bool monotone = true;
  Direction direction = Direction::Flat;
  double max_violation = 0.0;
};

/// Monotone iff every successive difference has one sign up to
/// tolerance * (max - min). A curve whose range is zero is flat.
MonotonicityReport monotonicity_audit(std::span<const double> values, double tolerance = 1e-8);

std::string direction_name(Direction direction);

/// CSV with columns x (or x1,x2), value, extrapolation.
std::string regression_csv(const RegressionEstimate& estimate);
/// CSV with columns u, value.
std::string population_curve_csv(const PopulationCurve& curve);

} // namespace copreg
