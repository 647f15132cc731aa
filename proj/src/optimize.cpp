#include "copreg/optimize.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace copreg {

namespace {

constexpr double kHuge = std::numeric_limits<double>::max();

double sanitize(double value) { return std::isfinite(value) ? value : kHuge; }

} // namespace

OptimResult minimize_scalar(const std::function<double(double)>& f, double lower, double upper, double start,
                            const OptimOptions& options) {
  auto g = [&](double x) { return sanitize(f(x)); };
  const std::size_t m = std::max<std::size_t>(options.scan_points, 3);
  std::vector<double> xs(m), fs(m);
  for (std::size_t i = 0; i < m; ++i) {
    xs[i] = lower + (upper - lower) * static_cast<double>(i) / static_cast<double>(m - 1);
    fs[i] = g(xs[i]);
  }
  const std::size_t best = static_cast<std::size_t>(std::min_element(fs.begin(), fs.end()) - fs.begin());
  const double a = xs[best == 0 ? 0 : best - 1];
  const double b = xs[best + 1 >= m ? m - 1 : best + 1];

  std::uintmax_t iters = options.max_iterations;
  const int bits = static_cast<int>(std::ceil(-std::log2(options.tolerance))) + 2;
  const auto [x_brent, f_brent] = boost::math::tools::brent_find_minima(g, a, b, bits, iters);

  OptimResult result;
  result.iterations = static_cast<std::size_t>(iters);
  result.converged = iters < options.max_iterations;
  result.x = {x_brent};
  result.value = f_brent;
  if (fs[best] < result.value) {
    result.x = {xs[best]};
    result.value = fs[best];
  }
  const double f_start = g(start);
  if (f_start < result.value) {
    result.x = {start};
    result.value = f_start;
  }
  return result;
}

OptimResult minimize_box(const Objective& f, std::vector<double> start, std::span<const double> lower,
                         std::span<const double> upper, const OptimOptions& options) {
  const std::size_t dim = start.size();
  auto project = [&](std::vector<double>& x) {
    for (std::size_t k = 0; k < dim; ++k)
      x[k] = std::clamp(x[k], lower[k], upper[k]);
  };
  auto eval = [&](const std::vector<double>& x) { return sanitize(f(x)); };

  project(start);
  std::vector<std::vector<double>> simplex(dim + 1, start);
  for (std::size_t k = 0; k < dim; ++k) {
    const double step = 0.1 * (upper[k] - lower[k]);
    auto& vertex = simplex[k + 1];
    vertex[k] = start[k] + step <= upper[k] ? start[k] + step : start[k] - step;
    project(vertex);
  }
  std::vector<double> values(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i)
    values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(dim + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> s2;
    std::vector<double> v2;
    for (auto i : order) {
      s2.push_back(simplex[i]);
      v2.push_back(values[i]);
    }
    simplex = std::move(s2);
    values = std::move(v2);
  };
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i <= dim; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k)
        s = std::max(s, std::fabs(simplex[i][k] - simplex[0][k]));
      d = std::max(d, s);
    }
    return d;
  };

  OptimResult result;
  std::size_t iter = 0;
  sort_simplex();
  while (iter < options.max_iterations) {
    if (diameter() < options.tolerance) {
      result.converged = true;
      break;
    }
    ++iter;
    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t k = 0; k < dim; ++k)
        centroid[k] += simplex[i][k] / static_cast<double>(dim);
    auto along = [&](double t) {
      std::vector<double> x(dim);
      for (std::size_t k = 0; k < dim; ++k)
        x[k] = centroid[k] + t * (simplex[dim][k] - centroid[k]);
      project(x);
      return x;
    };
    auto reflected = along(-1.0);
    const double fr = eval(reflected);
    if (fr < values[0]) {
      auto expanded = along(-2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[dim] = std::move(expanded);
        values[dim] = fe;
      } else {
        simplex[dim] = std::move(reflected);
        values[dim] = fr;
      }
    } else if (fr < values[dim - 1]) {
      simplex[dim] = std::move(reflected);
      values[dim] = fr;
    } else {
      const bool outside = fr < values[dim];
      auto contracted = along(outside ? -0.5 : 0.5);
      const double fc = eval(contracted);
      if (fc < (outside ? fr : values[dim])) {
        simplex[dim] = std::move(contracted);
        values[dim] = fc;
      } else {
        for (std::size_t i = 1; i <= dim; ++i) {
          for (std::size_t k = 0; k < dim; ++k)
            simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
          values[i] = eval(simplex[i]);
        }
      }
    }
    sort_simplex();
  }
  if (!result.converged && diameter() < options.tolerance)
    result.converged = true;
  result.iterations = iter;
  result.x = simplex[0];
  result.value = values[0];
  return result;
}

} // namespace copreg
