#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace copreg {

struct OptimResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

struct OptimOptions {
  double tolerance = 1e-6;       // simplex diameter / bracket width in parameter space
  std::size_t max_iterations = 500;
  std::size_t scan_points = 21;  // coarse grid before Brent
};

/// Minimizes a function of one variable on [lower, upper]: a coarse scan to
/// locate the basin, then Brent's method inside the neighbouring bracket.
/// `start` is always evaluated and returned if nothing better is found.
OptimResult minimize_scalar(const std::function<double(double)>& f, double lower, double upper, double start,
                            const OptimOptions& options = {});

/// Nelder-Mead on a box; trial points are projected onto [lower, upper].
/// Converges when the simplex diameter drops below options.tolerance.
OptimResult minimize_box(const Objective& f, std::vector<double> start, std::span<const double> lower,
                         std::span<const double> upper, const OptimOptions& options = {});

} // namespace copreg
