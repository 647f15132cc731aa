#pragma once

#include <cstddef>
#include <vector>

namespace copreg {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with `n` nodes on [a, b].
QuadratureRule gauss_legendre(std::size_t n, double a = -1.0, double b = 1.0);

/// Tanh-sinh (double exponential) rule on (0, 1) with the given step in the
/// transformed variable. Nodes whose weight underflows are dropped, so it is
/// safe for integrands with integrable endpoint singularities.
QuadratureRule tanh_sinh_unit(double step = 1.0 / 64.0);

} // namespace copreg
