#include "copreg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace copreg {

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0)
    throw std::invalid_argument("gauss_legendre: need at least one node");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    // Newton iteration on P_n from the Tricomi initial guess.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / static_cast<double>(k);
      }
      dp = static_cast<double>(n) * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16)
        break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

QuadratureRule tanh_sinh_unit(double step) {
  if (!(step > 0.0))
    throw std::invalid_argument("tanh_sinh_unit: step must be positive");
  QuadratureRule rule;
  const double half_pi = 0.5 * std::numbers::pi;
  for (int k = -static_cast<int>(std::ceil(4.0 / step)); k * step <= 4.0; ++k) {
    const double x = k * step;
    const double s = half_pi * std::sinh(x);
    // t = (1 + tanh s) / 2 written to keep precision near both ends.
    const double t = s < 0.0 ? 1.0 / (1.0 + std::exp(-2.0 * s)) : 1.0 - 1.0 / (1.0 + std::exp(2.0 * s));
    const double c = std::cosh(s);
    const double w = step * half_pi * std::cosh(x) / (2.0 * c * c);
    if (t <= 0.0 || t >= 1.0 || w < 1e-300)
      continue;
    rule.nodes.push_back(t);
    rule.weights.push_back(w);
  }
  return rule;
}

} // namespace copreg
