#include "copreg/regression.hpp"

#include "copreg/csv.hpp"
#include "copreg/errors.hpp"
#include "copreg/normal.hpp"
#include "copreg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace copreg {

namespace {

struct Clamped {
  double u;
  bool outside;
};

Clamped clamped_ecdf(std::span<const double> sorted, double x) {
  const double n = static_cast<double>(sorted.size());
  const bool outside = x < sorted.front() || x > sorted.back();
  const double u = std::clamp(ecdf_eval_sorted(sorted, x), 1.0 / (n + 1.0), n / (n + 1.0));
  return {u, outside};
}

void require_grid(std::span<const double> grid, const char* what) {
  if (grid.empty())
    throw DomainError(std::string(what) + ": empty grid");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1]))
      throw DomainError(std::string(what) + ": grid must be strictly increasing");
}

std::vector<double> curve_values(const CopulaSpec& conditional, std::span<const double> u_grid,
                                 const QuadratureRule& rule) {
  // p = Phi(s) is clamped so the inverse never sees 0 or 1; the mass beyond
  // |s| = 8 is below 1e-15.
  const double p_lo = norm_cdf(-8.0);
  const double p_hi = norm_cdf(8.0);
  std::vector<double> ps(rule.nodes.size()), ws(rule.nodes.size());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    ps[k] = std::clamp(norm_cdf(rule.nodes[k]), p_lo, p_hi);
    ws[k] = rule.weights[k] * norm_pdf(rule.nodes[k]);
  }
  std::vector<double> out(u_grid.size());
  for (std::size_t g = 0; g < u_grid.size(); ++g) {
    const auto qs = h_inverse_ascending(conditional, ps, u_grid[g]);
    double sum = 0.0;
    for (std::size_t k = 0; k < ps.size(); ++k)
      sum += ws[k] * qs[k];
    out[g] = sum;
  }
  return out;
}

} // namespace

std::vector<double> interior_grid(std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k)
    out[k] = static_cast<double>(k + 1) / static_cast<double>(count + 1);
  return out;
}

RegressionEstimate estimate_regression_1d(const CopulaSpec& spec, const PseudoSample& pseudo,
                                          std::span<const double> x_grid) {
  if (pseudo.d != 1)
    throw DomainError("estimate_regression_1d: requires a single predictor");
  if (pseudo.n < 2)
    throw DomainError("estimate_regression_1d: requires n >= 2");
  require_grid(x_grid, "estimate_regression_1d");
  const std::size_t n = pseudo.n;
  const std::size_t g = x_grid.size();

  RegressionEstimate est;
  est.grid = {std::vector<double>(x_grid.begin(), x_grid.end())};
  est.values.assign(g, 0.0);
  est.extrapolation.assign(g, false);
  est.valid.assign(g, true);

  std::vector<double> ux(g);
  for (std::size_t k = 0; k < g; ++k) {
    const auto c = clamped_ecdf(pseudo.x_sorted[0], x_grid[k]);
    ux[k] = c.u;
    est.extrapolation[k] = c.outside;
  }
  if (spec.family == Family::Independence) {
    validate(spec);
    double sum = 0.0;
    for (double y : pseudo.y_raw)
      sum += y;
    std::fill(est.values.begin(), est.values.end(), sum / static_cast<double>(n));
    return est;
  }
  const auto logc = log_density_grid(spec, pseudo.u_y, ux); // [i * g + k]
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < g; ++k)
      est.values[k] += pseudo.y_raw[i] * std::exp(logc[i * g + k]);
  for (auto& v : est.values)
    v /= static_cast<double>(n);
  return est;
}

RegressionEstimate estimate_regression_2d(const JointDensity& joint, const PseudoSample& pseudo,
                                          std::span<const double> x1_grid, std::span<const double> x2_grid) {
  if (pseudo.d != 2)
    throw DomainError("estimate_regression_2d: requires two predictors");
  if (pseudo.n < 2)
    throw DomainError("estimate_regression_2d: requires n >= 2");
  require_grid(x1_grid, "estimate_regression_2d");
  require_grid(x2_grid, "estimate_regression_2d");
  const std::size_t g1 = x1_grid.size();
  const std::size_t g2 = x2_grid.size();

  RegressionEstimate est;
  est.grid = {std::vector<double>(x1_grid.begin(), x1_grid.end()),
              std::vector<double>(x2_grid.begin(), x2_grid.end())};
  est.values.assign(g1 * g2, 0.0);
  est.extrapolation.assign(g1 * g2, false);
  est.valid.assign(g1 * g2, true);

  std::vector<Clamped> c1(g1), c2(g2);
  for (std::size_t a = 0; a < g1; ++a)
    c1[a] = clamped_ecdf(pseudo.x_sorted[0], x1_grid[a]);
  for (std::size_t b = 0; b < g2; ++b)
    c2[b] = clamped_ecdf(pseudo.x_sorted[1], x2_grid[b]);

  for (std::size_t a = 0; a < g1; ++a) {
    for (std::size_t b = 0; b < g2; ++b) {
      double num = 0.0;
      double den = 0.0;
      for (std::size_t i = 0; i < pseudo.n; ++i) {
        const double c = joint(pseudo.u_y[i], c1[a].u, c2[b].u);
        num += pseudo.y_raw[i] * c;
        den += c;
      }
      const std::size_t k = a * g2 + b;
      est.extrapolation[k] = c1[a].outside || c2[b].outside;
      if (!(den / static_cast<double>(pseudo.n) > 1e-300) || !std::isfinite(num)) {
        est.valid[k] = false;
        est.values[k] = std::numeric_limits<double>::quiet_NaN();
      } else {
        est.values[k] = num / den;
      }
    }
  }
  return est;
}

PopulationCurve population_curve(const CopulaSpec& spec, std::span<const double> u_grid,
                                 std::size_t quadrature_nodes) {
  validate(spec);
  if (quadrature_nodes < 32)
    throw DomainError("population_curve: need at least 32 quadrature nodes");
  for (double u : u_grid)
    if (!(u > 0.0 && u < 1.0))
      throw DomainError("population_curve: grid points must lie in (0,1)");

  PopulationCurve curve;
  curve.spec = spec;
  curve.u_grid.assign(u_grid.begin(), u_grid.end());
  if (spec.family == Family::Independence) {
    curve.m_values.assign(u_grid.size(), 0.5);
    return curve;
  }
  // Quantiles of the response given the predictor come from the transposed copula.
  const CopulaSpec conditional = transpose(spec);
  const auto coarse = curve_values(conditional, u_grid, gauss_legendre(quadrature_nodes, -8.5, 8.5));
  curve.m_values = curve_values(conditional, u_grid, gauss_legendre(2 * quadrature_nodes, -8.5, 8.5));
  for (std::size_t g = 0; g < u_grid.size(); ++g)
    curve.max_doubling_diff = std::max(curve.max_doubling_diff, std::fabs(coarse[g] - curve.m_values[g]));
  curve.warning = curve.max_doubling_diff > 1e-5;
  return curve;
}

FitResult pseudo_true_parameter(const CopulaSampler& true_sampler, Family family, Rotation rotation,
                                std::size_t mc_size, std::uint64_t seed) {
  if (mc_size < 10000)
    throw DomainError("pseudo_true_parameter: mc_size must be at least 10^4");
  const auto points = true_sampler(seed, mc_size);
  return fit_pml(family, rotation, points);
}

MonotonicityReport monotonicity_audit(std::span<const double> values, double tolerance) {
  if (values.size() < 3)
    throw DomainError("monotonicity_audit: need at least 3 grid points");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  MonotonicityReport report;
  if (!(range > 0.0))
    return report;
  double up = 0.0;   // largest rise
  double down = 0.0; // largest fall
  for (std::size_t k = 1; k < values.size(); ++k) {
    const double diff = values[k] - values[k - 1];
    up = std::max(up, diff);
    down = std::max(down, -diff);
  }
  const double allowed = tolerance * range;
  // The direction is whichever sign needs the smaller violation.
  if (down <= up) {
    report.direction = Direction::Increasing;
    report.max_violation = down;
  } else {
    report.direction = Direction::Decreasing;
    report.max_violation = up;
  }
  report.monotone = report.max_violation <= allowed;
  return report;
}

std::string direction_name(Direction direction) {
  switch (direction) {
  case Direction::Flat:
    return "flat";
  case Direction::Increasing:
    return "increasing";
  case Direction::Decreasing:
    return "decreasing";
  }
  return "flat";
}

std::string regression_csv(const RegressionEstimate& estimate) {
  std::string out;
  if (estimate.grid.size() == 1) {
    out = "x,value,extrapolation\n";
    for (std::size_t k = 0; k < estimate.values.size(); ++k)
      out += format_double(estimate.grid[0][k]) + "," + format_double(estimate.values[k]) + "," +
             (estimate.extrapolation[k] ? "true" : "false") + "\n";
    return out;
  }
  out = "x1,x2,value,extrapolation\n";
  const std::size_t g2 = estimate.grid[1].size();
  for (std::size_t k = 0; k < estimate.values.size(); ++k)
    out += format_double(estimate.grid[0][k / g2]) + "," + format_double(estimate.grid[1][k % g2]) + "," +
           format_double(estimate.values[k]) + "," + (estimate.extrapolation[k] ? "true" : "false") + "\n";
  return out;
}

std::string population_curve_csv(const PopulationCurve& curve) {
  std::string out = "u,value\n";
  for (std::size_t k = 0; k < curve.u_grid.size(); ++k)
    out += format_double(curve.u_grid[k]) + "," + format_double(curve.m_values[k]) + "\n";
  return out;
}

} // namespace copreg
