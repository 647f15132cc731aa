#include "doctest.h"

#include "copreg/copula.hpp"
#include "copreg/errors.hpp"
#include "copreg/experiments.hpp"
#include "copreg/quadrature.hpp"
#include "copreg/regression.hpp"
#include "copreg/vine.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace copreg;

namespace {

std::vector<double> linspace(double a, double b, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v)
    s += x;
  return s / static_cast<double>(v.size());
}

double gaussian_curve(double rho, double u) {
  const boost::math::normal_distribution<double> z;
  return boost::math::cdf(z, rho * boost::math::quantile(z, u) / std::sqrt(2.0 - rho * rho));
}

// E[V | U = u] by direct tanh-sinh quadrature of v c(u, v) over v.
double direct_curve(const CopulaSpec& spec, double u) {
  static const auto rule = tanh_sinh_unit(1.0 / 64.0);
  const CopulaSpec t = transpose(spec);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    s += rule.weights[i] * rule.nodes[i] * density(t, u, rule.nodes[i]);
  return s;
}

} // namespace

TEST_SUITE("regression") {

TEST_CASE("independence reduces to the sample mean") {
  const CopulaSpec indep{Family::Independence, Rotation::R0, {}};
  for (Model m : {Model::M1, Model::M2, Model::XSin}) {
    const Dataset data = simulate_dgp({m, 80, 0.1, 3});
    const auto est = estimate_regression_1d(indep, ecdf_transform(data), linspace(-0.5, 1.5, 41));
    for (double v : est.values)
      CHECK(std::abs(v - mean(data.y)) <= 1e-12);
  }
  const Dataset data2 = simulate_dgp({Model::M5, 80, 0.1, 3});
  const auto ps2 = ecdf_transform(data2);
  const auto grid = linspace(0.0, 1.0, 9);
  const auto flat = estimate_regression_2d([](double, double, double) { return 1.0; }, ps2, grid, grid);
  for (double v : flat.values)
    CHECK(std::abs(v - mean(data2.y)) <= 1e-12);
  const VineModel iv = make_vine(VineVar::Y, indep, indep, indep);
  const auto via_vine = estimate_regression_2d(
      [&](double a, double b, double c) { return vine_density(iv, a, b, c); }, ps2, grid, grid);
  CHECK(via_vine.values == flat.values);
}

TEST_CASE("extrapolation flags") {
  const Dataset data = simulate_dgp({Model::M1, 50, 0.1, 2});
  const auto est = estimate_regression_1d({Family::Clayton, Rotation::R0, {1.0}}, ecdf_transform(data),
                                          std::vector<double>{-1.0, 0.5, 2.0});
  CHECK(est.extrapolation == std::vector<bool>{true, false, true});
  for (double v : est.values)
    CHECK(std::isfinite(v));
  CHECK_THROWS_AS(estimate_regression_1d({Family::Clayton, Rotation::R0, {1.0}}, ecdf_transform(data),
                                         std::vector<double>{0.5, 0.4}),
                  DomainError);
}

TEST_CASE("two-predictor estimator without x2 dependence is constant in x2") {
  const Dataset data = simulate_dgp({Model::M3, 100, 0.1, 4});
  const auto ps = ecdf_transform(data);
  const CopulaSpec pair{Family::Gumbel, Rotation::R0, {1.7}};
  const auto g = linspace(0.05, 0.95, 7);
  const auto est = estimate_regression_2d([&](double w0, double w1, double) { return density(pair, w0, w1); }, ps, g, g);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 1; j < g.size(); ++j)
      CHECK(est.values[i * g.size() + j] == doctest::Approx(est.values[i * g.size()]).epsilon(1e-13));
}

TEST_CASE("two-predictor estimator stays inside the response range") {
  const Dataset data = simulate_dgp({Model::M5, 100, 0.1, 6});
  const auto ps = ecdf_transform(data);
  const VineModel vine = fit_vine(ps, vine_candidates());
  const auto g = linspace(0.0, 1.0, 11);
  const auto est =
      estimate_regression_2d([&](double a, double b, double c) { return vine_density(vine, a, b, c); }, ps, g, g);
  const auto [lo, hi] = std::minmax_element(data.y.begin(), data.y.end());
  for (double v : est.values) {
    CHECK(v >= *lo);
    CHECK(v <= *hi);
  }
}

TEST_CASE("translation of Y") {
  Dataset data = simulate_dgp({Model::M5, 90, 0.1, 7});
  const auto g = linspace(0.1, 0.9, 5);
  const VineModel vine = fit_vine(ecdf_transform(data), vine_candidates());
  auto joint = [&](double a, double b, double c) { return vine_density(vine, a, b, c); };
  const auto before = estimate_regression_2d(joint, ecdf_transform(data), g, g);
  // The 1-d estimator is an unnormalized average: a shift c moves it by c
  // times the mean density weight at that grid point.
  Dataset d1 = simulate_dgp({Model::M1, 90, 0.1, 7});
  const CopulaSpec spec{Family::Joe, Rotation::R0, {1.8}};
  const auto ps1 = ecdf_transform(d1);
  const auto b1 = estimate_regression_1d(spec, ps1, g);
  for (auto& y : data.y)
    y += 5.0;
  for (auto& y : d1.y)
    y += 5.0;
  const auto after = estimate_regression_2d(joint, ecdf_transform(data), g, g);
  for (std::size_t k = 0; k < before.values.size(); ++k)
    CHECK(after.values[k] - before.values[k] == doctest::Approx(5.0).epsilon(1e-12));
  const auto a1 = estimate_regression_1d(spec, ecdf_transform(d1), g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double weight = 0.0;
    const double w = ecdf_eval_sorted(ps1.x_sorted[0], g[i]);
    for (double uy : ps1.u_y)
      weight += density(spec, uy, w) / 90.0;
    CHECK(a1.values[i] - b1.values[i] == doctest::Approx(5.0 * weight).epsilon(1e-12));
  }
}

TEST_CASE("gaussian data recovers the closed-form curve") {
  const double rho = 0.5;
  const auto pts = sample({Family::Gaussian, Rotation::R0, {rho}}, 5000, 21);
  Dataset data;
  data.x.resize(1);
  for (const auto& p : pts) {
    data.y.push_back(p.v);
    data.x[0].push_back(p.u);
  }
  const auto ps = ecdf_transform(data);
  const auto grid = linspace(0.05, 0.95, 21);
  const auto est = estimate_regression_1d(fit_pml(Family::Gaussian, Rotation::R0, ps.response_pairs(0)).spec, ps, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(est.values[i] - gaussian_curve(rho, grid[i])) < 0.03);
}

TEST_CASE("population curve examples") {
  const auto grid = interior_grid(9);
  const auto indep = population_curve({Family::Independence, Rotation::R0, {}}, grid);
  for (double m : indep.m_values)
    CHECK(m == doctest::Approx(0.5).epsilon(1e-12));
  const auto g = population_curve({Family::Gaussian, Rotation::R0, {0.5}}, std::vector<double>{0.5, 0.8});
  CHECK(g.m_values[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(g.m_values[1] == doctest::Approx(gaussian_curve(0.5, 0.8)).epsilon(1e-7));
  CHECK(g.m_values[1] == doctest::Approx(0.6248).epsilon(1e-4));
  CHECK_FALSE(g.warning);
  CHECK_THROWS_AS(population_curve({Family::Gaussian, Rotation::R0, {0.5}}, grid, 16), DomainError);
}

TEST_CASE("population curve against direct quadrature") {
  const std::vector<CopulaSpec> specs = {
      {Family::Clayton, Rotation::R0, {2.0}},      {Family::Gumbel, Rotation::R90, {1.8}},
      {Family::Frank, Rotation::R0, {-6.0}},       {Family::Joe, Rotation::R180, {2.5}},
      {Family::BB1, Rotation::R270, {0.6, 1.4}},   {Family::BB8, Rotation::R0, {3.0, 0.8}},
      {Family::StudentT, Rotation::R0, {0.4, 4.0}}, {Family::GaussianMixture2, Rotation::R0, {-0.6, 0.5, 0.4}},
  };
  const std::vector<double> us = {0.1, 0.35, 0.62, 0.9};
  for (const auto& spec : specs) {
    CAPTURE(to_string(spec));
    const auto curve = population_curve(spec, us);
    for (std::size_t i = 0; i < us.size(); ++i)
      CHECK(curve.m_values[i] == doctest::Approx(direct_curve(spec, us[i])).epsilon(1e-6));
  }
}

TEST_CASE("quadrature convergence and survival symmetry") {
  const auto grid = interior_grid(25);
  std::vector<double> flipped(grid.rbegin(), grid.rend());
  for (Family f : {Family::Gaussian, Family::Clayton, Family::Gumbel, Family::Frank, Family::Joe, Family::AMH}) {
    for (double tau : {0.2, 0.5, 0.8}) {
      const auto params = params_for_tau(f, tau);
      if (!params)
        continue;
      const CopulaSpec spec{f, Rotation::R0, *params};
      CAPTURE(to_string(spec));
      const auto c64 = population_curve(spec, grid, 64);
      const auto c128 = population_curve(spec, grid, 128);
      for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(c64.m_values[i] == doctest::Approx(c128.m_values[i]).epsilon(1e-6));
      CopulaSpec surv = spec;
      surv.rotation = Rotation::R180;
      const auto cs = population_curve(surv, grid);
      const auto cb = population_curve(spec, flipped);
      for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(cs.m_values[i] == doctest::Approx(1.0 - cb.m_values[i]).epsilon(1e-6));
    }
  }
}

TEST_CASE("monotonicity audit") {
  const auto xs = linspace(0.0, 1.0, 41);
  std::vector<double> parabola;
  for (double x : xs)
    parabola.push_back(true_regression(Model::M2, std::span<const double>(&x, 1)));
  CHECK_FALSE(monotonicity_audit(parabola).monotone);
  const auto g = population_curve({Family::Gaussian, Rotation::R0, {0.5}}, interior_grid(101));
  const auto rg = monotonicity_audit(g.m_values);
  CHECK(rg.monotone);
  CHECK(rg.direction == Direction::Increasing);
  const auto fr = monotonicity_audit(population_curve({Family::Frank, Rotation::R0, {5.0}}, interior_grid(101)).m_values);
  CHECK(fr.monotone);
  const auto flat = monotonicity_audit(std::vector<double>{2, 2, 2, 2});
  CHECK(flat.monotone);
  CHECK(flat.direction == Direction::Flat);
  CHECK(direction_name(flat.direction) == "flat");
  const auto dec = monotonicity_audit(std::vector<double>{3, 2, 2.5, 1}, 1e-8);
  CHECK_FALSE(dec.monotone);
  CHECK(dec.direction == Direction::Decreasing);
  CHECK(dec.max_violation == doctest::Approx(0.5));
  CHECK(monotonicity_audit(std::vector<double>{3, 2, 2.5, 1}, 0.3).monotone);
  CHECK_THROWS_AS(monotonicity_audit(std::vector<double>{1, 2}), DomainError);
}

TEST_CASE("pseudo-true parameter") {
  const CopulaSampler indep = [](std::uint64_t seed, std::size_t n) {
    return sample({Family::Independence, Rotation::R0, {}}, n, seed);
  };
  CHECK(std::abs(pseudo_true_parameter(indep, Family::Gaussian, Rotation::R0, 100000, 3).spec.params[0]) < 0.02);
  const CopulaSampler clayton = [](std::uint64_t seed, std::size_t n) {
    return sample({Family::Clayton, Rotation::R0, {2.0}}, n, seed);
  };
  CHECK(pseudo_true_parameter(clayton, Family::Clayton, Rotation::R0, 100000, 4).spec.params[0] ==
        doctest::Approx(2.0).epsilon(0.05));
  // Observed Frank values over five seeds lie within 0.021 of zero.
  const auto m2 = dgp_copula_sampler(Model::M2, 0.1);
  CHECK(std::abs(pseudo_true_parameter(m2, Family::Frank, Rotation::R0, 100000, 1).spec.params[0]) < 0.06);
  CHECK_THROWS_AS(pseudo_true_parameter(indep, Family::Gaussian, Rotation::R0, 100, 1), DomainError);
}

TEST_CASE("csv output") {
  const Dataset data = simulate_dgp({Model::M1, 10, 0.1, 1});
  const auto est = estimate_regression_1d({Family::Independence, Rotation::R0, {}}, ecdf_transform(data),
                                          std::vector<double>{-1.0, 0.5});
  const std::string csv = regression_csv(est);
  CHECK(csv.rfind("x,value,extrapolation\n-1,", 0) == 0);
  CHECK(csv.find(",true\n0.5,") != std::string::npos);
  const auto curve = population_curve({Family::Gaussian, Rotation::R0, {0.5}}, std::vector<double>{0.2, 0.8});
  CHECK(population_curve_csv(curve) == "u,value\n0.2,0.3752034320921082\n0.8,0.6247965679078918\n");
}

} // TEST_SUITE
