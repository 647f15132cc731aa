#include "doctest.h"

#include "copreg/copula.hpp"
#include "copreg/errors.hpp"
#include "copreg/margins.hpp"
#include "copreg/quadrature.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <random>
#include <vector>

using namespace copreg;

namespace {

// A representative interior parameter for every family.
std::vector<CopulaSpec> sample_specs() {
  return {
      {Family::Independence, Rotation::R0, {}},
      {Family::Gaussian, Rotation::R0, {0.6}},
      {Family::StudentT, Rotation::R0, {-0.4, 6.0}},
      {Family::Clayton, Rotation::R0, {2.0}},
      {Family::Gumbel, Rotation::R0, {1.8}},
      {Family::Frank, Rotation::R0, {-4.0}},
      {Family::Joe, Rotation::R0, {2.2}},
      {Family::AMH, Rotation::R0, {0.6}},
      {Family::BB1, Rotation::R0, {0.8, 1.5}},
      {Family::BB6, Rotation::R0, {1.5, 1.4}},
      {Family::BB7, Rotation::R0, {1.6, 0.9}},
      {Family::BB8, Rotation::R0, {3.0, 0.7}},
      {Family::GaussianMixture2, Rotation::R0, {-0.5, 0.7, 0.3}},
  };
}

std::vector<CopulaSpec> with_rotations(const std::vector<CopulaSpec>& base) {
  std::vector<CopulaSpec> out;
  for (auto s : base)
    for (Rotation r : {Rotation::R0, Rotation::R90, Rotation::R180, Rotation::R270}) {
      s.rotation = r;
      out.push_back(s);
    }
  return out;
}

double clayton_density_oracle(double t, double u, double v) {
  return (1.0 + t) * std::pow(u * v, -t - 1.0) * std::pow(std::pow(u, -t) + std::pow(v, -t) - 1.0, -2.0 - 1.0 / t);
}

} // namespace

TEST_SUITE("copula") {

TEST_CASE("density examples") {
  CHECK(density({Family::Independence, Rotation::R0, {}}, 0.3, 0.7) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(density({Family::Gaussian, Rotation::R0, {0.0}}, 0.2, 0.9) == doctest::Approx(1.0).epsilon(1e-12));
  const CopulaSpec clayton{Family::Clayton, Rotation::R0, {2.0}};
  const double oracle = clayton_density_oracle(2.0, 0.5, 0.5);
  CHECK(oracle == doctest::Approx(1.4811).epsilon(1e-4));
  CHECK(density(clayton, 0.5, 0.5) == doctest::Approx(oracle).epsilon(1e-12));
  // Cross-check by a mixed central difference of the closed-form CDF.
  auto C = [](double u, double v) { return std::pow(std::pow(u, -2.0) + std::pow(v, -2.0) - 1.0, -0.5); };
  const double h = 1e-4;
  const double fd = (C(0.5 + h, 0.5 + h) - C(0.5 + h, 0.5 - h) - C(0.5 - h, 0.5 + h) + C(0.5 - h, 0.5 - h)) / (4 * h * h);
  CHECK(fd == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("cdf examples and boundary conditions") {
  CHECK(cdf({Family::Independence, Rotation::R0, {}}, 0.4, 0.5) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(cdf({Family::Clayton, Rotation::R0, {2.0}}, 0.5, 0.5) == doctest::Approx(1.0 / std::sqrt(7.0)).epsilon(1e-12));
  CHECK(cdf({Family::Clayton, Rotation::R0, {2.0}}, 0.5, 0.5) == doctest::Approx(0.3780).epsilon(1e-4));
  for (const auto& spec : with_rotations(sample_specs())) {
    CAPTURE(to_string(spec));
    for (double u : {0.1, 0.45, 0.9}) {
      CHECK(cdf(spec, u, 1.0) == doctest::Approx(u).epsilon(1e-9));
      CHECK(cdf(spec, 1.0, u) == doctest::Approx(u).epsilon(1e-9));
      CHECK(std::abs(cdf(spec, u, 0.0)) < 1e-12);
      CHECK(std::abs(cdf(spec, 0.0, u)) < 1e-12);
    }
  }
}

TEST_CASE("clayton cdf against sampler frequency") {
  const auto pts = sample({Family::Clayton, Rotation::R0, {2.0}}, 200000, 5);
  std::size_t hits = 0;
  for (const auto& p : pts)
    hits += (p.u <= 0.5 && p.v <= 0.5) ? 1 : 0;
  const double freq = static_cast<double>(hits) / 200000.0;
  const double sd = std::sqrt(0.378 * 0.622 / 200000.0);
  CHECK(std::abs(freq - 1.0 / std::sqrt(7.0)) < 4 * sd);
}

TEST_CASE("h-function examples") {
  CHECK(h_function({Family::Independence, Rotation::R0, {}}, 0.37, 0.81) == doctest::Approx(0.37).epsilon(1e-15));
  CHECK(h_function({Family::Gaussian, Rotation::R0, {0.0}}, 0.3, 0.8) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(h_function({Family::Gaussian, Rotation::R0, {0.5}}, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  const boost::math::normal_distribution<double> z;
  const double v = 0.3, u = 0.8, rho = 0.5;
  const double closed =
      boost::math::cdf(z, (boost::math::quantile(z, v) - rho * boost::math::quantile(z, u)) / std::sqrt(1 - rho * rho));
  CHECK(h_function({Family::Gaussian, Rotation::R0, {rho}}, v, u) == doctest::Approx(closed).epsilon(1e-12));
}

TEST_CASE("h-function matches finite difference of cdf") {
  for (const auto& spec : with_rotations(sample_specs())) {
    CAPTURE(to_string(spec));
    for (auto [u, v] : {std::pair{0.3, 0.6}, std::pair{0.7, 0.2}, std::pair{0.55, 0.85}}) {
      const double h = 1e-5;
      const double fd = (cdf(spec, u + h, v) - cdf(spec, u - h, v)) / (2 * h);
      CHECK(h_function(spec, v, u) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("h-inverse round trip and bisection oracle") {
  CHECK(h_inverse({Family::Independence, Rotation::R0, {}}, 0.42, 0.9) == doctest::Approx(0.42).epsilon(1e-15));
  for (const auto& spec : with_rotations(sample_specs())) {
    CAPTURE(to_string(spec));
    for (double u : {0.05, 0.5, 0.93})
      for (double v : {0.02, 0.4, 0.77, 0.98}) {
        const double p = h_function(spec, v, u);
        CHECK(h_inverse(spec, p, u) == doctest::Approx(v).epsilon(1e-8).scale(1.0));
      }
  }
  const CopulaSpec clayton{Family::Clayton, Rotation::R0, {2.0}};
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (h_function(clayton, mid, 0.3) < 0.5 ? lo : hi) = mid;
  }
  CHECK(h_inverse(clayton, 0.5, 0.3) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-10));
}

TEST_CASE("density integrates to one") {
  // Tensor tanh-sinh rule: nodes cluster at the edges, where tail-dependent
  // densities are singular.
  const auto rule = tanh_sinh_unit(1.0 / 16.0);
  for (const auto& spec : with_rotations(sample_specs())) {
    CAPTURE(to_string(spec));
    double total = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      for (std::size_t j = 0; j < rule.nodes.size(); ++j)
        total += rule.weights[i] * rule.weights[j] * density(spec, rule.nodes[i], rule.nodes[j]);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("density matches finite differences of cdf") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  for (const auto& spec : with_rotations(sample_specs())) {
    CAPTURE(to_string(spec));
    for (int k = 0; k < 50; ++k) {
      const double u = unif(rng), v = unif(rng);
      const double h = 1e-4;
      const double fd =
          (cdf(spec, u + h, v + h) - cdf(spec, u + h, v - h) - cdf(spec, u - h, v + h) + cdf(spec, u - h, v - h)) /
          (4 * h * h);
      CHECK(density(spec, u, v) == doctest::Approx(fd).epsilon(1e-4).scale(1.0));
    }
  }
}

TEST_CASE("rotation closure") {
  for (const auto& base : sample_specs()) {
    CopulaSpec s180 = base;
    s180.rotation = Rotation::R180;
    CopulaSpec s90 = base;
    s90.rotation = Rotation::R90;
    CopulaSpec s270 = base;
    s270.rotation = Rotation::R270;
    for (auto [u, v] : {std::pair{0.2, 0.3}, std::pair{0.8, 0.6}, std::pair{0.05, 0.9}}) {
      CHECK(density(s180, u, v) == density(base, 1 - u, 1 - v));
      CHECK(density(s90, u, v) == density(base, 1 - u, v));
      CHECK(density(s270, u, v) == density(base, u, 1 - v));
    }
  }
  for (Rotation r : {Rotation::R90, Rotation::R180, Rotation::R270})
    CHECK(density({Family::Independence, r, {}}, 0.3, 0.6) == 1.0);
}

TEST_CASE("mixture density is the weighted sum of Gaussian densities") {
  const CopulaSpec mix{Family::GaussianMixture2, Rotation::R0, {-0.5, 0.7, 0.3}};
  for (auto [u, v] : {std::pair{0.2, 0.3}, std::pair{0.8, 0.6}, std::pair{0.5, 0.5}}) {
    const double expected = 0.3 * density({Family::Gaussian, Rotation::R0, {-0.5}}, u, v) +
                            0.7 * density({Family::Gaussian, Rotation::R0, {0.7}}, u, v);
    CHECK(density(mix, u, v) == doctest::Approx(expected).epsilon(1e-14));
  }
  const auto canon = canonicalize({Family::GaussianMixture2, Rotation::R0, {0.7, -0.5, 0.7}});
  CHECK(canon.params == std::vector<double>{-0.5, 0.7, 0.30000000000000004});
}

TEST_CASE("sampler determinism and dependence") {
  const CopulaSpec clayton{Family::Clayton, Rotation::R0, {2.0}};
  const auto a = sample(clayton, 500, 9);
  const auto b = sample(clayton, 500, 9);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].u == b[i].u);
    CHECK(a[i].v == b[i].v);
  }
  const std::size_t n = 10000;
  const auto ind = sample({Family::Independence, Rotation::R0, {}}, n, 1);
  const double nd = static_cast<double>(n);
  CHECK(std::abs(empirical_kendall_tau(ind)) < 3 * std::sqrt(2 * (2 * nd + 5) / (9 * nd * (nd - 1))));
  CHECK(empirical_kendall_tau(sample(clayton, 20000, 2)) == doctest::Approx(0.5).epsilon(0.02 / 0.5));
}

TEST_CASE("kendall tau") {
  CHECK(kendall_tau({Family::Independence, Rotation::R0, {}}) == 0.0);
  CHECK(kendall_tau({Family::Gaussian, Rotation::R0, {0.5}}) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(kendall_tau({Family::Clayton, Rotation::R0, {2.0}}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(kendall_tau({Family::Gumbel, Rotation::R0, {2.0}}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(kendall_tau({Family::Clayton, Rotation::R90, {2.0}}) == doctest::Approx(-0.5).epsilon(1e-12));
  // Frank: 1 - 4/t + 4 D1(t)/t with the Debye function by Simpson's rule.
  const double t = 5.0;
  const int m = 20000;
  double debye = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double x = t * i / m;
    const double f = i == 0 ? 1.0 : x / std::expm1(x);
    debye += f * (i == 0 || i == m ? 1 : (i % 2 ? 4 : 2));
  }
  debye *= (t / m) / 3.0 / t;
  CHECK(kendall_tau({Family::Frank, Rotation::R0, {t}}) == doctest::Approx(1 - 4 / t + 4 * debye / t).epsilon(1e-9));
  // Families without closed forms against the sampler.
  for (const auto& spec : {CopulaSpec{Family::Joe, Rotation::R0, {2.2}}, CopulaSpec{Family::BB7, Rotation::R0, {1.6, 0.9}},
                           CopulaSpec{Family::BB8, Rotation::R0, {3.0, 0.7}}}) {
    CAPTURE(to_string(spec));
    CHECK(empirical_kendall_tau(sample(spec, 20000, 4)) == doctest::Approx(kendall_tau(spec)).epsilon(0.03));
  }
}

TEST_CASE("log likelihood is the sum of log densities") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unif(0.01, 0.99);
  std::vector<UV> pts(100);
  for (auto& p : pts)
    p = {unif(rng), unif(rng)};
  CHECK(log_likelihood({Family::Independence, Rotation::R0, {}}, pts) == 0.0);
  const CopulaSpec spec{Family::BB1, Rotation::R270, {0.8, 1.5}};
  double sum = 0.0;
  for (const auto& p : pts)
    sum += std::log(density(spec, p.u, p.v));
  CHECK(log_likelihood(spec, pts) == doctest::Approx(sum).epsilon(1e-12));
  CHECK(log_likelihood(spec, std::span<const UV>(pts.data(), 1)) ==
        doctest::Approx(std::log(density(spec, pts[0].u, pts[0].v))).epsilon(1e-14));
}

TEST_CASE("errors and names") {
  CHECK_THROWS_AS(density({Family::Clayton, Rotation::R0, {-3.0}}, 0.5, 0.5), ParameterError);
  CHECK_THROWS_AS(density({Family::Gaussian, Rotation::R0, {0.5, 1.0}}, 0.5, 0.5), ParameterError);
  CHECK_THROWS_AS(density({Family::Gaussian, Rotation::R0, {0.5}}, 0.0, 0.5), DomainError);
  CHECK_THROWS_AS(h_function({Family::Gaussian, Rotation::R0, {0.5}}, 0.5, 1.2), DomainError);
  CHECK(parse_family_tag("clayton@180") == std::pair{Family::Clayton, Rotation::R180});
  CHECK(family_tag(Family::Joe, Rotation::R90) == "joe@90");
  CHECK_THROWS(parse_family_tag("nosuch"));
  CHECK(transpose({Family::Clayton, Rotation::R90, {2.0}}).rotation == Rotation::R270);
}

} // TEST_SUITE
