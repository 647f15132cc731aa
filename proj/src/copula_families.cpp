// Unrotated copula families. All densities are evaluated in log space.
//
// Archimedean families are written through their generator phi and its
// inverse psi:
//   C(u, v)   = psi(phi(u) + phi(v))
//   c(u, v)   = psi''(s) |phi'(u)| |phi'(v)|,  s = phi(u) + phi(v)
//   h(v | u)  = |psi'(s)| |phi'(u)|
// Clayton is written out explicitly because its generator overflows for
// strong dependence near the origin.

#include "copreg/copula.hpp"

#include "copreg/errors.hpp"
#include "copreg/normal.hpp"
#include "copreg/quadrature.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace copreg::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Double precision throughout; the default long-double promotion is ~5x slower.
using FastPolicy = boost::math::policies::policy<boost::math::policies::promote_double<false>>;
using StudentT = boost::math::students_t_distribution<double, FastPolicy>;
constexpr double kIndependenceEps = 1e-10;

// log(e^x + 1) without overflow.
double log1pexp(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

// log(1 - e^x) for x <= 0, accurate at both ends.
double log1mexp(double x) { return x > -0.6931471805599453 ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x)); }

// log(1 + (e^-theta - 1) e^-s) for Frank, without cancellation when theta > 0.
double frank_log_term(double th, double s) {
  if (th > 0.0)
    return std::log(-std::expm1(-s) + std::exp(-th - s));
  return std::log1p(std::expm1(-th) * std::exp(-s));
}

double log_sum_exp(double a, double b) {
  const double m = std::max(a, b);
  if (m == -kInf)
    return -kInf;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// ---------------------------------------------------------------- Clayton

// log(u^-theta + v^-theta - 1)
double clayton_log_sum(double theta, double u, double v) {
  const double a = -theta * std::log(u);
  const double b = -theta * std::log(v);
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(-hi) * std::expm1(lo));
}

double clayton_log_density(double theta, double u, double v) {
  const double l = clayton_log_sum(theta, u, v);
  return std::log1p(theta) - (theta + 1.0) * (std::log(u) + std::log(v)) - (2.0 + 1.0 / theta) * l;
}

double clayton_h(double theta, double v, double u) {
  const double l = clayton_log_sum(theta, u, v);
  return std::exp(-(theta + 1.0) * std::log(u) - (1.0 + 1.0 / theta) * l);
}

double clayton_h_inverse(double theta, double q, double u) {
  const double b = -theta * std::log(u);
  const double d = std::expm1(-theta / (1.0 + theta) * std::log(q));
  // v^-theta = e^b * d + 1
  const double log_vt = log1pexp(b + std::log(d));
  return std::exp(-log_vt / theta);
}

// ---------------------------------------------------------------- Gaussian


double gauss_h(double rho, double v, double u) {
  if (std::fabs(rho) < kIndependenceEps)
    return v;
  const double x = norm_quantile(u);
  const double y = norm_quantile(v);
  return norm_cdf((y - rho * x) / std::sqrt(1.0 - rho * rho));
}

double gauss_h_inverse(double rho, double q, double u) {
  if (std::fabs(rho) < kIndependenceEps)
    return q;
  const double x = norm_quantile(u);
  return norm_cdf(norm_quantile(q) * std::sqrt(1.0 - rho * rho) + rho * x);
}

// ---------------------------------------------------------------- Student t

double t_log_norm_const(double rho, double nu) {
  return std::lgamma(0.5 * (nu + 2.0)) + std::lgamma(0.5 * nu) - 2.0 * std::lgamma(0.5 * (nu + 1.0)) -
         0.5 * std::log1p(-rho * rho);
}

// Log density in terms of the t scores x = T^{-1}(u), y = T^{-1}(v).
double t_log_density_scores(double rho, double nu, double log_const, double x, double y) {
  const double quad = (x * x + y * y - 2.0 * rho * x * y) / (nu * (1.0 - rho * rho));
  return log_const - 0.5 * (nu + 2.0) * std::log1p(quad) +
         0.5 * (nu + 1.0) * (std::log1p(x * x / nu) + std::log1p(y * y / nu));
}

double t_log_density(double rho, double nu, double u, double v) {
  const StudentT t(nu);
  return t_log_density_scores(rho, nu, t_log_norm_const(rho, nu), boost::math::quantile(t, u),
                              boost::math::quantile(t, v));
}

double gauss_log_density_scores(double rho, double x, double y) {
  const double one_m = 1.0 - rho * rho;
  return -0.5 * std::log1p(-rho * rho) - (rho * rho * (x * x + y * y) - 2.0 * rho * x * y) / (2.0 * one_m);
}

double gauss_log_density(double rho, double u, double v) {
  if (std::fabs(rho) < kIndependenceEps)
    return 0.0;
  return gauss_log_density_scores(rho, norm_quantile(u), norm_quantile(v));
}

double t_h(double rho, double nu, double v, double u) {
  const StudentT t(nu);
  const StudentT t1(nu + 1.0);
  const double x = boost::math::quantile(t, u);
  const double y = boost::math::quantile(t, v);
  const double scale = std::sqrt((nu + x * x) * (1.0 - rho * rho) / (nu + 1.0));
  return boost::math::cdf(t1, (y - rho * x) / scale);
}

double t_h_inverse(double rho, double nu, double q, double u) {
  const StudentT t(nu);
  const StudentT t1(nu + 1.0);
  const double x = boost::math::quantile(t, u);
  const double scale = std::sqrt((nu + x * x) * (1.0 - rho * rho) / (nu + 1.0));
  return boost::math::cdf(t, boost::math::quantile(t1, q) * scale + rho * x);
}

// ---------------------------------------------------------------- Archimedean

// phi(t)
double arch_phi(Family f, std::span<const double> p, double t) {
  switch (f) {
  case Family::Clayton:
    return std::expm1(-p[0] * std::log(t)) / p[0];
  case Family::Gumbel:
    return std::pow(-std::log(t), p[0]);
  case Family::Frank: {
    const double th = p[0];
    const double ratio = std::expm1(-th * t) / std::expm1(-th);
    if (ratio < 0.5)
      return -std::log(ratio);
    // Near t = 1 the ratio is close to 1; form ratio - 1 without cancellation.
    return -std::log1p(std::exp(-th) * std::expm1(th * (1.0 - t)) / std::expm1(-th));
  }
  case Family::Joe:
    return -log1mexp(p[0] * std::log1p(-t));
  case Family::AMH:
    return std::log((1.0 - p[0] * (1.0 - t)) / t);
  case Family::BB1:
    return std::pow(std::expm1(-p[0] * std::log(t)), p[1]);
  case Family::BB6:
    return std::pow(-log1mexp(p[0] * std::log1p(-t)), p[1]);
  case Family::BB7:
    return std::expm1(-p[1] * log1mexp(p[0] * std::log1p(-t)));
  case Family::BB8: {
    const double eta = -std::expm1(p[0] * std::log1p(-p[1]));
    return std::log(eta) - log1mexp(p[0] * std::log1p(-p[1] * t));
  }
  default:
    break;
  }
  throw std::logic_error("arch_phi: not an Archimedean family");
}

// log|phi'(t)|
double arch_log_dphi(Family f, std::span<const double> p, double t) {
  switch (f) {
  case Family::Clayton:
    return -(p[0] + 1.0) * std::log(t);
  case Family::Gumbel:
    return std::log(p[0]) + (p[0] - 1.0) * std::log(-std::log(t)) - std::log(t);
  case Family::Frank:
    return std::log(std::fabs(p[0])) - p[0] * t - std::log(std::fabs(std::expm1(-p[0] * t)));
  case Family::Joe: {
    const double th = p[0];
    const double l1 = std::log1p(-t);
    return std::log(th) + (th - 1.0) * l1 - log1mexp(th * l1);
  }
  case Family::AMH:
    return std::log1p(-p[0]) - std::log(t) - std::log1p(-p[0] * (1.0 - t));
  case Family::BB1: {
    const double th = p[0], de = p[1];
    return std::log(de * th) + (de - 1.0) * std::log(std::expm1(-th * std::log(t))) - (th + 1.0) * std::log(t);
  }
  case Family::BB6: {
    const double th = p[0], de = p[1];
    const double l1 = std::log1p(-t);
    const double log_r = log1mexp(th * l1);
    const double tail = de == 1.0 ? 0.0 : (de - 1.0) * std::log(-log_r);
    return std::log(de * th) + tail + (th - 1.0) * l1 - log_r;
  }
  case Family::BB7: {
    const double th = p[0], de = p[1];
    const double l1 = std::log1p(-t);
    return std::log(de * th) - (de + 1.0) * log1mexp(th * l1) + (th - 1.0) * l1;
  }
  case Family::BB8: {
    const double th = p[0], de = p[1];
    const double la = std::log1p(-de * t);
    return std::log(th * de) + (th - 1.0) * la - log1mexp(th * la);
  }
  default:
    break;
  }
  throw std::logic_error("arch_log_dphi: not an Archimedean family");
}

// psi(s) = phi^{-1}(s)
double arch_psi(Family f, std::span<const double> p, double s) {
  switch (f) {
  case Family::Clayton:
    return std::exp(-std::log1p(p[0] * s) / p[0]);
  case Family::Gumbel:
    return std::exp(-std::pow(s, 1.0 / p[0]));
  case Family::Frank:
    return -frank_log_term(p[0], s) / p[0];
  case Family::Joe:
    return -std::expm1(log1mexp(-s) / p[0]);
  case Family::AMH:
    return (1.0 - p[0]) / (std::exp(s) - p[0]);
  case Family::BB1:
    return std::exp(-std::log1p(std::pow(s, 1.0 / p[1])) / p[0]);
  case Family::BB6: {
    const double w = std::pow(s, 1.0 / p[1]);
    return -std::expm1(log1mexp(-w) / p[0]);
  }
  case Family::BB7: {
    const double q = -std::expm1(-std::log1p(s) / p[1]);
    return -std::expm1(std::log(q) / p[0]);
  }
  case Family::BB8: {
    const double th = p[0], de = p[1];
    const double eta = -std::expm1(th * std::log1p(-de));
    return -std::expm1(log1mexp(log1mexp(th * std::log1p(-de)) - s) / th) / de;
  }
  default:
    break;
  }
  throw std::logic_error("arch_psi: not an Archimedean family");
}

// log|psi'(s)|
double arch_log_dpsi(Family f, std::span<const double> p, double s) {
  switch (f) {
  case Family::Clayton:
    return -(1.0 / p[0] + 1.0) * std::log1p(p[0] * s);
  case Family::Gumbel: {
    const double a = 1.0 / p[0];
    return std::log(a) + (a - 1.0) * std::log(s) - std::pow(s, a);
  }
  case Family::Frank: {
    const double k = std::expm1(-p[0]);
    return std::log(std::fabs(k / p[0])) - s - frank_log_term(p[0], s);
  }
  case Family::Joe: {
    const double a = 1.0 / p[0];
    return std::log(a) + (a - 1.0) * log1mexp(-s) - s;
  }
  case Family::AMH:
    return std::log1p(-p[0]) + s - 2.0 * std::log(std::exp(s) - p[0]);
  case Family::BB1: {
    const double th = p[0], de = p[1];
    const double w = std::pow(s, 1.0 / de);
    return -(1.0 / th + 1.0) * std::log1p(w) - std::log(th * de) + (1.0 / de - 1.0) * std::log(s);
  }
  case Family::BB6: {
    const double th = p[0], de = p[1];
    const double w = std::pow(s, 1.0 / de);
    const double q = -std::expm1(-w);
    return -std::log(th * de) + (1.0 / th - 1.0) * std::log(q) - w + std::log(w) - std::log(s);
  }
  case Family::BB7: {
    const double th = p[0], de = p[1];
    const double lz = -std::log1p(s) / de;
    const double q = -std::expm1(lz);
    return -std::log(th * de) + (1.0 / th - 1.0) * std::log(q) + lz - std::log1p(s);
  }
  case Family::BB8: {
    const double th = p[0], de = p[1];
    const double eta = -std::expm1(th * std::log1p(-de));
    const double lq = log1mexp(std::log(eta) - s);
    return -std::log(de * th) + (1.0 / th - 1.0) * lq + std::log(eta) - s;
  }
  default:
    break;
  }
  throw std::logic_error("arch_log_dpsi: not an Archimedean family");
}

// log psi''(s)
double arch_log_d2psi(Family f, std::span<const double> p, double s) {
  switch (f) {
  case Family::Clayton:
    return std::log1p(p[0]) - (1.0 / p[0] + 2.0) * std::log1p(p[0] * s);
  case Family::Gumbel: {
    const double a = 1.0 / p[0];
    const double sa = std::pow(s, a);
    return std::log(a) + (a - 2.0) * std::log(s) - sa + std::log(a * sa + 1.0 - a);
  }
  case Family::Frank: {
    const double k = std::expm1(-p[0]);
    return std::log(std::fabs(k / p[0])) - s - 2.0 * frank_log_term(p[0], s);
  }
  case Family::Joe: {
    const double a = 1.0 / p[0];
    const double e = std::exp(-s);
    return std::log(a) - s + (a - 2.0) * log1mexp(-s) + std::log1p(-a * e);
  }
  case Family::AMH: {
    const double th = p[0];
    const double es = std::exp(s);
    return std::log1p(-th) + s + std::log(es + th) - 3.0 * std::log(es - th);
  }
  case Family::BB1: {
    const double th = p[0], de = p[1];
    const double w = std::pow(s, 1.0 / de);
    const double bracket = (1.0 + th) / (th * de) * w + (1.0 - 1.0 / de) * (1.0 + w);
    return -std::log(th * de) - (1.0 / th + 2.0) * std::log1p(w) + (1.0 / de - 2.0) * std::log(s) +
           std::log(bracket);
  }
  case Family::BB6: {
    const double th = p[0], de = p[1];
    const double w = std::pow(s, 1.0 / de);
    const double e = std::exp(-w);
    const double q = -std::expm1(-w);
    const double log_g = (1.0 / th - 1.0) * std::log(q) - w + std::log(w) - std::log(s);
    const double bracket = (1.0 - 1.0 / th) * e * w / (de * q) + w / de + 1.0 - 1.0 / de;
    return -std::log(th * de) + log_g - std::log(s) + std::log(bracket);
  }
  case Family::BB7: {
    const double th = p[0], de = p[1];
    const double lz = -std::log1p(s) / de;
    const double z = std::exp(lz);
    const double q = -std::expm1(lz);
    const double log_g = (1.0 / th - 1.0) * std::log(q) + lz - std::log1p(s);
    const double bracket = (1.0 - 1.0 / th) * z / (de * q) + 1.0 / de + 1.0;
    return -std::log(th * de) + log_g - std::log1p(s) + std::log(bracket);
  }
  case Family::BB8: {
    const double th = p[0], de = p[1];
    const double eta = -std::expm1(th * std::log1p(-de));
    const double one_m_q = eta * std::exp(-s);
    const double lq = log1mexp(std::log(eta) - s);
    const double q = std::exp(lq);
    return -std::log(de * th) + (1.0 / th - 2.0) * lq + std::log(one_m_q) +
           std::log(q + (1.0 - 1.0 / th) * one_m_q);
  }
  default:
    break;
  }
  throw std::logic_error("arch_log_d2psi: not an Archimedean family");
}

// Parameter values at which a family collapses to independence.
bool degenerates_to_independence(Family f, std::span<const double> p) {
  switch (f) {
  case Family::Independence:
    return true;
  case Family::Gaussian:
  case Family::Frank:
  case Family::AMH:
    return std::fabs(p[0]) < kIndependenceEps;
  case Family::Gumbel:
  case Family::Joe:
    return p[0] - 1.0 < kIndependenceEps;
  case Family::BB8:
    return p[0] - 1.0 < kIndependenceEps;
  default:
    return false;
  }
}

double arch_log_density(Family f, std::span<const double> p, double u, double v) {
  const double s = arch_phi(f, p, u) + arch_phi(f, p, v);
  return arch_log_d2psi(f, p, s) + arch_log_dphi(f, p, u) + arch_log_dphi(f, p, v);
}

double arch_h(Family f, std::span<const double> p, double v, double u) {
  const double s = arch_phi(f, p, u) + arch_phi(f, p, v);
  const double h = std::exp(arch_log_dpsi(f, p, s) + arch_log_dphi(f, p, u));
  return std::clamp(h, 0.0, 1.0);
}

double arch_cdf(Family f, std::span<const double> p, double u, double v) {
  const double s = arch_phi(f, p, u) + arch_phi(f, p, v);
  return std::clamp(arch_psi(f, p, s), 0.0, std::min(u, v));
}

// Safeguarded Newton-bisection on h(. | u) = q; the density is the derivative.
// The root is known to lie in [lo, hi]; `start` must be inside.
double numeric_h_inverse(Family f, std::span<const double> p, double q, double u, double lo = 0.0,
                         double hi = 1.0, double start = -1.0) {
  double v = start > lo && start < hi ? start : std::clamp(q, std::max(lo, 1e-12), std::min(hi, 1.0 - 1e-12));
  for (int iter = 0; iter < 400; ++iter) {
    const double r = base_h(f, p, v, u) - q;
    if (r == 0.0)
      return v;
    if (r > 0.0)
      hi = v;
    else
      lo = v;
    const double dens = std::exp(base_log_density(f, p, u, v));
    const double step = r / dens;
    double next = v - step;
    if (!std::isfinite(next) || next <= lo || next >= hi)
      next = 0.5 * (lo + hi);
    if (std::fabs(next - v) <= 1e-15 * std::max(v, 1e-300) || hi - lo <= 1e-300)
      return next;
    v = next;
  }
  return v;
}

// Kendall's tau of an Archimedean copula: 1 + 4 int_0^1 phi(t) / phi'(t) dt.
double archimedean_tau(Family f, std::span<const double> p) {
  auto integrand = [&](double t) {
    const double ph = arch_phi(f, p, t);
    if (ph == 0.0)
      return 0.0;
    return -ph / std::exp(arch_log_dphi(f, p, t));
  };
  // Double-exponential nodes absorb the t log t type endpoint behaviour.
  static const QuadratureRule rule = tanh_sinh_unit();
  double integral = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    integral += rule.weights[k] * integrand(rule.nodes[k]);
  return 1.0 + 4.0 * integral;
}

double mixture_log_density(std::span<const double> p, double u, double v) {
  const double a = std::log(p[2]) + gauss_log_density(p[0], u, v);
  const double b = std::log1p(-p[2]) + gauss_log_density(p[1], u, v);
  return log_sum_exp(a, b);
}

} // namespace

bool is_archimedean(Family f) {
  switch (f) {
  case Family::Clayton:
  case Family::Gumbel:
  case Family::Frank:
  case Family::Joe:
  case Family::AMH:
  case Family::BB1:
  case Family::BB6:
  case Family::BB7:
  case Family::BB8:
    return true;
  default:
    return false;
  }
}

double base_log_density(Family f, std::span<const double> p, double u, double v) {
  if (degenerates_to_independence(f, p))
    return 0.0;
  switch (f) {
  case Family::Gaussian:
    return gauss_log_density(p[0], u, v);
  case Family::StudentT:
    return t_log_density(p[0], p[1], u, v);
  case Family::Clayton:
    return clayton_log_density(p[0], u, v);
  case Family::GaussianMixture2:
    return mixture_log_density(p, u, v);
  default:
    return arch_log_density(f, p, u, v);
  }
}

double base_h(Family f, std::span<const double> p, double v, double u) {
  if (degenerates_to_independence(f, p))
    return v;
  switch (f) {
  case Family::Gaussian:
    return gauss_h(p[0], v, u);
  case Family::StudentT:
    return t_h(p[0], p[1], v, u);
  case Family::Clayton:
    return std::clamp(clayton_h(p[0], v, u), 0.0, 1.0);
  case Family::GaussianMixture2:
    return p[2] * gauss_h(p[0], v, u) + (1.0 - p[2]) * gauss_h(p[1], v, u);
  default:
    return arch_h(f, p, v, u);
  }
}

double base_h_inverse(Family f, std::span<const double> p, double q, double u) {
  if (degenerates_to_independence(f, p))
    return q;
  switch (f) {
  case Family::Gaussian:
    return gauss_h_inverse(p[0], q, u);
  case Family::StudentT:
    return t_h_inverse(p[0], p[1], q, u);
  case Family::Clayton:
    return clayton_h_inverse(p[0], q, u);
  case Family::Frank: {
    // v = -log((q e^-theta + (1 - q) e^(-theta u)) / (q + (1 - q) e^(-theta u))) / theta,
    // both sums of positive terms for either sign of theta.
    const double th = p[0];
    const double lq = std::log(q), l1q = std::log1p(-q);
    const double num = log_sum_exp(lq - th, l1q - th * u);
    const double den = log_sum_exp(lq, l1q - th * u);
    return std::clamp(-(num - den) / th, 0.0, 1.0);
  }
  default:
    return numeric_h_inverse(f, p, q, u);
  }
}

double base_h_inverse_above(Family f, std::span<const double> p, double q, double u, double lo) {
  if (degenerates_to_independence(f, p) || !is_archimedean(f) || f == Family::Clayton || f == Family::Frank)
    return base_h_inverse(f, p, q, u);
  return numeric_h_inverse(f, p, q, u, lo, 1.0, lo);
}

double base_cdf(Family f, std::span<const double> p, double u, double v) {
  if (degenerates_to_independence(f, p))
    return u * v;
  if (f == Family::Clayton)
    return std::exp(-clayton_log_sum(p[0], u, v) / p[0]);
  if (is_archimedean(f))
    return arch_cdf(f, p, u, v);
  // Elliptical families and the mixture: C(u, v) = int_0^u h(v | s) ds.
  auto integrand = [&](double s) { return base_h(f, p, v, s); };
  const double c = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, u, 12, 1e-12);
  return std::clamp(c, std::max(0.0, u + v - 1.0), std::min(u, v));
}

double base_kendall_tau(Family f, std::span<const double> p) {
  switch (f) {
  case Family::Independence:
    return 0.0;
  case Family::Gaussian:
  case Family::StudentT:
    return 2.0 / std::numbers::pi * std::asin(p[0]);
  case Family::Clayton:
    return p[0] / (p[0] + 2.0);
  case Family::Gumbel:
    return 1.0 - 1.0 / p[0];
  case Family::AMH: {
    const double th = p[0];
    if (std::fabs(th) < 1e-6)
      return 2.0 * th / 9.0;
    return 1.0 - 2.0 * (th + (1.0 - th) * (1.0 - th) * std::log1p(-th)) / (3.0 * th * th);
  }
  case Family::BB1:
    return 1.0 - 2.0 / (p[1] * (p[0] + 2.0));
  case Family::GaussianMixture2: {
    // For Gaussian copulas j, k: int C_j dC_k = 1/4 + asin((rho_j + rho_k)/2) / (2 pi).
    const double w[2] = {p[2], 1.0 - p[2]};
    const double r[2] = {p[0], p[1]};
    double tau = 0.0;
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        tau += w[j] * w[k] * std::asin(0.5 * (r[j] + r[k]));
    return 2.0 / std::numbers::pi * tau;
  }
  case Family::Frank:
    if (std::fabs(p[0]) < 1e-8)
      return 0.0;
    return archimedean_tau(f, p);
  default:
    if (degenerates_to_independence(f, p))
      return 0.0;
    return archimedean_tau(f, p);
  }
}

void base_log_density_grid(Family f, std::span<const double> p, std::span<const double> us,
                           std::span<const double> vs, std::span<double> out) {
  const std::size_t nv = vs.size();
  if (degenerates_to_independence(f, p)) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  if (f == Family::Gaussian || f == Family::GaussianMixture2) {
    std::vector<double> xs(us.size()), ys(nv);
    std::transform(us.begin(), us.end(), xs.begin(), norm_quantile);
    std::transform(vs.begin(), vs.end(), ys.begin(), norm_quantile);
    for (std::size_t i = 0; i < us.size(); ++i)
      for (std::size_t j = 0; j < nv; ++j) {
        if (f == Family::Gaussian) {
          out[i * nv + j] = gauss_log_density_scores(p[0], xs[i], ys[j]);
        } else {
          const double a = std::log(p[2]) + (std::fabs(p[0]) < kIndependenceEps ? 0.0 : gauss_log_density_scores(p[0], xs[i], ys[j]));
          const double b = std::log1p(-p[2]) + (std::fabs(p[1]) < kIndependenceEps ? 0.0 : gauss_log_density_scores(p[1], xs[i], ys[j]));
          out[i * nv + j] = log_sum_exp(a, b);
        }
      }
    return;
  }
  if (f == Family::StudentT) {
    const StudentT t(p[1]);
    const double lc = t_log_norm_const(p[0], p[1]);
    std::vector<double> xs(us.size()), ys(nv);
    for (std::size_t i = 0; i < us.size(); ++i)
      xs[i] = boost::math::quantile(t, us[i]);
    for (std::size_t j = 0; j < nv; ++j)
      ys[j] = boost::math::quantile(t, vs[j]);
    for (std::size_t i = 0; i < us.size(); ++i)
      for (std::size_t j = 0; j < nv; ++j)
        out[i * nv + j] = t_log_density_scores(p[0], p[1], lc, xs[i], ys[j]);
    return;
  }
  for (std::size_t i = 0; i < us.size(); ++i)
    for (std::size_t j = 0; j < nv; ++j)
      out[i * nv + j] = base_log_density(f, p, us[i], vs[j]);
}

} // namespace copreg::detail
