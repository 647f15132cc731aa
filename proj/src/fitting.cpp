#include "copreg/fitting.hpp"

#include "copreg/csv.hpp"
#include "copreg/errors.hpp"
#include "copreg/optimize.hpp"
#include "copreg/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace copreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMinPoints = 10;

bool on_boundary(const CopulaSpec& spec) {
  const auto& box = param_space(spec.family);
  for (std::size_t k = 0; k < spec.params.size(); ++k) {
    const double x = spec.params[k];
    const double tol_lo = 1e-6 * std::max(1.0, std::fabs(box.lower[k]));
    const double tol_hi = 1e-6 * std::max(1.0, std::fabs(box.upper[k]));
    if (x - box.lower[k] <= tol_lo || box.upper[k] - x <= tol_hi)
      return true;
  }
  return false;
}

// Coarse grid over the interior of a two-parameter box; returns the best point.
std::vector<double> grid_start(const ParamSpace& box, const std::function<double(std::span<const double>)>& f) {
  constexpr int kSteps = 6;
  std::vector<double> best = {0.5 * (box.lower[0] + box.upper[0]), 0.5 * (box.lower[1] + box.upper[1])};
  double best_value = f(best);
  if (!std::isfinite(best_value))
    best_value = kInf;
  for (int i = 0; i < kSteps; ++i) {
    for (int j = 0; j < kSteps; ++j) {
      // Points are spread geometrically toward the lower bound, where most of
      // the dependence range of the BB families lives.
      const double si = std::pow((i + 0.5) / kSteps, 2.0);
      const double sj = std::pow((j + 0.5) / kSteps, 2.0);
      std::vector<double> x = {box.lower[0] + si * (box.upper[0] - box.lower[0]),
                               box.lower[1] + sj * (box.upper[1] - box.lower[1])};
      const double value = f(x);
      if (std::isfinite(value) && value < best_value) {
        best_value = value;
        best = x;
      }
    }
  }
  return best;
}

// Minimizes `objective` over the family box. The objective receives a fully
// formed CopulaSpec; the returned FitResult carries -objective in loglik.
FitResult fit_with_objective(Family family, Rotation rotation, double empirical_tau,
                             const std::function<double(const CopulaSpec&)>& objective) {
  FitResult result;
  result.n_params = param_count(family);
  CopulaSpec spec{family, rotation, {}};
  if (result.n_params == 0) {
    result.spec = spec;
    result.loglik = -objective(spec);
    result.start_loglik = result.loglik;
    result.converged = true;
    return result;
  }

  const auto& box = param_space(family);
  auto eval = [&](std::span<const double> x) {
    CopulaSpec trial{family, rotation, std::vector<double>(x.begin(), x.end())};
    trial = canonicalize(std::move(trial));
    for (std::size_t k = 0; k < trial.params.size(); ++k)
      trial.params[k] = std::clamp(trial.params[k], box.lower[k], box.upper[k]);
    const double value = objective(trial);
    return std::isfinite(value) ? value : kInf;
  };

  OptimResult best;
  std::vector<double> start = initial_params(family, rotation, empirical_tau);
  if (result.n_params == 1) {
    best = minimize_scalar([&](double x) { return eval(std::span<const double>(&x, 1)); }, box.lower[0],
                           box.upper[0], start[0]);
  } else if (family == Family::GaussianMixture2) {
    bool first = true;
    for (double weight : {0.25, 0.75}) {
      for (auto [r1, r2] : {std::pair{-0.5, 0.5}, std::pair{0.0, 0.8}}) {
        std::vector<double> x0 = {r1, r2, weight};
        auto res = minimize_box(eval, x0, box.lower, box.upper);
        if (first) {
          start = x0;
          first = false;
        }
        if (best.x.empty() || res.value < best.value) {
          res.iterations += best.iterations;
          best = std::move(res);
        } else {
          best.iterations += res.iterations;
        }
      }
    }
  } else {
    if (family != Family::StudentT)
      start = grid_start(box, eval);
    best = minimize_box(eval, start, box.lower, box.upper);
  }

  spec.params = best.x;
  spec = canonicalize(std::move(spec));
  for (std::size_t k = 0; k < spec.params.size(); ++k)
    spec.params[k] = std::clamp(spec.params[k], box.lower[k], box.upper[k]);
  result.spec = spec;
  result.loglik = -eval(spec.params);
  result.start_loglik = -eval(start);
  result.converged = best.converged;
  result.iterations = best.iterations;
  result.at_boundary = on_boundary(spec);
  return result;
}

void require_points(std::size_t n) {
  if (n < kMinPoints)
    throw DomainError("fit: need at least " + std::to_string(kMinPoints) + " points, got " + std::to_string(n));
}

} // namespace

std::vector<double> initial_params(Family family, Rotation rotation, double empirical_tau) {
  const auto& box = param_space(family);
  double tau = (rotation == Rotation::R90 || rotation == Rotation::R270) ? -empirical_tau : empirical_tau;
  tau = std::clamp(tau, -0.99, 0.99);
  auto clamp0 = [&](double x) { return std::clamp(x, box.lower[0], box.upper[0]); };
  switch (family) {
  case Family::Independence:
    return {};
  case Family::Gaussian:
    return {clamp0(std::sin(std::numbers::pi * tau / 2.0))};
  case Family::StudentT:
    return {clamp0(std::sin(std::numbers::pi * tau / 2.0)), 0.5 * (box.lower[1] + box.upper[1])};
  case Family::Clayton:
    return {clamp0(2.0 * tau / (1.0 - tau))};
  case Family::Gumbel:
    return {clamp0(1.0 / (1.0 - tau))};
  default: {
    std::vector<double> mid(box.lower.size());
    for (std::size_t k = 0; k < mid.size(); ++k)
      mid[k] = 0.5 * (box.lower[k] + box.upper[k]);
    return mid;
  }
  }
}

FitResult fit_pml(Family family, Rotation rotation, std::span<const UV> points) {
  require_points(points.size());
  for (const auto& pt : points)
    if (!(pt.u > 0.0 && pt.u < 1.0 && pt.v > 0.0 && pt.v < 1.0))
      throw DomainError("fit_pml: points must lie in the open unit square");
  const double tau = param_count(family) > 0 ? empirical_kendall_tau(points) : 0.0;
  auto objective = [&](const CopulaSpec& spec) { return -log_likelihood(spec, points); };
  FitResult fit = fit_with_objective(family, rotation, tau, objective);
  fit.aic = 2.0 * static_cast<double>(fit.n_params) - 2.0 * fit.loglik;
  return fit;
}

FitResult fit_pml(const Candidate& candidate, std::span<const UV> points) {
  return fit_pml(candidate.family, candidate.rotation, points);
}

double l2_objective(const CopulaSpec& spec, const PseudoSample& pseudo) {
  const std::size_t n = pseudo.n;
  const auto& ux = pseudo.u_x.at(0);
  // Response in the first slot: logc_yx[j * n + i] = log c(u_y[j], u_x[i]).
  const auto logc_yx = log_density_grid(spec, pseudo.u_y, ux);
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double m = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      m += pseudo.y_raw[j] * std::exp(logc_yx[j * n + i]);
    m /= static_cast<double>(n);
    const double r = pseudo.y_raw[i] - m;
    rss += r * r;
  }
  return rss;
}

FitResult fit_l2(Family family, Rotation rotation, const PseudoSample& pseudo) {
  if (pseudo.d != 1)
    throw DomainError("fit_l2: requires a single predictor");
  require_points(pseudo.n);
  const double tau = param_count(family) > 0 ? empirical_kendall_tau(pseudo.u_y, pseudo.u_x[0]) : 0.0;
  auto objective = [&](const CopulaSpec& spec) { return l2_objective(spec, pseudo); };
  FitResult fit = fit_with_objective(family, rotation, tau, objective);
  fit.aic = std::numeric_limits<double>::quiet_NaN();
  return fit;
}

FitResult select_by_aic(std::span<const Candidate> candidates, std::span<const UV> points, std::size_t workers) {
  if (candidates.empty())
    throw ConfigError("select_by_aic: empty candidate list");
  std::vector<FitResult> fits(candidates.size());
  std::vector<char> ok(candidates.size(), 0);
  parallel_for(candidates.size(), workers, [&](std::size_t i) {
    try {
      fits[i] = fit_pml(candidates[i], points);
      ok[i] = std::isfinite(fits[i].aic) ? 1 : 0;
    } catch (const NumericError&) {
      ok[i] = 0;
    }
  });
  std::size_t best = candidates.size();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!ok[i])
      continue;
    if (best == candidates.size() || fits[i].aic < fits[best].aic)
      best = i;
  }
  if (best == candidates.size())
    throw NumericError("select_by_aic: no candidate produced a finite AIC");
  return fits[best];
}

std::vector<Candidate> default_candidates() {
  std::vector<Candidate> out = {{Family::Independence, Rotation::R0},
                                {Family::Gaussian, Rotation::R0},
                                {Family::StudentT, Rotation::R0},
                                {Family::Frank, Rotation::R0}};
  const Rotation rotations[] = {Rotation::R0, Rotation::R90, Rotation::R180, Rotation::R270};
  for (Family f : {Family::Clayton, Family::Gumbel, Family::Joe, Family::AMH, Family::BB1, Family::BB6,
                   Family::BB7, Family::BB8})
    for (Rotation r : rotations)
      out.push_back({f, r});
  return out;
}

std::vector<Candidate> vine_candidates() {
  auto out = default_candidates();
  std::erase_if(out, [](const Candidate& c) { return c.family == Family::AMH; });
  return out;
}

std::vector<Candidate> parse_candidates(const std::string& text) {
  if (text.empty() || text == "default")
    return default_candidates();
  if (text == "vine")
    return vine_candidates();
  std::vector<Candidate> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty())
      continue;
    const auto [family, rotation] = parse_family_tag(item);
    out.push_back({family, rotation});
  }
  if (out.empty())
    throw ConfigError("empty candidate list");
  return out;
}

std::string fit_csv_header() { return "family,rotation,params,loglik,aic,converged"; }

std::string fit_csv_row(const FitResult& fit) {
  std::string row(family_name(fit.spec.family));
  row += "," + std::to_string(degrees(fit.spec.rotation));
  row += "," + join_params(fit.spec.params);
  row += "," + format_double(fit.loglik);
  row += "," + format_double(fit.aic);
  row += fit.converged ? ",true" : ",false";
  return row;
}

} // namespace copreg
