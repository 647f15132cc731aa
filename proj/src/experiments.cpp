#include "copreg/experiments.hpp"

#include "copreg/csv.hpp"
#include "copreg/errors.hpp"
#include "copreg/normal.hpp"
#include "copreg/parallel.hpp"
#include "copreg/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace copreg {

namespace {

struct ModelInfo {
  Model model;
  const char* name;
  std::size_t dim;
};

constexpr ModelInfo kModels[] = {
    {Model::M1, "m1", 1},     {Model::M2, "m2", 1},         {Model::M3, "m3", 2},   {Model::M5, "m5", 2},
    {Model::XSin, "xsin", 1}, {Model::ExpCos, "expcos", 1}, {Model::Flat, "flat", 1},
};

const ModelInfo& model_info(Model model) {
  for (const auto& mi : kModels)
    if (mi.model == model)
      return mi;
  throw ConfigError("unknown model");
}

std::vector<double> truth_on_grid(Model model, const std::vector<std::vector<double>>& grid) {
  std::vector<double> out;
  if (grid.size() == 1) {
    for (double x : grid[0])
      out.push_back(true_regression(model, std::span<const double>(&x, 1)));
  } else {
    for (double x1 : grid[0])
      for (double x2 : grid[1]) {
        const double x[2] = {x1, x2};
        out.push_back(true_regression(model, x));
      }
  }
  return out;
}

// Bisection for the s in [lo, hi] whose path(s) has Kendall tau `target`;
// tau must increase along the path.
std::optional<std::vector<double>> solve_tau(Family family, const std::function<std::vector<double>(double)>& path,
                                             double lo, double hi, double target, std::string* reason) {
  auto tau_at = [&](double s) { return kendall_tau(CopulaSpec{family, Rotation::R0, path(s)}); };
  const double tau_lo = tau_at(lo);
  const double tau_hi = tau_at(hi);
  if (target < tau_lo || target > tau_hi) {
    if (reason) {
      std::ostringstream os;
      os << "tau " << target << " outside attainable range " << tau_lo << " to " << tau_hi;
      *reason = os.str();
    }
    return std::nullopt;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::fabs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (tau_at(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return path(0.5 * (lo + hi));
}

} // namespace

std::string model_name(Model model) { return model_info(model).name; }

Model parse_model(const std::string& name) {
  for (const auto& mi : kModels)
    if (name == mi.name)
      return mi.model;
  std::string msg = "unknown model '" + name + "'; valid models:";
  for (const auto& mi : kModels)
    msg += std::string(" ") + mi.name;
  throw ConfigError(msg);
}

std::size_t model_dim(Model model) { return model_info(model).dim; }

double true_regression(Model model, std::span<const double> x) {
  if (x.size() != model_dim(model))
    throw DomainError("true_regression: wrong number of coordinates for " + model_name(model));
  switch (model) {
  case Model::M1:
    return x[0] * x[0];
  case Model::M2:
    return (x[0] - 0.5) * (x[0] - 0.5);
  case Model::M3:
    return (x[0] - 0.5) * (x[0] - 0.5) + (x[1] - 0.5) * (x[1] - 0.5);
  case Model::M5:
    return (x[0] - 0.5) * (x[0] - 0.5) - (x[1] - 0.5) * (x[1] - 0.5);
  case Model::XSin:
    return x[0] * std::sin(10.0 * x[0]);
  case Model::ExpCos:
    return std::exp(std::cos(10.0 * x[0]));
  case Model::Flat:
    return 0.0;
  }
  return 0.0;
}

Dataset simulate_dgp(const DgpSpec& spec) {
  if (spec.n < 1)
    throw DomainError("simulate_dgp: n must be at least 1");
  if (!(spec.sigma >= 0.0))
    throw ConfigError("simulate_dgp: sigma must be nonnegative");
  const std::size_t d = model_dim(spec.model);
  Dataset data;
  data.y.resize(spec.n);
  data.x.assign(d, std::vector<double>(spec.n));
  UniformStream rng(spec.seed);
  std::vector<double> point(d);
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      point[j] = rng.uniform();
      data.x[j][i] = point[j];
    }
    const double eps = rng.normal();
    data.y[i] = true_regression(spec.model, point) + spec.sigma * eps;
  }
  return data;
}

CopulaSampler dgp_copula_sampler(Model model, double sigma) {
  if (model_dim(model) != 1)
    throw ConfigError("dgp_copula_sampler: single-predictor models only");
  return [model, sigma](std::uint64_t seed, std::size_t n) {
    const auto pseudo = ecdf_transform(simulate_dgp({model, n, sigma, seed}));
    return pseudo.response_pairs(0);
  };
}

std::string EstimatorConfig::label() const {
  switch (kind) {
  case EstimatorKind::Family:
    return family_tag(family.family, family.rotation) + (method == FitMethod::L2 ? "/l2" : "/pml");
  case EstimatorKind::AutoAic:
    return "auto-aic";
  case EstimatorKind::Vine:
    return "vine";
  case EstimatorKind::Oracle:
    return "oracle";
  }
  return "";
}

ReplicationResult run_replication(const Dataset& data, Model model, const EstimatorConfig& estimator,
                                  const std::vector<std::vector<double>>& grid) {
  const std::size_t d = data.d();
  if (grid.size() != d)
    throw ConfigError("run_replication: grid dimension does not match the data");
  ReplicationResult out;
  out.truth = truth_on_grid(model, grid);
  if (estimator.kind == EstimatorKind::Oracle) {
    out.estimate.grid = grid;
    out.estimate.values = out.truth;
    out.estimate.extrapolation.assign(out.truth.size(), false);
    out.estimate.valid.assign(out.truth.size(), true);
    return out;
  }
  const PseudoSample pseudo = ecdf_transform(data);
  if (d == 1) {
    const auto pairs = pseudo.response_pairs(0);
    if (estimator.kind == EstimatorKind::Family) {
      out.fit = estimator.method == FitMethod::L2
                    ? fit_l2(estimator.family.family, estimator.family.rotation, pseudo)
                    : fit_pml(estimator.family, pairs);
    } else {
      const auto candidates = estimator.candidates.empty() ? default_candidates() : estimator.candidates;
      out.fit = select_by_aic(candidates, pairs, estimator.workers);
    }
    out.estimate = estimate_regression_1d(out.fit->spec, pseudo, grid[0]);
    return out;
  }
  if (d != 2)
    throw ConfigError("run_replication: only one or two predictors are supported");
  if (estimator.method == FitMethod::L2)
    throw ConfigError("run_replication: the L2 fit is defined for a single predictor only");
  std::vector<Candidate> candidates;
  if (estimator.kind == EstimatorKind::Family)
    candidates = {estimator.family};
  else
    candidates = estimator.candidates.empty() ? vine_candidates() : estimator.candidates;
  out.vine = fit_vine(pseudo, candidates, estimator.workers);
  const VineModel& vine = *out.vine;
  out.estimate = estimate_regression_2d(
      [&vine](double w0, double w1, double w2) { return vine_density(vine, w0, w1, w2); }, pseudo, grid[0],
      grid[1]);
  return out;
}

double integrated_squared_error(const ReplicationResult& result) {
  double sum = 0.0;
  for (std::size_t k = 0; k < result.truth.size(); ++k) {
    const double e = result.estimate.values[k] - result.truth[k];
    sum += e * e;
  }
  return sum / static_cast<double>(result.truth.size());
}

MseResult run_mse_study(const DgpSpec& dgp, const EstimatorConfig& estimator, std::size_t reps,
                        const std::vector<std::vector<double>>& x_grid, std::uint64_t base_seed,
                        std::size_t workers) {
  if (reps < 1)
    throw ConfigError("run_mse_study: reps must be at least 1");
  std::vector<std::vector<double>> sq(reps);
  std::vector<char> failed(reps, 0);
  parallel_for(reps, workers, [&](std::size_t r) {
    DgpSpec spec = dgp;
    spec.seed = base_seed + r + 1;
    try {
      const auto rep = run_replication(simulate_dgp(spec), dgp.model, estimator, x_grid);
      std::vector<double> e(rep.truth.size());
      for (std::size_t k = 0; k < e.size(); ++k) {
        const double diff = rep.estimate.values[k] - rep.truth[k];
        if (!std::isfinite(diff))
          throw NumericError("non-finite estimate");
        e[k] = diff * diff;
      }
      sq[r] = std::move(e);
    } catch (const NumericError&) {
      failed[r] = 1;
    }
  });

  MseResult result;
  result.x_grid = x_grid;
  result.reps = reps;
  result.estimator_label = estimator.label();
  for (char f : failed)
    result.failures += f ? 1 : 0;
  if (result.failures > 0 && 20 * result.failures >= reps)
    throw NumericError("run_mse_study: " + std::to_string(result.failures) + " of " + std::to_string(reps) +
                       " replications failed");
  std::size_t points = 1;
  for (const auto& axis : x_grid)
    points *= axis.size();
  result.mse.assign(points, 0.0);
  // Summed in replication order so the result does not depend on `workers`.
  for (std::size_t r = 0; r < reps; ++r)
    if (!failed[r])
      for (std::size_t k = 0; k < points; ++k)
        result.mse[k] += sq[r][k];
  const double used = static_cast<double>(reps - result.failures);
  for (auto& v : result.mse)
    v /= used;
  return result;
}

std::optional<std::vector<double>> params_for_tau(Family family, double base_tau, std::string* reason) {
  auto fail = [&](const std::string& why) -> std::optional<std::vector<double>> {
    if (reason)
      *reason = why;
    return std::nullopt;
  };
  if (!(base_tau > -1.0 && base_tau < 1.0))
    return fail("tau must lie in (-1, 1)");
  const auto& box = param_space(family);
  auto in_box = [&](std::vector<double> p) -> std::optional<std::vector<double>> {
    for (std::size_t k = 0; k < p.size(); ++k)
      if (p[k] < box.lower[k] || p[k] > box.upper[k])
        return fail("parameter outside the numeric box");
    return p;
  };
  auto one = [&](double lo, double hi) {
    return solve_tau(family, [](double s) { return std::vector<double>{s}; }, lo, hi, base_tau, reason);
  };
  switch (family) {
  case Family::Independence:
    if (base_tau != 0.0)
      return fail("independence has tau 0 only");
    return std::vector<double>{};
  case Family::Gaussian:
    return in_box({std::sin(std::numbers::pi * base_tau / 2.0)});
  case Family::StudentT:
    return in_box({std::sin(std::numbers::pi * base_tau / 2.0), kSweepStudentNu});
  case Family::Clayton:
    if (base_tau <= 0.0)
      return fail("clayton needs tau > 0");
    return in_box({2.0 * base_tau / (1.0 - base_tau)});
  case Family::Gumbel:
    if (base_tau < 0.0)
      return fail("gumbel needs tau >= 0");
    return in_box({1.0 / (1.0 - base_tau)});
  case Family::Frank:
  case Family::Joe:
  case Family::AMH:
    return one(box.lower[0], box.upper[0]);
  case Family::BB1:
    return solve_tau(family, [](double s) { return std::vector<double>{2.0 * s, 1.0 + s}; }, 5e-5, 3.5, base_tau,
                     reason);
  case Family::BB6:
    return solve_tau(family, [](double s) { return std::vector<double>{1.0 + s, 1.0 + s}; }, 0.0, 5.0, base_tau,
                     reason);
  case Family::BB7:
    return solve_tau(family, [](double s) { return std::vector<double>{1.0 + s, 2.0 * s}; }, 5e-5, 5.0, base_tau,
                     reason);
  case Family::BB8:
    return solve_tau(family, [](double s) { return std::vector<double>{1.0 + s, 0.9}; }, 0.0, 7.0, base_tau,
                     reason);
  case Family::GaussianMixture2:
    return fail("no tau path for the mixture");
  }
  return fail("unknown family");
}

std::vector<Family> sweep_families() {
  return {Family::Independence, Family::Gaussian, Family::StudentT, Family::Clayton,
          Family::Gumbel,       Family::Frank,    Family::Joe,      Family::AMH,
          Family::BB1,          Family::BB6,      Family::BB7,      Family::BB8};
}

std::vector<SweepRow> monotonicity_sweep(std::span<const Family> families, std::span<const Rotation> rotations,
                                         std::span<const double> tau_grid, std::size_t grid_points,
                                         double tolerance, std::size_t workers) {
  std::vector<SweepRow> rows;
  for (Family f : families)
    for (Rotation r : rotations) {
      if (f == Family::Independence) {
        rows.push_back({f, r, 0.0, {}, false, "", {}, 0.0});
        continue;
      }
      for (double tau : tau_grid)
        rows.push_back({f, r, tau, {}, false, "", {}, 0.0});
    }
  const auto u_grid = interior_grid(grid_points);
  parallel_for(rows.size(), workers, [&](std::size_t k) {
    SweepRow& row = rows[k];
    // 90 and 270 rotations flip the sign of tau.
    const double base_tau =
        (row.rotation == Rotation::R90 || row.rotation == Rotation::R270) ? -row.tau : row.tau;
    std::string reason;
    const auto params = params_for_tau(row.family, base_tau, &reason);
    if (!params) {
      row.skipped = true;
      row.reason = reason;
      return;
    }
    row.params = *params;
    const auto curve = population_curve({row.family, row.rotation, row.params}, u_grid);
    row.audit = monotonicity_audit(curve.m_values, tolerance);
    row.doubling_diff = curve.max_doubling_diff;
  });
  return rows;
}

ContourGrid contour_density(const DgpSpec& dgp, std::size_t grid, double bandwidth) {
  if (model_dim(dgp.model) != 1)
    throw ConfigError("contour_density: single-predictor models only");
  if (dgp.n < 10000)
    throw ConfigError("contour_density: needs at least 10^4 points");
  if (grid < 2)
    throw ConfigError("contour_density: grid must have at least 2 points per axis");
  const PseudoSample pseudo = ecdf_transform(simulate_dgp(dgp));
  const std::size_t n = pseudo.n;
  auto sd = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v)
      mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v)
      ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
  };
  ContourGrid out;
  out.u = interior_grid(grid);
  const double shrink = std::pow(static_cast<double>(n), -1.0 / 6.0);
  out.bandwidth_y = bandwidth > 0.0 ? bandwidth : sd(pseudo.u_y) * shrink;
  out.bandwidth_x = bandwidth > 0.0 ? bandwidth : sd(pseudo.u_x[0]) * shrink;

  auto kernel_row = [&](double w, double h, std::vector<double>& row) {
    for (std::size_t g = 0; g < grid; ++g) {
      const double t = out.u[g];
      row[g] = (norm_pdf((t - w) / h) + norm_pdf((t + w) / h) + norm_pdf((t - 2.0 + w) / h)) / h;
    }
  };
  out.density.assign(grid * grid, 0.0);
  std::vector<double> ky(grid), kx(grid);
  for (std::size_t i = 0; i < n; ++i) {
    kernel_row(pseudo.u_y[i], out.bandwidth_y, ky);
    kernel_row(pseudo.u_x[0][i], out.bandwidth_x, kx);
    for (std::size_t a = 0; a < grid; ++a)
      for (std::size_t b = 0; b < grid; ++b)
        out.density[a * grid + b] += ky[a] * kx[b];
  }
  for (auto& v : out.density)
    v /= static_cast<double>(n);
  return out;
}

std::string dataset_csv(const Dataset& data) {
  std::string out = "y";
  for (std::size_t j = 0; j < data.d(); ++j)
    out += ",x" + std::to_string(j + 1);
  out += "\n";
  for (std::size_t i = 0; i < data.n(); ++i) {
    out += format_double(data.y[i]);
    for (std::size_t j = 0; j < data.d(); ++j)
      out += "," + format_double(data.x[j][i]);
    out += "\n";
  }
  return out;
}

std::string mse_csv(const MseResult& result) {
  std::string out;
  if (result.x_grid.size() == 1) {
    out = "x,mse\n";
    for (std::size_t k = 0; k < result.mse.size(); ++k)
      out += format_double(result.x_grid[0][k]) + "," + format_double(result.mse[k]) + "\n";
    return out;
  }
  out = "x1,x2,mse\n";
  const std::size_t g2 = result.x_grid[1].size();
  for (std::size_t k = 0; k < result.mse.size(); ++k)
    out += format_double(result.x_grid[0][k / g2]) + "," + format_double(result.x_grid[1][k % g2]) + "," +
           format_double(result.mse[k]) + "\n";
  return out;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "family,rotation,tau,params,monotone,direction,max_violation,doubling_diff,skipped,reason\n";
  for (const auto& r : rows) {
    out += std::string(family_name(r.family)) + "," + std::to_string(degrees(r.rotation)) + "," +
           format_double(r.tau) + "," + join_params(r.params) + ",";
    if (r.skipped) {
      out += ",,,,true," + r.reason + "\n";
      continue;
    }
    out += std::string(r.audit.monotone ? "true" : "false") + "," + direction_name(r.audit.direction) + "," +
           format_double(r.audit.max_violation) + "," + format_double(r.doubling_diff) + ",false,\n";
  }
  return out;
}

std::string contour_csv(const ContourGrid& grid) {
  std::string out = "u_y,u_x,density\n";
  const std::size_t g = grid.u.size();
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = 0; b < g; ++b)
      out += format_double(grid.u[a]) + "," + format_double(grid.u[b]) + "," + format_double(grid.density[a * g + b]) +
             "\n";
  return out;
}

} // namespace copreg
