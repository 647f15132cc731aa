#pragma once

#include "copreg/copula.hpp"
#include "copreg/fitting.hpp"
#include "copreg/margins.hpp"
#include "copreg/regression.hpp"
#include "copreg/vine.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace copreg {

/// Regression functions of the simulation models. `Flat` (m = 0) makes Y
/// independent of X.
enum class Model { M1, M2, M3, M5, XSin, ExpCos, Flat };

std::string model_name(Model model);
/// Throws ConfigError on unknown names.
Model parse_model(const std::string& name);
std::size_t model_dim(Model model);
/// m(x) for a point with model_dim(model) coordinates.
double true_regression(Model model, std::span<const double> x);

struct DgpSpec {
  Model model = Model::M1;
  std::size_t n = 100;
  double sigma = 0.1;
  std::uint64_t seed = 1;
};

/// Y_i = m(X_i) + sigma eps_i with independent uniform predictor columns and
/// standard normal eps. Per observation the stream yields the predictors in
/// order, then eps.
Dataset simulate_dgp(const DgpSpec& spec);

/// Pseudo-observations (F_Y(Y), F_1(X_1)) of a d = 1 model, as a sampler of
/// its copula.
CopulaSampler dgp_copula_sampler(Model model, double sigma);

enum class EstimatorKind { Family, AutoAic, Vine, Oracle };

/// How a replication turns data into a regression estimate.
///   Family:  one parametric copula (d = 1), or a vine whose pairs all come
///            from that one family (d = 2).
///   AutoAic: AIC selection over `candidates` (d = 1), a vine over them (d = 2).
///   Vine:    same as AutoAic for d = 2.
///   Oracle:  the true regression function.
struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::Family;
  Candidate family;
  FitMethod method = FitMethod::Pml;
  std::vector<Candidate> candidates;
  std::size_t workers = 1; // candidate fits inside one replication

  std::string label() const;
};

struct ReplicationResult {
  RegressionEstimate estimate;
  std::vector<double> truth;
  std::optional<FitResult> fit;  // d = 1 parametric fits
  std::optional<VineModel> vine; // d = 2 fits
};

/// One replication on the given dataset. For d = 1 `grid` holds one axis, for
/// d = 2 two axes.
ReplicationResult run_replication(const Dataset& data, Model model, const EstimatorConfig& estimator,
                                  const std::vector<std::vector<double>>& grid);

/// Mean over the grid of (m_hat - m)^2.
double integrated_squared_error(const ReplicationResult& result);

struct MseResult {
  std::vector<std::vector<double>> x_grid;
  std::vector<double> mse;
  std::size_t reps = 0;
  std::size_t failures = 0;
  std::string estimator_label;
};

/// Replication r = 1..reps simulates with seed base_seed + r. Failed
/// replications (numeric errors) are dropped when they are fewer than 5% of
/// reps; otherwise the study throws NumericError.
MseResult run_mse_study(const DgpSpec& dgp, const EstimatorConfig& estimator, std::size_t reps,
                        const std::vector<std::vector<double>>& x_grid, std::uint64_t base_seed,
                        std::size_t workers = 1);

struct SweepRow {
  Family family = Family::Independence;
  Rotation rotation = Rotation::R0;
  double tau = 0.0;
  std::vector<double> params;
  bool skipped = false;
  std::string reason;
  MonotonicityReport audit;
  double doubling_diff = 0.0;
};

/// Degrees of freedom used for the t family in the sweep.
inline constexpr double kSweepStudentNu = 5.0;

/// Parameters of `family` whose unrotated Kendall tau equals `base_tau`, or
/// nullopt with a reason when no member of the family reaches it. Two
/// parameter families move along a fixed one-dimensional path.
std::optional<std::vector<double>> params_for_tau(Family family, double base_tau, std::string* reason = nullptr);

/// One row per (family, rotation, tau); Independence contributes a single
/// tau = 0 row per rotation.
std::vector<SweepRow> monotonicity_sweep(std::span<const Family> families, std::span<const Rotation> rotations,
                                         std::span<const double> tau_grid, std::size_t grid_points,
                                         double tolerance = 1e-8, std::size_t workers = 1);

/// The single-predictor families with closed-form or numeric tau paths.
std::vector<Family> sweep_families();

struct ContourGrid {
  std::vector<double> u;       // shared axis for u_y and u_x
  std::vector<double> density; // density[iy * u.size() + ix]
  double bandwidth_y = 0.0;
  double bandwidth_x = 0.0;
};

/// Product-Gaussian KDE of the pseudo-observations (F_Y(Y), F_1(X)) of a
/// simulated d = 1 sample, reflected at all four edges. bandwidth <= 0 picks
/// sd * n^(-1/6) per axis.
ContourGrid contour_density(const DgpSpec& dgp, std::size_t grid, double bandwidth = 0.0);

std::string dataset_csv(const Dataset& data);
std::string mse_csv(const MseResult& result);
std::string sweep_csv(std::span<const SweepRow> rows);
std::string contour_csv(const ContourGrid& grid);

} // namespace copreg
