#pragma once

#include "copreg/copula.hpp"
#include "copreg/margins.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace copreg {

enum class FitMethod { Pml, L2 };

struct Candidate {
  Family family = Family::Independence;
  Rotation rotation = Rotation::R0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct FitResult {
  CopulaSpec spec;
  double loglik = 0.0; // for L2 fits: minus the residual sum of squares
  double aic = 0.0;    // 2 k - 2 loglik; NaN for L2 fits
  std::size_t n_params = 0;
  bool converged = true;
  std::size_t iterations = 0;
  bool at_boundary = false; // some parameter sits on its box bound
  double start_loglik = 0.0; // objective (same sign convention as loglik) at the starting value
};

/// Pseudo-maximum likelihood over the family's parameter box. Needs at least
/// 10 interior points. Never throws on optimizer trouble: a fit that hits
/// the iteration cap comes back with converged = false and the best point.
FitResult fit_pml(Family family, Rotation rotation, std::span<const UV> points);
FitResult fit_pml(const Candidate& candidate, std::span<const UV> points);

/// Least-squares fit of the d = 1 regression estimator
///   m(x; theta) = (1/n) sum_i Y_i c(F_Y(Y_i), F_1(x); theta)
/// to the observed responses at the observed predictors.
FitResult fit_l2(Family family, Rotation rotation, const PseudoSample& pseudo);

/// Residual sum of squares minimized by fit_l2.
double l2_objective(const CopulaSpec& spec, const PseudoSample& pseudo);

/// Fits every candidate by PML and keeps the minimum AIC. Ties go to the
/// earlier candidate; `workers` only changes how fits are scheduled.
FitResult select_by_aic(std::span<const Candidate> candidates, std::span<const UV> points, std::size_t workers = 1);

/// Starting parameters. Kendall-tau inversion for Gaussian, t, Clayton and
/// Gumbel; a coarse likelihood grid for the other multi-parameter families is
/// handled inside fit_pml.
std::vector<double> initial_params(Family family, Rotation rotation, double empirical_tau);

/// Full candidate list for a single predictor: the twelve families with all
/// four rotations for the asymmetric ones.
std::vector<Candidate> default_candidates();
/// Vine pair candidates: as default_candidates() but without AMH.
std::vector<Candidate> vine_candidates();

/// Parses "default", "vine" or a comma separated list of family tags.
std::vector<Candidate> parse_candidates(const std::string& text);

std::string fit_csv_header();
std::string fit_csv_row(const FitResult& fit);

} // namespace copreg
