#pragma once

#include "copreg/copula.hpp"
#include "copreg/fitting.hpp"
#include "copreg/margins.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace copreg {

/// Variables of a trivariate vine, in tie-break order.
enum class VineVar { Y = 0, X1 = 1, X2 = 2 };

/// Three-variable pair-copula construction under the simplifying assumption.
///
///   c(w) = c_a(w_c, w_a) * c_b(w_c, w_b) * c_ab|c(h(w_a | w_c), h(w_b | w_c))
///
/// where c is the tree-1 center and a < b are the two leaves. Tree-1 pair
/// copulas take the center as their first argument.
struct VineModel {
  VineVar center = VineVar::Y;
  VineVar leaf_a = VineVar::X1;
  VineVar leaf_b = VineVar::X2;
  CopulaSpec pair1;     // (center, leaf_a)
  CopulaSpec pair2;     // (center, leaf_b)
  CopulaSpec pair_cond; // (leaf_a, leaf_b) given center
  std::array<FitResult, 3> fit_meta{};
};

/// Builds a model around `center` with the remaining variables as leaves in
/// Y, X1, X2 order.
VineModel make_vine(VineVar center, CopulaSpec pair1, CopulaSpec pair2, CopulaSpec pair_cond);

std::string var_name(VineVar v);

/// Joint copula density at (w_Y, w_X1, w_X2).
double vine_density(const VineModel& model, double w0, double w1, double w2);

/// Center of the maximum spanning tree under |tau| weights on the edges
/// (Y,X1), (Y,X2), (X1,X2). The lightest edge is dropped; among equally light
/// edges the later one goes, so all-equal weights give center Y.
VineVar select_structure(const std::array<double, 3>& abs_tau);
VineVar select_structure(const PseudoSample& pseudo);

/// Per observation (h(w_a | w_c; pair1), h(w_b | w_c; pair2)), clamped to the
/// open unit interval.
std::vector<UV> conditional_pseudo_obs(const VineModel& model, const PseudoSample& pseudo);

/// Sequential fit: structure by Kendall tau, tree-1 pairs and then the
/// conditional pair by AIC over `candidates`.
VineModel fit_vine(const PseudoSample& pseudo, std::span<const Candidate> candidates, std::size_t workers = 1);

/// Quasi-Monte-Carlo integral of vine_density over (0,1)^3: the first
/// `points` Sobol points after the origin, shifted modulo 1 by one uniform
/// vector drawn from `seed`. Unshifted Sobol points crowd the diagonal
/// corners, where tail-dependent densities are singular.
double vine_integral(const VineModel& model, std::size_t points = 100000, std::uint64_t seed = 1);

/// Text block: a "center,<var>" line, then "pair,<edge>,<family>,<rotation>,<params>"
/// for each of the three pairs.
std::string serialize_vine(const VineModel& model);

} // namespace copreg
