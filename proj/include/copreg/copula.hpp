#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace copreg {

/// Parametric bivariate copula families.
enum class Family {
  Independence,
  Gaussian,
  StudentT,
  Clayton,
  Gumbel,
  Frank,
  Joe,
  AMH,
  BB1, // Clayton-Gumbel
  BB6, // Joe-Gumbel
  BB7, // Joe-Clayton
  BB8, // Joe-Frank
  GaussianMixture2,
};

/// Counter-clockwise rotation in degrees. 180 is the survival copula.
///
///   c_90(u, v)  = c(1 - u, v)
///   c_180(u, v) = c(1 - u, 1 - v)
///   c_270(u, v) = c(u, 1 - v)
enum class Rotation { R0 = 0, R90 = 90, R180 = 180, R270 = 270 };

/// A point in the open unit square. `u` is the first copula argument.
struct UV {
  double u;
  double v;
};

struct CopulaSpec {
  Family family = Family::Independence;
  Rotation rotation = Rotation::R0;
  std::vector<double> params;

  friend bool operator==(const CopulaSpec&, const CopulaSpec&) = default;
};

/// Numeric box used both for validation and for optimization.
struct ParamSpace {
  std::vector<double> lower;
  std::vector<double> upper;
};

/// Every family, in declaration order.
const std::vector<Family>& all_families();

std::size_t param_count(Family family);
const ParamSpace& param_space(Family family);

/// Throws ParameterError unless `spec.params` has the right length, is
/// finite and lies inside the family box. For the two-component mixture the
/// canonical ordering rho1 <= rho2 is also required.
void validate(const CopulaSpec& spec);

/// Serialized names: "indep", "gaussian", "t", "clayton", ... "gaussmix2".
std::string_view family_name(Family family);
std::string family_tag(Family family, Rotation rotation); // "clayton@180"
std::string to_string(const CopulaSpec& spec);           // "clayton@180(2)"

/// Parses "clayton", "clayton@180", ... Throws ConfigError on unknown names;
/// the message lists every valid name.
std::pair<Family, Rotation> parse_family_tag(std::string_view tag);

/// Rotation angle in degrees as an integer.
int degrees(Rotation rotation);
Rotation rotation_from_degrees(int deg);

/// The copula of (V, U) when `spec` is the copula of (U, V). All base
/// families are exchangeable, so this only swaps the 90 and 270 rotations.
CopulaSpec transpose(const CopulaSpec& spec);

/// Mixture parameters reordered so that rho1 <= rho2 (weight flipped to match).
CopulaSpec canonicalize(CopulaSpec spec);

double log_density(const CopulaSpec& spec, double u, double v);
double density(const CopulaSpec& spec, double u, double v);

/// C(u, v) on the closed square.
double cdf(const CopulaSpec& spec, double u, double v);

/// h(v | u) = dC(u, v)/du, the conditional CDF of the second argument given
/// the first.
double h_function(const CopulaSpec& spec, double v, double u);

/// Solves h_function(spec, v, u) = p for v. Closed forms for independence,
/// Gaussian, t, Clayton and Frank; safeguarded Newton-bisection otherwise.
/// Throws NumericError if the residual stays above 1e-10.
double h_inverse(const CopulaSpec& spec, double p, double u);

/// h_inverse for every p in an ascending list, with each root bracketing the
/// next. Same accuracy contract as h_inverse.
std::vector<double> h_inverse_ascending(const CopulaSpec& spec, std::span<const double> ps, double u);

/// n draws by conditional inversion: U uniform, V = h_inverse(W, U).
std::vector<UV> sample(const CopulaSpec& spec, std::size_t n, std::uint64_t seed);

/// Population Kendall's tau.
double kendall_tau(const CopulaSpec& spec);

/// Row-major matrix out[i * vs.size() + j] = log c(us[i], vs[j]). Marginal
/// score transforms are computed once per row/column.
std::vector<double> log_density_grid(const CopulaSpec& spec, std::span<const double> us,
                                     std::span<const double> vs);

/// Sum of log densities. Returns -inf if any point has zero density.
double log_likelihood(const CopulaSpec& spec, std::span<const UV> points);

namespace detail {
// Unrotated, unchecked evaluation used by the rotation layer and tests.
double base_log_density(Family f, std::span<const double> p, double u, double v);
double base_cdf(Family f, std::span<const double> p, double u, double v);
double base_h(Family f, std::span<const double> p, double v, double u);
double base_h_inverse(Family f, std::span<const double> p, double q, double u);
// As base_h_inverse, with the root known to be at least `lo`.
double base_h_inverse_above(Family f, std::span<const double> p, double q, double u, double lo);
double base_kendall_tau(Family f, std::span<const double> p);
void base_log_density_grid(Family f, std::span<const double> p, std::span<const double> us,
                           std::span<const double> vs, std::span<double> out);
bool is_archimedean(Family f);
} // namespace detail

} // namespace copreg
