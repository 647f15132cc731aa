#include "copreg/copula.hpp"

#include "copreg/errors.hpp"
#include "copreg/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace copreg {

namespace {

struct FamilyInfo {
  Family family;
  std::string_view name;
  ParamSpace space;
};

const std::vector<FamilyInfo>& family_table() {
  static const std::vector<FamilyInfo> table = {
      {Family::Independence, "indep", {{}, {}}},
      {Family::Gaussian, "gaussian", {{-0.9999}, {0.9999}}},
      {Family::StudentT, "t", {{-0.9999, 2.001}, {0.9999, 30.0}}},
      {Family::Clayton, "clayton", {{1e-4}, {28.0}}},
      {Family::Gumbel, "gumbel", {{1.0 + 1e-6}, {17.0}}},
      {Family::Frank, "frank", {{-35.0}, {35.0}}},
      {Family::Joe, "joe", {{1.0 + 1e-6}, {30.0}}},
      {Family::AMH, "amh", {{-1.0 + 1e-6}, {1.0 - 1e-6}}},
      {Family::BB1, "bb1", {{1e-4, 1.0}, {7.0, 7.0}}},
      {Family::BB6, "bb6", {{1.0, 1.0}, {6.0, 8.0}}},
      {Family::BB7, "bb7", {{1.0, 1e-4}, {6.0, 20.0}}},
      {Family::BB8, "bb8", {{1.0, 1e-4}, {8.0, 1.0}}},
      {Family::GaussianMixture2, "gaussmix2", {{-0.9999, -0.9999, 1e-4}, {0.9999, 0.9999, 1.0 - 1e-4}}},
  };
  return table;
}

const FamilyInfo& info(Family f) { return family_table().at(static_cast<std::size_t>(f)); }

void require_interior(double u, double v, const char* what) {
  if (!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0)) {
    std::ostringstream os;
    os << what << ": arguments must lie in (0,1), got (" << u << ", " << v << ")";
    throw DomainError(os.str());
  }
}

// 1 - x for an interior x, kept below 1 when x is smaller than half an ulp of 1.
double reflect(double x) { return std::min(1.0 - x, std::nextafter(1.0, 0.0)); }

// Rotation layer without validation.
double rotated_log_density(const CopulaSpec& s, double u, double v) {
  switch (s.rotation) {
  case Rotation::R0:
    return detail::base_log_density(s.family, s.params, u, v);
  case Rotation::R90:
    return detail::base_log_density(s.family, s.params, reflect(u), v);
  case Rotation::R180:
    return detail::base_log_density(s.family, s.params, reflect(u), reflect(v));
  case Rotation::R270:
    return detail::base_log_density(s.family, s.params, u, reflect(v));
  }
  return 0.0;
}

double rotated_h(const CopulaSpec& s, double v, double u) {
  switch (s.rotation) {
  case Rotation::R0:
    return detail::base_h(s.family, s.params, v, u);
  case Rotation::R90:
    return detail::base_h(s.family, s.params, v, reflect(u));
  case Rotation::R180:
    return 1.0 - detail::base_h(s.family, s.params, reflect(v), reflect(u));
  case Rotation::R270:
    return 1.0 - detail::base_h(s.family, s.params, reflect(v), u);
  }
  return v;
}

double rotated_h_inverse(const CopulaSpec& s, double p, double u) {
  switch (s.rotation) {
  case Rotation::R0:
    return detail::base_h_inverse(s.family, s.params, p, u);
  case Rotation::R90:
    return detail::base_h_inverse(s.family, s.params, p, reflect(u));
  case Rotation::R180:
    return 1.0 - detail::base_h_inverse(s.family, s.params, reflect(p), reflect(u));
  case Rotation::R270:
    return 1.0 - detail::base_h_inverse(s.family, s.params, reflect(p), u);
  }
  return p;
}

} // namespace

const std::vector<Family>& all_families() {
  static const std::vector<Family> families = [] {
    std::vector<Family> out;
    for (const auto& fi : family_table())
      out.push_back(fi.family);
    return out;
  }();
  return families;
}

std::size_t param_count(Family family) { return info(family).space.lower.size(); }

const ParamSpace& param_space(Family family) { return info(family).space; }

void validate(const CopulaSpec& spec) {
  const auto& space = param_space(spec.family);
  if (spec.params.size() != space.lower.size()) {
    std::ostringstream os;
    os << family_name(spec.family) << ": expected " << space.lower.size() << " parameter(s), got "
       << spec.params.size();
    throw ParameterError(os.str());
  }
  for (std::size_t i = 0; i < spec.params.size(); ++i) {
    const double x = spec.params[i];
    if (!std::isfinite(x) || x < space.lower[i] || x > space.upper[i]) {
      std::ostringstream os;
      os << family_name(spec.family) << ": parameter " << i << " = " << x << " outside [" << space.lower[i]
         << ", " << space.upper[i] << "]";
      throw ParameterError(os.str());
    }
  }
  if (spec.family == Family::GaussianMixture2 && spec.params[0] > spec.params[1])
    throw ParameterError("gaussmix2: parameters must be canonical (rho1 <= rho2)");
}

std::string_view family_name(Family family) { return info(family).name; }

std::string family_tag(Family family, Rotation rotation) {
  std::string tag(family_name(family));
  if (rotation != Rotation::R0)
    tag += "@" + std::to_string(degrees(rotation));
  return tag;
}

std::string to_string(const CopulaSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  os << family_tag(spec.family, spec.rotation) << "(";
  for (std::size_t i = 0; i < spec.params.size(); ++i)
    os << (i ? "," : "") << spec.params[i];
  os << ")";
  return os.str();
}

int degrees(Rotation rotation) { return static_cast<int>(rotation); }

Rotation rotation_from_degrees(int deg) {
  switch (deg) {
  case 0:
    return Rotation::R0;
  case 90:
    return Rotation::R90;
  case 180:
    return Rotation::R180;
  case 270:
    return Rotation::R270;
  default:
    throw ConfigError("rotation must be one of 0, 90, 180, 270; got " + std::to_string(deg));
  }
}

std::pair<Family, Rotation> parse_family_tag(std::string_view tag) {
  std::string_view name = tag;
  Rotation rot = Rotation::R0;
  if (const auto at = tag.find('@'); at != std::string_view::npos) {
    name = tag.substr(0, at);
    const std::string deg(tag.substr(at + 1));
    int value = -1;
    try {
      std::size_t used = 0;
      value = std::stoi(deg, &used);
      if (used != deg.size())
        value = -1;
    } catch (const std::exception&) {
      value = -1;
    }
    rot = rotation_from_degrees(value);
  }
  for (const auto& fi : family_table())
    if (fi.name == name)
      return {fi.family, rot};
  std::string msg = "unknown copula family '" + std::string(name) + "'; valid names:";
  for (const auto& fi : family_table())
    msg += " " + std::string(fi.name);
  msg += " (optionally suffixed @90, @180, @270)";
  throw ConfigError(msg);
}

CopulaSpec transpose(const CopulaSpec& spec) {
  CopulaSpec out = spec;
  if (spec.rotation == Rotation::R90)
    out.rotation = Rotation::R270;
  else if (spec.rotation == Rotation::R270)
    out.rotation = Rotation::R90;
  return out;
}

CopulaSpec canonicalize(CopulaSpec spec) {
  if (spec.family == Family::GaussianMixture2 && spec.params.size() == 3 && spec.params[0] > spec.params[1]) {
    std::swap(spec.params[0], spec.params[1]);
    spec.params[2] = 1.0 - spec.params[2];
  }
  return spec;
}

double log_density(const CopulaSpec& spec, double u, double v) {
  validate(spec);
  require_interior(u, v, "density");
  return rotated_log_density(spec, u, v);
}

double density(const CopulaSpec& spec, double u, double v) { return std::exp(log_density(spec, u, v)); }

double cdf(const CopulaSpec& spec, double u, double v) {
  validate(spec);
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0))
    throw DomainError("cdf: arguments must lie in [0,1]");
  if (u == 0.0 || v == 0.0)
    return 0.0;
  if (u == 1.0)
    return v;
  if (v == 1.0)
    return u;
  const auto& f = spec.family;
  const auto& p = spec.params;
  switch (spec.rotation) {
  case Rotation::R0:
    return detail::base_cdf(f, p, u, v);
  case Rotation::R90:
    return v - detail::base_cdf(f, p, 1.0 - u, v);
  case Rotation::R180:
    return u + v - 1.0 + detail::base_cdf(f, p, 1.0 - u, 1.0 - v);
  case Rotation::R270:
    return u - detail::base_cdf(f, p, u, 1.0 - v);
  }
  return u * v;
}

double h_function(const CopulaSpec& spec, double v, double u) {
  validate(spec);
  require_interior(u, v, "h_function");
  return rotated_h(spec, v, u);
}

double h_inverse(const CopulaSpec& spec, double p, double u) {
  validate(spec);
  require_interior(u, p, "h_inverse");
  const double v = rotated_h_inverse(spec, p, u);
  if (!(v >= 0.0 && v <= 1.0) || !std::isfinite(v))
    throw NumericError("h_inverse: non-finite solution for " + to_string(spec));
  if (v > 0.0 && v < 1.0) {
    const double residual = std::fabs(rotated_h(spec, v, u) - p);
    if (residual > 1e-10) {
      std::ostringstream os;
      os << "h_inverse: residual " << residual << " at p=" << p << ", u=" << u << " for " << to_string(spec);
      throw NumericError(os.str());
    }
  }
  return v;
}

std::vector<double> h_inverse_ascending(const CopulaSpec& spec, std::span<const double> ps, double u) {
  validate(spec);
  for (std::size_t k = 0; k < ps.size(); ++k) {
    require_interior(u, ps[k], "h_inverse_ascending");
    if (k > 0 && ps[k] < ps[k - 1])
      throw DomainError("h_inverse_ascending: probabilities must be ascending");
  }
  // Solve in the unrotated frame, where the base probabilities are ascending
  // for rotations 0/90 and descending for 180/270.
  const bool flip_q = spec.rotation == Rotation::R180 || spec.rotation == Rotation::R270;
  const bool flip_u = spec.rotation == Rotation::R90 || spec.rotation == Rotation::R180;
  const double bu = flip_u ? reflect(u) : u;
  const std::size_t n = ps.size();
  std::vector<double> out(n);
  double lo = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t k = flip_q ? n - 1 - step : step;
    const double q = flip_q ? 1.0 - ps[k] : ps[k];
    const double bv = std::clamp(detail::base_h_inverse_above(spec.family, spec.params, q, bu, lo), 0.0, 1.0);
    lo = bv;
    const double v = flip_q ? 1.0 - bv : bv;
    if (!std::isfinite(v))
      throw NumericError("h_inverse: non-finite solution for " + to_string(spec));
    if (v > 0.0 && v < 1.0) {
      const double residual = std::fabs(rotated_h(spec, v, u) - ps[k]);
      if (residual > 1e-10) {
        std::ostringstream os;
        os << "h_inverse: residual " << residual << " at p=" << ps[k] << ", u=" << u << " for " << to_string(spec);
        throw NumericError(os.str());
      }
    }
    out[k] = v;
  }
  return out;
}

std::vector<UV> sample(const CopulaSpec& spec, std::size_t n, std::uint64_t seed) {
  validate(spec);
  UniformStream rng(seed);
  std::vector<UV> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const double w = rng.uniform();
    double v = rotated_h_inverse(spec, w, u);
    // The open-interval contract survives even when the inverse saturates.
    v = std::clamp(v, 0x1.0p-54, 1.0 - 0x1.0p-53);
    out.push_back({u, v});
  }
  return out;
}

double kendall_tau(const CopulaSpec& spec) {
  validate(spec);
  const double tau = detail::base_kendall_tau(spec.family, spec.params);
  return (spec.rotation == Rotation::R90 || spec.rotation == Rotation::R270) ? -tau : tau;
}

std::vector<double> log_density_grid(const CopulaSpec& spec, std::span<const double> us,
                                     std::span<const double> vs) {
  validate(spec);
  for (double u : us)
    require_interior(u, 0.5, "log_density_grid");
  for (double v : vs)
    require_interior(0.5, v, "log_density_grid");
  const bool flip_u = spec.rotation == Rotation::R90 || spec.rotation == Rotation::R180;
  const bool flip_v = spec.rotation == Rotation::R180 || spec.rotation == Rotation::R270;
  std::vector<double> ru(us.begin(), us.end()), rv(vs.begin(), vs.end());
  if (flip_u)
    for (auto& u : ru)
      u = reflect(u);
  if (flip_v)
    for (auto& v : rv)
      v = reflect(v);
  std::vector<double> out(ru.size() * rv.size());
  detail::base_log_density_grid(spec.family, spec.params, ru, rv, out);
  return out;
}

double log_likelihood(const CopulaSpec& spec, std::span<const UV> points) {
  validate(spec);
  if (spec.family == Family::Independence) {
    for (const auto& pt : points)
      require_interior(pt.u, pt.v, "log_likelihood");
    return 0.0;
  }
  double sum = 0.0;
  for (const auto& pt : points) {
    require_interior(pt.u, pt.v, "log_likelihood");
    const double ld = rotated_log_density(spec, pt.u, pt.v);
    if (std::isnan(ld))
      return -std::numeric_limits<double>::infinity();
    sum += ld;
  }
  return sum;
}

} // namespace copreg
