#include "copreg/vine.hpp"

#include "copreg/csv.hpp"
#include "copreg/errors.hpp"
#include "copreg/rng.hpp"

#include <boost/random/sobol.hpp>

#include <algorithm>
#include <cmath>

namespace copreg {

namespace {

constexpr double kLo = 0x1.0p-54;
constexpr double kHi = 1.0 - 0x1.0p-53;

const std::vector<double>& column(const PseudoSample& pseudo, VineVar v) {
  return v == VineVar::Y ? pseudo.u_y : pseudo.u_x[static_cast<std::size_t>(v) - 1];
}

std::vector<UV> zip(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<UV> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = {a[i], b[i]};
  return out;
}

} // namespace

std::string var_name(VineVar v) {
  switch (v) {
  case VineVar::Y:
    return "Y";
  case VineVar::X1:
    return "X1";
  case VineVar::X2:
    return "X2";
  }
  return "Y";
}

VineModel make_vine(VineVar center, CopulaSpec pair1, CopulaSpec pair2, CopulaSpec pair_cond) {
  VineModel m;
  m.center = center;
  switch (center) {
  case VineVar::Y:
    m.leaf_a = VineVar::X1;
    m.leaf_b = VineVar::X2;
    break;
  case VineVar::X1:
    m.leaf_a = VineVar::Y;
    m.leaf_b = VineVar::X2;
    break;
  case VineVar::X2:
    m.leaf_a = VineVar::Y;
    m.leaf_b = VineVar::X1;
    break;
  }
  m.pair1 = std::move(pair1);
  m.pair2 = std::move(pair2);
  m.pair_cond = std::move(pair_cond);
  return m;
}

double vine_density(const VineModel& model, double w0, double w1, double w2) {
  const double w[3] = {w0, w1, w2};
  const double wc = w[static_cast<int>(model.center)];
  const double wa = w[static_cast<int>(model.leaf_a)];
  const double wb = w[static_cast<int>(model.leaf_b)];
  double log_c = log_density(model.pair1, wc, wa) + log_density(model.pair2, wc, wb);
  if (model.pair_cond.family != Family::Independence) {
    const double ha = std::clamp(h_function(model.pair1, wa, wc), kLo, kHi);
    const double hb = std::clamp(h_function(model.pair2, wb, wc), kLo, kHi);
    log_c += log_density(model.pair_cond, ha, hb);
  }
  return std::exp(log_c);
}

VineVar select_structure(const std::array<double, 3>& abs_tau) {
  // Edges: 0 = (Y,X1), 1 = (Y,X2), 2 = (X1,X2).
  std::size_t drop = 0;
  for (std::size_t e = 1; e < 3; ++e)
    if (abs_tau[e] <= abs_tau[drop])
      drop = e;
  switch (drop) {
  case 0:
    return VineVar::X2;
  case 1:
    return VineVar::X1;
  default:
    return VineVar::Y;
  }
}

VineVar select_structure(const PseudoSample& pseudo) {
  if (pseudo.d != 2)
    throw DomainError("select_structure: requires two predictors");
  if (pseudo.n < 10)
    throw DomainError("select_structure: requires n >= 10");
  return select_structure({std::fabs(empirical_kendall_tau(pseudo.u_y, pseudo.u_x[0])),
                           std::fabs(empirical_kendall_tau(pseudo.u_y, pseudo.u_x[1])),
                           std::fabs(empirical_kendall_tau(pseudo.u_x[0], pseudo.u_x[1]))});
}

std::vector<UV> conditional_pseudo_obs(const VineModel& model, const PseudoSample& pseudo) {
  const auto& wc = column(pseudo, model.center);
  const auto& wa = column(pseudo, model.leaf_a);
  const auto& wb = column(pseudo, model.leaf_b);
  std::vector<UV> out(pseudo.n);
  for (std::size_t i = 0; i < pseudo.n; ++i)
    out[i] = {std::clamp(h_function(model.pair1, wa[i], wc[i]), kLo, kHi),
              std::clamp(h_function(model.pair2, wb[i], wc[i]), kLo, kHi)};
  return out;
}

VineModel fit_vine(const PseudoSample& pseudo, std::span<const Candidate> candidates, std::size_t workers) {
  if (candidates.empty())
    throw ConfigError("fit_vine: empty candidate list");
  const VineVar center = select_structure(pseudo);
  VineModel model = make_vine(center, {}, {}, {});
  const auto& wc = column(pseudo, model.center);
  model.fit_meta[0] = select_by_aic(candidates, zip(wc, column(pseudo, model.leaf_a)), workers);
  model.fit_meta[1] = select_by_aic(candidates, zip(wc, column(pseudo, model.leaf_b)), workers);
  model.pair1 = model.fit_meta[0].spec;
  model.pair2 = model.fit_meta[1].spec;
  model.fit_meta[2] = select_by_aic(candidates, conditional_pseudo_obs(model, pseudo), workers);
  model.pair_cond = model.fit_meta[2].spec;
  return model;
}

double vine_integral(const VineModel& model, std::size_t points, std::uint64_t seed) {
  boost::random::sobol qrng(3);
  qrng.discard(3); // skip the origin
  const double scale = 1.0 / (static_cast<double>(qrng.max()) + 1.0);
  UniformStream stream(seed);
  std::array<double, 3> shift{};
  for (auto& s : shift)
    s = stream.uniform();
  double sum = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    std::array<double, 3> w{};
    for (std::size_t j = 0; j < 3; ++j) {
      w[j] = static_cast<double>(qrng()) * scale + shift[j];
      if (w[j] >= 1.0)
        w[j] -= 1.0;
      if (w[j] <= 0.0)
        w[j] = 0.5 * scale;
    }
    sum += vine_density(model, w[0], w[1], w[2]);
  }
  return sum / static_cast<double>(points);
}

std::string serialize_vine(const VineModel& model) {
  auto line = [](const std::string& edge, const CopulaSpec& s) {
    return "pair," + edge + "," + std::string(family_name(s.family)) + "," + std::to_string(degrees(s.rotation)) +
           "," + join_params(s.params) + "\n";
  };
  const std::string c = var_name(model.center);
  const std::string a = var_name(model.leaf_a);
  const std::string b = var_name(model.leaf_b);
  return "center," + c + "\n" + line(c + "-" + a, model.pair1) + line(c + "-" + b, model.pair2) +
         line(a + "-" + b + "|" + c, model.pair_cond);
}

} // namespace copreg
