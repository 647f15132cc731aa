#include "doctest.h"

#include "copreg/copula.hpp"
#include "copreg/experiments.hpp"
#include "copreg/rng.hpp"
#include "copreg/vine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

using namespace copreg;

namespace {

const CopulaSpec kIndep{Family::Independence, Rotation::R0, {}};

// Columns (Y, X1, X2) drawn from a Y-centred vine with an independent
// conditional pair.
Dataset sample_y_centred(const CopulaSpec& pair1, const CopulaSpec& pair2, std::size_t n, std::uint64_t seed) {
  UniformStream st(seed);
  Dataset d;
  d.x.resize(2);
  for (std::size_t i = 0; i < n; ++i) {
    const double wy = st.uniform();
    d.y.push_back(wy);
    d.x[0].push_back(h_inverse(pair1, st.uniform(), wy));
    d.x[1].push_back(h_inverse(pair2, st.uniform(), wy));
  }
  return d;
}

Dataset independent_columns(std::size_t n, std::uint64_t seed) {
  UniformStream st(seed);
  Dataset d;
  d.x.resize(2);
  for (std::size_t i = 0; i < n; ++i) {
    d.y.push_back(st.uniform());
    d.x[0].push_back(st.uniform());
    d.x[1].push_back(st.uniform());
  }
  return d;
}

} // namespace

TEST_SUITE("vine") {

TEST_CASE("density reductions") {
  const VineModel all_indep = make_vine(VineVar::Y, kIndep, kIndep, kIndep);
  CHECK(vine_density(all_indep, 0.2, 0.7, 0.4) == 1.0);

  const CopulaSpec a{Family::Clayton, Rotation::R0, {1.5}};
  const CopulaSpec b{Family::Gumbel, Rotation::R90, {1.4}};
  const VineModel tree_only = make_vine(VineVar::Y, a, b, kIndep);
  const VineModel one_pair = make_vine(VineVar::Y, a, kIndep, kIndep);
  for (auto w : {std::array{0.2, 0.7, 0.4}, std::array{0.9, 0.1, 0.55}}) {
    CHECK(vine_density(tree_only, w[0], w[1], w[2]) ==
          doctest::Approx(density(a, w[0], w[1]) * density(b, w[0], w[2])).epsilon(1e-13));
    CHECK(vine_density(one_pair, w[0], w[1], w[2]) == doctest::Approx(density(a, w[0], w[1])).epsilon(1e-14));
  }

  // Centre X1: the conditional pair links Y and X2 given X1.
  const CopulaSpec c{Family::Frank, Rotation::R0, {4.0}};
  const VineModel centred = make_vine(VineVar::X1, a, b, c);
  const double w0 = 0.3, w1 = 0.6, w2 = 0.8;
  const double expected = density(a, w1, w0) * density(b, w1, w2) *
                          density(c, h_function(a, w0, w1), h_function(b, w2, w1));
  CHECK(vine_density(centred, w0, w1, w2) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("select_structure") {
  CHECK(select_structure(std::array{0.5, 0.4, 0.1}) == VineVar::Y);
  CHECK(select_structure(std::array{0.3, 0.3, 0.3}) == VineVar::Y);
  CHECK(select_structure(std::array{0.5, 0.1, 0.4}) == VineVar::X1);
  CHECK(select_structure(std::array{0.1, 0.5, 0.4}) == VineVar::X2);
  // Exhaustive check over the three spanning trees. Edge order: (Y,X1),
  // (Y,X2), (X1,X2); the tree centred at Y keeps edges 0 and 1, and so on.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif;
  for (int k = 0; k < 50; ++k) {
    const std::array<double, 3> t{unif(rng), unif(rng), unif(rng)};
    const std::array<double, 3> weight{t[0] + t[1], t[0] + t[2], t[1] + t[2]};
    const double best = *std::max_element(weight.begin(), weight.end());
    const auto centre = select_structure(t);
    CHECK(weight[static_cast<std::size_t>(centre)] == best);
  }
}

TEST_CASE("conditional pseudo observations") {
  const Dataset data = sample_y_centred({Family::Gaussian, Rotation::R0, {0.5}}, {Family::Clayton, Rotation::R0, {1.0}},
                                        200, 3);
  const PseudoSample ps = ecdf_transform(data);
  const VineModel indep = make_vine(VineVar::X1, kIndep, kIndep, kIndep);
  const auto same = conditional_pseudo_obs(indep, ps);
  for (std::size_t i = 0; i < ps.n; ++i) {
    CHECK(same[i].u == ps.u_y[i]);
    CHECK(same[i].v == ps.u_x[1][i]);
  }
  const VineModel g = make_vine(VineVar::Y, {Family::Gaussian, Rotation::R0, {0.5}}, {Family::Joe, Rotation::R0, {2.0}},
                                kIndep);
  for (const auto& p : conditional_pseudo_obs(g, ps)) {
    CHECK(p.u > 0.0);
    CHECK(p.u < 1.0);
    CHECK(p.v > 0.0);
    CHECK(p.v < 1.0);
  }
  CHECK(h_function(g.pair1, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("fit_vine on independent data") {
  for (std::uint64_t s = 1; s <= 2; ++s) {
    const VineModel m = fit_vine(ecdf_transform(independent_columns(2000, s)), vine_candidates());
    // Minimum AIC over the candidate list; observed down to -11.5 over 30 seeds.
    for (const auto& f : m.fit_meta)
      CHECK(f.aic >= -15.0);
    for (int a = 1; a <= 5; ++a)
      for (int b = 1; b <= 5; ++b)
        for (int c = 1; c <= 5; ++c) {
          const double v = vine_density(m, a / 6.0, b / 6.0, c / 6.0);
          CHECK(v >= 0.8);
          CHECK(v <= 1.25);
        }
    CHECK(vine_integral(m) == doctest::Approx(1.0).epsilon(0.01));
  }
  const std::vector<Candidate> only = {{Family::Independence, Rotation::R0}};
  const VineModel trivial = fit_vine(ecdf_transform(independent_columns(300, 9)), only);
  CHECK(trivial.pair1.family == Family::Independence);
  CHECK(trivial.pair2.family == Family::Independence);
  CHECK(trivial.pair_cond.family == Family::Independence);
  CHECK(vine_density(trivial, 0.1, 0.5, 0.9) == 1.0);
}

TEST_CASE("fit_vine recovers a gaussian vine") {
  const CopulaSpec g{Family::Gaussian, Rotation::R0, {0.6}};
  const std::vector<Candidate> cands = {{Family::Independence, Rotation::R0}, {Family::Gaussian, Rotation::R0},
                                        {Family::Clayton, Rotation::R0},      {Family::Gumbel, Rotation::R0},
                                        {Family::Frank, Rotation::R0}};
  const VineModel m = fit_vine(ecdf_transform(sample_y_centred(g, g, 5000, 5)), cands);
  CHECK(m.center == VineVar::Y);
  REQUIRE(m.pair1.family == Family::Gaussian);
  REQUIRE(m.pair2.family == Family::Gaussian);
  CHECK(std::abs(m.pair1.params[0] - 0.6) < 0.05);
  CHECK(std::abs(m.pair2.params[0] - 0.6) < 0.05);
}

TEST_CASE("fitted vines are normalized and deterministic") {
  for (Model model : {Model::M3, Model::M5}) {
    const PseudoSample ps = ecdf_transform(simulate_dgp({model, 150, 0.1, 11}));
    const VineModel serial = fit_vine(ps, vine_candidates(), 1);
    const VineModel threaded = fit_vine(ps, vine_candidates(), 4);
    CHECK(serialize_vine(serial) == serialize_vine(threaded));
    CHECK(vine_integral(serial) == doctest::Approx(1.0).epsilon(0.01));
  }
}

TEST_CASE("serialization") {
  const VineModel m = make_vine(VineVar::X2, {Family::Clayton, Rotation::R180, {1.5}},
                                {Family::StudentT, Rotation::R0, {0.25, 4.0}}, kIndep);
  CHECK(serialize_vine(m) == "center,X2\n"
                             "pair,X2-Y,clayton,180,1.5\n"
                             "pair,X2-X1,t,0,0.25;4\n"
                             "pair,Y-X1|X2,indep,0,\n");
}

} // TEST_SUITE
