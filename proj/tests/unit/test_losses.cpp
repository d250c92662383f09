// Copyright 2026 The jcrf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <functional>
#include <random>

#include "bridge.hpp"
#include "doctest.h"
#include "jcrf/errors.hpp"
#include "jcrf/losses.hpp"
#include "jcrf/trainer.hpp"
#include "oracle.hpp"
#include "synthetic.hpp"

using namespace jcrf;
using namespace jcrf::testing;

namespace {

constexpr double kTol = 1e-6;

struct Problem {
  LabelSpace space;
  BruteLattice brute;
  LatticeParts parts;
  std::vector<std::size_t> gold;
  std::vector<BioTag> observed;
  ConstraintMask semlink;
};

Problem make_problem(std::mt19937_64& rng, const LabelSpace& space, std::size_t T) {
  Problem p{space, random_over(rng, space.structure(), T), {}, {}, {}, {}};
  p.parts = to_parts(p.brute);
  p.gold = random_path(rng, space.structure(), T);
  p.observed = project(space, p.gold, Scheme::PB);
  std::bernoulli_distribution keep(0.6);
  std::vector<bool> row(space.size());
  for (auto&& x : row) x = keep(rng);
  for (auto y : p.gold) row[y] = true;
  p.semlink = {BoolMatrix(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(space.size())),
               Provenance::Semlink};
  for (Eigen::Index t = 0; t < p.semlink.length(); ++t) {
    for (Eigen::Index l = 0; l < p.semlink.labels(); ++l) {
      p.semlink.allowed(t, l) = row[static_cast<std::size_t>(l)];
    }
  }
  return p;
}

double max_grad_error(LatticeParts base, const std::function<LossResult<double>(const Lattice<double>&)>& f) {
  const double h = 1e-5;
  auto g = f(base.lattice()).gradient;
  double worst = 0.0;
  auto probe = [&](double& x, double analytic) {
    const double keep = x;
    x = keep + h;
    const double up = f(base.lattice()).value;
    x = keep - h;
    const double down = f(base.lattice()).value;
    x = keep;
    const double fd = (up - down) / (2 * h);
    worst = std::max(worst, std::abs(fd - analytic) / std::max(1.0, std::abs(fd) + std::abs(analytic)));
  };
  for (Eigen::Index t = 0; t < base.emissions.rows(); ++t) {
    for (Eigen::Index l = 0; l < base.emissions.cols(); ++l) probe(base.emissions(t, l), g.emissions(t, l));
  }
  for (Eigen::Index i = 0; i < base.params.size(); ++i) {
    probe(base.params.start(i), g.start(i));
    probe(base.params.end(i), g.end(i));
    for (Eigen::Index j = 0; j < base.params.size(); ++j) {
      probe(base.params.transitions(i, j), g.transitions(i, j));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("loss values match enumeration") {
  std::mt19937_64 rng(1);
  for (std::size_t n : {2u, 4u, 6u, 8u}) {
    for (std::size_t T = 1; T <= 4; ++T) {
      auto p = make_problem(rng, tiny_space(n), T);
      auto lat = p.parts.lattice();
      const double z = *brute_log_partition(p.brute);
      CHECK(joint_nll(lat, std::span<const std::size_t>(p.gold)).value ==
            doctest::Approx(z - brute_score(p.brute, p.gold)).epsilon(kTol));

      auto comp = brute_completion(p.space, p.observed);
      CHECK(marginal_nll(lat, std::span<const BioTag>(p.observed), p.space).value ==
            doctest::Approx(z - *brute_log_partition(p.brute, &comp)).epsilon(kTol));

      auto seml = to_brute(p.semlink);
      auto both = brute_and(comp, seml);
      CHECK(constrained_marginal_nll(lat, std::span<const BioTag>(p.observed), p.space, p.semlink).value ==
            doctest::Approx(*brute_log_partition(p.brute, &seml) - *brute_log_partition(p.brute, &both))
                .epsilon(kTol));

      // Widened partition: the gold labels stay admissible.
      auto widened = seml;
      for (std::size_t t = 0; t < T; ++t) widened[t][p.gold[t]] = true;
      CHECK(joint_nll(lat, std::span<const std::size_t>(p.gold), &p.semlink).value ==
            doctest::Approx(*brute_log_partition(p.brute, &widened) - brute_score(p.brute, p.gold))
                .epsilon(kTol));
    }
  }
}

TEST_CASE("multitask loss is the sum of its per-scheme terms") {
  std::mt19937_64 rng(2);
  auto vn_rng = random_brute(rng, 3, 4);
  auto pb_rng = random_brute(rng, 3, 3);
  auto vn = to_parts(vn_rng);
  auto pb = to_parts(pb_rng);
  const std::vector<std::size_t> gv{0, 1, 0};
  const std::vector<std::size_t> gp{2, 0, 0};
  REQUIRE(brute_admissible(vn_rng, gv, nullptr));
  REQUIRE(brute_admissible(pb_rng, gp, nullptr));
  auto r = multitask_nll(vn.lattice(), pb.lattice(), std::span<const std::size_t>(gv),
                         std::span<const std::size_t>(gp));
  const double want = (*brute_log_partition(vn_rng) - brute_score(vn_rng, gv)) +
                      (*brute_log_partition(pb_rng) - brute_score(pb_rng, gp));
  CHECK(r.value == doctest::Approx(want).epsilon(kTol));
  CHECK(r.vn_gradient.emissions.rows() == 3);
  CHECK(r.pb_gradient.emissions.cols() == 3);
}

TEST_CASE("analytic gradients match central differences") {
  std::mt19937_64 rng(3);
  auto toy = toy_space(generate_corpus(200, 3));
  for (int k = 0; k < 12; ++k) {
    auto p = make_problem(rng, k % 4 == 3 ? toy : tiny_space(4 + 2 * static_cast<std::size_t>(k % 3)),
                          k % 4 == 3 ? 2 : 3);
    const std::span<const std::size_t> g(p.gold);
    const std::span<const BioTag> o(p.observed);
    CHECK(max_grad_error(p.parts, [&](const auto& l) { return joint_nll(l, g); }) < 1e-4);
    CHECK(max_grad_error(p.parts, [&](const auto& l) { return joint_nll(l, g, &p.semlink); }) < 1e-4);
    CHECK(max_grad_error(p.parts, [&](const auto& l) { return marginal_nll(l, o, p.space); }) < 1e-4);
    CHECK(max_grad_error(p.parts, [&](const auto& l) {
            return constrained_marginal_nll(l, o, p.space, p.semlink);
          }) < 1e-4);
  }
}

TEST_CASE("losses are nonnegative and vanish when the target has all the mass") {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 40; ++k) {
    auto p = make_problem(rng, tiny_space(8), 4);
    auto lat = p.parts.lattice();
    const std::span<const BioTag> o(p.observed);
    CHECK(joint_nll(lat, std::span<const std::size_t>(p.gold)).value >= 0.0);
    CHECK(marginal_nll(lat, o, p.space).value >= -1e-12);
    CHECK(constrained_marginal_nll(lat, o, p.space, p.semlink).value >= -1e-12);
    auto comp = completion_mask(p.space, o);
    CHECK(std::abs(constrained_marginal_nll(lat, o, p.space, comp).value) < 1e-12);
  }
}

TEST_CASE("an all-true Semlink mask reproduces marginal_nll bit for bit") {
  std::mt19937_64 rng(5);
  auto toy = toy_space(generate_corpus(200, 3));
  for (int k = 0; k < 20; ++k) {
    auto p = make_problem(rng, toy, 5);
    auto lat = p.parts.lattice();
    const std::span<const BioTag> o(p.observed);
    auto a = marginal_nll(lat, o, p.space);
    auto b = constrained_marginal_nll(lat, o, p.space, ConstraintMask::all_true(5, lat.labels()));
    CHECK(a.value == b.value);
    CHECK(a.gradient.emissions == b.gradient.emissions);
    CHECK(a.gradient.transitions == b.gradient.transitions);
    CHECK(a.gradient.start == b.gradient.start);
    CHECK(a.gradient.end == b.gradient.end);
  }
}

TEST_CASE("a fully determining observation reduces marginal_nll to joint_nll") {
  std::vector<RoleLabel> roles{{Scheme::VN, "V", RoleKind::Verb}, {Scheme::VN, "O", RoleKind::Outside},
                               {Scheme::PB, "V", RoleKind::Verb}, {Scheme::PB, "O", RoleKind::Outside},
                               {Scheme::PB, "X", RoleKind::CoreArgument}};
  auto [vn, pb] = split_inventories(roles);
  auto space = build_label_space(vn, pb);
  std::mt19937_64 rng(6);
  for (int k = 0; k < 20; ++k) {
    auto p = make_problem(rng, space, 4);
    auto lat = p.parts.lattice();
    auto m = marginal_nll(lat, std::span<const BioTag>(p.observed), space);
    auto j = joint_nll(lat, std::span<const std::size_t>(p.gold));
    CHECK(m.value == doctest::Approx(j.value).epsilon(1e-12));
    CHECK((m.gradient.emissions - j.gradient.emissions).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((m.gradient.transitions - j.gradient.transitions).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("training under the constrained loss leaves no mass on violating labels") {
  SyntheticOptions opts;
  opts.pb_only_fraction = 1.0;
  auto corpus = generate_corpus(30, 7, opts);
  auto space = toy_space(generate_corpus(300, 1));
  auto mapping = toy_semlink();
  auto result = train(corpus, space, toy_config(Regime::MarginalSeml, 20, 1), &mapping);
  CHECK(result.history.back().loss < result.history.front().loss);
  std::size_t checked = 0;
  for (const auto& inst : corpus) {
    if (!mapping.covers(inst)) continue;
    auto lat = result.model.joint->lattice(inst);
    auto mask = compile_semlink_mask(inst, mapping, space);
    auto post = posterior_marginals(lat, &mask);
    for (Eigen::Index t = 0; t < post.rows(); ++t) {
      for (Eigen::Index l = 0; l < post.cols(); ++l) {
        if (!mask.allowed(t, l)) {
          CHECK(post(t, l) < 1e-6);
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("loss input errors") {
  std::mt19937_64 rng(8);
  auto p = make_problem(rng, tiny_space(8), 3);
  auto lat = p.parts.lattice();
  const std::vector<std::size_t> short_gold{0, 0};
  CHECK_THROWS_AS(joint_nll(lat, std::span<const std::size_t>(short_gold)), AlignmentError);
  auto space = p.space;
  const auto v = space.index_of(BioTag::verb("V"), BioTag::verb("V"));
  const auto ia = space.index_of(BioTag::inside("A"), BioTag::inside("X"));
  const std::vector<std::size_t> broken{ia, v, v};
  CHECK_THROWS_AS(joint_nll(lat, std::span<const std::size_t>(broken)), DataError);
  const std::vector<BioTag> short_obs{BioTag::outside()};
  CHECK_THROWS_AS(marginal_nll(lat, std::span<const BioTag>(short_obs), space), AlignmentError);
}
