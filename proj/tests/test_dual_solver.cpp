/*
 * Copyright 2026 The advrisk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <random>

#include "advrisk/dual_solver.hpp"
#include "advrisk/error.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

using namespace advrisk;
using namespace advrisk::testing;

namespace {

InnerSupConfig cfg() {
  InnerSupConfig c;
  c.seed = 17;
  return c;
}

}  // namespace

TEST_CASE("inner sup on the one-point hinge example") {
  const auto f = svm1d();
  const Instance z = svm1d_point()[0];
  const auto m = f.metric();
  const auto at0 = inner_sup(f, 0.0, z, m, cfg());
  CHECK(at0.value == doctest::Approx(2.0).epsilon(1e-12));
  // (1, -1) and (-1, +1) tie at distance 1.5.
  CHECK(f.eval(at0.maximizer) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(at0.maximizer.features[0]) == doctest::Approx(1.0));
  CHECK(at0.value == doctest::Approx(phi_lattice_1d(f, z, 0.0)).epsilon(1e-9));

  const auto big = inner_sup(f, 1e6, z, m, cfg());
  CHECK(big.value == 0.5);
  CHECK(big.maximizer == z);

  for (double lambda : {0.3, 0.9, 1.0, 1.7}) {
    const double v = inner_sup(f, lambda, z, m, cfg()).value;
    CHECK(v == doctest::Approx(phi_lattice_1d(f, z, lambda)).epsilon(1e-3));
    CHECK(v >= 0.5);
  }
}

TEST_CASE("constant model") {
  const ConstantModel f(0.7, 2);
  const Dataset data({Instance(Vector::Zero(2), 1), Instance(Vector::Constant(2, 0.3), -1)},
                     LabelSet::binary());
  const auto m = f.metric();
  for (double lambda : {0.0, 0.5, 3.0}) {
    CHECK(inner_sup(f, lambda, data[0], m, cfg()).value == 0.7);
    CHECK(psi(f, lambda, data, m, cfg()) == 0.0);
  }
  CHECK(lambda_plus(f, data, m, cfg()) == 0.0);
  CHECK(lambda_minus(f, data, 0.3, 0.0, m, cfg()) == 0.0);
  const auto zeta = zeta_interval(f, data, 0.3, m, cfg());
  CHECK(zeta.first == 0.0);
  CHECK(zeta.second == 0.0);
  const auto sol = local_worst_case_risk(f, data, 0.3, m, cfg());
  CHECK(sol.risk_value == 0.7);
}

TEST_CASE("psi, roots and the zeta interval on the one-point example") {
  const auto f = svm1d();
  const Dataset data = svm1d_point();
  const auto m = f.metric();
  const DualProblem p(f, data, m, cfg());
  auto oracle_psi = [&](double l) { return phi_lattice_1d(f, data[0], l) - 0.5; };

  CHECK(p.psi(1.0) == doctest::Approx(0.0));
  CHECK(oracle_psi(1.0) == doctest::Approx(0.0));
  CHECK(p.psi(0.0) == doctest::Approx(1.5));
  CHECK(p.psi(0.0) <= f.bound_m());

  const double lp = lambda_plus(p, cfg());
  const double lp_oracle = first_grid_root(oracle_psi, 1e-6 * f.bound_m(), 3.0, 1e-4);
  CHECK(lp == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(std::abs(lp - lp_oracle) <= 1e-4);
  CHECK(p.psi(lp) <= 1e-6 * f.bound_m());

  CHECK(lambda_minus(p, 0.0, lp, cfg()) == lp);
  CHECK(lambda_minus(p, 0.3, 0.0, cfg()) == 0.0);
  const double lm = lambda_minus(p, 0.25, lp, cfg());
  const double lm_oracle = first_grid_root(oracle_psi, lp * 0.25, 3.0, 1e-4);
  CHECK(std::abs(lm - lm_oracle) <= 2e-4);
  CHECK(lm == doctest::Approx(5.0 / 6.0).epsilon(1e-4));

  const auto small = zeta_interval(p, 0.25, cfg());
  CHECK(small.first == lm);
  CHECK(small.second == lp);
  const auto large = zeta_interval(p, 3.0, cfg());
  CHECK(large.first == 0.0);
  CHECK(large.second == doctest::Approx(f.bound_m() / 3.0));
}

TEST_CASE("local worst-case risk on the one-point example") {
  const auto f = svm1d();
  const Dataset data = svm1d_point();
  const auto m = f.metric();
  const DualProblem p(f, data, m, cfg());

  const auto zero = local_worst_case_risk(p, 0.0, cfg());
  CHECK(zero.risk_value == 0.5);
  CHECK(zero.empirical_risk == 0.5);

  auto g = [&](double l) { return 0.25 * l + phi_lattice_1d(f, data[0], l); };
  const double oracle = convex_min(g, 3.0);
  const auto sol = local_worst_case_risk(p, 0.25, cfg());
  CHECK(std::abs(sol.risk_value - oracle) <= 1e-3);
  CHECK(sol.risk_value == doctest::Approx(0.75).epsilon(1e-5));
  CHECK(sol.lambda_bar >= sol.zeta_interval.first - 1e-4);
  CHECK(sol.lambda_bar <= sol.zeta_interval.second + 1e-4);
  CHECK(!sol.objective_samples.empty());

  const auto wide = local_worst_case_risk(p, diam_z(m), cfg());
  CHECK(wide.risk_value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(wide.lambda_bar == 0.0);
}

TEST_CASE("Lipschitz models have lambda_plus below their constant") {
  const SteepModel f(3.0, 0.2);
  const Dataset data({Instance(Vector::Constant(1, -0.4)), Instance(Vector::Constant(1, 0.6))},
                     LabelSet::none());
  CHECK(lambda_plus(f, data, f.metric(), cfg()) <= 3.0 + 1e-6);
}

TEST_CASE("a root beyond the bracket limit is an assumption violation") {
  const SteepModel f(1e30, 0.2);
  const Dataset data({Instance(Vector::Constant(1, -0.4))}, LabelSet::none());
  CHECK_THROWS_AS(lambda_plus(f, data, f.metric(), cfg()), AssumptionViolation);
}

TEST_CASE("psi and the dual objective keep their structure") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif;
  for (int trial = 0; trial < 4; ++trial) {
    const int d = 1 + trial % 2;
    const auto f = random_linear_svm(rng, d, 1.2);
    const Dataset data = random_dataset(rng, 6, d, 1.0, LabelSet::binary());
    const auto m = f.metric();
    const DualProblem p(f, data, m, cfg());
    const double diam = diam_z(m);
    const double lp = lambda_plus(p, cfg());
    for (int t = 0; t < 1000; ++t) {
      double a = unif(rng) * 2.0 * lp, b = unif(rng) * 2.0 * lp;
      if (a > b) std::swap(a, b);
      const double pa = p.psi(a), pb = p.psi(b);
      REQUIRE(pa >= pb - 1e-9);
      REQUIRE(std::abs(pa - pb) <= diam * (b - a) + 1e-9);
      REQUIRE(pa >= 0.0);
      const double eps = 0.1;
      REQUIRE(p.objective(0.5 * (a + b), eps) <=
              0.5 * (p.objective(a, eps) + p.objective(b, eps)) + 2e-6);
    }
    double prev = 0.0;
    for (double eps : {0.0, 0.05, 0.1, 0.25, 0.5, 1.0, 4.0}) {
      const auto sol = local_worst_case_risk(p, eps, cfg());
      CHECK(sol.risk_value >= prev - 1e-9);
      CHECK(sol.risk_value >= sol.empirical_risk - 1e-12);
      CHECK(sol.risk_value <= f.bound_m() + 1e-12);
      CHECK(sol.risk_value <= lp * eps + sol.empirical_risk + 1e-6 * f.bound_m());
      prev = sol.risk_value;
    }
  }
}

TEST_CASE("projected-gradient path is flagged and deterministic") {
  std::mt19937_64 rng(19);
  const auto f = random_linear_svm(rng, 3, 1.0);
  const Dataset data = random_dataset(rng, 5, 3, 1.0, LabelSet::binary());
  const auto m = f.metric();
  auto c1 = cfg();
  auto c4 = cfg();
  c4.threads = 4;
  const DualProblem a(f, data, m, c1), b(f, data, m, c4);
  CHECK(a.heuristic());
  CHECK(a.method() == InnerMethod::Pga);
  for (double l : {0.0, 0.3, 0.8, 2.0}) CHECK(a.psi(l) == b.psi(l));
  const auto sa = local_worst_case_risk(a, 0.1, c1), sb = local_worst_case_risk(b, 0.1, c4);
  CHECK(sa.risk_value == sb.risk_value);
  CHECK(sa.heuristic);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double v = a.phi(i, 0.0);
    CHECK(v <= f.bound_m() + 1e-12);
    CHECK(v >= f.eval(data[i]));
  }
}

TEST_CASE("solver configuration is validated") {
  InnerSupConfig c;
  c.grid_points_per_dim = 10;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = InnerSupConfig{};
  c.pga_restarts = 2;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = InnerSupConfig{};
  c.tolerance = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
}
