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

#include "advrisk/core.hpp"
#include "advrisk/error.hpp"
#include "advrisk/linalg.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace advrisk;
using advrisk::testing::random_in_ball;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }

}  // namespace

TEST_CASE("distance_z basic cases") {
  const auto m = ProductMetric::lp(2.0, true, 1.0);
  const Instance a(v1(0.0), 1);
  CHECK(distance_z(a, a, m) == 0.0);
  CHECK(distance_z(a, Instance(v1(1.0), 1), m) == doctest::Approx(1.0));
  CHECK(distance_z(a, Instance(v1(0.0), -1), m) == 1.0);
  CHECK_THROWS_AS(distance_z(a, Instance(Vector::Zero(2), 1), m), InvalidInput);
  CHECK_THROWS_AS(distance_z(a, Instance(v1(0.0)), m), InvalidInput);
}

TEST_CASE("diam_z") {
  CHECK(diam_z(ProductMetric::lp(2.0, true, 1.0)) == 3.0);
  CHECK(diam_z(ProductMetric::lp(2.0, false, 1.0)) == 2.0);
  CHECK(diam_z(ProductMetric::lp(2.0, true, 0.0)) == 1.0);
  const auto k = ProductMetric::gaussian_rkhs(1.0, true, 1.0);
  CHECK(k.feature_diameter() <= std::sqrt(2.0));
  CHECK(k.feature_diameter() == doctest::Approx(std::sqrt(2.0 - 2.0 * std::exp(-4.0))));
}

TEST_CASE("metric properties on random triples") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coin(0, 1);
  for (double p : {1.0, 2.0, 3.0, kInfinity}) {
    const auto m = ProductMetric::lp(p, true, 1.0, 3);
    const double diam = diam_z(m);
    for (int t = 0; t < 10000; ++t) {
      const Instance a(random_in_ball(rng, 3, 1.0), coin(rng) ? 1 : -1);
      const Instance b(random_in_ball(rng, 3, 1.0), coin(rng) ? 1 : -1);
      const Instance c(random_in_ball(rng, 3, 1.0), coin(rng) ? 1 : -1);
      const double ab = distance_z(a, b, m), bc = distance_z(b, c, m), ac = distance_z(a, c, m);
      REQUIRE(ac <= ab + bc + 1e-12);
      REQUIRE(ab == distance_z(b, a, m));
      REQUIRE(ab <= diam + 1e-12);
      const Instance shifted(a.features - b.features, b.label);
      const Instance origin(Vector::Zero(3), b.label);
      const Instance a_relabel(a.features, b.label);
      REQUIRE(distance_z(a_relabel, b, m) == distance_z(shifted, origin, m));
    }
  }
}

TEST_CASE("rkhs metric is translation invariant and bounded") {
  std::mt19937_64 rng(5);
  const auto m = ProductMetric::gaussian_rkhs(0.7, true, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const Vector a = random_in_ball(rng, 2, 1.0), b = random_in_ball(rng, 2, 1.0);
    const double d = m.feature_distance(a, b);
    const double k = std::exp(-(a - b).squaredNorm() / (0.7 * 0.7));
    REQUIRE(d * d == doctest::Approx(2.0 - 2.0 * k).epsilon(1e-9));
    REQUIRE(d == m.displacement_distance(a - b));
    REQUIRE(d <= m.feature_diameter() + 1e-12);
  }
}

TEST_CASE("adversary budget radius") {
  const auto m = ProductMetric::lp(2.0, true, 1.0);
  CHECK(AdversaryBudget(0.1, 2.0).metric_radius(m, 4) == doctest::Approx(0.1));
  CHECK(AdversaryBudget(0.1, kInfinity).metric_radius(m, 4) == doctest::Approx(0.2));
  CHECK(AdversaryBudget(0.1, 1.0).metric_radius(m, 4) == doctest::Approx(0.1));
  CHECK_THROWS_AS(AdversaryBudget(-1.0), InvalidInput);
  CHECK_THROWS_AS(AdversaryBudget(0.1, 0.5), InvalidInput);
}

TEST_CASE("datasets") {
  CHECK_THROWS_AS(Dataset({}, LabelSet::binary()), InvalidInput);
  CHECK_THROWS_AS(Dataset({Instance(v1(0.0), 1), Instance(Vector::Zero(2), 1)}, LabelSet::binary()),
                  InvalidInput);
  const auto d = Dataset::with_inferred_labels({Instance(v1(0.0), 1), Instance(v1(0.5), -1)});
  CHECK(d.label_set() == LabelSet::binary());
  const auto mc = Dataset::with_inferred_labels({Instance(v1(0.0), 1), Instance(v1(0.5), 3)});
  CHECK(mc.label_set() == LabelSet::multi_class(3));
  const auto u = Dataset::with_inferred_labels({Instance(v1(0.0))});
  CHECK(!u.label_set().labeled());
  CHECK(LabelSet::parse(LabelSet::multi_class(4).to_string()) == LabelSet::multi_class(4));
}

TEST_CASE("power iteration agrees with an eigen-decomposition on small matrices") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const int r = 1 + t % 5, c = 1 + (t / 5) % 5;
    const Matrix a = advrisk::testing::random_matrix(rng, r, c);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(a.transpose() * a);
    const double exact = std::sqrt(es.eigenvalues().maxCoeff());
    REQUIRE(spectral_norm_exact(a) == doctest::Approx(exact).epsilon(1e-12));
    REQUIRE(power_iteration(a, 500, 1e-14).value == doctest::Approx(exact).epsilon(1e-6));
    REQUIRE(spectral_norm(a) <= exact * (1.0 + 1e-12));
  }
}

TEST_CASE("ball projections") {
  std::mt19937_64 rng(9);
  for (double q : {1.0, 2.0, kInfinity}) {
    for (int t = 0; t < 200; ++t) {
      const Vector c = random_in_ball(rng, 3, 1.0);
      const Vector v = random_in_ball(rng, 3, 3.0);
      const Vector p = project_lq_ball(v, c, 0.3, q);
      REQUIRE(lp_norm(p - c, q) <= 0.3 + 1e-9);
      const Vector s = project_ball_intersection(v, c, 0.3, q, 1.0);
      REQUIRE(lp_norm(s - c, q) <= 0.3 + 1e-9);
      REQUIRE(s.norm() <= 1.0 + 1e-9);
    }
  }
}
