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

#include <cmath>
#include <numbers>
#include <random>

#include "advrisk/bounds.hpp"
#include "advrisk/error.hpp"
#include "advrisk/special_functions.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

using namespace advrisk;
using namespace advrisk::testing;

TEST_CASE("incomplete gamma closed forms") {
  CHECK(incomplete_gamma(1.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(incomplete_gamma(2.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(incomplete_gamma(2.0, std::log(2.0)) ==
        doctest::Approx((1.0 + std::log(2.0)) / 2.0).epsilon(1e-14));
  CHECK(incomplete_gamma(0.5, 0.0) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
  CHECK_THROWS_AS(incomplete_gamma(0.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(incomplete_gamma(1.0, -1.0), InvalidInput);
  CHECK(log_incomplete_gamma(400.0, 1.0) == doctest::Approx(std::lgamma(400.0)).epsilon(1e-12));
}

TEST_CASE("incomplete gamma against quadrature") {
  for (double s : {0.3, 0.5, 1.0, 1.5, 2.5, 7.0, 20.0}) {
    for (double v : {0.0, 0.1, 1.0, 3.0, 8.0, 25.0}) {
      const double q = quad_incomplete_gamma(s, v);
      CHECK(std::abs(incomplete_gamma(s, v) - q) <= 1e-10 * q);
    }
  }
}

TEST_CASE("covering constants") {
  const LinearSvmModel svm(Vector::Zero(4), 1.0, 1.0);
  CHECK(std::abs(covering_constant(svm) - 12.0) <= 1e-12 * 12.0);
  const PcaModel pca(Matrix::Identity(4, 2), 1.0);
  CHECK(std::abs(covering_constant(pca) - 96.0) <= 1e-12 * 96.0);
  const KernelSvmModel ker({Vector::Zero(1)}, Vector::Constant(1, 0.5), 2.0, 1.0, 1.0);
  const double c3 = 352.0 * (2.0 * quad_incomplete_gamma(2.0, std::log(2.0)) + std::log(2.0));
  CHECK(std::abs(c3 - 352.0 * (1.0 + 2.0 * std::log(2.0))) <= 1e-13 * c3);
  CHECK(std::abs(covering_constant(ker) - c3) <= 1e-12 * c3);

  Layer a{Matrix::Identity(2, 2), Activation::parse("relu"), 2.0, 3.0};
  Layer b{Matrix::Identity(3, 2), Activation::parse("identity"), 1.5, 2.0};
  const NeuralNetModel nn({a, b}, 0.5, 1.0);
  const double expect = (12.0 / 0.5) * (2.0 * 1.5) * 1.0 * 3.0 *
                        std::pow(std::sqrt(3.0 / 2.0) + std::sqrt(2.0 / 1.5), 2);
  CHECK(covering_constant(nn) == doctest::Approx(expect).epsilon(1e-12));
  const NeuralNetModel uncapped({Layer{Matrix::Identity(2, 2), Activation::parse("identity"),
                                       std::nullopt, std::nullopt}},
                                1.0, 1.0);
  CHECK_THROWS_AS(covering_constant(uncapped), InvalidInput);
}

TEST_CASE("term-by-term linear svm bound") {
  std::mt19937_64 rng(100);
  const LinearSvmModel f(Vector::Unit(4, 0) * 0.5, 1.0, 1.0);
  const Dataset data = random_dataset(rng, 100, 4, 1.0, LabelSet::binary());
  const auto r = assemble_bound(f, data, std::nullopt, 0.1, 0.1, BoundMode::Eq4);
  double emp = 0.0, lp = 0.5;
  for (const auto& z : data.instances()) {
    emp += std::max(0.0, 1.0 - *z.label * 0.5 * z.features[0]);
    lp = std::max(lp, 2.0 * *z.label * 0.5 * z.features[0]);
  }
  emp /= 100.0;
  CHECK(r.empirical_risk == doctest::Approx(emp).epsilon(1e-14));
  CHECK(r.dual_penalty == doctest::Approx(lp * 0.1).epsilon(1e-14));
  CHECK(r.complexity_term == doctest::Approx(24.0 * 12.0 / 10.0).epsilon(1e-13));
  CHECK(r.lambda_band_term ==
        doctest::Approx(12.0 * std::sqrt(std::numbers::pi) * 2.0 * 3.0 / 10.0).epsilon(1e-14));
  CHECK(r.confidence_term == doctest::Approx(2.0 * std::sqrt(std::log(10.0) / 200.0)).epsilon(1e-14));
  CHECK(r.total == r.empirical_risk + r.dual_penalty + r.complexity_term + r.lambda_band_term +
                       r.confidence_term);
  CHECK(r.lambda_source == LambdaSource::Analytic);
  CHECK(std::exp(r.log_total) == doctest::Approx(r.total).epsilon(1e-12));
}

TEST_CASE("zero budget and limits") {
  std::mt19937_64 rng(101);
  const auto f = random_linear_svm(rng, 2);
  const Dataset data = random_dataset(rng, 20, 2, 1.0, LabelSet::binary());
  const auto dual = local_worst_case_risk(f, data, 0.0, f.metric(), InnerSupConfig{});
  for (auto mode : {BoundMode::Eq3, BoundMode::Eq4}) {
    const auto r = assemble_bound(f, data, dual, 0.0, 0.1, mode);
    CHECK(r.dual_penalty == 0.0);
    CHECK(r.lambda_band_term == 0.0);
    CHECK(r.total == r.empirical_risk + r.complexity_term + r.confidence_term);
  }
  const auto tiny = assemble_bound(f, data, std::nullopt, 0.1, 1.0 - 1e-12, BoundMode::Eq4);
  CHECK(tiny.confidence_term < 1e-6);
  CHECK_THROWS_AS(assemble_bound(f, data, std::nullopt, 0.1, 1.0, BoundMode::Eq4), InvalidInput);
  CHECK_THROWS_AS(assemble_bound(f, data, std::nullopt, 0.1, 0.1, BoundMode::Eq3), InvalidInput);
  CHECK_THROWS_AS(assemble_bound(f, data, dual, 0.1, 0.1, BoundMode::Eq4), InvalidInput);
}

TEST_CASE("bound orderings") {
  std::mt19937_64 rng(102);
  const auto f = random_linear_svm(rng, 2, 1.0);
  const Dataset data = random_dataset(rng, 12, 2, 1.0, LabelSet::binary());
  for (double eps : {0.05, 0.1, 0.5, 3.0}) {
    const auto dual = local_worst_case_risk(f, data, eps, f.metric(), InnerSupConfig{});
    const auto e3 = assemble_bound(f, data, dual, eps, 0.1, BoundMode::Eq3);
    const auto e4 = assemble_bound(f, data, dual, eps, 0.1, BoundMode::Eq4);
    CHECK(e3.dual_penalty <= e4.dual_penalty + 1e-6 * f.bound_m());
    CHECK(e3.total <= e4.total + 1e-6 * f.bound_m());
    CHECK(e4.lambda_plus_used <= e4.lambda_plus_analytic);
    if (eps >= f.bound_m() / *f.class_lipschitz())
      CHECK(e4.lambda_band == f.bound_m() / eps);
  }
  const auto r1 = assemble_bound(f, data, std::nullopt, 0.1, 0.1, BoundMode::Eq4);
  const auto r2 = assemble_bound(f, data, std::nullopt, 0.1, 0.01, BoundMode::Eq4);
  CHECK(r2.total >= r1.total);
  std::vector<Instance> twice = data.instances();
  twice.insert(twice.end(), data.instances().begin(), data.instances().end());
  const auto r3 = assemble_bound(f, Dataset(twice, data.label_set()), std::nullopt, 0.1, 0.1,
                                 BoundMode::Eq4);
  CHECK(r3.total <= r1.total);
}
