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

#include "advrisk/error.hpp"
#include "advrisk/linalg.hpp"
#include "advrisk/model_io.hpp"
#include "advrisk/models.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace advrisk;
using namespace advrisk::testing;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Instance random_instance(std::mt19937_64& rng, const LossModel& f) {
  const auto labels = f.label_set().labels();
  std::optional<int> y;
  if (!labels.empty())
    y = labels[std::uniform_int_distribution<std::size_t>(0, labels.size() - 1)(rng)];
  return Instance(random_in_ball(rng, f.feature_dim(), f.feature_radius()), y);
}

std::vector<std::unique_ptr<LossModel>> model_zoo(std::mt19937_64& rng) {
  std::vector<std::unique_ptr<LossModel>> zoo;
  zoo.push_back(std::make_unique<LinearSvmModel>(random_linear_svm(rng, 3, 1.5, 1.0)));
  zoo.push_back(std::make_unique<KernelSvmModel>(random_kernel_svm(rng, 2, 4, 0.8)));
  zoo.push_back(std::make_unique<NeuralNetModel>(random_network(rng, {3, 5, 4, 3}, "relu", 0.5)));
  zoo.push_back(std::make_unique<NeuralNetModel>(random_network(rng, {2, 6, 2}, "tanh", 1.0)));
  zoo.push_back(std::make_unique<PcaModel>(random_pca(rng, 4, 2, 1.0)));
  return zoo;
}

}  // namespace

TEST_CASE("hinge loss") {
  const LinearSvmModel f(vec({1.0}), 1.0, 1.0);
  CHECK(hinge_eval(f, Instance(vec({0.5}), 1)) == 0.5);
  CHECK(hinge_eval(f, Instance(vec({1.0}), 1)) == 0.0);
  CHECK(hinge_eval(f, Instance(vec({1.0}), -1)) == 2.0);
  CHECK(f.bound_m() == 2.0);
  CHECK_THROWS_AS(hinge_eval(f, Instance(vec({0.5}))), InvalidInput);
  CHECK_THROWS_AS(LinearSvmModel(vec({2.0}), 1.0, 1.0), InvalidInput);
}

TEST_CASE("linear svm lambda_plus bound") {
  const LinearSvmModel f(vec({1.0}), 1.0, 1.0);
  CHECK(svm_lambda_plus_bound(f, Dataset({Instance(vec({0.5}), 1)}, LabelSet::binary())) == 1.0);
  CHECK(svm_lambda_plus_bound(
            f, Dataset({Instance(vec({1.0}), 1), Instance(vec({-1.0}), 1)}, LabelSet::binary())) ==
        2.0);
  const LinearSvmModel zero(vec({0.0, 0.0}), 1.0, 1.0);
  CHECK(svm_lambda_plus_bound(zero, Dataset({Instance(vec({0.3, 0.1}), -1)}, LabelSet::binary())) ==
        0.0);
}

TEST_CASE("gaussian kernel") {
  CHECK(gaussian_kernel(vec({0.3, 0.2}), vec({0.3, 0.2}), 1.0) == 1.0);
  CHECK(gaussian_kernel(vec({0.0}), vec({2.0}), 2.0) == doctest::Approx(0.36787944117144233));
  CHECK_THROWS_AS(gaussian_kernel(vec({0.0}), vec({1.0}), 0.0), InvalidInput);
  CHECK_THROWS_AS(gaussian_kernel(vec({0.0}), vec({1.0, 0.0}), 1.0), InvalidInput);
}

TEST_CASE("kernel svm") {
  const KernelSvmModel zero({vec({0.1})}, vec({0.0}), 1.0, 1.0, 1.0);
  CHECK(kernel_svm_eval(zero, Instance(vec({0.7}), 1)) == 1.0);
  CHECK(kernel_svm_eval(zero, Instance(vec({-0.7}), -1)) == 1.0);
  const KernelSvmModel one({vec({0.4})}, vec({1.0}), 1.0, 1.0, 1.0);
  CHECK(kernel_svm_eval(one, Instance(vec({0.4}), 1)) == 0.0);
  const KernelSvmModel w08({vec({0.0})}, vec({0.8}), 1.0, 1.0, 1.0);
  CHECK(w08.rkhs_norm() == doctest::Approx(0.8));
  const Dataset data({Instance(vec({0.0}), 1), Instance(vec({0.5}), -1)}, LabelSet::binary());
  CHECK(w08.lambda_plus_analytic(data) <= 1.6 + 1e-15);
  CHECK(w08.bound_m() == 2.0);
  CHECK_THROWS_AS(KernelSvmModel({vec({0.0})}, vec({2.0}), 1.0, 1.0, 1.0), InvalidInput);
}

TEST_CASE("margin operator and ramp") {
  CHECK(margin_operator(vec({2, 1, 0}), 1) == 1.0);
  CHECK(margin_operator(vec({1, 1}), 1) == 0.0);
  CHECK(margin_operator(vec({0, 3, 1}), 2) == 2.0);
  CHECK_THROWS_AS(margin_operator(vec({1, 2}), 3), InvalidInput);
  CHECK_THROWS_AS(margin_operator(vec({1, 2}), 0), InvalidInput);
  for (double g : {0.5, 1.0, 3.0}) {
    CHECK(ramp_loss(-2.0 * g, g) == 0.0);
    CHECK(ramp_loss(-g / 2.0, g) == doctest::Approx(0.5));
    CHECK(ramp_loss(0.1, g) == 1.0);
  }
}

TEST_CASE("margin operator is 2-Lipschitz") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  int violations = 0;
  for (int t = 0; t < 10000; ++t) {
    const int k = 2 + t % 9;
    Vector u(k), v(k);
    for (int j = 0; j < k; ++j) u[j] = normal(rng), v[j] = normal(rng);
    const int y = 1 + static_cast<int>(rng() % k);
    if (std::abs(margin_operator(u, y) - margin_operator(v, y)) > 2.0 * (u - v).norm() + 1e-12)
      ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("network forward and C4") {
  Layer zero{Matrix::Zero(3, 2), Activation::parse("relu"), std::nullopt, std::nullopt};
  Layer zero_out{Matrix::Zero(2, 3), Activation::parse("identity"), std::nullopt, std::nullopt};
  const NeuralNetModel z({zero, zero_out}, 1.0, 1.0);
  CHECK(nn_forward(z, vec({0.3, -0.4})).isZero());
  const Dataset d({Instance(vec({0.3, -0.4}), 1)}, LabelSet::multi_class(2));
  CHECK(nn_lambda_plus_bound(z, d) == 0.0);

  Layer id{Matrix::Identity(2, 2), Activation::parse("identity"), std::nullopt, std::nullopt};
  const NeuralNetModel ident({id}, 1.0, 1.0);
  CHECK(nn_forward(ident, vec({0.3, -0.4})) == vec({0.3, -0.4}));
  const Dataset p({Instance(vec({1.0, 0.0}), 1)}, LabelSet::multi_class(2));
  CHECK(nn_lambda_plus_bound(ident, p) == doctest::Approx(2.0));
  CHECK(ident.bound_m() == 1.0);

  Layer bad{Matrix::Zero(4, 3), Activation::parse("relu"), std::nullopt, std::nullopt};
  CHECK_THROWS_AS(NeuralNetModel({zero, bad, zero_out}, 1.0, 1.0), InvalidInput);
  Layer capped{Matrix::Identity(2, 2) * 2.0, Activation::parse("identity"), 1.0, std::nullopt};
  CHECK_THROWS_AS(NeuralNetModel({capped}, 1.0, 1.0), InvalidInput);
}

TEST_CASE("pca") {
  Matrix u = Matrix::Zero(2, 1);
  u(0, 0) = 1.0;
  const PcaModel f(u, 1.0);
  CHECK(pca_eval(f, Instance(vec({0.7, 0.0}))) == 0.0);
  CHECK(pca_eval(f, Instance(vec({0.0, 1.0}))) == 1.0);
  CHECK(f.lambda_plus_analytic(Dataset({Instance(vec({0.0, 1.0}))}, LabelSet::none())) == 2.0);
  CHECK_THROWS_AS(pca_eval(f, Instance(vec({0.0, 1.0}), 1)), InvalidInput);
  Matrix bad = Matrix::Ones(2, 1);
  CHECK_THROWS_AS(PcaModel(bad, 1.0), InvalidInput);
}

TEST_CASE("loss stays in [0, M] on the instance space") {
  std::mt19937_64 rng(31);
  for (const auto& f : model_zoo(rng)) {
    const double m = f->bound_m();
    int out = 0;
    for (int t = 0; t < 100000; ++t) {
      const double v = f->eval(random_instance(rng, *f));
      if (!(v >= 0.0 && v <= m)) ++out;
    }
    CHECK_MESSAGE(out == 0, to_string(f->kind()));
  }
}

TEST_CASE("analytic lambda_plus certifies the Lipschitz-type inequality") {
  std::mt19937_64 rng(41);
  for (const auto& f : model_zoo(rng)) {
    const Dataset base = random_dataset(rng, 5, f->feature_dim(), f->feature_radius(), f->label_set());
    const ProductMetric m = f->metric();
    int violations = 0;
    for (int t = 0; t < 1000; ++t) {
      const Instance z = random_instance(rng, *f);
      Instance z2 = random_instance(rng, *f);
      if (t % 3 == 0) z2.features = clip_to_ball(z.features + 0.05 * random_on_sphere(rng, f->feature_dim()), f->feature_radius());
      const double lp = f->lambda_plus_analytic(base.with(z));
      if (f->eval(z2) - f->eval(z) > lp * distance_z(z, z2, m) + 1e-9) ++violations;
    }
    CHECK_MESSAGE(violations == 0, to_string(f->kind()));
  }
}

TEST_CASE("feature subgradients match finite differences") {
  std::mt19937_64 rng(51);
  for (const auto& f : model_zoo(rng)) {
    int checked = 0, bad = 0;
    const double h = 1e-5;
    for (int t = 0; t < 1000 && checked < 100; ++t) {
      const Instance z = random_instance(rng, *f);
      if (z.features.norm() > f->feature_radius() - 2 * h) continue;
      const int y = z.label.value_or(0);
      const Vector g = f->feature_subgradient(z.features, y);
      bool smooth = true;
      Vector fd(f->feature_dim());
      for (int j = 0; j < f->feature_dim() && smooth; ++j) {
        Vector xp = z.features, xm = z.features;
        xp[j] += h, xm[j] -= h;
        const double f0 = f->loss(z.features, y);
        const double fwd = (f->loss(xp, y) - f0) / h, bwd = (f0 - f->loss(xm, y)) / h;
        if (std::abs(fwd - bwd) > 1e-4 * (1.0 + std::abs(fwd))) smooth = false;
        fd[j] = (f->loss(xp, y) - f->loss(xm, y)) / (2 * h);
      }
      if (!smooth) continue;
      ++checked;
      if ((g - fd).norm() > 1e-3 * std::max(1.0, fd.norm())) ++bad;
    }
    CHECK_MESSAGE(checked >= 50, to_string(f->kind()));
    CHECK_MESSAGE(bad == 0, to_string(f->kind()));
  }
}

TEST_CASE("network perturbation bound") {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<int> width(1, 8), depth(1, 3);
  int violations = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<int> w{width(rng)};
    const int l = depth(rng);
    for (int i = 0; i < l - 1; ++i) w.push_back(width(rng));
    w.push_back(2 + static_cast<int>(rng() % 7));
    const char* act = t % 2 ? "tanh" : "relu";
    const double scale = 0.5 + (t % 3) * 0.5;
    std::vector<Layer> a, b;
    double prod = 1.0, sum = 0.0;
    std::vector<double> caps;
    for (int i = 0; i < l; ++i) {
      Layer la, lb;
      la.weights = random_matrix(rng, w[i + 1], w[i], 0.7);
      lb.weights = la.weights + random_matrix(rng, w[i + 1], w[i], 0.2);
      la.activation = lb.activation = Activation::parse(i + 1 == l ? "identity" : act, i + 1 == l ? 1.0 : scale);
      const double s = std::max(spectral_norm_exact(la.weights), spectral_norm_exact(lb.weights));
      prod *= la.activation.lipschitz() * s;
      sum += spectral_norm_exact(la.weights - lb.weights) / s;
      a.push_back(la), b.push_back(lb);
    }
    const NeuralNetModel na(a, 1.0, 1.0), nb(b, 1.0, 1.0);
    const Vector x = random_in_ball(rng, w[0], 1.0);
    if ((na.forward(x) - nb.forward(x)).norm() > prod * 1.0 * sum * (1.0 + 1e-12) + 1e-12)
      ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("model json round trip evaluates identically") {
  std::mt19937_64 rng(71);
  for (const auto& f : model_zoo(rng)) {
    const auto g = model_from_json(Json::parse(model_to_json(*f).dump()));
    CHECK(g->kind() == f->kind());
    CHECK(model_hash(*g) == model_hash(*f));
    double diff = 0.0;
    for (int t = 0; t < 200; ++t) {
      const Instance z = random_instance(rng, *f);
      diff = std::max(diff, std::abs(g->eval(z) - f->eval(z)));
    }
    CHECK(diff == 0.0);
  }
  CHECK_THROWS_AS(model_from_json(Json::parse(R"({"kind":"svm"})")), InvalidInput);
}
