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

#ifndef ADVRISK_TESTS_SUPPORT_HPP
#define ADVRISK_TESTS_SUPPORT_HPP

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "advrisk/core.hpp"
#include "advrisk/linalg.hpp"
#include "advrisk/models.hpp"

namespace advrisk::testing {

/// f == c on a labeled Euclidean ball.
class ConstantModel final : public LossModel {
 public:
  ConstantModel(double c, int dim, double radius = 1.0, LabelSet labels = LabelSet::binary())
      : c_(c), dim_(dim), radius_(radius), labels_(labels) {}
  ModelKind kind() const override { return ModelKind::LinearSvm; }
  int feature_dim() const override { return dim_; }
  LabelSet label_set() const override { return labels_; }
  double feature_radius() const override { return radius_; }
  ProductMetric metric() const override {
    return ProductMetric::lp(2.0, labels_.labeled(), radius_, dim_);
  }
  double bound_m() const override { return std::max(c_, 1.0); }
  double loss(const VectorRef&, int) const override { return c_; }
  double lambda_plus_analytic(const Dataset&) const override { return 0.0; }
  double log_covering_constant() const override { return -kInfinity; }
  std::optional<double> class_lipschitz() const override { return 0.0; }
  std::unique_ptr<LossModel> clone() const override {
    return std::make_unique<ConstantModel>(*this);
  }

 private:
  double c_;
  int dim_;
  double radius_;
  LabelSet labels_;
};

/// f(x) = slope * |x_1 - center| on an unlabeled interval: Lipschitz, but with
/// a constant far beyond any sensible bracket.
class SteepModel final : public LossModel {
 public:
  SteepModel(double slope, double center) : slope_(slope), center_(center) {}
  ModelKind kind() const override { return ModelKind::Pca; }
  int feature_dim() const override { return 1; }
  LabelSet label_set() const override { return LabelSet::none(); }
  double feature_radius() const override { return 1.0; }
  ProductMetric metric() const override { return ProductMetric::lp(2.0, false, 1.0, 1); }
  double bound_m() const override { return slope_ * 2.0; }
  double loss(const VectorRef& x, int) const override { return slope_ * std::abs(x[0] - center_); }
  double lambda_plus_analytic(const Dataset&) const override { return slope_; }
  double log_covering_constant() const override { return 0.0; }
  std::optional<double> class_lipschitz() const override { return slope_; }
  std::unique_ptr<LossModel> clone() const override { return std::make_unique<SteepModel>(*this); }

 private:
  double slope_;
  double center_;
};

inline Vector random_in_ball(std::mt19937_64& rng, int dim, double radius) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  Vector v(dim);
  for (int j = 0; j < dim; ++j) v[j] = normal(rng);
  const double n = v.norm();
  if (n == 0.0) return Vector::Zero(dim);
  return v * (radius * std::pow(unif(rng), 1.0 / dim) / n);
}

inline Vector random_on_sphere(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal;
  Vector v(dim);
  for (int j = 0; j < dim; ++j) v[j] = normal(rng);
  return v / v.norm();
}

inline Matrix random_matrix(std::mt19937_64& rng, int rows, int cols, double scale = 1.0) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = scale * normal(rng);
  return m;
}

inline Dataset random_dataset(std::mt19937_64& rng, int n, int dim, double radius,
                              const LabelSet& labels) {
  std::vector<Instance> out;
  const auto ls = labels.labels();
  for (int i = 0; i < n; ++i) {
    std::optional<int> y;
    if (!ls.empty()) y = ls[std::uniform_int_distribution<std::size_t>(0, ls.size() - 1)(rng)];
    out.emplace_back(random_in_ball(rng, dim, radius), y);
  }
  return Dataset(std::move(out), labels);
}

inline LinearSvmModel random_linear_svm(std::mt19937_64& rng, int dim, double lam = 1.0,
                                        double r = 1.0) {
  return LinearSvmModel(random_in_ball(rng, dim, lam), lam, r);
}

inline KernelSvmModel random_kernel_svm(std::mt19937_64& rng, int dim, int support = 3,
                                        double sigma = 1.0, double r = 1.0) {
  std::vector<Vector> pts;
  for (int j = 0; j < support; ++j) pts.push_back(random_in_ball(rng, dim, r));
  std::normal_distribution<double> normal;
  Vector alpha(support);
  for (int j = 0; j < support; ++j) alpha[j] = normal(rng);
  KernelSvmModel probe(pts, alpha, sigma, 1e12, r);
  const double lam = std::max(probe.rkhs_norm(), 1e-3);
  return KernelSvmModel(pts, alpha, sigma, lam, r);
}

/// Network with caps set at the exact norms (scaled by `slack`).
inline NeuralNetModel random_network(std::mt19937_64& rng, const std::vector<int>& widths,
                                     const std::string& activation = "relu", double gamma = 1.0,
                                     double radius = 1.0, double slack = 1.0) {
  std::vector<Layer> layers;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    Layer l;
    l.weights = random_matrix(rng, widths[i + 1], widths[i], 1.0 / std::sqrt(widths[i]));
    const bool last = i + 2 == widths.size();
    l.activation = Activation::parse(last ? "identity" : activation);
    l.spectral_cap = spectral_norm_exact(l.weights) * slack;
    l.frobenius_cap = l.weights.norm() * slack;
    layers.push_back(std::move(l));
  }
  return NeuralNetModel(std::move(layers), gamma, radius);
}

inline PcaModel random_pca(std::mt19937_64& rng, int m, int k, double radius = 1.0) {
  const Matrix g = random_matrix(rng, m, m);
  const Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = qr.householderQ() * Matrix::Identity(m, m);
  return PcaModel(q.leftCols(k), radius);
}

/// The one-point hinge example: w = 1, Lambda = r = 1, z = (0.5, +1).
inline LinearSvmModel svm1d() { return LinearSvmModel(Vector::Constant(1, 1.0), 1.0, 1.0); }
inline Dataset svm1d_point() {
  return Dataset({Instance(Vector::Constant(1, 0.5), 1)}, LabelSet::binary());
}

}  // namespace advrisk::testing

#endif  // ADVRISK_TESTS_SUPPORT_HPP
