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

#ifndef ADVRISK_MODELS_HPP
#define ADVRISK_MODELS_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "advrisk/core.hpp"

namespace advrisk {

enum class ModelKind { LinearSvm, KernelSvm, NeuralNet, Pca };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& text);

/// A hypothesis composed with its loss, f(z) = l(h(x), y), together with the
/// constants the risk bounds need.
class LossModel {
 public:
  virtual ~LossModel() = default;

  virtual ModelKind kind() const = 0;
  virtual int feature_dim() const = 0;
  virtual LabelSet label_set() const = 0;
  virtual double feature_radius() const = 0;

  /// Instance-space metric under which the model's analytic constants hold.
  virtual ProductMetric metric() const = 0;

  /// M with 0 <= f(z) <= M on the whole instance space.
  virtual double bound_m() const = 0;

  /// f(x, y) without argument checks. Unsupervised models ignore `label`.
  virtual double loss(const VectorRef& x, int label) const = 0;

  /// f(z) with dimension, label and radius checks.
  double eval(const Instance& z) const;

  /// A subgradient of f in x. The default is a central finite difference.
  virtual Vector feature_subgradient(const VectorRef& x, int label) const;

  /// Data-dependent upper bound on the smallest root of psi.
  virtual double lambda_plus_analytic(const Dataset& data) const = 0;

  /// Closed-form maximiser of f(., label) over { |x' - x|_q <= eps } ∩ {|x'|_2 <= r}
  /// when one is known. Ties go to the smallest perturbation.
  virtual std::optional<Vector> exact_perturbation(const VectorRef& /*x*/, int /*label*/,
                                                   double /*eps*/, double /*q*/) const {
    return std::nullopt;
  }

  /// log of the covering-entropy integral constant of the model class.
  virtual double log_covering_constant() const = 0;

  /// Uniform Lipschitz-type cap over the whole class, when one is known.
  virtual std::optional<double> class_lipschitz() const = 0;

  virtual std::unique_ptr<LossModel> clone() const = 0;

  void check_instance(const Instance& z) const;
  void check_dataset(const Dataset& data) const;

 protected:
  static int label_of(const Instance& z) { return z.label.value_or(0); }
};

/// Hinge loss of a linear classifier, f = max(0, 1 - y w.x), |w| <= Lambda,
/// |x| <= r.
class LinearSvmModel final : public LossModel {
 public:
  LinearSvmModel(Vector w, double class_radius, double feature_radius);

  const Vector& weights() const { return w_; }
  double class_radius() const { return class_radius_; }

  ModelKind kind() const override { return ModelKind::LinearSvm; }
  int feature_dim() const override { return static_cast<int>(w_.size()); }
  LabelSet label_set() const override { return LabelSet::binary(); }
  double feature_radius() const override { return radius_; }
  ProductMetric metric() const override;
  double bound_m() const override { return 1.0 + class_radius_ * radius_; }
  double loss(const VectorRef& x, int label) const override;
  Vector feature_subgradient(const VectorRef& x, int label) const override;
  double lambda_plus_analytic(const Dataset& data) const override;
  std::optional<Vector> exact_perturbation(const VectorRef& x, int label, double eps,
                                           double q) const override;
  double log_covering_constant() const override;
  std::optional<double> class_lipschitz() const override;
  std::unique_ptr<LossModel> clone() const override;

 private:
  Vector w_;
  double class_radius_;
  double radius_;
};

double gaussian_kernel(const VectorRef& x1, const VectorRef& x2, double sigma);

/// Hinge loss of a Gaussian-kernel machine h(x) = sum_j alpha_j K(x_j, x).
class KernelSvmModel final : public LossModel {
 public:
  KernelSvmModel(std::vector<Vector> support_points, Vector alpha, double sigma,
                 double class_radius, double feature_radius);

  const std::vector<Vector>& support_points() const { return support_; }
  const Vector& alpha() const { return alpha_; }
  double sigma() const { return sigma_; }
  double class_radius() const { return class_radius_; }

  /// <w, tau(x)> = sum_j alpha_j K(x_j, x).
  double score(const VectorRef& x) const;
  /// |w|_H = sqrt(alpha^T K alpha) with the Gram matrix symmetrised.
  double rkhs_norm() const { return rkhs_norm_; }

  ModelKind kind() const override { return ModelKind::KernelSvm; }
  int feature_dim() const override { return dim_; }
  LabelSet label_set() const override { return LabelSet::binary(); }
  double feature_radius() const override { return radius_; }
  ProductMetric metric() const override;
  double bound_m() const override { return 1.0 + class_radius_; }
  double loss(const VectorRef& x, int label) const override;
  Vector feature_subgradient(const VectorRef& x, int label) const override;
  double lambda_plus_analytic(const Dataset& data) const override;
  double log_covering_constant() const override;
  std::optional<double> class_lipschitz() const override;
  std::unique_ptr<LossModel> clone() const override;

 private:
  std::vector<Vector> support_;
  Vector alpha_;
  double sigma_;
  double class_radius_;
  double radius_;
  int dim_;
  double rkhs_norm_;
};

/// Elementwise activation with a known Lipschitz constant and sigma(0) = 0.
struct Activation {
  enum class Type { Identity, Relu, Tanh };
  Type type = Type::Relu;
  double scale = 1.0;

  double apply(double t) const;
  /// One-sided derivative; at the ReLU kink the left piece (slope 0) is used.
  double derivative(double t) const;
  double lipschitz() const { return scale; }

  std::string name() const;
  static Activation parse(const std::string& name, double scale = 1.0);
};

struct Layer {
  Matrix weights;  // d_i x d_{i-1}
  Activation activation;
  std::optional<double> spectral_cap;
  std::optional<double> frobenius_cap;
};

/// margin operator M(v, y) = v_y - max_{j != y} v_j, classes indexed from 1.
double margin_operator(const VectorRef& v, int y);

/// Ramp loss: 0 below -gamma, 1 + rv / gamma on [-gamma, 0], 1 above 0.
double ramp_loss(double rv, double gamma);

/// Ramp loss of the negated margin of a feed-forward network,
/// f(x, y) = ramp(-M(H(x), y)), H(x) = s_L(A_L ... s_1(A_1 x)).
class NeuralNetModel final : public LossModel {
 public:
  NeuralNetModel(std::vector<Layer> layers, double gamma, double feature_radius);

  struct Trace {
    std::vector<Vector> inputs;  // h_0 = x, h_1, ..., h_{L-1}
    std::vector<Vector> pre;     // A_i h_{i-1}
    Vector output;
  };

  const std::vector<Layer>& layers() const { return layers_; }
  double gamma() const { return gamma_; }
  int classes() const { return static_cast<int>(layers_.back().weights.rows()); }
  /// W = max(d_0, ..., d_L).
  int max_width() const;

  Vector forward(const VectorRef& x) const;
  Trace forward_trace(const VectorRef& x) const;

  /// Back-propagates dL/dH through a recorded trace. Fills per-layer weight
  /// gradients (when `weight_grads` is non-null) and returns dL/dx.
  Vector backward(const Trace& trace, const VectorRef& output_grad,
                  std::vector<Matrix>* weight_grads) const;

  /// d f / d H at x for label y (zero outside the ramp's sloped piece).
  Vector loss_output_gradient(const VectorRef& output, int label) const;

  ModelKind kind() const override { return ModelKind::NeuralNet; }
  int feature_dim() const override { return static_cast<int>(layers_.front().weights.cols()); }
  LabelSet label_set() const override { return LabelSet::multi_class(classes()); }
  double feature_radius() const override { return radius_; }
  ProductMetric metric() const override;
  double bound_m() const override { return 1.0; }
  double loss(const VectorRef& x, int label) const override;
  Vector feature_subgradient(const VectorRef& x, int label) const override;
  double lambda_plus_analytic(const Dataset& data) const override;
  double log_covering_constant() const override;
  std::optional<double> class_lipschitz() const override;
  std::unique_ptr<LossModel> clone() const override;

  bool has_caps() const;

 private:
  std::vector<Layer> layers_;
  double gamma_;
  double radius_;
};

/// Reconstruction error of a rank-k orthogonal projection T = U U^T,
/// f(z) = |T z - z|^2 with |z| <= B.
class PcaModel final : public LossModel {
 public:
  PcaModel(Matrix basis, double feature_radius);

  const Matrix& basis() const { return basis_; }
  int rank() const { return static_cast<int>(basis_.cols()); }
  Vector residual(const VectorRef& z) const;

  ModelKind kind() const override { return ModelKind::Pca; }
  int feature_dim() const override { return static_cast<int>(basis_.rows()); }
  LabelSet label_set() const override { return LabelSet::none(); }
  double feature_radius() const override { return radius_; }
  ProductMetric metric() const override;
  double bound_m() const override { return radius_ * radius_; }
  double loss(const VectorRef& x, int label) const override;
  Vector feature_subgradient(const VectorRef& x, int label) const override;
  double lambda_plus_analytic(const Dataset& data) const override;
  double log_covering_constant() const override;
  std::optional<double> class_lipschitz() const override;
  std::unique_ptr<LossModel> clone() const override;

 private:
  Matrix basis_;
  double radius_;
};

// Thin operation-level entry points.
double hinge_eval(const LinearSvmModel& model, const Instance& z);
double svm_lambda_plus_bound(const LinearSvmModel& model, const Dataset& data);
double kernel_svm_eval(const KernelSvmModel& model, const Instance& z);
Vector nn_forward(const NeuralNetModel& model, const VectorRef& x);
double nn_lambda_plus_bound(const NeuralNetModel& model, const Dataset& data);
double pca_eval(const PcaModel& model, const Instance& z);

}  // namespace advrisk

#endif  // ADVRISK_MODELS_HPP
