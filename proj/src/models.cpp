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

#include "advrisk/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "advrisk/error.hpp"
#include "advrisk/linalg.hpp"
#include "advrisk/special_functions.hpp"

namespace advrisk {

namespace {

constexpr double kRadiusSlack = 1e-9;

bool within_radius(const VectorRef& x, double r) {
  return x.norm() <= r * (1.0 + kRadiusSlack) + kRadiusSlack;
}

double hinge(double margin) { return std::max(0.0, 1.0 - margin); }

double log_sum_exp(double a, double b) {
  const double hi = std::max(a, b);
  if (std::isinf(hi)) return hi;
  return hi + std::log(std::exp(a - hi) + std::exp(b - hi));
}

double require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput(std::string(what) + " must be positive");
  return v;
}

double require_non_negative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v))
    throw InvalidInput(std::string(what) + " must be non-negative");
  return v;
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::LinearSvm:
      return "linear_svm";
    case ModelKind::KernelSvm:
      return "kernel_svm";
    case ModelKind::NeuralNet:
      return "neural_net";
    case ModelKind::Pca:
      return "pca";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& text) {
  if (text == "linear_svm" || text == "linear-svm") return ModelKind::LinearSvm;
  if (text == "kernel_svm" || text == "kernel-svm") return ModelKind::KernelSvm;
  if (text == "neural_net" || text == "neural-net") return ModelKind::NeuralNet;
  if (text == "pca") return ModelKind::Pca;
  throw InvalidInput("unknown model kind '" + text + "'");
}

// ---------------------------------------------------------------- LossModel

void LossModel::check_instance(const Instance& z) const {
  if (z.dim() != feature_dim())
    throw InvalidInput("instance has dimension " + std::to_string(z.dim()) + ", model expects " +
                       std::to_string(feature_dim()));
  const LabelSet labels = label_set();
  if (labels.labeled() && !z.label)
    throw InvalidInput(to_string(kind()) + " requires labeled instances");
  if (!labels.labeled() && z.label)
    throw InvalidInput(to_string(kind()) + " is unsupervised; instance carries a label");
  if (z.label && !labels.contains(*z.label))
    throw InvalidInput("label " + std::to_string(*z.label) + " outside " + labels.to_string());
  if (!z.features.allFinite()) throw InvalidInput("non-finite features");
  if (!within_radius(z.features, feature_radius()))
    throw InvalidInput("instance lies outside the feature ball of radius " +
                       std::to_string(feature_radius()));
}

void LossModel::check_dataset(const Dataset& data) const {
  for (const auto& z : data.instances()) check_instance(z);
}

double LossModel::eval(const Instance& z) const {
  check_instance(z);
  return loss(z.features, label_of(z));
}

Vector LossModel::feature_subgradient(const VectorRef& x, int label) const {
  const double h = 1e-6;
  Vector probe = x;
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = loss(probe, label);
    probe[i] = x[i] - h;
    const double down = loss(probe, label);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

// ---------------------------------------------------------------- linear SVM

LinearSvmModel::LinearSvmModel(Vector w, double class_radius, double feature_radius)
    : w_(std::move(w)),
      class_radius_(require_non_negative(class_radius, "class radius")),
      radius_(require_non_negative(feature_radius, "feature radius")) {
  if (w_.size() == 0) throw InvalidInput("weight vector must be nonempty");
  if (!w_.allFinite()) throw InvalidInput("non-finite weights");
  if (w_.norm() > class_radius_ * (1.0 + 1e-9) + 1e-12)
    throw InvalidInput("|w| exceeds the class radius");
}

ProductMetric LinearSvmModel::metric() const {
  return ProductMetric::lp(2.0, true, radius_, feature_dim());
}

double LinearSvmModel::loss(const VectorRef& x, int label) const {
  return hinge(label * w_.dot(x));
}

Vector LinearSvmModel::feature_subgradient(const VectorRef& x, int label) const {
  if (1.0 - label * w_.dot(x) > 0.0) return -static_cast<double>(label) * w_;
  return Vector::Zero(w_.size());
}

double LinearSvmModel::lambda_plus_analytic(const Dataset& data) const {
  check_dataset(data);
  double best = w_.norm();
  for (const auto& z : data.instances())
    best = std::max(best, 2.0 * (*z.label) * w_.dot(z.features));
  return best;
}

std::optional<Vector> LinearSvmModel::exact_perturbation(const VectorRef& x, int label,
                                                         double eps, double q) const {
  if (q != 2.0) return std::nullopt;
  const double norm = w_.norm();
  if (norm == 0.0 || eps == 0.0) return Vector(x);
  // Minimise u.x' over B(x, eps) ∩ B(0, r): the optimum is the minimiser over
  // one ball when it lies in the other, otherwise on both spheres.
  const Vector u = (label / norm) * w_;
  Vector best = x - eps * u;
  if (best.norm() > radius_) {
    const Vector edge = -radius_ * u;
    if ((edge - x).norm() <= eps) {
      best = edge;
    } else {
      const double a = x.norm();
      if (a == 0.0) return std::nullopt;
      const Vector xhat = x / a;
      const double t = (radius_ * radius_ - eps * eps + a * a) / (2.0 * a);
      const double rho2 = radius_ * radius_ - t * t;
      const Vector p = u - u.dot(xhat) * xhat;
      const double pn = p.norm();
      if (rho2 < 0.0 || pn <= 1e-12) return std::nullopt;
      best = t * xhat - (std::sqrt(rho2) / pn) * p;
    }
    best = project_ball_intersection(best, x, eps, 2.0, radius_);
  }
  if (loss(best, label) <= loss(x, label)) return Vector(x);
  return best;
}

double LinearSvmModel::log_covering_constant() const {
  return std::log(6.0 * class_radius_ * radius_) + 0.5 * std::log(feature_dim());
}

std::optional<double> LinearSvmModel::class_lipschitz() const {
  return std::max(2.0 * class_radius_ * radius_, class_radius_);
}

std::unique_ptr<LossModel> LinearSvmModel::clone() const {
  return std::make_unique<LinearSvmModel>(*this);
}

// ---------------------------------------------------------------- kernel SVM

double gaussian_kernel(const VectorRef& x1, const VectorRef& x2, double sigma) {
  if (!(sigma > 0.0)) throw InvalidInput("kernel bandwidth must be positive");
  if (x1.size() != x2.size()) throw InvalidInput("kernel arguments differ in dimension");
  return std::exp(-(x1 - x2).squaredNorm() / (sigma * sigma));
}

KernelSvmModel::KernelSvmModel(std::vector<Vector> support_points, Vector alpha, double sigma,
                               double class_radius, double feature_radius)
    : support_(std::move(support_points)),
      alpha_(std::move(alpha)),
      sigma_(require_positive(sigma, "kernel bandwidth")),
      class_radius_(require_non_negative(class_radius, "class radius")),
      radius_(require_non_negative(feature_radius, "feature radius")) {
  if (support_.empty()) throw InvalidInput("kernel model needs at least one support point");
  if (static_cast<std::size_t>(alpha_.size()) != support_.size())
    throw InvalidInput("alpha length differs from the number of support points");
  if (!alpha_.allFinite()) throw InvalidInput("non-finite kernel coefficients");
  dim_ = static_cast<int>(support_.front().size());
  if (dim_ <= 0) throw InvalidInput("support points must have positive dimension");
  for (const auto& s : support_) {
    if (s.size() != dim_) throw InvalidInput("support points differ in dimension");
    if (!s.allFinite()) throw InvalidInput("non-finite support point");
  }
  const Eigen::Index n = alpha_.size();
  Matrix gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      gram(i, j) = gaussian_kernel(support_[i], support_[j], sigma_);
  const Matrix sym = 0.5 * (gram + gram.transpose());
  rkhs_norm_ = std::sqrt(std::max(0.0, alpha_.dot(sym * alpha_)));
  if (rkhs_norm_ > class_radius_ * (1.0 + 1e-9) + 1e-12)
    throw InvalidInput("|w|_H exceeds the class radius");
}

double KernelSvmModel::score(const VectorRef& x) const {
  double s = 0.0;
  for (std::size_t j = 0; j < support_.size(); ++j)
    s += alpha_[static_cast<Eigen::Index>(j)] * gaussian_kernel(support_[j], x, sigma_);
  return s;
}

ProductMetric KernelSvmModel::metric() const {
  return ProductMetric::gaussian_rkhs(sigma_, true, radius_, dim_);
}

double KernelSvmModel::loss(const VectorRef& x, int label) const {
  return hinge(label * score(x));
}

Vector KernelSvmModel::feature_subgradient(const VectorRef& x, int label) const {
  Vector g = Vector::Zero(dim_);
  if (1.0 - label * score(x) <= 0.0) return g;
  const double c = -2.0 / (sigma_ * sigma_);
  for (std::size_t j = 0; j < support_.size(); ++j) {
    const double k = gaussian_kernel(support_[j], x, sigma_);
    g += alpha_[static_cast<Eigen::Index>(j)] * k * c * (x - support_[j]);
  }
  return -static_cast<double>(label) * g;
}

double KernelSvmModel::lambda_plus_analytic(const Dataset& data) const {
  check_dataset(data);
  double best = rkhs_norm_;
  for (const auto& z : data.instances()) best = std::max(best, 2.0 * (*z.label) * score(z.features));
  return std::min(best, 2.0 * rkhs_norm_);
}

double KernelSvmModel::log_covering_constant() const {
  const double d = dim_;
  const double half = 0.5 * (d + 1.0);
  const double log2 = std::numbers::ln2;
  const double log_base = half * std::log(32.0 + 1280.0 * d / (sigma_ * sigma_));
  const double log_tail = log_sum_exp(std::log(2.0) + log_incomplete_gamma(0.5 * (d + 3.0), log2),
                                      half * std::log(log2));
  return std::log(class_radius_) + 0.5 * std::log(d) + log_base + log_tail;
}

std::optional<double> KernelSvmModel::class_lipschitz() const { return 2.0 * class_radius_; }

std::unique_ptr<LossModel> KernelSvmModel::clone() const {
  return std::make_unique<KernelSvmModel>(*this);
}

// ---------------------------------------------------------------- activations

double Activation::apply(double t) const {
  switch (type) {
    case Type::Identity:
      return scale * t;
    case Type::Relu:
      return t > 0.0 ? scale * t : 0.0;
    case Type::Tanh:
      return scale * std::tanh(t);
  }
  return 0.0;
}

double Activation::derivative(double t) const {
  switch (type) {
    case Type::Identity:
      return scale;
    case Type::Relu:
      return t > 0.0 ? scale : 0.0;
    case Type::Tanh: {
      const double th = std::tanh(t);
      return scale * (1.0 - th * th);
    }
  }
  return 0.0;
}

std::string Activation::name() const {
  switch (type) {
    case Type::Identity:
      return "identity";
    case Type::Relu:
      return "relu";
    case Type::Tanh:
      return "tanh";
  }
  return "unknown";
}

Activation Activation::parse(const std::string& name, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw InvalidInput("activation scale must be positive");
  Activation a;
  a.scale = scale;
  if (name == "identity" || name == "linear")
    a.type = Type::Identity;
  else if (name == "relu")
    a.type = Type::Relu;
  else if (name == "tanh")
    a.type = Type::Tanh;
  else
    throw InvalidInput("unknown activation '" + name + "'");
  return a;
}

// ---------------------------------------------------------------- neural net

double margin_operator(const VectorRef& v, int y) {
  const Eigen::Index k = v.size();
  if (k < 2) throw InvalidInput("margin operator needs at least two classes");
  if (y < 1 || y > k) throw InvalidInput("class index " + std::to_string(y) + " out of range");
  double other = -kInfinity;
  for (Eigen::Index j = 0; j < k; ++j)
    if (j != y - 1) other = std::max(other, v[j]);
  return v[y - 1] - other;
}

double ramp_loss(double rv, double gamma) {
  if (!(gamma > 0.0)) throw InvalidInput("ramp margin must be positive");
  if (rv < -gamma) return 0.0;
  if (rv > 0.0) return 1.0;
  return 1.0 + rv / gamma;
}

NeuralNetModel::NeuralNetModel(std::vector<Layer> layers, double gamma, double feature_radius)
    : layers_(std::move(layers)),
      gamma_(require_positive(gamma, "margin gamma")),
      radius_(require_non_negative(feature_radius, "feature radius")) {
  if (layers_.empty()) throw InvalidInput("network needs at least one layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer& l = layers_[i];
    const std::string tag = "layer " + std::to_string(i + 1);
    if (l.weights.rows() == 0 || l.weights.cols() == 0) throw InvalidInput(tag + " is empty");
    if (!l.weights.allFinite()) throw InvalidInput(tag + " has non-finite weights");
    if (i > 0 && l.weights.cols() != layers_[i - 1].weights.rows())
      throw InvalidInput(tag + " input width does not match the previous layer");
    if (!(l.activation.scale > 0.0)) throw InvalidInput(tag + " activation scale must be positive");
    if (l.spectral_cap) {
      require_positive(*l.spectral_cap, "spectral cap");
      if (spectral_norm_exact(l.weights) > *l.spectral_cap * (1.0 + 1e-6))
        throw InvalidInput(tag + " exceeds its spectral cap");
    }
    if (l.frobenius_cap) {
      require_positive(*l.frobenius_cap, "Frobenius cap");
      if (l.weights.norm() > *l.frobenius_cap * (1.0 + 1e-9))
        throw InvalidInput(tag + " exceeds its Frobenius cap");
    }
  }
  if (layers_.back().weights.rows() < 2) throw InvalidInput("network needs at least two outputs");
}

int NeuralNetModel::max_width() const {
  Eigen::Index w = layers_.front().weights.cols();
  for (const auto& l : layers_) w = std::max(w, l.weights.rows());
  return static_cast<int>(w);
}

bool NeuralNetModel::has_caps() const {
  return std::all_of(layers_.begin(), layers_.end(),
                     [](const Layer& l) { return l.spectral_cap && l.frobenius_cap; });
}

Vector NeuralNetModel::forward(const VectorRef& x) const {
  Vector h = x;
  for (const auto& l : layers_) {
    Vector pre = l.weights * h;
    h = pre.unaryExpr([&](double t) { return l.activation.apply(t); });
  }
  return h;
}

NeuralNetModel::Trace NeuralNetModel::forward_trace(const VectorRef& x) const {
  Trace t;
  Vector h = x;
  for (const auto& l : layers_) {
    t.inputs.push_back(h);
    Vector pre = l.weights * h;
    h = pre.unaryExpr([&](double s) { return l.activation.apply(s); });
    t.pre.push_back(std::move(pre));
  }
  t.output = std::move(h);
  return t;
}

Vector NeuralNetModel::backward(const Trace& trace, const VectorRef& output_grad,
                                std::vector<Matrix>* weight_grads) const {
  const std::size_t n = layers_.size();
  if (weight_grads) weight_grads->assign(n, Matrix());
  Vector g = output_grad;
  for (std::size_t k = n; k-- > 0;) {
    const Layer& l = layers_[k];
    const Vector& pre = trace.pre[k];
    Vector delta(pre.size());
    for (Eigen::Index i = 0; i < pre.size(); ++i) delta[i] = g[i] * l.activation.derivative(pre[i]);
    if (weight_grads) (*weight_grads)[k] = delta * trace.inputs[k].transpose();
    g = l.weights.transpose() * delta;
  }
  return g;
}

Vector NeuralNetModel::loss_output_gradient(const VectorRef& output, int label) const {
  const Eigen::Index k = output.size();
  Vector g = Vector::Zero(k);
  const double rv = -margin_operator(output, label);
  if (rv <= -gamma_ || rv > 0.0) return g;
  Eigen::Index rival = -1;
  for (Eigen::Index j = 0; j < k; ++j) {
    if (j == label - 1) continue;
    if (rival < 0 || output[j] > output[rival]) rival = j;
  }
  g[label - 1] = -1.0 / gamma_;
  g[rival] += 1.0 / gamma_;
  return g;
}

ProductMetric NeuralNetModel::metric() const {
  return ProductMetric::lp(2.0, true, radius_, feature_dim());
}

double NeuralNetModel::loss(const VectorRef& x, int label) const {
  return ramp_loss(-margin_operator(forward(x), label), gamma_);
}

Vector NeuralNetModel::feature_subgradient(const VectorRef& x, int label) const {
  const Trace t = forward_trace(x);
  const Vector og = loss_output_gradient(t.output, label);
  if (og.isZero(0.0)) return Vector::Zero(x.size());
  return backward(t, og, nullptr);
}

double NeuralNetModel::lambda_plus_analytic(const Dataset& data) const {
  check_dataset(data);
  double lip = 2.0 / gamma_;
  for (const auto& l : layers_) lip *= l.activation.lipschitz() * spectral_norm_exact(l.weights);
  double best = lip;
  for (const auto& z : data.instances()) {
    const Vector h = forward(z.features);
    const double term = (margin_operator(h, *z.label) + h.maxCoeff() - h.minCoeff()) / gamma_;
    best = std::max(best, term);
  }
  return best;
}

double NeuralNetModel::log_covering_constant() const {
  if (!has_caps()) throw InvalidInput("neural-net covering constant needs spectral and Frobenius caps");
  double log_prod = 0.0;
  double ratio_sum = 0.0;
  for (const auto& l : layers_) {
    log_prod += std::log(l.activation.lipschitz() * *l.spectral_cap);
    ratio_sum += std::sqrt(*l.frobenius_cap / *l.spectral_cap);
  }
  return std::log(12.0 / gamma_) + log_prod + std::log(radius_) +
         std::log(static_cast<double>(max_width())) + 2.0 * std::log(ratio_sum);
}

std::optional<double> NeuralNetModel::class_lipschitz() const {
  if (!std::all_of(layers_.begin(), layers_.end(), [](const Layer& l) { return l.spectral_cap; }))
    return std::nullopt;
  double prod = 1.0;
  for (const auto& l : layers_) prod *= l.activation.lipschitz() * *l.spectral_cap;
  return 2.0 / gamma_ * prod + 2.0 / gamma_ * 2.0 * prod * radius_;
}

std::unique_ptr<LossModel> NeuralNetModel::clone() const {
  return std::make_unique<NeuralNetModel>(*this);
}

// ---------------------------------------------------------------- PCA

PcaModel::PcaModel(Matrix basis, double feature_radius)
    : basis_(std::move(basis)), radius_(require_non_negative(feature_radius, "feature radius")) {
  if (basis_.rows() == 0) throw InvalidInput("PCA basis must have positive ambient dimension");
  if (basis_.cols() > basis_.rows()) throw InvalidInput("PCA rank exceeds the ambient dimension");
  if (!basis_.allFinite()) throw InvalidInput("non-finite PCA basis");
  const Matrix gram = basis_.transpose() * basis_;
  const Matrix eye = Matrix::Identity(basis_.cols(), basis_.cols());
  if (basis_.cols() > 0 && (gram - eye).cwiseAbs().maxCoeff() > 1e-10)
    throw InvalidInput("PCA basis columns are not orthonormal");
}

Vector PcaModel::residual(const VectorRef& z) const {
  return basis_ * (basis_.transpose() * z) - z;
}

ProductMetric PcaModel::metric() const {
  return ProductMetric::lp(2.0, false, radius_, feature_dim());
}

double PcaModel::loss(const VectorRef& x, int /*label*/) const { return residual(x).squaredNorm(); }

Vector PcaModel::feature_subgradient(const VectorRef& x, int /*label*/) const {
  return -2.0 * residual(x);
}

double PcaModel::lambda_plus_analytic(const Dataset& data) const {
  check_dataset(data);
  double best = 0.0;
  for (const auto& z : data.instances()) best = std::max(best, radius_ + residual(z.features).norm());
  return best;
}

double PcaModel::log_covering_constant() const {
  return std::log(24.0 * radius_ * radius_) + 0.5 * std::log(feature_dim()) +
         std::log(static_cast<double>(rank()));
}

std::optional<double> PcaModel::class_lipschitz() const { return 2.0 * radius_; }

std::unique_ptr<LossModel> PcaModel::clone() const { return std::make_unique<PcaModel>(*this); }

// ---------------------------------------------------------------- free functions

double hinge_eval(const LinearSvmModel& model, const Instance& z) { return model.eval(z); }

double svm_lambda_plus_bound(const LinearSvmModel& model, const Dataset& data) {
  return model.lambda_plus_analytic(data);
}

double kernel_svm_eval(const KernelSvmModel& model, const Instance& z) { return model.eval(z); }

Vector nn_forward(const NeuralNetModel& model, const VectorRef& x) {
  if (x.size() != model.feature_dim()) throw InvalidInput("input width does not match the network");
  return model.forward(x);
}

double nn_lambda_plus_bound(const NeuralNetModel& model, const Dataset& data) {
  return model.lambda_plus_analytic(data);
}

double pca_eval(const PcaModel& model, const Instance& z) { return model.eval(z); }

}  // namespace advrisk
