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

#include "advrisk/core.hpp"

#include <algorithm>
#include <cmath>

#include "advrisk/error.hpp"

namespace advrisk {

bool operator==(const Instance& a, const Instance& b) {
  return a.label == b.label && a.features.size() == b.features.size() &&
         (a.features.array() == b.features.array()).all();
}

LabelSet LabelSet::multi_class(int classes) {
  if (classes < 2) throw InvalidInput("multi-class label set needs at least 2 classes");
  return LabelSet(Kind::MultiClass, classes);
}

bool LabelSet::contains(int label) const {
  switch (kind_) {
    case Kind::None:
      return false;
    case Kind::Binary:
      return label == -1 || label == 1;
    case Kind::MultiClass:
      return label >= 1 && label <= classes_;
  }
  return false;
}

std::vector<int> LabelSet::labels() const {
  switch (kind_) {
    case Kind::None:
      return {};
    case Kind::Binary:
      return {-1, 1};
    case Kind::MultiClass: {
      std::vector<int> out(classes_);
      for (int k = 0; k < classes_; ++k) out[k] = k + 1;
      return out;
    }
  }
  return {};
}

std::string LabelSet::to_string() const {
  switch (kind_) {
    case Kind::None:
      return "none";
    case Kind::Binary:
      return "binary";
    case Kind::MultiClass:
      return "multiclass:" + std::to_string(classes_);
  }
  return "none";
}

LabelSet LabelSet::parse(const std::string& text) {
  if (text == "none") return none();
  if (text == "binary") return binary();
  const std::string prefix = "multiclass:";
  if (text.rfind(prefix, 0) == 0) return multi_class(std::stoi(text.substr(prefix.size())));
  throw InvalidInput("unknown label set '" + text + "'");
}

Dataset::Dataset(std::vector<Instance> instances, LabelSet labels)
    : instances_(std::move(instances)), labels_(labels) {
  if (instances_.empty()) throw InvalidInput("dataset must be nonempty");
  feature_dim_ = instances_.front().dim();
  if (feature_dim_ <= 0) throw InvalidInput("feature dimension must be positive");
  for (std::size_t i = 0; i < instances_.size(); ++i) {
    const Instance& z = instances_[i];
    if (z.dim() != feature_dim_)
      throw InvalidInput("instance " + std::to_string(i) + " has dimension " +
                         std::to_string(z.dim()) + ", expected " + std::to_string(feature_dim_));
    if (!z.features.allFinite())
      throw InvalidInput("instance " + std::to_string(i) + " has non-finite features");
    if (labels_.labeled() != z.label.has_value())
      throw InvalidInput("instance " + std::to_string(i) + " does not match label set " +
                         labels_.to_string());
    if (z.label && !labels_.contains(*z.label))
      throw InvalidInput("instance " + std::to_string(i) + " has label " +
                         std::to_string(*z.label) + " outside " + labels_.to_string());
  }
}

Dataset Dataset::with_inferred_labels(std::vector<Instance> instances) {
  if (instances.empty()) throw InvalidInput("dataset must be nonempty");
  if (!instances.front().label) return Dataset(std::move(instances), LabelSet::none());
  bool binary = true;
  int max_label = 0;
  for (const auto& z : instances) {
    if (!z.label) throw InvalidInput("mixed labeled and unlabeled instances");
    if (*z.label != -1 && *z.label != 1) binary = false;
    max_label = std::max(max_label, *z.label);
  }
  LabelSet labels = binary ? LabelSet::binary() : LabelSet::multi_class(std::max(2, max_label));
  return Dataset(std::move(instances), labels);
}

double Dataset::max_feature_norm() const {
  double r = 0.0;
  for (const auto& z : instances_) r = std::max(r, z.features.norm());
  return r;
}

Dataset Dataset::with(const Instance& extra) const {
  std::vector<Instance> copy = instances_;
  copy.push_back(extra);
  return Dataset(std::move(copy), labels_);
}

bool Dataset::operator==(const Dataset& other) const {
  return labels_ == other.labels_ && instances_ == other.instances_;
}

double lp_norm(const VectorRef& v, double p) {
  if (!(p >= 1.0)) throw InvalidInput("norm order must be >= 1");
  if (std::isinf(p)) return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
  if (p == 1.0) return v.cwiseAbs().sum();
  if (p == 2.0) return v.norm();
  double scale = v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]) / scale, p);
  return scale * std::pow(acc, 1.0 / p);
}

ProductMetric ProductMetric::lp(double p, bool label_indicator, double feature_radius,
                                int feature_dim) {
  if (!(p >= 1.0)) throw InvalidInput("feature norm order must be >= 1");
  if (!(feature_radius >= 0.0)) throw InvalidInput("feature radius must be non-negative");
  ProductMetric m;
  m.kind_ = FeatureKind::Lp;
  m.p_ = p;
  m.label_indicator_ = label_indicator;
  m.radius_ = feature_radius;
  m.dim_ = feature_dim;
  return m;
}

ProductMetric ProductMetric::gaussian_rkhs(double sigma, bool label_indicator,
                                           double feature_radius, int feature_dim) {
  if (!(sigma > 0.0)) throw InvalidInput("kernel bandwidth must be positive");
  if (!(feature_radius >= 0.0)) throw InvalidInput("feature radius must be non-negative");
  ProductMetric m;
  m.kind_ = FeatureKind::GaussianRkhs;
  m.sigma_ = sigma;
  m.label_indicator_ = label_indicator;
  m.radius_ = feature_radius;
  m.dim_ = feature_dim;
  return m;
}

double ProductMetric::displacement_distance(const VectorRef& v) const {
  if (kind_ == FeatureKind::Lp) return lp_norm(v, p_);
  return std::sqrt(std::max(0.0, -2.0 * std::expm1(-v.squaredNorm() / (sigma_ * sigma_))));
}

double ProductMetric::feature_distance(const VectorRef& a, const VectorRef& b) const {
  if (a.size() != b.size()) throw InvalidInput("feature dimension mismatch");
  if (kind_ == FeatureKind::Lp && p_ == 2.0) return (a - b).norm();
  return displacement_distance(a - b);
}

double ProductMetric::label_distance(const std::optional<int>& a,
                                     const std::optional<int>& b) const {
  if (!label_indicator_) return 0.0;
  if (a.has_value() != b.has_value()) throw InvalidInput("label convention mismatch");
  if (!a) return 0.0;
  return *a != *b ? 1.0 : 0.0;
}

double ProductMetric::feature_diameter() const {
  const double span = 2.0 * radius_;
  if (kind_ == FeatureKind::GaussianRkhs)
    return std::sqrt(std::max(0.0, -2.0 * std::expm1(-span * span / (sigma_ * sigma_))));
  if (p_ >= 2.0) return span;
  // l_p with p < 2 exceeds the Euclidean length by at most d^(1/p - 1/2).
  if (dim_ <= 0) throw InvalidInput("feature dimension required for l_p diameter with p < 2");
  return span * std::pow(static_cast<double>(dim_), 1.0 / p_ - 0.5);
}

double distance_z(const Instance& z, const Instance& z2, const ProductMetric& m) {
  if (z.dim() != z2.dim()) throw InvalidInput("instance dimension mismatch");
  if (z.label.has_value() != z2.label.has_value())
    throw InvalidInput("label convention mismatch");
  return m.feature_distance(z.features, z2.features) + m.label_distance(z.label, z2.label);
}

double diam_z(const ProductMetric& m) {
  return m.feature_diameter() + (m.label_indicator() ? 1.0 : 0.0);
}

AdversaryBudget::AdversaryBudget(double eps, double q) : epsilon(eps), ball_norm(q) {
  if (!(eps >= 0.0)) throw InvalidInput("adversary radius must be non-negative");
  if (!(q >= 1.0)) throw InvalidInput("adversary ball norm must be >= 1");
}

double AdversaryBudget::metric_radius(const ProductMetric& m, int feature_dim) const {
  const double d = static_cast<double>(std::max(1, feature_dim));
  const double inv_q = std::isinf(ball_norm) ? 0.0 : 1.0 / ball_norm;
  if (m.feature_kind() == ProductMetric::FeatureKind::Lp) {
    const double p = m.feature_norm();
    const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
    return epsilon * std::pow(d, std::max(0.0, inv_p - inv_q));
  }
  const double euclid = epsilon * std::pow(d, std::max(0.0, 0.5 - inv_q));
  const double s = m.sigma();
  return std::sqrt(std::max(0.0, -2.0 * std::expm1(-euclid * euclid / (s * s))));
}

}  // namespace advrisk
