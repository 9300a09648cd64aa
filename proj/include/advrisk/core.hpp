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

#ifndef ADVRISK_CORE_HPP
#define ADVRISK_CORE_HPP

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace advrisk {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A feature vector with an optional class label.
///
/// Binary tasks use labels {-1, +1}; multi-class tasks use {1, ..., k}.
/// Unsupervised instances (PCA) carry no label.
struct Instance {
  Vector features;
  std::optional<int> label;

  Instance() = default;
  Instance(Vector x, std::optional<int> y = std::nullopt)
      : features(std::move(x)), label(y) {}

  int dim() const { return static_cast<int>(features.size()); }
};

bool operator==(const Instance& a, const Instance& b);

/// The label alphabet of a dataset or model.
class LabelSet {
 public:
  enum class Kind { None, Binary, MultiClass };

  static LabelSet none() { return LabelSet(Kind::None, 0); }
  static LabelSet binary() { return LabelSet(Kind::Binary, 2); }
  static LabelSet multi_class(int classes);

  Kind kind() const { return kind_; }
  int classes() const { return classes_; }
  bool labeled() const { return kind_ != Kind::None; }
  bool contains(int label) const;

  /// Every admissible label, in ascending order. Empty when unlabeled.
  std::vector<int> labels() const;

  std::string to_string() const;
  static LabelSet parse(const std::string& text);

  bool operator==(const LabelSet&) const = default;

 private:
  LabelSet(Kind kind, int classes) : kind_(kind), classes_(classes) {}
  Kind kind_;
  int classes_;
};

/// An immutable, nonempty sample; the empirical distribution puts mass 1/n on
/// each instance.
class Dataset {
 public:
  Dataset(std::vector<Instance> instances, LabelSet labels);

  /// Infers the label set from the instances: no labels -> none,
  /// all labels in {-1,+1} -> binary, otherwise multi-class up to the max label.
  static Dataset with_inferred_labels(std::vector<Instance> instances);

  const std::vector<Instance>& instances() const { return instances_; }
  const Instance& operator[](std::size_t i) const { return instances_[i]; }
  std::size_t size() const { return instances_.size(); }
  int feature_dim() const { return feature_dim_; }
  const LabelSet& label_set() const { return labels_; }

  /// Largest Euclidean feature norm in the sample.
  double max_feature_norm() const;

  /// New dataset with one extra instance appended.
  Dataset with(const Instance& extra) const;

  bool operator==(const Dataset& other) const;

 private:
  std::vector<Instance> instances_;
  int feature_dim_ = 0;
  LabelSet labels_;
};

/// Norm of order p >= 1; p = infinity selects the max norm.
double lp_norm(const VectorRef& v, double p);

/// Metric on instance space: feature distance plus a 0/1 label-mismatch term.
///
/// The feature distance is either an l_p norm of the difference or the
/// distance between Gaussian-kernel feature maps,
/// sqrt(2 - 2 exp(-|x - x'|^2 / sigma^2)). Both depend on x - x' only.
/// Features live in the Euclidean ball of radius `feature_radius`.
class ProductMetric {
 public:
  enum class FeatureKind { Lp, GaussianRkhs };

  static ProductMetric lp(double p, bool label_indicator, double feature_radius,
                          int feature_dim = 0);
  static ProductMetric gaussian_rkhs(double sigma, bool label_indicator,
                                     double feature_radius, int feature_dim = 0);

  FeatureKind feature_kind() const { return kind_; }
  double feature_norm() const { return p_; }
  double sigma() const { return sigma_; }
  bool label_indicator() const { return label_indicator_; }
  double feature_radius() const { return radius_; }
  int feature_dim() const { return dim_; }

  double feature_distance(const VectorRef& a, const VectorRef& b) const;
  /// Feature distance as a function of the displacement v = x - x'.
  double displacement_distance(const VectorRef& v) const;
  double label_distance(const std::optional<int>& a, const std::optional<int>& b) const;

  /// sup over the feature ball of the feature distance.
  double feature_diameter() const;

 private:
  ProductMetric() = default;
  FeatureKind kind_ = FeatureKind::Lp;
  double p_ = 2.0;
  double sigma_ = 1.0;
  bool label_indicator_ = true;
  double radius_ = 1.0;
  int dim_ = 0;
};

/// d_Z(z, z2) = d_X(x, x2) + 1(y != y2). Throws InvalidInput on dimension or
/// label-convention mismatch.
double distance_z(const Instance& z, const Instance& z2, const ProductMetric& m);

/// Diameter of the instance space: feature diameter plus the label indicator.
/// For Euclidean features this is 2 r + 1 (labeled) or 2 r (unlabeled).
double diam_z(const ProductMetric& m);

/// Perturbation set B = { v : |v|_q <= epsilon }, so N(x) = x + B.
struct AdversaryBudget {
  double epsilon = 0.0;
  double ball_norm = 2.0;

  AdversaryBudget() = default;
  AdversaryBudget(double eps, double q = 2.0);

  /// eps_B = sup_{v in B} d_X(v, 0) under the metric's feature distance.
  /// Equals `epsilon` when the ball norm matches an l_p feature norm.
  double metric_radius(const ProductMetric& m, int feature_dim) const;
};

}  // namespace advrisk

#endif  // ADVRISK_CORE_HPP
