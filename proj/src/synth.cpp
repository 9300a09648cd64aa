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

#include "advrisk/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "advrisk/error.hpp"
#include "advrisk/linalg.hpp"

namespace advrisk {

namespace {

Vector gaussian(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal;
  Vector v(dim);
  for (int j = 0; j < dim; ++j) v[j] = normal(rng);
  return v;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidInput(what);
}

int int_param(const Json& desc, const char* key, int fallback) {
  if (!desc.contains(key)) return fallback;
  if (!desc.at(key).is_number_integer())
    throw InvalidInput(std::string("synthetic parameter '") + key + "' must be an integer");
  return desc.at(key).get<int>();
}

double real_param(const Json& desc, const char* key, double fallback) {
  if (!desc.contains(key)) return fallback;
  if (!desc.at(key).is_number())
    throw InvalidInput(std::string("synthetic parameter '") + key + "' must be a number");
  return desc.at(key).get<double>();
}

}  // namespace

Dataset gaussian_blobs(int n, int dim, int classes, double separation, double spread,
                       double radius, std::uint64_t seed) {
  require(n >= 1, "n must be positive");
  require(dim >= 1, "dim must be positive");
  require(classes >= 2, "classes must be at least 2");
  require(spread >= 0.0 && radius >= 0.0, "spread and radius must be non-negative");
  std::mt19937_64 rng(seed);
  std::vector<Instance> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const int c = i % classes;
    Vector mean = Vector::Zero(dim);
    if (classes == 2) {
      mean[0] = c == 0 ? -separation : separation;
    } else {
      const double angle = 2.0 * std::numbers::pi * c / classes;
      mean[0] = separation * std::cos(angle);
      if (dim > 1) mean[1] = separation * std::sin(angle);
    }
    Vector x = clip_to_ball(mean + spread * gaussian(rng, dim), radius);
    const int label = classes == 2 ? (c == 0 ? -1 : 1) : c + 1;
    out.emplace_back(std::move(x), label);
  }
  return Dataset(std::move(out), classes == 2 ? LabelSet::binary() : LabelSet::multi_class(classes));
}

Dataset margin_separable(int n, int dim, double margin, double radius, std::uint64_t seed) {
  require(n >= 1, "n must be positive");
  require(dim >= 1, "dim must be positive");
  require(margin >= 0.0 && margin < 2.0 * radius, "margin must lie in [0, 2r)");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif;
  std::bernoulli_distribution coin;
  std::vector<Instance> out;
  out.reserve(n);
  while (static_cast<int>(out.size()) < n) {
    const int y = coin(rng) ? 1 : -1;
    Vector v = gaussian(rng, dim);
    const double norm = v.norm();
    if (norm == 0.0) continue;
    Vector x = clip_to_ball(v * (radius * std::pow(unif(rng), 1.0 / dim) / norm), radius);
    if (y * x[0] < 0.5 * margin) continue;
    out.emplace_back(std::move(x), y);
  }
  return Dataset(std::move(out), LabelSet::binary());
}

SubspaceSample subspace_plus_noise(int n, int m, int k, double noise, double radius,
                                   std::uint64_t seed) {
  require(n >= 1, "n must be positive");
  require(m >= 1 && k >= 0 && k <= m, "need 0 <= k <= m");
  require(noise >= 0.0 && radius >= 0.0, "noise and radius must be non-negative");
  std::mt19937_64 rng(seed);
  Matrix g(m, m);
  for (int c = 0; c < m; ++c) g.col(c) = gaussian(rng, m);
  const Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix basis = (qr.householderQ() * Matrix::Identity(m, m)).leftCols(k);
  std::vector<Instance> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    Vector x = Vector::Zero(m);
    if (k > 0) x = basis * (0.5 * radius * gaussian(rng, k));
    if (noise > 0.0) x += noise * gaussian(rng, m);
    out.emplace_back(clip_to_ball(x, radius));
  }
  return {Dataset(std::move(out), LabelSet::none()), basis};
}

Dataset synthesize_dataset(const Json& desc, std::uint64_t seed) {
  if (!desc.is_object() || !desc.contains("family") || !desc.at("family").is_string())
    throw InvalidInput("synthetic descriptor needs a string 'family'");
  const std::string family = desc.at("family").get<std::string>();
  if (desc.contains("seed")) {
    if (!desc.at("seed").is_number_unsigned())
      throw InvalidInput("synthetic seed must be a non-negative integer");
    seed = desc.at("seed").get<std::uint64_t>();
  }
  const int n = int_param(desc, "n", 100);
  const double radius = real_param(desc, "radius", 1.0);
  if (family == "gaussian-blobs")
    return gaussian_blobs(n, int_param(desc, "dim", 2), int_param(desc, "classes", 2),
                          real_param(desc, "separation", 0.5), real_param(desc, "spread", 0.25),
                          radius, seed);
  if (family == "margin-separable")
    return margin_separable(n, int_param(desc, "dim", 2), real_param(desc, "margin", 0.5), radius,
                            seed);
  if (family == "subspace-plus-noise")
    return subspace_plus_noise(n, int_param(desc, "m", 4), int_param(desc, "k", 2),
                               real_param(desc, "noise", 0.0), radius, seed)
        .data;
  throw InvalidInput("unknown synthetic family '" + family + "'");
}

}  // namespace advrisk
