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

#include "advrisk/model_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "advrisk/error.hpp"

namespace advrisk {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw InvalidInput(std::string("model JSON is missing '") + key + "'");
  return j.at(key);
}

double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw InvalidInput(std::string("model field '") + key + "' must be a number");
  return v.get<double>();
}

std::optional<double> optional_number(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number())
    throw InvalidInput(std::string("model field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

Json optional_to_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json vector_to_json(const VectorRef& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw InvalidInput(what + " must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InvalidInput(what + " must be an array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_to_json(m.row(i).transpose()));
  return out;
}

Matrix matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw InvalidInput(what + " must be a nonempty array of rows");
  const Vector first = vector_from_json(j[0], what);
  Matrix m(static_cast<Eigen::Index>(j.size()), first.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Vector row = vector_from_json(j[i], what);
    if (row.size() != first.size()) throw InvalidInput(what + " has ragged rows");
    m.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return m;
}

Json model_to_json(const LossModel& model) {
  Json j;
  j["kind"] = to_string(model.kind());
  switch (model.kind()) {
    case ModelKind::LinearSvm: {
      const auto& m = static_cast<const LinearSvmModel&>(model);
      j["w"] = vector_to_json(m.weights());
      j["Lambda"] = m.class_radius();
      j["r"] = m.feature_radius();
      break;
    }
    case ModelKind::KernelSvm: {
      const auto& m = static_cast<const KernelSvmModel&>(model);
      Json pts = Json::array();
      for (const auto& s : m.support_points()) pts.push_back(vector_to_json(s));
      j["support_points"] = std::move(pts);
      j["alpha"] = vector_to_json(m.alpha());
      j["sigma"] = m.sigma();
      j["Lambda"] = m.class_radius();
      j["r"] = m.feature_radius();
      break;
    }
    case ModelKind::NeuralNet: {
      const auto& m = static_cast<const NeuralNetModel&>(model);
      Json layers = Json::array();
      for (const auto& l : m.layers()) {
        Json lj;
        lj["weights"] = matrix_to_json(l.weights);
        lj["activation"] = l.activation.name();
        lj["scale"] = l.activation.scale;
        lj["spectral_cap"] = optional_to_json(l.spectral_cap);
        lj["frobenius_cap"] = optional_to_json(l.frobenius_cap);
        layers.push_back(std::move(lj));
      }
      j["layers"] = std::move(layers);
      j["gamma"] = m.gamma();
      j["B"] = m.feature_radius();
      break;
    }
    case ModelKind::Pca: {
      const auto& m = static_cast<const PcaModel&>(model);
      j["U"] = matrix_to_json(m.basis());
      j["B"] = m.feature_radius();
      break;
    }
  }
  return j;
}

std::unique_ptr<LossModel> model_from_json(const Json& j) {
  const Json& kind_field = field(j, "kind");
  if (!kind_field.is_string()) throw InvalidInput("model kind must be a string");
  switch (parse_model_kind(kind_field.get<std::string>())) {
    case ModelKind::LinearSvm:
      return std::make_unique<LinearSvmModel>(vector_from_json(field(j, "w"), "w"),
                                              number(j, "Lambda"), number(j, "r"));
    case ModelKind::KernelSvm: {
      const Json& pts = field(j, "support_points");
      if (!pts.is_array()) throw InvalidInput("support_points must be an array");
      std::vector<Vector> support;
      for (const auto& p : pts) support.push_back(vector_from_json(p, "support point"));
      return std::make_unique<KernelSvmModel>(std::move(support),
                                              vector_from_json(field(j, "alpha"), "alpha"),
                                              number(j, "sigma"), number(j, "Lambda"),
                                              number(j, "r"));
    }
    case ModelKind::NeuralNet: {
      const Json& lj = field(j, "layers");
      if (!lj.is_array()) throw InvalidInput("layers must be an array");
      std::vector<Layer> layers;
      for (const auto& l : lj) {
        Layer layer;
        layer.weights = matrix_from_json(field(l, "weights"), "weights");
        const double scale = l.contains("scale") ? number(l, "scale") : 1.0;
        const Json& act = field(l, "activation");
        if (!act.is_string()) throw InvalidInput("activation must be a string");
        layer.activation = Activation::parse(act.get<std::string>(), scale);
        layer.spectral_cap = optional_number(l, "spectral_cap");
        layer.frobenius_cap = optional_number(l, "frobenius_cap");
        layers.push_back(std::move(layer));
      }
      return std::make_unique<NeuralNetModel>(std::move(layers), number(j, "gamma"),
                                              number(j, "B"));
    }
    case ModelKind::Pca: {
      const Json& u = field(j, "U");
      // A rank-0 projection has no columns; accept rows of empty arrays.
      if (u.is_array() && !u.empty() && u[0].is_array() && u[0].empty())
        return std::make_unique<PcaModel>(Matrix(static_cast<Eigen::Index>(u.size()), 0),
                                          number(j, "B"));
      return std::make_unique<PcaModel>(matrix_from_json(u, "U"), number(j, "B"));
    }
  }
  throw InvalidInput("unknown model kind");
}

std::unique_ptr<LossModel> load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open model file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput("malformed model JSON in '" + path + "': " + e.what());
  }
  return model_from_json(j);
}

void save_model(const LossModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write model file '" + path + "'");
  out << model_to_json(model).dump(2) << '\n';
}

std::string model_hash(const LossModel& model) {
  const std::string text = model_to_json(model).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace advrisk
