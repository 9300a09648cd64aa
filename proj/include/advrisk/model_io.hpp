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

#ifndef ADVRISK_MODEL_IO_HPP
#define ADVRISK_MODEL_IO_HPP

#include <memory>
#include <string>

#include <json.hpp>

#include "advrisk/models.hpp"

namespace advrisk {

using Json = nlohmann::ordered_json;

Json vector_to_json(const VectorRef& v);
Vector vector_from_json(const Json& j, const std::string& what);
/// Row-major nested arrays.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& what);

/// Serialises a model with a "kind" tag followed by its parameters and caps.
Json model_to_json(const LossModel& model);
std::unique_ptr<LossModel> model_from_json(const Json& j);

std::unique_ptr<LossModel> load_model(const std::string& path);
void save_model(const LossModel& model, const std::string& path);

/// FNV-1a hash of the compact JSON form, as 16 hex digits.
std::string model_hash(const LossModel& model);

}  // namespace advrisk

#endif  // ADVRISK_MODEL_IO_HPP
