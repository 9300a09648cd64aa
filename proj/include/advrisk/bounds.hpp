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

#ifndef ADVRISK_BOUNDS_HPP
#define ADVRISK_BOUNDS_HPP

#include <optional>
#include <string>

#include "advrisk/core.hpp"
#include "advrisk/dual_solver.hpp"
#include "advrisk/models.hpp"

namespace advrisk {

enum class BoundMode { Eq3, Eq4 };
enum class LambdaSource { Numeric, Analytic };

std::string to_string(BoundMode mode);
BoundMode parse_bound_mode(const std::string& text);
std::string to_string(LambdaSource source);

/// Covering-entropy constant c(F) of the model class.
double covering_constant(const LossModel& model);
double log_covering_constant(const LossModel& model);

struct BoundReport {
  double empirical_risk = 0.0;
  double dual_penalty = 0.0;
  double complexity_term = 0.0;
  double lambda_band_term = 0.0;
  double confidence_term = 0.0;
  double total = 0.0;
  /// log of the complexity term and of the total, finite even when the
  /// covering constant overflows a double.
  double log_complexity_term = 0.0;
  double log_total = 0.0;
  BoundMode mode = BoundMode::Eq4;
  LambdaSource lambda_source = LambdaSource::Analytic;
  bool heuristic_flag = false;
  double epsilon_b = 0.0;
  double delta = 0.0;
  std::size_t n = 0;
  ModelKind model_kind = ModelKind::LinearSvm;
  /// Ingredients, for inspection.
  double lambda_plus_used = 0.0;
  double lambda_plus_analytic = 0.0;
  std::optional<double> lambda_plus_numeric;
  double lambda_band = 0.0;
  double diameter = 0.0;
  double covering_constant = 0.0;
  double bound_m = 0.0;
  /// Width of the per-run zeta interval; informational, not certified.
  std::optional<double> numeric_zeta_width;
};

/// Assembles the five-term bound. `dual` must come from the same model, data
/// and epsilon; it is required for eq3 and optional for eq4 (analytic lambda_plus
/// is used when absent or when the inner solver was heuristic).
BoundReport assemble_bound(const LossModel& model, const Dataset& data,
                           const std::optional<DualSolution>& dual, double eps, double delta,
                           BoundMode mode);

}  // namespace advrisk

#endif  // ADVRISK_BOUNDS_HPP
