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

#include "advrisk/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "advrisk/error.hpp"

namespace advrisk {

std::string to_string(BoundMode mode) { return mode == BoundMode::Eq3 ? "eq3" : "eq4"; }

BoundMode parse_bound_mode(const std::string& text) {
  if (text == "eq3") return BoundMode::Eq3;
  if (text == "eq4") return BoundMode::Eq4;
  throw InvalidInput("unknown bound mode '" + text + "'");
}

std::string to_string(LambdaSource source) {
  return source == LambdaSource::Numeric ? "numeric" : "analytic";
}

double log_covering_constant(const LossModel& model) { return model.log_covering_constant(); }

double covering_constant(const LossModel& model) { return std::exp(model.log_covering_constant()); }

BoundReport assemble_bound(const LossModel& model, const Dataset& data,
                           const std::optional<DualSolution>& dual, double eps, double delta,
                           BoundMode mode) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw InvalidInput("epsilon must be non-negative");
  model.check_dataset(data);
  if (dual && dual->epsilon != eps)
    throw InvalidInput("dual solution was computed for a different epsilon");

  BoundReport r;
  r.mode = mode;
  r.epsilon_b = eps;
  r.delta = delta;
  r.n = data.size();
  r.model_kind = model.kind();
  r.bound_m = model.bound_m();
  const ProductMetric metric = model.metric();
  r.diameter = diam_z(metric);
  const double sqrt_n = std::sqrt(static_cast<double>(r.n));

  double emp = 0.0;
  for (const auto& z : data.instances()) emp += model.loss(z.features, z.label.value_or(0));
  r.empirical_risk = emp / static_cast<double>(r.n);

  r.lambda_plus_analytic = model.lambda_plus_analytic(data);
  if (dual) {
    r.heuristic_flag = dual->heuristic;
    if (!dual->heuristic) r.lambda_plus_numeric = dual->lambda_plus;
    if (eps > 0.0) r.numeric_zeta_width = dual->zeta_interval.second - dual->zeta_interval.first;
  }

  if (mode == BoundMode::Eq3) {
    if (!dual) throw InvalidInput("eq3 needs a dual solution");
    r.lambda_source = LambdaSource::Numeric;
    r.lambda_plus_used = dual->lambda_plus;
    r.dual_penalty = eps == 0.0 ? 0.0 : std::max(0.0, dual->risk_value - r.empirical_risk);
  } else {
    if (r.lambda_plus_numeric && *r.lambda_plus_numeric < r.lambda_plus_analytic) {
      r.lambda_source = LambdaSource::Numeric;
      r.lambda_plus_used = *r.lambda_plus_numeric;
    } else {
      r.lambda_source = LambdaSource::Analytic;
      r.lambda_plus_used = r.lambda_plus_analytic;
    }
    r.dual_penalty = r.lambda_plus_used * eps;
  }

  const double log_c = model.log_covering_constant();
  r.covering_constant = std::exp(log_c);
  r.log_complexity_term = std::log(24.0) + log_c - std::log(sqrt_n);
  r.complexity_term = std::exp(r.log_complexity_term);

  if (eps > 0.0) {
    const double cap = r.bound_m / eps;
    const auto lip = model.class_lipschitz();
    r.lambda_band = lip ? std::min(cap, *lip) : cap;
  }
  r.lambda_band_term = 12.0 * std::sqrt(std::numbers::pi) * r.lambda_band * r.diameter / sqrt_n;
  r.confidence_term = r.bound_m * std::sqrt(std::log(1.0 / delta) / (2.0 * r.n));

  r.total = r.empirical_risk + r.dual_penalty + r.complexity_term + r.lambda_band_term +
            r.confidence_term;
  const double rest = r.empirical_risk + r.dual_penalty + r.lambda_band_term + r.confidence_term;
  const double hi = std::max(r.log_complexity_term, rest > 0.0 ? std::log(rest) : -kInfinity);
  r.log_total = std::isinf(hi) ? hi
                               : hi + std::log(std::exp(r.log_complexity_term - hi) +
                                               (rest > 0.0 ? std::exp(std::log(rest) - hi) : 0.0));
  return r;
}

}  // namespace advrisk
