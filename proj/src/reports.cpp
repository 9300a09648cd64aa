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

#include "advrisk/reports.hpp"

#include <cmath>
#include <sstream>

#include "advrisk/data_io.hpp"

namespace advrisk {

namespace {

Json real(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json optional_real(const std::optional<double>& v) { return v ? real(*v) : Json(nullptr); }

std::string cell(double v) { return std::isfinite(v) ? format_double(v) : ""; }

}  // namespace

Json to_json(const DualSolution& s) {
  Json j;
  j["epsilon"] = real(s.epsilon);
  j["lambda_bar"] = real(s.lambda_bar);
  j["risk_value"] = real(s.risk_value);
  j["empirical_risk"] = real(s.empirical_risk);
  j["zeta_interval"] = Json::array({real(s.zeta_interval.first), real(s.zeta_interval.second)});
  j["lambda_plus"] = real(s.lambda_plus);
  j["lambda_minus"] = real(s.lambda_minus);
  j["solver_status"] = to_string(s.solver_status);
  j["inner_method"] = to_string(s.inner_method);
  j["heuristic"] = s.heuristic;
  j["diagnostics"] = {{"lambda_zero_onset", real(s.lambda_zero_onset)},
                      {"psi_at_lambda_plus", real(s.psi_at_lambda_plus)},
                      {"golden_iterations", s.iterations}};
  Json samples = Json::array();
  for (const auto& [l, g] : s.objective_samples) samples.push_back(Json::array({real(l), real(g)}));
  j["objective_samples"] = std::move(samples);
  return j;
}

Json to_json(const AttackResult& r) {
  Json j;
  j["adversarial_risk"] = real(r.adversarial_risk);
  j["clean_risk"] = real(r.clean_risk);
  j["coupling_cost"] = real(r.coupling_cost);
  j["epsilon_b"] = real(r.epsilon_b);
  j["solver_status"] = to_string(r.status);
  j["inner_method"] = to_string(r.method);
  j["heuristic"] = r.heuristic;
  Json losses = Json::array();
  for (double v : r.per_sample_loss) losses.push_back(real(v));
  j["per_sample_loss"] = std::move(losses);
  return j;
}

Json to_json(const BoundReport& r) {
  Json j;
  j["empirical_risk"] = real(r.empirical_risk);
  j["dual_penalty"] = real(r.dual_penalty);
  j["complexity_term"] = real(r.complexity_term);
  j["lambda_band_term"] = real(r.lambda_band_term);
  j["confidence_term"] = real(r.confidence_term);
  j["total"] = real(r.total);
  j["log_total"] = real(r.log_total);
  j["mode"] = to_string(r.mode);
  j["lambda_source"] = to_string(r.lambda_source);
  j["heuristic_flag"] = r.heuristic_flag;
  j["metadata"] = {{"epsilon_b", real(r.epsilon_b)},
                   {"delta", real(r.delta)},
                   {"n", r.n},
                   {"model_kind", to_string(r.model_kind)}};
  j["details"] = {{"lambda_plus_used", real(r.lambda_plus_used)},
                  {"lambda_plus_analytic", real(r.lambda_plus_analytic)},
                  {"lambda_plus_numeric", optional_real(r.lambda_plus_numeric)},
                  {"lambda_band", real(r.lambda_band)},
                  {"diameter", real(r.diameter)},
                  {"covering_constant", real(r.covering_constant)},
                  {"log_complexity_term", real(r.log_complexity_term)},
                  {"bound_m", real(r.bound_m)},
                  {"numeric_zeta_width", optional_real(r.numeric_zeta_width)}};
  return j;
}

Json to_json(const TrainResult& r) {
  Json j;
  j["best_eta"] = real(r.best_eta);
  Json grid = Json::array(), obj = Json::array(), adv = Json::array(), div = Json::array();
  for (std::size_t k = 0; k < r.eta_grid.size(); ++k) {
    grid.push_back(real(r.eta_grid[k]));
    obj.push_back(real(r.objective_trace[k]));
    adv.push_back(real(r.adversarial_risk_trace[k]));
    div.push_back(static_cast<bool>(r.diverged[k]));
  }
  j["eta_grid"] = std::move(grid);
  j["objective_trace"] = std::move(obj);
  j["adversarial_risk_trace"] = std::move(adv);
  j["diverged"] = std::move(div);
  j["best_model"] = model_to_json(*r.best_model);
  return j;
}

Json to_json(const InnerSupConfig& cfg) {
  return {{"grid_points_per_dim", cfg.grid_points_per_dim},
          {"pga_restarts", cfg.pga_restarts},
          {"pga_steps", cfg.pga_steps},
          {"pga_step_size", cfg.pga_step_size},
          {"tolerance", cfg.tolerance},
          {"refine_points", cfg.refine_points},
          {"refine_rounds", cfg.refine_rounds},
          {"refine_lambdas", cfg.refine_lambdas},
          {"pga_anchors", cfg.pga_anchors}};
}

std::string bound_csv_header() {
  return "epsilon_b,delta,n,mode,lambda_source,heuristic,empirical_risk,dual_penalty,"
         "complexity_term,lambda_band_term,confidence_term,total";
}

std::string bound_csv_row(const BoundReport& r) {
  std::ostringstream out;
  out << cell(r.epsilon_b) << ',' << cell(r.delta) << ',' << r.n << ',' << to_string(r.mode)
      << ',' << to_string(r.lambda_source) << ',' << (r.heuristic_flag ? 1 : 0) << ','
      << cell(r.empirical_risk) << ',' << cell(r.dual_penalty) << ',' << cell(r.complexity_term)
      << ',' << cell(r.lambda_band_term) << ',' << cell(r.confidence_term) << ','
      << cell(r.total);
  return out.str();
}

std::string sweep_csv_header() { return "epsilon," + bound_csv_header() + ",adversarial_risk"; }

std::string sweep_csv_row(const SweepRow& row) {
  return cell(row.epsilon) + "," + bound_csv_row(row.bound) + "," + cell(row.adversarial_risk);
}

}  // namespace advrisk
