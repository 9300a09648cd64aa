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

#ifndef ADVRISK_TRAINER_HPP
#define ADVRISK_TRAINER_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "advrisk/core.hpp"
#include "advrisk/dual_solver.hpp"
#include "advrisk/models.hpp"

namespace advrisk {

enum class ModelFamily { LinearSvm, NeuralNet };

std::string to_string(ModelFamily family);
ModelFamily parse_model_family(const std::string& text);

/// 11 evenly spaced values 0, 0.1, ..., 1.
std::vector<double> default_eta_grid();

struct TrainConfig {
  std::vector<double> eta_grid = default_eta_grid();
  int epochs = 300;
  /// Step t uses step_size / sqrt(t + 1).
  double step_size = 0.5;
  std::uint64_t seed = 0;
  ModelFamily model_family = ModelFamily::LinearSvm;

  double class_radius = 1.0;  // Lambda (linear SVM)
  double feature_radius = 1.0;

  // Network architecture and caps.
  std::vector<int> hidden_widths{8};
  std::string activation = "relu";
  double activation_scale = 1.0;
  double gamma = 1.0;
  double spectral_cap = 2.0;
  double frobenius_cap = 4.0;

  /// Solver used to evaluate each run's adversarial risk.
  InnerSupConfig attack{65};
  int threads = 1;

  void validate() const;
};

struct TrainResult {
  std::unique_ptr<LossModel> best_model;
  double best_eta = 0.0;
  std::vector<double> eta_grid;
  std::vector<double> objective_trace;
  std::vector<double> adversarial_risk_trace;
  std::vector<bool> diverged;
  std::vector<std::unique_ptr<LossModel>> models;
};

/// Empirical risk plus eta * (analytic lambda_plus bound) * eps_B.
double surrogate_objective(const LossModel& model, const Dataset& data, double eta,
                           const AdversaryBudget& budget);

/// Full-batch projected subgradient descent on the surrogate for every eta on
/// the grid. Each run keeps its best iterate; runs whose objective exceeds ten
/// times the initial value are flagged as diverged and excluded. The result
/// is the grid argmin, ties to the smallest eta.
TrainResult robust_train(const Dataset& data, const AdversaryBudget& budget,
                         const TrainConfig& cfg);

}  // namespace advrisk

#endif  // ADVRISK_TRAINER_HPP
