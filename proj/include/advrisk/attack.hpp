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

#ifndef ADVRISK_ATTACK_HPP
#define ADVRISK_ATTACK_HPP

#include <cstddef>
#include <vector>

#include "advrisk/core.hpp"
#include "advrisk/dual_solver.hpp"
#include "advrisk/models.hpp"

namespace advrisk {

struct Perturbation {
  Vector x_star;
  double loss = 0.0;
  SolverStatus status = SolverStatus::Converged;
  InnerMethod method = InnerMethod::Grid;
};

/// argmax of f(x', y) over x' in N(x) ∩ X with the label held fixed. Ties go
/// to the smaller |x' - x|_q, then to the lexicographically smaller x'.
/// `index` only feeds the seed of random restarts.
Perturbation worst_case_perturbation(const LossModel& f, const Instance& z,
                                     const AdversaryBudget& budget, const InnerSupConfig& cfg,
                                     std::size_t index = 0);

struct AttackResult {
  Dataset pushforward;
  std::vector<double> per_sample_loss;
  double adversarial_risk = 0.0;
  double coupling_cost = 0.0;
  double clean_risk = 0.0;
  /// d_X-radius of the perturbation ball.
  double epsilon_b = 0.0;
  SolverStatus status = SolverStatus::Converged;
  InnerMethod method = InnerMethod::Grid;
  bool heuristic = false;
};

/// Applies the per-sample transport map. per_sample_loss holds f at the
/// pushed instances, so their mean is the standard risk of the pushforward.
AttackResult transport_map_apply(const LossModel& f, const Dataset& data,
                                 const AdversaryBudget& budget, const ProductMetric& m,
                                 const InnerSupConfig& cfg);

/// mean_i d_Z(original_i, pushed_i): the identity-coupling upper bound on W_1.
double coupling_cost(const Dataset& original, const Dataset& pushed, const ProductMetric& m);

}  // namespace advrisk

#endif  // ADVRISK_ATTACK_HPP
