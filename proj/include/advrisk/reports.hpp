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

#ifndef ADVRISK_REPORTS_HPP
#define ADVRISK_REPORTS_HPP

#include <string>
#include <vector>

#include "advrisk/attack.hpp"
#include "advrisk/bounds.hpp"
#include "advrisk/dual_solver.hpp"
#include "advrisk/model_io.hpp"
#include "advrisk/trainer.hpp"

namespace advrisk {

Json to_json(const DualSolution& s);
Json to_json(const AttackResult& r);
Json to_json(const BoundReport& r);
Json to_json(const TrainResult& r);
Json to_json(const InnerSupConfig& cfg);

/// One sweep row: the bound terms and the attack risk at a single epsilon.
struct SweepRow {
  double epsilon = 0.0;
  BoundReport bound;
  double adversarial_risk = 0.0;
};

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row);
std::string bound_csv_header();
std::string bound_csv_row(const BoundReport& r);

}  // namespace advrisk

#endif  // ADVRISK_REPORTS_HPP
