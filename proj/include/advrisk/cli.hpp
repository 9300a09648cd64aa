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

#ifndef ADVRISK_CLI_HPP
#define ADVRISK_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "advrisk/bounds.hpp"
#include "advrisk/dual_solver.hpp"
#include "advrisk/trainer.hpp"

namespace advrisk {

enum class Command { Certify, Attack, Train, Verify, Sweep };

std::string to_string(Command c);
Command parse_command(const std::string& text);

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitInvalidConfig = 2,
  kExitSolver = 3,
};

struct RunConfig {
  Command command = Command::Certify;
  std::string model_path;
  /// CSV file, or a JSON synthetic descriptor (file ending in .json).
  std::string data_path;
  std::vector<double> epsilons{0.0};
  double delta = 0.05;
  BoundMode mode = BoundMode::Eq4;
  std::uint64_t seed = 0;
  /// Empty writes the report to the output stream.
  std::string output_path;
  InnerSupConfig solver;
  double ball_norm = 2.0;
  /// Escalate budget exhaustion and heuristic inner solves to exit code 3.
  bool strict = false;
  TrainConfig train;
  std::string model_out;
  /// Optional JSON of oracle values checked by `verify`.
  std::string expected_path;
};

/// Executes one command. Reports go to `output_path` or `out`; errors are
/// written to `err` as a JSON object. Returns the process exit code.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses command-line flags (falling back to ADVRISK_SEED for the seed)
/// and calls run().
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace advrisk

#endif  // ADVRISK_CLI_HPP
