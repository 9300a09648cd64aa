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

#include "advrisk/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>

#include "advrisk/attack.hpp"
#include "advrisk/data_io.hpp"
#include "advrisk/error.hpp"
#include "advrisk/model_io.hpp"
#include "advrisk/reports.hpp"
#include "advrisk/synth.hpp"

namespace advrisk {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Dataset load_data(const RunConfig& cfg) {
  if (cfg.data_path.empty()) throw InvalidInput("--data is required");
  if (ends_with(cfg.data_path, ".json")) {
    std::ifstream in(cfg.data_path);
    if (!in) throw InvalidInput("cannot open synthetic descriptor '" + cfg.data_path + "'");
    Json desc;
    try {
      desc = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw InvalidInput("malformed synthetic descriptor: " + std::string(e.what()));
    }
    return synthesize_dataset(desc, cfg.seed);
  }
  return load_dataset_csv(cfg.data_path);
}

std::unique_ptr<LossModel> require_model(const RunConfig& cfg) {
  if (cfg.model_path.empty()) throw InvalidInput("--model is required");
  return load_model(cfg.model_path);
}

Json header(const RunConfig& cfg, const LossModel* model, const Dataset& data) {
  Json j;
  j["command"] = to_string(cfg.command);
  if (model) j["model"] = {{"kind", to_string(model->kind())}, {"hash", model_hash(*model)}};
  j["data"] = {{"source", cfg.data_path},
               {"n", data.size()},
               {"feature_dim", data.feature_dim()},
               {"label_set", data.label_set().to_string()}};
  j["seed"] = cfg.seed;
  return j;
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output_path);
  if (!file) throw InvalidInput("cannot write '" + cfg.output_path + "'");
  file << text;
}

std::string stem(const std::string& path) {
  return ends_with(path, ".json") ? path.substr(0, path.size() - 5) : path;
}

struct Flags {
  bool exhausted = false;
  bool heuristic = false;
  void note(SolverStatus s, bool h) {
    exhausted = exhausted || s == SolverStatus::BudgetExhausted;
    heuristic = heuristic || h;
  }
  int code(bool strict) const { return strict && (exhausted || heuristic) ? kExitSolver : kExitOk; }
};

void check_epsilons(const RunConfig& cfg) {
  if (cfg.epsilons.empty()) throw InvalidInput("--epsilon needs at least one value");
  for (double e : cfg.epsilons)
    if (!(e >= 0.0) || !std::isfinite(e)) throw InvalidInput("epsilon values must be >= 0");
}

int run_certify(const RunConfig& cfg, std::ostream& out) {
  check_epsilons(cfg);
  const auto model = require_model(cfg);
  const Dataset data = load_data(cfg);
  model->check_dataset(data);
  const ProductMetric m = model->metric();
  const DualProblem problem(*model, data, m, cfg.solver);
  Flags flags;
  Json doc = header(cfg, model.get(), data);
  doc["delta"] = cfg.delta;
  doc["mode"] = to_string(cfg.mode);
  doc["ball_norm"] = cfg.ball_norm;
  doc["solver"] = to_json(cfg.solver);
  Json results = Json::array();
  for (double eps : cfg.epsilons) {
    const double eps_b = AdversaryBudget(eps, cfg.ball_norm).metric_radius(m, data.feature_dim());
    const DualSolution dual = local_worst_case_risk(problem, eps_b, cfg.solver);
    const BoundReport bound = assemble_bound(*model, data, dual, eps_b, cfg.delta, cfg.mode);
    flags.note(dual.solver_status, bound.heuristic_flag);
    results.push_back({{"epsilon", eps}, {"bound", to_json(bound)}, {"dual", to_json(dual)}});
  }
  doc["results"] = std::move(results);
  emit(cfg, out, doc.dump(2) + "\n");
  return flags.code(cfg.strict);
}

int run_attack(const RunConfig& cfg, std::ostream& out) {
  check_epsilons(cfg);
  const auto model = require_model(cfg);
  const Dataset data = load_data(cfg);
  const ProductMetric m = model->metric();
  Flags flags;
  Json doc = header(cfg, model.get(), data);
  doc["ball_norm"] = cfg.ball_norm;
  Json results = Json::array();
  for (std::size_t k = 0; k < cfg.epsilons.size(); ++k) {
    const AdversaryBudget budget(cfg.epsilons[k], cfg.ball_norm);
    const AttackResult r = transport_map_apply(*model, data, budget, m, cfg.solver);
    flags.note(r.status, r.heuristic);
    Json entry{{"epsilon", cfg.epsilons[k]}, {"attack", to_json(r)}};
    if (!cfg.output_path.empty()) {
      const std::string csv = stem(cfg.output_path) + ".pushforward." + std::to_string(k) + ".csv";
      save_dataset_csv(csv, r.pushforward,
                       {{"model_hash", model_hash(*model)},
                        {"epsilon_b", format_double(r.epsilon_b)},
                        {"seed", std::to_string(cfg.seed)}});
      entry["pushforward_csv"] = csv;
    }
    results.push_back(std::move(entry));
  }
  doc["results"] = std::move(results);
  emit(cfg, out, doc.dump(2) + "\n");
  return flags.code(cfg.strict);
}

int run_train(const RunConfig& cfg, std::ostream& out) {
  check_epsilons(cfg);
  const Dataset data = load_data(cfg);
  TrainConfig tc = cfg.train;
  tc.seed = cfg.seed;
  tc.threads = cfg.solver.threads;
  tc.attack.seed = cfg.seed;
  const AdversaryBudget budget(cfg.epsilons.front(), cfg.ball_norm);
  const TrainResult r = robust_train(data, budget, tc);
  Json doc = header(cfg, nullptr, data);
  doc["epsilon"] = cfg.epsilons.front();
  doc["model_family"] = to_string(tc.model_family);
  doc["epochs"] = tc.epochs;
  doc["step_size"] = tc.step_size;
  doc["result"] = to_json(r);
  if (!cfg.model_out.empty()) save_model(*r.best_model, cfg.model_out);
  emit(cfg, out, doc.dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------- verify

struct Check {
  std::string name;
  bool passed;
  std::string detail;
};

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

std::vector<Instance> probes(const LossModel& model, std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  const auto labels = model.label_set().labels();
  const int d = model.feature_dim();
  std::vector<Instance> out;
  for (int i = 0; i < count; ++i) {
    Vector v(d);
    for (int j = 0; j < d; ++j) v[j] = normal(rng);
    const double n = v.norm();
    Vector x = n > 0.0 ? Vector(v * (model.feature_radius() * std::pow(unif(rng), 1.0 / d) / n))
                       : Vector(Vector::Zero(d));
    std::optional<int> y;
    if (!labels.empty())
      y = labels[std::uniform_int_distribution<std::size_t>(0, labels.size() - 1)(rng)];
    out.emplace_back(std::move(x), y);
  }
  return out;
}

std::vector<Check> verify_suite(const RunConfig& cfg, const LossModel& model, const Dataset& data) {
  std::vector<Check> checks;
  const ProductMetric m = model.metric();
  const double big_m = model.bound_m();
  const auto probe = probes(model, cfg.seed, 1000);

  {
    double lo = kInfinity, hi = -kInfinity;
    for (const auto& z : probe) {
      const double v = model.eval(z);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    for (const auto& z : data.instances()) {
      const double v = model.eval(z);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    checks.push_back({"loss_range", lo >= 0.0 && hi <= big_m,
                      "min " + num(lo) + ", max " + num(hi) + ", M " + num(big_m)});
  }

  const DualProblem problem(model, data, m, cfg.solver);
  const double lp = lambda_plus(problem, cfg.solver);
  const double analytic = model.lambda_plus_analytic(data);
  const double diam = problem.diameter();
  {
    std::mt19937_64 rng(cfg.seed ^ 0x5eedULL);
    std::uniform_real_distribution<double> unif(0.0, 2.0 * lp + 1.0);
    bool mono = true, lip = true;
    for (int k = 0; k < 500; ++k) {
      double a = unif(rng), b = unif(rng);
      if (a > b) std::swap(a, b);
      const double pa = problem.psi(a), pb = problem.psi(b);
      if (pa < pb - 1e-9) mono = false;
      if (std::abs(pa - pb) > diam * (b - a) + 1e-9) lip = false;
    }
    checks.push_back({"psi_monotone", mono, "500 sampled pairs"});
    checks.push_back({"psi_lipschitz", lip, "diam(Z) " + num(diam)});
  }
  {
    const double v = problem.psi(lp);
    checks.push_back({"psi_root", v <= 1e-6 * big_m, "psi(lambda+) " + num(v)});
    checks.push_back({"analytic_dominance", lp <= analytic + 1e-4,
                      "numeric " + num(lp) + ", analytic " + num(analytic)});
  }
  {
    const DualSolution s = local_worst_case_risk(problem, 0.0, cfg.solver);
    const double gap = std::abs(s.risk_value - s.empirical_risk);
    checks.push_back({"epsilon_zero_recovery", gap <= 1e-9, "gap " + num(gap)});
  }
  for (double eps : cfg.epsilons) {
    if (eps == 0.0) continue;
    const std::string tag = " (eps " + num(eps) + ")";
    const AdversaryBudget budget(eps, cfg.ball_norm);
    const double eps_b = budget.metric_radius(m, data.feature_dim());
    const DualSolution s = local_worst_case_risk(problem, eps_b, cfg.solver);
    const bool inside = s.lambda_bar >= s.zeta_interval.first - 1e-4 &&
                        s.lambda_bar <= s.zeta_interval.second + 1e-4;
    checks.push_back({"lambda_bar_in_zeta" + tag, inside,
                      num(s.lambda_bar) + " in [" + num(s.zeta_interval.first) + ", " +
                          num(s.zeta_interval.second) + "]"});
    checks.push_back({"risk_range" + tag,
                      s.risk_value >= s.empirical_risk && s.risk_value <= big_m,
                      "risk " + num(s.risk_value)});
    const AttackResult a = transport_map_apply(model, data, budget, m, cfg.solver);
    if (!problem.heuristic())
      checks.push_back({"sandwich" + tag, a.adversarial_risk <= s.risk_value + 2e-3,
                        "attack " + num(a.adversarial_risk) + ", dual " + num(s.risk_value)});
    checks.push_back({"coupling_cost" + tag, a.coupling_cost <= a.epsilon_b + 1e-9,
                      num(a.coupling_cost) + " <= " + num(a.epsilon_b)});
    double pushed = 0.0;
    for (const auto& z : a.pushforward.instances()) pushed += model.eval(z);
    pushed /= static_cast<double>(data.size());
    checks.push_back({"pushforward_identity" + tag, pushed == a.adversarial_risk,
                      "difference " + num(pushed - a.adversarial_risk)});
    const BoundReport b3 = assemble_bound(model, data, s, eps_b, cfg.delta, BoundMode::Eq3);
    const BoundReport b4 = assemble_bound(model, data, s, eps_b, cfg.delta, BoundMode::Eq4);
    checks.push_back({"eq3_below_eq4" + tag, b3.total <= b4.total + 1e-6 * big_m,
                      num(b3.total) + " <= " + num(b4.total)});
  }
  {
    const auto copy = model_from_json(Json::parse(model_to_json(model).dump()));
    double diff = 0.0;
    for (const auto& z : probe) diff = std::max(diff, std::abs(copy->eval(z) - model.eval(z)));
    checks.push_back({"model_round_trip", diff == 0.0, "max difference " + num(diff)});
  }
  {
    std::stringstream buf;
    write_dataset_csv(buf, data);
    const Dataset back = read_dataset_csv(buf);
    checks.push_back({"dataset_round_trip", back == data, "CSV"});
  }
  if (!cfg.expected_path.empty()) {
    std::ifstream in(cfg.expected_path);
    if (!in) throw InvalidInput("cannot open expected values '" + cfg.expected_path + "'");
    const Json ex = Json::parse(in);
    const double tol = ex.value("tolerance", 1e-3);
    if (ex.contains("lambda_plus")) {
      const double want = ex.at("lambda_plus").get<double>();
      checks.push_back({"oracle_lambda_plus", std::abs(lp - want) <= tol,
                        "solver " + num(lp) + ", oracle " + num(want)});
    }
    if (ex.contains("risk")) {
      for (const auto& item : ex.at("risk")) {
        const double eps = item.at("epsilon").get<double>();
        const double want = item.at("value").get<double>();
        const DualSolution s = local_worst_case_risk(problem, eps, cfg.solver);
        checks.push_back({"oracle_risk (eps " + num(eps) + ")",
                          std::abs(s.risk_value - want) <= tol,
                          "solver " + num(s.risk_value) + ", oracle " + num(want)});
      }
    }
  }
  return checks;
}

int run_verify(const RunConfig& cfg, std::ostream& out) {
  check_epsilons(cfg);
  const auto model = require_model(cfg);
  const Dataset data = load_data(cfg);
  model->check_dataset(data);
  const auto checks = verify_suite(cfg, *model, data);
  std::ostringstream text;
  bool all = true;
  for (const auto& c : checks) {
    text << (c.passed ? "PASS " : "FAIL ") << c.name << "  " << c.detail << '\n';
    all = all && c.passed;
  }
  text << (all ? "all checks passed" : "some checks failed") << '\n';
  emit(cfg, out, text.str());
  return all ? kExitOk : kExitVerifyFailed;
}

int run_sweep(const RunConfig& cfg, std::ostream& out) {
  check_epsilons(cfg);
  const auto model = require_model(cfg);
  const Dataset data = load_data(cfg);
  model->check_dataset(data);
  const ProductMetric m = model->metric();
  const DualProblem problem(*model, data, m, cfg.solver);
  Flags flags;
  std::ostringstream csv;
  csv << sweep_csv_header() << '\n';
  for (double eps : cfg.epsilons) {
    const AdversaryBudget budget(eps, cfg.ball_norm);
    const double eps_b = budget.metric_radius(m, data.feature_dim());
    const DualSolution dual = local_worst_case_risk(problem, eps_b, cfg.solver);
    SweepRow row;
    row.epsilon = eps;
    row.bound = assemble_bound(*model, data, dual, eps_b, cfg.delta, cfg.mode);
    const AttackResult a = transport_map_apply(*model, data, budget, m, cfg.solver);
    row.adversarial_risk = a.adversarial_risk;
    flags.note(dual.solver_status, row.bound.heuristic_flag);
    flags.note(a.status, a.heuristic);
    csv << sweep_csv_row(row) << '\n';
  }
  emit(cfg, out, csv.str());
  return flags.code(cfg.strict);
}

void write_error(std::ostream& err, const std::string& kind, const std::string& message) {
  Json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  err << j.dump() << '\n';
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw InvalidInput("empty entry in list '" + text + "'");
    out.push_back(parse_double(std::string_view(item).substr(b, e - b + 1)));
  }
  if (out.empty()) throw InvalidInput("empty list");
  return out;
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::Certify:
      return "certify";
    case Command::Attack:
      return "attack";
    case Command::Train:
      return "train";
    case Command::Verify:
      return "verify";
    case Command::Sweep:
      return "sweep";
  }
  return "unknown";
}

Command parse_command(const std::string& text) {
  if (text == "certify") return Command::Certify;
  if (text == "attack") return Command::Attack;
  if (text == "train") return Command::Train;
  if (text == "verify") return Command::Verify;
  if (text == "sweep") return Command::Sweep;
  throw InvalidInput("unknown command '" + text + "'");
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
    if (!(cfg.ball_norm >= 1.0)) throw InvalidInput("ball norm must be >= 1");
    cfg.solver.validate();
    switch (cfg.command) {
      case Command::Certify:
        return run_certify(cfg, out);
      case Command::Attack:
        return run_attack(cfg, out);
      case Command::Train:
        return run_train(cfg, out);
      case Command::Verify:
        return run_verify(cfg, out);
      case Command::Sweep:
        return run_sweep(cfg, out);
    }
  } catch (const InvalidInput& e) {
    write_error(err, "invalid-input", e.what());
    return kExitInvalidConfig;
  } catch (const AssumptionViolation& e) {
    write_error(err, "assumption-violation", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    write_error(err, "internal", e.what());
    return kExitSolver;
  }
  return kExitInvalidConfig;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adversarial risk certification for SVMs, kernel SVMs, networks and PCA"};
  std::string command = "certify", epsilon = "0", mode = "eq4", family = "linear-svm";
  std::string eta_grid, hidden;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  RunConfig cfg;
  app.add_option("--command", command, "certify | attack | train | verify | sweep");
  app.add_option("--model", cfg.model_path, "model JSON");
  app.add_option("--data", cfg.data_path, "dataset CSV or synthetic JSON descriptor");
  app.add_option("--epsilon", epsilon, "comma-separated adversary radii");
  app.add_option("--delta", cfg.delta, "confidence parameter in (0, 1)");
  app.add_option("--mode", mode, "eq3 | eq4");
  app.add_option("--seed", seed, "run seed (default: $ADVRISK_SEED, else 0)");
  app.add_option("--out", cfg.output_path, "report path (default: stdout)");
  app.add_option("--threads", threads, "worker threads");
  app.add_option("--grid-points", cfg.solver.grid_points_per_dim, "grid points per dimension");
  app.add_option("--pga-restarts", cfg.solver.pga_restarts, "gradient-ascent restarts");
  app.add_option("--pga-steps", cfg.solver.pga_steps, "gradient-ascent steps");
  app.add_option("--tolerance", cfg.solver.tolerance, "bisection and search tolerance");
  app.add_option("--ball-norm", cfg.ball_norm, "adversary ball norm q (use inf for max norm)");
  app.add_flag("--strict", cfg.strict, "exit 3 on budget exhaustion or heuristic solves");
  app.add_option("--expected", cfg.expected_path, "oracle values for verify");
  app.add_option("--family", family, "training family: linear-svm | neural-net");
  app.add_option("--eta-grid", eta_grid, "comma-separated eta values");
  app.add_option("--epochs", cfg.train.epochs, "training iterations per eta");
  app.add_option("--step-size", cfg.train.step_size, "initial step size");
  app.add_option("--class-radius", cfg.train.class_radius, "Lambda for linear SVM training");
  app.add_option("--feature-radius", cfg.train.feature_radius, "feature radius for training");
  app.add_option("--hidden", hidden, "comma-separated hidden widths");
  app.add_option("--activation", cfg.train.activation, "relu | tanh | identity");
  app.add_option("--gamma", cfg.train.gamma, "ramp-loss margin");
  app.add_option("--spectral-cap", cfg.train.spectral_cap, "per-layer spectral cap");
  app.add_option("--frobenius-cap", cfg.train.frobenius_cap, "per-layer Frobenius cap");
  app.add_option("--model-out", cfg.model_out, "write the trained model here");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    write_error(err, "invalid-input", e.what());
    return kExitInvalidConfig;
  }
  try {
    cfg.command = parse_command(command);
    cfg.epsilons = parse_list(epsilon);
    cfg.mode = parse_bound_mode(mode);
    if (seed) {
      cfg.seed = *seed;
    } else if (const char* env = std::getenv("ADVRISK_SEED")) {
      cfg.seed = std::stoull(env);
    }
    if (threads < 1) throw InvalidInput("--threads must be at least 1");
    cfg.solver.threads = threads;
    cfg.solver.seed = cfg.seed;
    cfg.train.model_family = parse_model_family(family);
    if (!eta_grid.empty()) cfg.train.eta_grid = parse_list(eta_grid);
    if (!hidden.empty()) {
      cfg.train.hidden_widths.clear();
      for (double w : parse_list(hidden)) cfg.train.hidden_widths.push_back(static_cast<int>(w));
    }
  } catch (const InvalidInput& e) {
    write_error(err, "invalid-input", e.what());
    return kExitInvalidConfig;
  } catch (const std::logic_error& e) {
    write_error(err, "invalid-input", std::string("ADVRISK_SEED: ") + e.what());
    return kExitInvalidConfig;
  }
  return run(cfg, out, err);
}

}  // namespace advrisk
