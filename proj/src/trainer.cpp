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

#include "advrisk/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "advrisk/attack.hpp"
#include "advrisk/error.hpp"
#include "advrisk/linalg.hpp"
#include "advrisk/parallel.hpp"

namespace advrisk {

namespace {

constexpr double kDivergenceFactor = 10.0;

double empirical_risk(const LossModel& model, const Dataset& data) {
  double total = 0.0;
  for (const auto& z : data.instances()) total += model.loss(z.features, z.label.value_or(0));
  return total / static_cast<double>(data.size());
}

double budget_radius(const LossModel& model, const AdversaryBudget& budget) {
  return budget.metric_radius(model.metric(), model.feature_dim());
}

struct Run {
  std::unique_ptr<LossModel> model;
  double objective = 0.0;
  bool diverged = false;
};

// ---------------------------------------------------------------- linear SVM

Run train_linear(const Dataset& data, const AdversaryBudget& budget, double eta,
                 const TrainConfig& cfg) {
  const int d = data.feature_dim();
  const double lam = cfg.class_radius;
  Vector w = Vector::Zero(d);
  auto make = [&](const Vector& v) { return LinearSvmModel(v, lam, cfg.feature_radius); };
  const double eps_b = budget_radius(make(w), budget);
  const double n = static_cast<double>(data.size());

  auto objective = [&](const Vector& v) {
    return surrogate_objective(make(v), data, eta, budget);
  };
  const double initial = objective(w);
  Run run{std::make_unique<LinearSvmModel>(make(w)), initial, false};
  Vector best = w;
  double best_obj = initial;

  for (int t = 0; t < cfg.epochs; ++t) {
    Vector g = Vector::Zero(d);
    for (const auto& z : data.instances()) {
      const double y = *z.label;
      if (1.0 - y * w.dot(z.features) > 0.0) g -= y * z.features;
    }
    g /= n;
    if (eta * eps_b != 0.0) {
      // Active piece of max(|w|, max_i 2 y_i w.x_i); the norm term wins ties,
      // then the smallest sample index.
      double top = w.norm();
      Vector active = top > 0.0 ? Vector(w / top) : Vector(Vector::Zero(d));
      for (const auto& z : data.instances()) {
        const double v = 2.0 * (*z.label) * w.dot(z.features);
        if (v > top) {
          top = v;
          active = 2.0 * (*z.label) * z.features;
        }
      }
      g += eta * eps_b * active;
    }
    w -= (cfg.step_size / std::sqrt(t + 1.0)) * g;
    const double norm = w.norm();
    if (norm > lam) w *= lam / norm;
    const double obj = objective(w);
    if (!std::isfinite(obj) || obj > kDivergenceFactor * initial) {
      run.diverged = true;
      break;
    }
    if (obj < best_obj) {
      best_obj = obj;
      best = w;
    }
  }
  run.model = std::make_unique<LinearSvmModel>(make(best));
  run.objective = best_obj;
  return run;
}

// ---------------------------------------------------------------- network

std::vector<Layer> initial_layers(const Dataset& data, const TrainConfig& cfg, int classes) {
  std::mt19937_64 rng(cfg.seed);
  std::vector<int> widths{data.feature_dim()};
  for (int h : cfg.hidden_widths) widths.push_back(h);
  widths.push_back(classes);
  std::vector<Layer> layers;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(widths[i]));
    std::uniform_real_distribution<double> unif(-bound, bound);
    Layer l;
    l.weights.resize(widths[i + 1], widths[i]);
    for (Eigen::Index c = 0; c < l.weights.cols(); ++c)
      for (Eigen::Index r = 0; r < l.weights.rows(); ++r) l.weights(r, c) = unif(rng);
    const bool last = i + 2 == widths.size();
    l.activation = last ? Activation::parse("identity")
                        : Activation::parse(cfg.activation, cfg.activation_scale);
    l.spectral_cap = cfg.spectral_cap;
    l.frobenius_cap = cfg.frobenius_cap;
    layers.push_back(std::move(l));
  }
  return layers;
}

void project_caps(Layer& l) {
  const SpectralEstimate est = power_iteration(l.weights);
  if (est.value > *l.spectral_cap) l.weights *= *l.spectral_cap / est.value;
  // Power iteration can undershoot; the stored weights must respect the cap.
  const double exact = spectral_norm_exact(l.weights);
  if (exact > *l.spectral_cap) l.weights *= *l.spectral_cap / exact;
  const double frob = l.weights.norm();
  if (frob > *l.frobenius_cap) l.weights *= *l.frobenius_cap / frob;
}

Run train_network(const Dataset& data, const AdversaryBudget& budget, double eta,
                  const TrainConfig& cfg) {
  const int classes = data.label_set().classes();
  std::vector<Layer> layers = initial_layers(data, cfg, classes);
  for (auto& l : layers) project_caps(l);
  auto make = [&](const std::vector<Layer>& ls) {
    return NeuralNetModel(ls, cfg.gamma, cfg.feature_radius);
  };
  NeuralNetModel current = make(layers);
  const double eps_b = budget_radius(current, budget);
  const double n = static_cast<double>(data.size());
  const double initial = surrogate_objective(current, data, eta, budget);
  Run run{std::make_unique<NeuralNetModel>(current), initial, false};
  std::vector<Layer> best = layers;
  double best_obj = initial;
  const std::size_t depth = layers.size();

  for (int t = 0; t < cfg.epochs; ++t) {
    std::vector<Matrix> grads(depth);
    for (std::size_t k = 0; k < depth; ++k)
      grads[k] = Matrix::Zero(layers[k].weights.rows(), layers[k].weights.cols());
    std::vector<Matrix> per;

    // Empirical ramp loss, and the active sample of the data-dependent term.
    double top_data = -kInfinity;
    std::size_t active = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const Instance& z = data[i];
      const auto trace = current.forward_trace(z.features);
      const Vector og = current.loss_output_gradient(trace.output, *z.label);
      if (!og.isZero(0.0)) {
        current.backward(trace, og, &per);
        for (std::size_t k = 0; k < depth; ++k) grads[k] += per[k] / n;
      }
      const Vector& h = trace.output;
      const double v = (margin_operator(h, *z.label) + h.maxCoeff() - h.minCoeff()) / cfg.gamma;
      if (v > top_data) {
        top_data = v;
        active = i;
      }
    }

    if (eta * eps_b != 0.0) {
      std::vector<SpectralEstimate> est(depth);
      double lip = 2.0 / cfg.gamma;
      for (std::size_t k = 0; k < depth; ++k) {
        est[k] = power_iteration(layers[k].weights);
        lip *= layers[k].activation.lipschitz() * est[k].value;
      }
      const double scale = eta * eps_b;
      if (lip >= top_data) {
        for (std::size_t k = 0; k < depth; ++k) {
          if (est[k].value == 0.0) continue;
          grads[k] += scale * (lip / est[k].value) * est[k].left * est[k].right.transpose();
        }
      } else {
        const Instance& z = data[active];
        const auto trace = current.forward_trace(z.features);
        const Vector& h = trace.output;
        Vector og = Vector::Zero(h.size());
        Eigen::Index rival = -1;
        for (Eigen::Index j = 0; j < h.size(); ++j) {
          if (j == *z.label - 1) continue;
          if (rival < 0 || h[j] > h[rival]) rival = j;
        }
        Eigen::Index hi = 0;
        Eigen::Index lo = 0;
        h.maxCoeff(&hi);
        h.minCoeff(&lo);
        og[*z.label - 1] += 1.0;
        og[rival] -= 1.0;
        og[hi] += 1.0;
        og[lo] -= 1.0;
        og /= cfg.gamma;
        current.backward(trace, og, &per);
        for (std::size_t k = 0; k < depth; ++k) grads[k] += scale * per[k];
      }
    }

    const double step = cfg.step_size / std::sqrt(t + 1.0);
    for (std::size_t k = 0; k < depth; ++k) {
      layers[k].weights -= step * grads[k];
      project_caps(layers[k]);
    }
    current = make(layers);
    const double obj = surrogate_objective(current, data, eta, budget);
    if (!std::isfinite(obj) || obj > kDivergenceFactor * initial) {
      run.diverged = true;
      break;
    }
    if (obj < best_obj) {
      best_obj = obj;
      best = layers;
    }
  }
  run.model = std::make_unique<NeuralNetModel>(make(best));
  run.objective = best_obj;
  return run;
}

}  // namespace

std::string to_string(ModelFamily family) {
  return family == ModelFamily::LinearSvm ? "linear-svm" : "neural-net";
}

ModelFamily parse_model_family(const std::string& text) {
  if (text == "linear-svm" || text == "linear_svm") return ModelFamily::LinearSvm;
  if (text == "neural-net" || text == "neural_net") return ModelFamily::NeuralNet;
  throw InvalidInput("unsupported model family '" + text + "'");
}

std::vector<double> default_eta_grid() {
  std::vector<double> grid(11);
  for (int i = 0; i <= 10; ++i) grid[i] = i / 10.0;
  return grid;
}

void TrainConfig::validate() const {
  if (eta_grid.empty()) throw InvalidInput("eta grid must be nonempty");
  for (double e : eta_grid)
    if (!(e >= 0.0 && e <= 1.0)) throw InvalidInput("eta values must lie in [0, 1]");
  if (epochs < 0) throw InvalidInput("epochs must be non-negative");
  if (!(step_size > 0.0)) throw InvalidInput("step size must be positive");
  if (!(class_radius >= 0.0)) throw InvalidInput("class radius must be non-negative");
  if (!(feature_radius >= 0.0)) throw InvalidInput("feature radius must be non-negative");
  if (model_family == ModelFamily::NeuralNet) {
    if (hidden_widths.size() > 2) throw InvalidInput("networks are limited to depth 3");
    for (int w : hidden_widths)
      if (w < 1 || w > 32) throw InvalidInput("hidden widths must lie in [1, 32]");
    if (!(gamma > 0.0)) throw InvalidInput("gamma must be positive");
    if (!(spectral_cap > 0.0) || !(frobenius_cap > 0.0))
      throw InvalidInput("weight caps must be positive");
    Activation::parse(activation, activation_scale);
  }
  if (threads < 1) throw InvalidInput("threads must be at least 1");
  attack.validate();
}

double surrogate_objective(const LossModel& model, const Dataset& data, double eta,
                           const AdversaryBudget& budget) {
  const double emp = empirical_risk(model, data);
  const double eps_b = budget_radius(model, budget);
  if (eta == 0.0 || eps_b == 0.0) return emp;
  return emp + eta * model.lambda_plus_analytic(data) * eps_b;
}

TrainResult robust_train(const Dataset& data, const AdversaryBudget& budget,
                         const TrainConfig& cfg) {
  cfg.validate();
  if (!data.label_set().labeled()) throw InvalidInput("robust training needs labeled data");
  if (cfg.model_family == ModelFamily::LinearSvm &&
      data.label_set().kind() != LabelSet::Kind::Binary)
    throw InvalidInput("linear SVM training needs binary labels");
  if (cfg.model_family == ModelFamily::NeuralNet &&
      data.label_set().kind() != LabelSet::Kind::MultiClass)
    throw InvalidInput("network training needs multi-class labels {1..k}");

  const std::size_t runs = cfg.eta_grid.size();
  std::vector<Run> results(runs);
  InnerSupConfig attack_cfg = cfg.attack;
  attack_cfg.threads = 1;
  std::vector<double> adv(runs, 0.0);
  parallel_for(runs, cfg.threads, [&](std::size_t k) {
    const double eta = cfg.eta_grid[k];
    results[k] = cfg.model_family == ModelFamily::LinearSvm ? train_linear(data, budget, eta, cfg)
                                                            : train_network(data, budget, eta, cfg);
    const ProductMetric m = results[k].model->metric();
    adv[k] = transport_map_apply(*results[k].model, data, budget, m, attack_cfg).adversarial_risk;
  });

  TrainResult out;
  out.eta_grid = cfg.eta_grid;
  out.adversarial_risk_trace = adv;
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < runs; ++k) {
    out.objective_trace.push_back(results[k].objective);
    out.diverged.push_back(results[k].diverged);
    if (results[k].diverged) continue;
    if (!best || results[k].objective < results[*best].objective ||
        (results[k].objective == results[*best].objective &&
         cfg.eta_grid[k] < cfg.eta_grid[*best]))
      best = k;
  }
  if (!best) throw AssumptionViolation("every training run diverged");
  out.best_eta = cfg.eta_grid[*best];
  out.best_model = results[*best].model->clone();
  for (auto& r : results) out.models.push_back(std::move(r.model));
  return out;
}

}  // namespace advrisk
