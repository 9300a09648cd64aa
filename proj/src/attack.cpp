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

#include "advrisk/attack.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "advrisk/error.hpp"
#include "advrisk/linalg.hpp"
#include "advrisk/parallel.hpp"

namespace advrisk {

namespace {

constexpr int kZoomSeeds = 3;

struct Point {
  double value;
  double shift;  // |x' - x|_q
  Vector x;
};

bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

bool better(const Point& p, const Point& q) {
  if (p.value != q.value) return p.value > q.value;
  if (p.shift != q.shift) return p.shift < q.shift;
  return lex_less(p.x, q.x);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Search {
 public:
  Search(const LossModel& f, const Instance& z, const AdversaryBudget& budget,
         const InnerSupConfig& cfg)
      : f_(f), z_(z), budget_(budget), cfg_(cfg), label_(z.label.value_or(0)),
        radius_(f.feature_radius()) {}

  Point make(const Vector& raw) const {
    Vector x = raw;
    const bool inside = lp_norm(x - z_.features, budget_.ball_norm) <= budget_.epsilon &&
                        x.norm() <= radius_;
    if (!inside)
      x = project_ball_intersection(x, z_.features, budget_.epsilon, budget_.ball_norm, radius_);
    return {f_.loss(x, label_), lp_norm(x - z_.features, budget_.ball_norm), std::move(x)};
  }

  Point origin() const {
    return {f_.loss(z_.features, label_), 0.0, z_.features};
  }

  Point grid() const {
    const int dim = z_.dim();
    const int g = cfg_.grid_points_per_dim;
    const double eps = budget_.epsilon;
    const double spacing = 2.0 * eps / (g - 1);
    std::vector<Point> pts;
    pts.push_back(origin());
    const int total = dim == 1 ? g : g * g;
    for (int k = 0; k < total; ++k) {
      Vector x = z_.features;
      int rem = k;
      for (int d = 0; d < dim; ++d) {
        const int j = rem % g;
        rem /= g;
        x[d] += j == g - 1 ? eps : -eps + spacing * j;
      }
      pts.push_back(make(x));
    }
    std::stable_sort(pts.begin(), pts.end(), better);

    // Zoom around a few well-separated leaders.
    std::vector<Vector> seeds;
    for (const auto& p : pts) {
      bool far = true;
      for (const auto& s : seeds)
        if ((s - p.x).cwiseAbs().maxCoeff() <= spacing) far = false;
      if (far) seeds.push_back(p.x);
      if (static_cast<int>(seeds.size()) == kZoomSeeds) break;
    }
    Point best = pts.front();
    const int per = std::max(2, cfg_.refine_points);
    for (const auto& seed : seeds) {
      Vector center = seed;
      double h = spacing;
      for (int round = 0; round < cfg_.refine_rounds; ++round) {
        Point local = make(center);
        const int count = dim == 1 ? per : per * per;
        for (int k = 0; k < count; ++k) {
          Vector x = center;
          int rem = k;
          for (int d = 0; d < dim; ++d) {
            const int j = rem % per;
            rem /= per;
            x[d] += h * (-1.0 + 2.0 * j / (per - 1));
          }
          Point p = make(x);
          if (better(p, local)) local = p;
        }
        if (better(local, best)) best = local;
        center = local.x;
        h /= 4.0;
      }
    }
    return best;
  }

  Point ascend(std::size_t index, bool* exhausted) const {
    const int dim = z_.dim();
    const double eps = budget_.epsilon;
    Point best = origin();
    const double m_scale = std::max(f_.bound_m(), 1e-12);
    const int steps = cfg_.pga_steps;
    const int tail = std::max(1, steps / 10);
    for (int r = 0; r < cfg_.pga_restarts; ++r) {
      Vector x = z_.features;
      if (r > 0) {
        std::mt19937_64 rng(splitmix64(cfg_.seed ^ splitmix64(index * 1315423911ULL + r)));
        std::normal_distribution<double> normal;
        Vector v(dim);
        for (int d = 0; d < dim; ++d) v[d] = normal(rng);
        x = z_.features + v * (eps / std::max(v.norm(), 1e-300));
      }
      Point run_best = make(x);
      x = run_best.x;
      double before_tail = run_best.value;
      for (int t = 0; t < steps; ++t) {
        if (t == steps - tail) before_tail = run_best.value;
        const Vector g = f_.feature_subgradient(x, label_);
        const double gn = g.norm();
        if (!(gn > 0.0) || !std::isfinite(gn)) break;
        const double eta = cfg_.pga_step_size * eps / std::sqrt(t + 1.0);
        Point p = make(x + (eta / gn) * g);
        x = p.x;
        if (better(p, run_best)) run_best = std::move(p);
      }
      if (run_best.value - before_tail > 1e-3 * m_scale) *exhausted = true;
      if (better(run_best, best)) best = std::move(run_best);
    }
    return best;
  }

 private:
  const LossModel& f_;
  const Instance& z_;
  const AdversaryBudget& budget_;
  const InnerSupConfig& cfg_;
  int label_;
  double radius_;
};

}  // namespace

Perturbation worst_case_perturbation(const LossModel& f, const Instance& z,
                                     const AdversaryBudget& budget, const InnerSupConfig& cfg,
                                     std::size_t index) {
  cfg.validate();
  f.check_instance(z);
  if (!(budget.epsilon >= 0.0)) throw InvalidInput("adversary radius must be non-negative");
  const int label = z.label.value_or(0);
  Perturbation out;
  out.method = z.dim() <= 2 ? InnerMethod::Grid : InnerMethod::Pga;
  if (budget.epsilon == 0.0) {
    out.x_star = z.features;
    out.loss = f.loss(z.features, label);
    return out;
  }
  if (auto exact = f.exact_perturbation(z.features, label, budget.epsilon, budget.ball_norm)) {
    out.x_star = std::move(*exact);
    out.loss = f.loss(out.x_star, label);
    out.method = InnerMethod::Grid;
    return out;
  }
  Search search(f, z, budget, cfg);
  Point best;
  if (out.method == InnerMethod::Grid) {
    best = search.grid();
  } else {
    bool exhausted = false;
    best = search.ascend(index, &exhausted);
    if (exhausted) out.status = SolverStatus::BudgetExhausted;
  }
  out.x_star = std::move(best.x);
  out.loss = f.loss(out.x_star, label);
  return out;
}

AttackResult transport_map_apply(const LossModel& f, const Dataset& data,
                                 const AdversaryBudget& budget, const ProductMetric& m,
                                 const InnerSupConfig& cfg) {
  cfg.validate();
  f.check_dataset(data);
  const std::size_t n = data.size();
  std::vector<Perturbation> results(n);
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    results[i] = worst_case_perturbation(f, data[i], budget, cfg, i);
  });

  AttackResult out{data, {}, 0.0, 0.0, 0.0, 0.0};
  std::vector<Instance> pushed;
  pushed.reserve(n);
  out.per_sample_loss.reserve(n);
  double adv = 0.0;
  double clean = 0.0;
  out.method = data.feature_dim() <= 2 ? InnerMethod::Grid : InnerMethod::Pga;
  out.heuristic = out.method == InnerMethod::Pga;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = data[i].label.value_or(0);
    pushed.emplace_back(results[i].x_star, data[i].label);
    const double loss = f.loss(results[i].x_star, label);
    out.per_sample_loss.push_back(loss);
    adv += loss;
    clean += f.loss(data[i].features, label);
    if (results[i].status == SolverStatus::BudgetExhausted)
      out.status = SolverStatus::BudgetExhausted;
  }
  out.pushforward = Dataset(std::move(pushed), data.label_set());
  out.adversarial_risk = adv / static_cast<double>(n);
  out.clean_risk = clean / static_cast<double>(n);
  out.coupling_cost = coupling_cost(data, out.pushforward, m);
  out.epsilon_b = budget.metric_radius(m, data.feature_dim());
  return out;
}

double coupling_cost(const Dataset& original, const Dataset& pushed, const ProductMetric& m) {
  if (original.size() != pushed.size())
    throw InvalidInput("coupling needs index-aligned datasets of equal length");
  double total = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i)
    total += distance_z(original[i], pushed[i], m);
  return total / static_cast<double>(original.size());
}

}  // namespace advrisk
