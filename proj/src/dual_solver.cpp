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

#include "advrisk/dual_solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "advrisk/error.hpp"
#include "advrisk/linalg.hpp"
#include "advrisk/parallel.hpp"

namespace advrisk {

namespace {

constexpr double kRootLevel = 1e-6;
constexpr double kMaxBracket = 1152921504606846976.0;  // 2^60
constexpr int kGoldenIterations = 200;
constexpr int kPlotPoints = 33;

using Vertex = DualProblem::Vertex;

struct Candidate {
  double b;
  double a;
  int label;   // index into the label options
  int pool;    // 0 lattice, 1 local pool, 2 the sample itself
  int index;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x853c49e6748fea9bULL;
  for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
  return h;
}

/// Upper concave hull of (b, a) restricted to the part that can maximise
/// a - lambda b for some lambda >= 0. Vertices come out with b and a strictly
/// increasing and slopes strictly decreasing.
std::vector<Candidate> upper_hull(std::vector<Candidate> pts) {
  std::stable_sort(pts.begin(), pts.end(), [](const Candidate& p, const Candidate& q) {
    if (p.b != q.b) return p.b < q.b;
    return p.a > q.a;
  });
  std::vector<Candidate> hull;
  for (const auto& p : pts) {
    // hull.back() carries the largest loss so far; anything not above it is
    // dominated by a closer point.
    if (!hull.empty() && p.a <= hull.back().a) continue;
    while (hull.size() >= 2) {
      const Candidate& o = hull[hull.size() - 2];
      const Candidate& q = hull.back();
      const double cross = (q.b - o.b) * (p.a - o.a) - (q.a - o.a) * (p.b - o.b);
      if (cross >= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }
  return hull;
}

double vertex_value(double a, double b, double lambda) { return a - lambda * b; }

/// Gradient in x' of the feature distance d_X(x, x').
Vector distance_gradient(const ProductMetric& m, const VectorRef& x, const VectorRef& xp) {
  const Vector v = xp - x;
  Vector g = Vector::Zero(v.size());
  if (m.feature_kind() == ProductMetric::FeatureKind::GaussianRkhs) {
    const double s2 = m.sigma() * m.sigma();
    const double d = m.displacement_distance(v);
    if (d == 0.0) return g;
    const double k = std::exp(-v.squaredNorm() / s2);
    return (k * 2.0 / s2 / d) * v;
  }
  const double p = m.feature_norm();
  const double n = lp_norm(v, p);
  if (n == 0.0) return g;
  if (std::isinf(p)) {
    Eigen::Index j = 0;
    v.cwiseAbs().maxCoeff(&j);
    g[j] = v[j] > 0 ? 1.0 : -1.0;
    return g;
  }
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const double s = v[j] > 0 ? 1.0 : (v[j] < 0 ? -1.0 : 0.0);
    g[j] = s * std::pow(std::abs(v[j]) / n, p - 1.0);
  }
  return g;
}

class Builder {
 public:
  Builder(const LossModel& f, const Dataset& data, const ProductMetric& m,
          const InnerSupConfig& cfg, const std::vector<double>& focus)
      : f_(f), data_(data), m_(m), cfg_(cfg), focus_(focus) {
    const auto labels = f.label_set().labels();
    if (labels.empty())
      options_.push_back(std::nullopt);
    else
      for (int y : labels) options_.push_back(y);
    dim_ = data.feature_dim();
    radius_ = m.feature_radius();
  }

  bool use_grid() const { return dim_ <= 2; }

  void build_lattice() {
    const int g = cfg_.grid_points_per_dim;
    spacing_ = g > 1 ? 2.0 * radius_ / (g - 1) : 2.0 * radius_;
    std::vector<double> coords(g);
    for (int j = 0; j < g; ++j) coords[j] = -radius_ + spacing_ * j;
    if (g > 1) coords[g - 1] = radius_;
    if (dim_ == 1) {
      for (double c : coords) lattice_.push_back(Vector::Constant(1, c));
    } else {
      for (double c0 : coords)
        for (double c1 : coords) lattice_.push_back(clip_to_ball(Vector{{c0, c1}}, radius_));
    }
    lattice_loss_.assign(options_.size(), std::vector<double>(lattice_.size()));
    for (std::size_t l = 0; l < options_.size(); ++l)
      for (std::size_t p = 0; p < lattice_.size(); ++p)
        lattice_loss_[l][p] = f_.loss(lattice_[p], options_[l].value_or(0));
  }

  void build_anchors() {
    const double top = f_.lambda_plus_analytic(data_);
    const int count = std::max(2, cfg_.pga_anchors);
    for (int a = 0; a < count; ++a) anchors_.push_back(top * a / (count - 1));
    for (double l : focus_) anchors_.push_back(l);
    std::sort(anchors_.begin(), anchors_.end());
    anchors_.erase(std::unique(anchors_.begin(), anchors_.end()), anchors_.end());
  }

  struct SampleResult {
    std::vector<Vertex> hull;
    bool exhausted = false;
  };

  SampleResult solve(std::size_t i) const {
    const Instance& z = data_[i];
    Local local{z, {}, {}};
    local.cands.push_back({0.0, f_.loss(z.features, z.label.value_or(0)), label_index(z.label),
                           2, 0});
    SampleResult out;
    if (use_grid()) {
      for (std::size_t p = 0; p < lattice_.size(); ++p) {
        const double dx = m_.feature_distance(z.features, lattice_[p]);
        for (std::size_t l = 0; l < options_.size(); ++l)
          local.cands.push_back({dx + m_.label_distance(options_[l], z.label),
                                 lattice_loss_[l][p], static_cast<int>(l), 0,
                                 static_cast<int>(p)});
      }
      auto hull = upper_hull(std::move(local.cands));
      local.cands = hull;
      refine(local, hull);
      hull = upper_hull(std::move(local.cands));
      out.hull = materialise(local, hull);
    } else {
      out.exhausted = ascend(local, i);
      out.hull = materialise(local, upper_hull(std::move(local.cands)));
    }
    return out;
  }

 private:
  struct Local {
    const Instance& z;
    std::vector<Candidate> cands;
    std::vector<Vector> pool;
  };

  int label_index(const std::optional<int>& y) const {
    for (std::size_t l = 0; l < options_.size(); ++l)
      if (options_[l] == y) return static_cast<int>(l);
    return 0;
  }

  const Vector& point(const Local& local, const Candidate& c) const {
    if (c.pool == 0) return lattice_[c.index];
    if (c.pool == 1) return local.pool[c.index];
    return local.z.features;
  }

  Candidate evaluate(Local& local, const Vector& x, int l) const {
    const double b =
        m_.feature_distance(local.z.features, x) + m_.label_distance(options_[l], local.z.label);
    const double a = f_.loss(x, options_[l].value_or(0));
    local.pool.push_back(x);
    return {b, a, l, 1, static_cast<int>(local.pool.size() - 1)};
  }

  void zoom(Local& local, const Candidate& start, double lambda) const {
    const int pts = std::max(2, cfg_.refine_points);
    Vector center = point(local, start);
    double best = vertex_value(start.a, start.b, lambda);
    double h = spacing_;
    std::vector<Candidate> found;
    for (int round = 0; round < cfg_.refine_rounds; ++round) {
      Vector next = center;
      const int total = dim_ == 1 ? pts : pts * pts;
      for (int k = 0; k < total; ++k) {
        Vector x = center;
        int rem = k;
        for (int d = 0; d < dim_; ++d) {
          const int j = rem % pts;
          rem /= pts;
          x[d] += h * (-1.0 + 2.0 * j / (pts - 1));
        }
        x = clip_to_ball(x, radius_);
        const Candidate c = evaluate(local, x, start.label);
        found.push_back(c);
        const double v = vertex_value(c.a, c.b, lambda);
        if (v > best) {
          best = v;
          next = x;
        }
      }
      center = next;
      h /= 4.0;
    }
    local.cands.insert(local.cands.end(), found.begin(), found.end());
  }

  void refine(Local& local, const std::vector<Candidate>& hull) const {
    const std::size_t k = hull.size();
    const double top = k > 1 ? (hull[1].a - hull[0].a) / (hull[1].b - hull[0].b) : 0.0;
    std::vector<double> lambdas;
    const int count = std::max(2, cfg_.refine_lambdas);
    for (int j = 0; j < count; ++j) lambdas.push_back(top * j / (count - 1));
    lambdas.insert(lambdas.end(), focus_.begin(), focus_.end());
    for (double lambda : lambdas) {
      std::size_t best = 0;
      double v = -kInfinity;
      for (std::size_t j = 0; j < k; ++j) {
        const double w = vertex_value(hull[j].a, hull[j].b, lambda);
        if (w > v) {
          v = w;
          best = j;
        }
      }
      zoom(local, hull[best], lambda);
    }
  }

  Vector random_start(std::mt19937_64& rng) const {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif;
    Vector v(dim_);
    for (int d = 0; d < dim_; ++d) v[d] = normal(rng);
    const double n = v.norm();
    if (n == 0.0) return Vector::Zero(dim_);
    return v * (radius_ * std::pow(unif(rng), 1.0 / dim_) / n);
  }

  /// Multi-start projected subgradient ascent. Returns true when some run was
  /// still improving materially at the end of its step budget.
  bool ascend(Local& local, std::size_t i) const {
    const double m_scale = std::max(f_.bound_m(), 1e-12);
    const int steps = cfg_.pga_steps;
    const int tail = std::max(1, steps / 10);
    bool exhausted = false;
    for (std::size_t l = 0; l < options_.size(); ++l) {
      const int label = options_[l].value_or(0);
      Vector carried = local.z.features;
      for (std::size_t a = 0; a < anchors_.size(); ++a) {
        const double lambda = anchors_[a];
        Vector anchor_best = carried;
        double anchor_val = -kInfinity;
        for (int r = 0; r < cfg_.pga_restarts; ++r) {
          Vector x;
          if (r == 0) {
            x = local.z.features;
          } else if (r == 1) {
            x = carried;
          } else {
            std::mt19937_64 rng(mix_seed({cfg_.seed, i, l, a, static_cast<std::uint64_t>(r)}));
            x = random_start(rng);
          }
          Candidate c = evaluate(local, x, static_cast<int>(l));
          local.cands.push_back(c);
          double best = vertex_value(c.a, c.b, lambda);
          Vector best_x = x;
          double best_before_tail = best;
          for (int t = 0; t < steps; ++t) {
            if (t == steps - tail) best_before_tail = best;
            Vector g = f_.feature_subgradient(x, label) -
                       lambda * distance_gradient(m_, local.z.features, x);
            const double gn = g.norm();
            if (!(gn > 0.0) || !std::isfinite(gn)) break;
            const double eta = cfg_.pga_step_size * radius_ / std::sqrt(t + 1.0);
            x = clip_to_ball(x + (eta / gn) * g, radius_);
            c = evaluate(local, x, static_cast<int>(l));
            local.cands.push_back(c);
            const double v = vertex_value(c.a, c.b, lambda);
            if (v > best) {
              best = v;
              best_x = x;
            }
          }
          if (best - best_before_tail > 1e-3 * m_scale) exhausted = true;
          if (best > anchor_val) {
            anchor_val = best;
            anchor_best = best_x;
          }
        }
        carried = anchor_best;
      }
    }
    return exhausted;
  }

  std::vector<Vertex> materialise(const Local& local, const std::vector<Candidate>& hull) const {
    std::vector<Vertex> out;
    out.reserve(hull.size());
    for (const auto& c : hull) out.push_back({c.b, c.a, point(local, c), options_[c.label]});
    return out;
  }

  const LossModel& f_;
  const Dataset& data_;
  const ProductMetric& m_;
  const InnerSupConfig& cfg_;
  std::vector<double> focus_;
  std::vector<std::optional<int>> options_;
  int dim_ = 0;
  double radius_ = 0.0;
  double spacing_ = 0.0;
  std::vector<Vector> lattice_;
  std::vector<std::vector<double>> lattice_loss_;
  std::vector<double> anchors_;
};

}  // namespace

void InnerSupConfig::validate() const {
  if (grid_points_per_dim < 33) throw InvalidInput("grid_points_per_dim must be at least 33");
  if (pga_restarts < 8) throw InvalidInput("pga_restarts must be at least 8");
  if (pga_steps < 200) throw InvalidInput("pga_steps must be at least 200");
  if (!(pga_step_size > 0.0)) throw InvalidInput("pga_step_size must be positive");
  if (!(tolerance > 0.0)) throw InvalidInput("tolerance must be positive");
  if (refine_points < 2 || refine_rounds < 0 || refine_lambdas < 2)
    throw InvalidInput("invalid refinement settings");
  if (pga_anchors < 2) throw InvalidInput("pga_anchors must be at least 2");
  if (threads < 1) throw InvalidInput("threads must be at least 1");
}

std::string to_string(SolverStatus s) {
  return s == SolverStatus::Converged ? "converged" : "budget-exhausted";
}

std::string to_string(InnerMethod m) { return m == InnerMethod::Grid ? "grid" : "pga"; }

DualProblem::DualProblem(const LossModel& f, const Dataset& data, const ProductMetric& m,
                         const InnerSupConfig& cfg, const std::vector<double>& focus_lambdas) {
  cfg.validate();
  f.check_dataset(data);
  for (double l : focus_lambdas)
    if (!(l >= 0.0)) throw InvalidInput("lambda must be non-negative");
  bound_m_ = f.bound_m();
  diameter_ = diam_z(m);
  Builder builder(f, data, m, cfg, focus_lambdas);
  if (builder.use_grid()) {
    method_ = InnerMethod::Grid;
    builder.build_lattice();
  } else {
    method_ = InnerMethod::Pga;
    builder.build_anchors();
  }
  const std::size_t n = data.size();
  std::vector<Builder::SampleResult> results(n);
  parallel_for(n, cfg.threads, [&](std::size_t i) { results[i] = builder.solve(i); });
  hulls_.resize(n);
  losses_.resize(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    hulls_[i] = std::move(results[i].hull);
    losses_[i] = hulls_[i].front().a;
    total += losses_[i];
    if (results[i].exhausted) status_ = SolverStatus::BudgetExhausted;
  }
  empirical_risk_ = total / static_cast<double>(n);
}

double DualProblem::phi(std::size_t i, double lambda) const {
  double best = -kInfinity;
  for (const auto& v : hulls_[i]) best = std::max(best, vertex_value(v.a, v.b, lambda));
  return best;
}

InnerSupResult DualProblem::argmax(std::size_t i, double lambda) const {
  const auto& hull = hulls_[i];
  std::size_t best = 0;
  double value = -kInfinity;
  for (std::size_t j = 0; j < hull.size(); ++j) {
    const double v = vertex_value(hull[j].a, hull[j].b, lambda);
    if (v > value) {
      value = v;
      best = j;
    }
  }
  return {value, Instance(hull[best].x, hull[best].label), status_, method_};
}

double DualProblem::psi(double lambda) const {
  double total = 0.0;
  for (std::size_t i = 0; i < hulls_.size(); ++i) total += phi(i, lambda) - losses_[i];
  return total / static_cast<double>(hulls_.size());
}

double DualProblem::objective(double lambda, double eps) const {
  double total = 0.0;
  for (std::size_t i = 0; i < hulls_.size(); ++i) total += phi(i, lambda);
  return lambda * eps + total / static_cast<double>(hulls_.size());
}

double DualProblem::lambda_zero_onset() const {
  double onset = 0.0;
  for (const auto& hull : hulls_)
    if (hull.size() > 1) onset = std::max(onset, (hull[1].a - hull[0].a) / (hull[1].b - hull[0].b));
  return onset;
}

InnerSupResult inner_sup(const LossModel& f, double lambda, const Instance& z,
                         const ProductMetric& m, const InnerSupConfig& cfg) {
  if (!(lambda >= 0.0)) throw InvalidInput("lambda must be non-negative");
  f.check_instance(z);
  const Dataset single({z}, f.label_set());
  const DualProblem problem(f, single, m, cfg, {lambda});
  return problem.argmax(0, lambda);
}

double psi(const LossModel& f, double lambda, const Dataset& data, const ProductMetric& m,
           const InnerSupConfig& cfg) {
  if (!(lambda >= 0.0)) throw InvalidInput("lambda must be non-negative");
  return DualProblem(f, data, m, cfg, {lambda}).psi(lambda);
}

double lambda_plus(const DualProblem& problem, const InnerSupConfig& cfg) {
  const double target = kRootLevel * problem.bound_m();
  if (problem.psi(0.0) <= target) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (problem.psi(hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > kMaxBracket)
      throw AssumptionViolation("psi has no root below 2^60; the loss is not weakly Lipschitz");
  }
  while (hi - lo > cfg.tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (problem.psi(mid) <= target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double lambda_plus(const LossModel& f, const Dataset& data, const ProductMetric& m,
                   const InnerSupConfig& cfg) {
  return lambda_plus(DualProblem(f, data, m, cfg), cfg);
}

double lambda_minus(const DualProblem& problem, double eps, double lp, const InnerSupConfig& cfg) {
  if (!(eps >= 0.0)) throw InvalidInput("epsilon must be non-negative");
  if (!(lp >= 0.0)) throw InvalidInput("lambda_plus must be non-negative");
  if (lp == 0.0) return 0.0;
  const double target = lp * eps;
  if (problem.psi(lp) >= target) return lp;
  if (problem.psi(0.0) < target) return 0.0;
  double lo = 0.0;
  double hi = lp;
  while (hi - lo > cfg.tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (problem.psi(mid) >= target)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double lambda_minus(const LossModel& f, const Dataset& data, double eps, double lp,
                    const ProductMetric& m, const InnerSupConfig& cfg) {
  return lambda_minus(DualProblem(f, data, m, cfg), eps, lp, cfg);
}

namespace {

std::pair<double, double> zeta_from(const DualProblem& problem, double eps, double lp,
                                    const InnerSupConfig& cfg) {
  if (lp == 0.0) return {0.0, 0.0};
  const double m = problem.bound_m();
  if (eps > 0.0 && eps >= m / lp) return {0.0, m / eps};
  return {lambda_minus(problem, eps, lp, cfg), lp};
}

}  // namespace

std::pair<double, double> zeta_interval(const DualProblem& problem, double eps,
                                        const InnerSupConfig& cfg) {
  if (!(eps > 0.0)) throw InvalidInput("zeta interval needs a positive epsilon");
  return zeta_from(problem, eps, lambda_plus(problem, cfg), cfg);
}

std::pair<double, double> zeta_interval(const LossModel& f, const Dataset& data, double eps,
                                        const ProductMetric& m, const InnerSupConfig& cfg) {
  if (!(eps > 0.0)) throw InvalidInput("zeta interval needs a positive epsilon");
  return zeta_interval(DualProblem(f, data, m, cfg), eps, cfg);
}

DualSolution local_worst_case_risk(const DualProblem& problem, double eps,
                                   const InnerSupConfig& cfg) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw InvalidInput("epsilon must be non-negative");
  DualSolution s;
  s.epsilon = eps;
  s.empirical_risk = problem.empirical_risk();
  s.inner_method = problem.method();
  s.heuristic = problem.heuristic();
  s.solver_status = problem.status();
  s.lambda_plus = lambda_plus(problem, cfg);
  s.psi_at_lambda_plus = problem.psi(s.lambda_plus);
  s.lambda_zero_onset = problem.lambda_zero_onset();
  s.zeta_interval = zeta_from(problem, eps, s.lambda_plus, cfg);
  s.lambda_minus = s.lambda_plus == 0.0 ? 0.0 : lambda_minus(problem, eps, s.lambda_plus, cfg);

  std::vector<std::pair<double, double>> samples;
  auto g = [&](double lambda) {
    const double v = problem.objective(lambda, eps);
    samples.emplace_back(lambda, v);
    return v;
  };

  const double top = s.lambda_plus;
  if (eps == 0.0) {
    // Every lambda past the root attains the empirical risk.
    s.lambda_bar = top;
    s.risk_value = s.empirical_risk;
  } else {
    double best_l = 0.0;
    double best_v = g(0.0);
    auto consider = [&](double l, double v) {
      if (v < best_v || (v == best_v && l < best_l)) {
        best_v = v;
        best_l = l;
      }
    };
    consider(top, g(top));
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0;
    double b = top;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double gc = g(c);
    double gd = g(d);
    consider(c, gc);
    consider(d, gd);
    int it = 0;
    bool done = b - a <= cfg.tolerance;
    while (!done && it < kGoldenIterations) {
      ++it;
      if (gc <= gd) {
        b = d;
        d = c;
        gd = gc;
        c = b - inv_phi * (b - a);
        gc = g(c);
        consider(c, gc);
      } else {
        a = c;
        c = d;
        gc = gd;
        d = a + inv_phi * (b - a);
        gd = g(d);
        consider(d, gd);
      }
      done = b - a <= cfg.tolerance;
    }
    if (!done) s.solver_status = SolverStatus::BudgetExhausted;
    s.iterations = it;
    const double mid = 0.5 * (a + b);
    consider(mid, g(mid));
    s.lambda_bar = best_l;
    s.risk_value = best_v;
  }

  for (int k = 0; k < kPlotPoints; ++k) g(top * k / (kPlotPoints - 1));
  std::sort(samples.begin(), samples.end());
  samples.erase(std::unique(samples.begin(), samples.end(),
                            [](const auto& p, const auto& q) { return p.first == q.first; }),
                samples.end());
  s.objective_samples = std::move(samples);
  return s;
}

DualSolution local_worst_case_risk(const LossModel& f, const Dataset& data, double eps,
                                   const ProductMetric& m, const InnerSupConfig& cfg) {
  return local_worst_case_risk(DualProblem(f, data, m, cfg), eps, cfg);
}

}  // namespace advrisk
