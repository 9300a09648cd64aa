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

#ifndef ADVRISK_DUAL_SOLVER_HPP
#define ADVRISK_DUAL_SOLVER_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "advrisk/core.hpp"
#include "advrisk/models.hpp"

namespace advrisk {

struct InnerSupConfig {
  int grid_points_per_dim = 129;
  int pga_restarts = 8;
  int pga_steps = 200;
  /// First PGA step as a fraction of the feature radius; step t uses
  /// pga_step_size * r / sqrt(t + 1).
  double pga_step_size = 0.5;
  double tolerance = 1e-6;
  /// Zoom refinement around the maximisers at `refine_lambdas` evenly spaced
  /// lambda values on low-dimensional grids.
  int refine_points = 9;
  int refine_rounds = 6;
  int refine_lambdas = 129;
  /// Number of lambda anchors for the projected-gradient path.
  int pga_anchors = 16;
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;
};

enum class SolverStatus { Converged, BudgetExhausted };
enum class InnerMethod { Grid, Pga };

std::string to_string(SolverStatus s);
std::string to_string(InnerMethod m);

struct InnerSupResult {
  double value = 0.0;
  Instance maximizer;
  SolverStatus status = SolverStatus::Converged;
  InnerMethod method = InnerMethod::Grid;
};

/// Per-sample candidate envelopes for phi_lambda(z_i) = sup_z' f(z') - lambda d(z_i, z').
///
/// Candidates are generated once, independently of lambda: a radially
/// projected lattice with zoom refinement when the feature dimension is at
/// most 2, multi-start projected gradient ascent at a ladder of lambda
/// anchors otherwise. Only the upper concave hull of the (distance, loss)
/// pairs is retained, so phi is the exact maximum of finitely many affine
/// functions of lambda. The resulting psi is non-increasing, convex and
/// diam(Z)-Lipschitz by construction, and every candidate is a feasible
/// point, so each value is a lower bound on the true supremum.
class DualProblem {
 public:
  DualProblem(const LossModel& f, const Dataset& data, const ProductMetric& m,
              const InnerSupConfig& cfg, const std::vector<double>& focus_lambdas = {});

  std::size_t size() const { return hulls_.size(); }
  const std::vector<double>& losses() const { return losses_; }
  double empirical_risk() const { return empirical_risk_; }
  double bound_m() const { return bound_m_; }
  double diameter() const { return diameter_; }
  InnerMethod method() const { return method_; }
  SolverStatus status() const { return status_; }
  bool heuristic() const { return method_ == InnerMethod::Pga; }

  double phi(std::size_t i, double lambda) const;
  InnerSupResult argmax(std::size_t i, double lambda) const;
  /// mean_i phi(z_i) - f(z_i), summed in index order.
  double psi(double lambda) const;
  /// lambda * eps + mean_i phi(z_i).
  double objective(double lambda, double eps) const;

  /// Smallest lambda at which the computed psi is exactly zero. This is also
  /// the largest root, since psi is non-increasing.
  double lambda_zero_onset() const;

  std::size_t hull_size(std::size_t i) const { return hulls_[i].size(); }

  struct Vertex {
    double b;  // d_Z(z_i, z')
    double a;  // f(z')
    Vector x;
    std::optional<int> label;
  };

 private:
  std::vector<std::vector<Vertex>> hulls_;
  std::vector<double> losses_;
  double empirical_risk_ = 0.0;
  double bound_m_ = 0.0;
  double diameter_ = 0.0;
  InnerMethod method_ = InnerMethod::Grid;
  SolverStatus status_ = SolverStatus::Converged;

};

struct DualSolution {
  double epsilon = 0.0;
  double lambda_bar = 0.0;
  double risk_value = 0.0;
  double empirical_risk = 0.0;
  std::pair<double, double> zeta_interval{0.0, 0.0};
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  double lambda_zero_onset = 0.0;
  double psi_at_lambda_plus = 0.0;
  std::vector<std::pair<double, double>> objective_samples;
  SolverStatus solver_status = SolverStatus::Converged;
  InnerMethod inner_method = InnerMethod::Grid;
  bool heuristic = false;
  int iterations = 0;
};

InnerSupResult inner_sup(const LossModel& f, double lambda, const Instance& z,
                         const ProductMetric& m, const InnerSupConfig& cfg);

double psi(const LossModel& f, double lambda, const Dataset& data, const ProductMetric& m,
           const InnerSupConfig& cfg);

/// Infimum root of psi: bracket doubled from [0, 1] until psi <= 1e-6 M, then
/// bisected to width cfg.tolerance. The returned value satisfies psi <= 1e-6 M.
double lambda_plus(const DualProblem& problem, const InnerSupConfig& cfg);
double lambda_plus(const LossModel& f, const Dataset& data, const ProductMetric& m,
                   const InnerSupConfig& cfg);

/// sup { lambda in [0, lp] : psi(lambda) >= lp * eps }, or 0 when psi(0) < lp * eps.
double lambda_minus(const DualProblem& problem, double eps, double lp, const InnerSupConfig& cfg);
double lambda_minus(const LossModel& f, const Dataset& data, double eps, double lp,
                    const ProductMetric& m, const InnerSupConfig& cfg);

std::pair<double, double> zeta_interval(const DualProblem& problem, double eps,
                                        const InnerSupConfig& cfg);
std::pair<double, double> zeta_interval(const LossModel& f, const Dataset& data, double eps,
                                        const ProductMetric& m, const InnerSupConfig& cfg);

/// min over lambda in [0, lambda_plus] of lambda * eps + mean phi, by
/// golden-section search (at most 200 iterations).
DualSolution local_worst_case_risk(const DualProblem& problem, double eps,
                                   const InnerSupConfig& cfg);
DualSolution local_worst_case_risk(const LossModel& f, const Dataset& data, double eps,
                                   const ProductMetric& m, const InnerSupConfig& cfg);

}  // namespace advrisk

#endif  // ADVRISK_DUAL_SOLVER_HPP
