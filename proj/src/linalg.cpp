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

#include "advrisk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "advrisk/error.hpp"

namespace advrisk {

SpectralEstimate power_iteration(const Matrix& a, int max_iterations, double rel_tol) {
  SpectralEstimate est;
  const Eigen::Index cols = a.cols();
  est.right = Vector::Zero(cols);
  est.left = Vector::Zero(a.rows());
  if (a.size() == 0) return est;

  Vector v(cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    // fractional parts of multiples of the golden ratio: never all aligned
    // with a coordinate hyperplane
    const double phi = 0.6180339887498949 * static_cast<double>(j + 1);
    v[j] = 0.5 + (phi - std::floor(phi));
  }
  v.normalize();

  double sigma = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    Vector u = a * v;
    const double un = u.norm();
    if (un == 0.0) {
      est.iterations = it + 1;
      break;
    }
    Vector w = a.transpose() * u;
    const double wn = w.norm();
    if (wn == 0.0) break;
    v = w / wn;
    const double next = (a * v).norm();
    est.iterations = it + 1;
    const bool settled = std::abs(next - sigma) <= rel_tol * std::max(next, 1e-300);
    sigma = next;
    if (settled) break;
  }
  est.value = sigma;
  est.right = v;
  if (sigma > 0.0) est.left = (a * v) / sigma;
  return est;
}

double spectral_norm(const Matrix& a) { return power_iteration(a).value; }

double spectral_norm_exact(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

namespace {

Vector project_l1_centered(const Vector& w, double radius) {
  if (w.cwiseAbs().sum() <= radius) return w;
  if (radius == 0.0) return Vector::Zero(w.size());
  std::vector<double> mags(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) mags[i] = std::abs(w[i]);
  std::sort(mags.begin(), mags.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < mags.size(); ++j) {
    cumsum += mags[j];
    const double t = (cumsum - radius) / static_cast<double>(j + 1);
    if (mags[j] - t > 0.0) theta = t;
  }
  Vector u(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i)
    u[i] = std::copysign(std::max(std::abs(w[i]) - theta, 0.0), w[i]);
  return u;
}

// Solves t + mu q t^(q-1) = a for t in [0, a].
double shrink_coordinate(double a, double mu, double q) {
  double lo = 0.0, hi = a;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid + mu * q * std::pow(mid, q - 1.0) > a)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

Vector project_lq_centered(const Vector& w, double radius, double q) {
  if (lp_norm(w, q) <= radius) return w;
  if (radius == 0.0) return Vector::Zero(w.size());
  const double target = std::pow(radius, q);
  auto mass = [&](double mu) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i)
      s += std::pow(shrink_coordinate(std::abs(w[i]), mu, q), q);
    return s;
  };
  double lo = 0.0, hi = 1.0;
  while (mass(hi) > target && hi < 1e300) hi *= 2.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mass(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  Vector u(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i)
    u[i] = std::copysign(shrink_coordinate(std::abs(w[i]), hi, q), w[i]);
  const double n = lp_norm(u, q);
  if (n > radius) u *= radius / n;
  return u;
}

}  // namespace

Vector project_lq_ball(const VectorRef& v, const VectorRef& center, double radius, double q) {
  if (v.size() != center.size()) throw InvalidInput("projection dimension mismatch");
  if (!(q >= 1.0)) throw InvalidInput("ball norm must be >= 1");
  Vector w = v - center;
  if (q == 2.0) {
    const double n = w.norm();
    if (n > radius) w *= (n > 0.0 ? radius / n : 0.0);
  } else if (std::isinf(q)) {
    w = w.cwiseMax(-radius).cwiseMin(radius);
  } else if (q == 1.0) {
    w = project_l1_centered(w, radius);
  } else {
    w = project_lq_centered(w, radius, q);
  }
  return center + w;
}

Vector project_ball_intersection(const VectorRef& v, const VectorRef& center, double eps,
                                 double q, double r, int rounds, double gap) {
  Vector x = v;
  for (int round = 0; round < rounds; ++round) {
    x = project_lq_ball(x, center, eps, q);
    const double n = x.norm();
    if (n <= r * (1.0 + gap)) break;
    x = clip_to_ball(x, r);
    if (lp_norm(x - center, q) <= eps * (1.0 + gap)) break;
  }
  Vector p = clip_to_ball(x, r);
  const double excess = lp_norm(p - center, q);
  if (excess > eps) p = center + (p - center) * (eps / excess);
  return p;
}

}  // namespace advrisk
