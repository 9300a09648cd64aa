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

#include "advrisk/special_functions.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "advrisk/error.hpp"

namespace advrisk {

namespace {

void check_args(double s, double v) {
  if (!(s > 0.0)) throw InvalidInput("incomplete gamma requires s > 0");
  if (!(v >= 0.0)) throw InvalidInput("incomplete gamma requires v >= 0");
}

// Asymptotic tail for v >> s, where the regularised Q underflows:
// Gamma(s, v) ~ v^(s-1) e^(-v) sum_k (s-1)...(s-k) / v^k.
double log_upper_asymptotic(double s, double v) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 64; ++k) {
    term *= (s - k) / v;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return (s - 1.0) * std::log(v) - v + std::log(sum);
}

}  // namespace

double log_incomplete_gamma(double s, double v) {
  check_args(s, v);
  if (v == 0.0) return std::lgamma(s);
  const double q = boost::math::gamma_q(s, v);
  if (q > 0.0) return std::lgamma(s) + std::log(q);
  return log_upper_asymptotic(s, v);
}

double incomplete_gamma(double s, double v) {
  check_args(s, v);
  if (s > 150.0) return std::exp(log_incomplete_gamma(s, v));
  return boost::math::tgamma(s, v);
}

}  // namespace advrisk
