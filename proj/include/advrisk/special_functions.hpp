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

#ifndef ADVRISK_SPECIAL_FUNCTIONS_HPP
#define ADVRISK_SPECIAL_FUNCTIONS_HPP

namespace advrisk {

/// Upper incomplete gamma function Gamma(s, v) = int_v^inf u^(s-1) e^(-u) du
/// (not regularised). Throws InvalidInput for s <= 0 or v < 0.
double incomplete_gamma(double s, double v);

/// log Gamma(s, v); finite where incomplete_gamma would overflow.
double log_incomplete_gamma(double s, double v);

}  // namespace advrisk

#endif  // ADVRISK_SPECIAL_FUNCTIONS_HPP
