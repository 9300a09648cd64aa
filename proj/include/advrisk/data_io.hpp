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

#ifndef ADVRISK_DATA_IO_HPP
#define ADVRISK_DATA_IO_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "advrisk/core.hpp"

namespace advrisk {

using Provenance = std::vector<std::pair<std::string, std::string>>;

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

/// CSV with a header row x1..xd[,label]. Provenance entries are written as
/// leading "# key: value" lines; a "label_set" entry is always included.
void write_dataset_csv(std::ostream& out, const Dataset& data, const Provenance& provenance = {});
void save_dataset_csv(const std::string& path, const Dataset& data,
                      const Provenance& provenance = {});

/// Reads the format above. Comment lines are returned through `provenance`
/// when it is non-null; a "label_set" comment fixes the label set, otherwise
/// it is inferred from the labels.
Dataset read_dataset_csv(std::istream& in, Provenance* provenance = nullptr);
Dataset load_dataset_csv(const std::string& path, Provenance* provenance = nullptr);

}  // namespace advrisk

#endif  // ADVRISK_DATA_IO_HPP
