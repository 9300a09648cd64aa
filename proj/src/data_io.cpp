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

#include "advrisk/data_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "advrisk/error.hpp"

namespace advrisk {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw InvalidInput("cannot parse number '" + std::string(text) + "'");
  return v;
}

void write_dataset_csv(std::ostream& out, const Dataset& data, const Provenance& provenance) {
  bool has_label_set = false;
  for (const auto& [k, v] : provenance) {
    out << "# " << k << ": " << v << '\n';
    if (k == "label_set") has_label_set = true;
  }
  if (!has_label_set) out << "# label_set: " << data.label_set().to_string() << '\n';
  const int d = data.feature_dim();
  for (int j = 0; j < d; ++j) out << (j ? "," : "") << 'x' << (j + 1);
  if (data.label_set().labeled()) out << ",label";
  out << '\n';
  for (const auto& z : data.instances()) {
    for (int j = 0; j < d; ++j) out << (j ? "," : "") << format_double(z.features[j]);
    if (z.label) out << ',' << *z.label;
    out << '\n';
  }
}

void save_dataset_csv(const std::string& path, const Dataset& data, const Provenance& provenance) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write dataset '" + path + "'");
  write_dataset_csv(out, data, provenance);
}

Dataset read_dataset_csv(std::istream& in, Provenance* provenance) {
  std::string line;
  std::optional<LabelSet> labels;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string body = trim(std::string_view(t).substr(1));
      const auto colon = body.find(':');
      if (colon != std::string::npos) {
        const std::string key = trim(std::string_view(body).substr(0, colon));
        const std::string value = trim(std::string_view(body).substr(colon + 1));
        if (key == "label_set") labels = LabelSet::parse(value);
        if (provenance) provenance->emplace_back(key, value);
      }
      continue;
    }
    header = split(t);
    break;
  }
  if (header.empty()) throw InvalidInput("dataset CSV has no header row");
  const bool labeled = header.back() == "label";
  const std::size_t d = header.size() - (labeled ? 1 : 0);
  if (d == 0) throw InvalidInput("dataset CSV has no feature columns");
  for (std::size_t j = 0; j < d; ++j)
    if (header[j] != "x" + std::to_string(j + 1))
      throw InvalidInput("unexpected CSV column '" + header[j] + "'");

  std::vector<Instance> instances;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto cells = split(t);
    if (cells.size() != header.size())
      throw InvalidInput("CSV row " + std::to_string(row) + " has " +
                         std::to_string(cells.size()) + " cells, expected " +
                         std::to_string(header.size()));
    Vector x(static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) x[static_cast<Eigen::Index>(j)] = parse_double(cells[j]);
    std::optional<int> y;
    if (labeled) {
      int v = 0;
      const std::string& c = cells.back();
      const char* b = c.data();
      if (!c.empty() && *b == '+') ++b;
      const auto res = std::from_chars(b, c.data() + c.size(), v);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size())
        throw InvalidInput("CSV row " + std::to_string(row) + " has a non-integer label");
      y = v;
    }
    instances.emplace_back(std::move(x), y);
  }
  if (instances.empty()) throw InvalidInput("dataset CSV has no rows");
  if (labels) return Dataset(std::move(instances), *labels);
  return Dataset::with_inferred_labels(std::move(instances));
}

Dataset load_dataset_csv(const std::string& path, Provenance* provenance) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open dataset '" + path + "'");
  return read_dataset_csv(in, provenance);
}

}  // namespace advrisk
