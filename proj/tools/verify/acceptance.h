// Copyright 2026 The ehcap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ehcap::verify {

struct Options {
  // Override the per-criterion Monte Carlo trial and slot counts.
  std::optional<std::int64_t> trials;
  std::optional<std::int64_t> slots;
  std::uint64_t seed = 42;
  int threads = 1;
};

struct CriterionReport {
  int id = 0;
  std::string name;
  std::string analytic;   // closed-form value at the reported point
  std::string simulated;  // simulated or numerical value, "-" if none
  std::string std_error;  // "-" if none
  bool pass = false;
  std::string detail;
  std::vector<std::string> notes;  // printed as comment lines
};

// Criterion names in report order.
const std::vector<std::string_view>& criterion_names();

// Throws std::invalid_argument for an unknown name.
CriterionReport run_criterion(std::string_view name, const Options& options);

std::vector<CriterionReport> run_all(const Options& options);

// CSV with '#' comment lines. Contains no timing information, so equal
// inputs give byte-identical reports.
std::string format_report(const std::vector<CriterionReport>& reports,
                          const Options& options);

}  // namespace ehcap::verify
