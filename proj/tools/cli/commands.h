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
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ehcap::cli {

// Raw flag values shared by all subcommands.
struct Flags {
  std::string lambda = "0.1";  // comma-separated list
  std::string p = "0.5";       // comma-separated list
  std::optional<double> q;
  std::string battery = "inf";
  double alpha = 3.0;
  double theta = 2.0;
  double d = 2.0;
  int packet_slots = 1;
  std::optional<std::int64_t> trials;
  std::optional<std::int64_t> slots;
  std::uint64_t seed = 42;
  std::optional<double> window_radius;
  int points = 200;
  int threads = 1;
  std::string target = "aloha";
  std::string criterion;
  std::string out;
};

// Thrown for malformed or out-of-range flag values (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Each command writes CSV (or the verify report) to `out` and returns the
// process exit code.
int run_aloha(const Flags& flags, std::ostream& out);
int run_csma(const Flags& flags, std::ostream& out);
int run_game(const Flags& flags, std::ostream& out);
int run_optimal_q(const Flags& flags, std::ostream& out);
int run_simulate(const Flags& flags, std::ostream& out);
int run_verify(const Flags& flags, std::ostream& out);

// Parses "0.1,0.2"; throws UsageError naming `flag` on an empty list or a
// malformed number.
std::vector<double> parse_list(const std::string& text, const char* flag);

// "inf" or a positive integer.
std::optional<int> parse_battery(const std::string& text);

}  // namespace ehcap::cli
