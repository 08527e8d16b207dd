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

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "commands.h"
#include "ehcap/model.h"
#include "ehcap/version.h"

namespace {

constexpr int kUsageExit = 2;

}  // namespace

int main(int argc, char** argv) {
  using ehcap::cli::Flags;
  Flags f;

  CLI::App app{"Capacity of energy-harvesting wireless networks under ALOHA "
               "and CSMA access"};
  app.set_version_flag("--version", ehcap::kVersion);
  app.set_config("--config", "", "key=value file; flags override file values");
  app.require_subcommand(1);

  // Parameters live on the top-level app so that one config file serves
  // every subcommand; subcommands fall through to them.
  app.add_option("--lambda", f.lambda, "Transmitter density per m^2 (comma list)");
  app.add_option("--p", f.p, "Energy arrival probability (comma list for game)");
  app.add_option("--q", f.q, "Access probability")->check(CLI::Range(0.0, 1.0));
  app.add_option("--B", f.battery, "Battery capacity: positive integer or inf");
  app.add_option("--alpha", f.alpha, "Path-loss exponent (> 2)");
  app.add_option("--theta", f.theta, "SIR threshold (> 0)");
  app.add_option("--d", f.d, "Link distance in meters (> 0)");
  app.add_option("--L", f.packet_slots, "Packet length in slots");
  app.add_option("--trials", f.trials, "Monte Carlo trials");
  app.add_option("--slots", f.slots, "Slots for the energy-queue simulation");
  app.add_option("--seed", f.seed, "Master seed");
  app.add_option("--window-radius", f.window_radius,
                 "Simulation disc radius in meters");
  app.add_option("--points", f.points, "Points in the q sweep");
  app.add_option("--threads", f.threads,
                 "Monte Carlo worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--target", f.target, "simulate: queue, aloha or csma");
  app.add_option("--criterion", f.criterion, "verify: run one criterion");
  app.add_option("--out", f.out, "Output file (default stdout)");

  using Runner = int (*)(const Flags&, std::ostream&);
  Runner runner = nullptr;
  auto add = [&](const char* name, const char* help, Runner fn) {
    app.add_subcommand(name, help)->fallthrough()->callback([&runner, fn] {
      runner = fn;
    });
  };
  add("aloha", "Capacity versus access probability", ehcap::cli::run_aloha);
  add("csma", "Back-off and outage versus density", ehcap::cli::run_csma);
  add("game", "Equilibrium and price of anarchy over a grid",
      ehcap::cli::run_game);
  add("optimal-q", "Capacity-maximizing access probability",
      ehcap::cli::run_optimal_q);
  add("simulate", "Monte Carlo estimate against the closed form",
      ehcap::cli::run_simulate);
  add("verify", "Run the acceptance criteria", ehcap::cli::run_verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageExit;
  }

  try {
    if (f.out.empty()) return runner(f, std::cout);
    // Buffer so that a validation error leaves no partial file behind.
    std::ostringstream buffer;
    const int code = runner(f, buffer);
    std::ofstream file(f.out, std::ios::binary);
    if (!file) {
      std::cerr << "error: --out: cannot open '" << f.out << "'\n";
      return kUsageExit;
    }
    file << buffer.str();
    return code;
  } catch (const ehcap::cli::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const ehcap::ValidationError& e) {
    std::cerr << "error: --" << e.what() << "\n";
  }
  return kUsageExit;
}
