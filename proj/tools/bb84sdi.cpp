// Copyright 2026 The bb84sdi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// bb84sdi: key-rate certification and attack scans from the command line.

#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "bb84sdi/cli/commands.hpp"
#include "bb84sdi/error.hpp"

namespace {

std::vector<std::size_t> parse_dims(const std::string& list) {
  std::vector<std::size_t> dims;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != tok.size()) throw bb84sdi::ValidationError("--dB: bad entry '" + tok + "'");
    dims.push_back(v);
  }
  if (dims.empty()) throw bb84sdi::ValidationError("--dB: empty list");
  return dims;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace bb84sdi::cli;

  CLI::App app{"Semi-device-independent BB84 key-rate certifier"};
  app.require_subcommand(1);

  std::string request_path;
  auto* certify = app.add_subcommand("certify", "Certify a key rate from measured statistics (JSON)");
  certify->add_option("request", request_path, "Request file")->required();

  SimulateArgs sim;
  std::string sim_variant = "improved", sim_hab = "phi_bound";
  auto* simulate = app.add_subcommand("simulate", "Certify a model file and compare with its true rate");
  simulate->add_option("model", sim.model_path, "Model file")->required();
  simulate->add_option("--variant", sim_variant, "improved|simplified");
  simulate->add_option("--hab", sim_hab, "phi_bound|exact");

  ScanArgs scan;
  std::uint64_t scan_seed = 0;
  std::string dims = "2,3,4";
  std::string scan_csv;
  auto* scan_cmd = app.add_subcommand("scan", "Soundness scan over random collective attacks");
  scan_cmd->add_option("--n", scan.n, "Number of samples");
  auto* scan_seed_opt = scan_cmd->add_option("--seed", scan_seed, "Base seed");
  scan_cmd->add_option("--dB", dims, "Comma-separated Bob dimensions");
  scan_cmd->add_option("--workers", scan.workers, "Worker threads (0 = all cores)");
  scan_cmd->add_option("--refine", scan.refine, "Local-search iterations on the worst sample");
  auto* scan_csv_opt = scan_cmd->add_option("--csv", scan_csv, "Per-sample CSV output");

  LemmasArgs lem;
  std::uint64_t lem_seed = 0;
  auto* lemmas = app.add_subcommand("lemmas", "Randomized checks of the entropy and fidelity inequalities");
  lemmas->add_option("--n", lem.n, "Instances per inequality");
  auto* lem_seed_opt = lemmas->add_option("--seed", lem_seed, "Base seed");

  SweepArgs sweep;
  std::string sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "White-noise sweep as CSV");
  sweep_cmd->add_option("--from", sweep.from, "First visibility");
  sweep_cmd->add_option("--to", sweep.to, "Last visibility");
  sweep_cmd->add_option("--step", sweep.step, "Visibility step");
  auto* sweep_out_opt = sweep_cmd->add_option("--out", sweep_out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (*certify) return cmd_certify(request_path, std::cout, std::cerr);
    if (*simulate) {
      sim.variant = bb84sdi::certify::parse_variant(sim_variant);
      sim.hab_mode = bb84sdi::certify::parse_hab_mode(sim_hab);
      return cmd_simulate(sim, std::cout, std::cerr);
    }
    if (*scan_cmd) {
      if (*scan_seed_opt) scan.seed = scan_seed;
      if (*scan_csv_opt) scan.csv_path = scan_csv;
      scan.bob_dims = parse_dims(dims);
      return cmd_scan(scan, std::cout, std::cerr);
    }
    if (*lemmas) {
      if (*lem_seed_opt) lem.seed = lem_seed;
      return cmd_lemmas(lem, std::cout, std::cerr);
    }
    if (*sweep_out_opt) sweep.out_path = sweep_out;
    return cmd_sweep(sweep, std::cout, std::cerr);
  } catch (const bb84sdi::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}
