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

#include "bb84sdi/cli/commands.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "bb84sdi/attacks.hpp"
#include "bb84sdi/cli/io.hpp"
#include "bb84sdi/error.hpp"
#include "bb84sdi/oracles.hpp"

namespace bb84sdi::cli {

namespace {

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(12) << x;
  return s.str();
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::ostream& out) {
  if (flag) {
    out << "seed " << *flag << " (flag)\n";
    return *flag;
  }
  if (const char* env = std::getenv(kSeedEnv); env && *env) {
    std::uint64_t v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto [ptr, ec] = std::from_chars(env, end, v);
    if (ec != std::errc() || ptr != end) throw ValidationError(std::string(kSeedEnv) + " is not an unsigned integer");
    out << "seed " << v << " (" << kSeedEnv << ")\n";
    return v;
  }
  out << "seed " << kDefaultSeed << " (default)\n";
  return kDefaultSeed;
}

int cmd_certify(const std::string& request_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const CertifyRequest req = parse_request(read_json_file(request_path));
    const certify::RateCertificate cert = certify::certified_rate(req.summary, req.options);
    out << certificate_to_json(cert, req.options).dump(2) << '\n';
    return kExitOk;
  });
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const model::MeasurementModel m = parse_model(read_json_file(args.model_path));
    certify::CertifyOptions opts;
    opts.variant = args.variant;
    opts.hab_mode = args.hab_mode;
    const attacks::AttackSample s = attacks::evaluate(m, 0, opts);
    json j = attack_to_json(s);
    j.erase("seed");
    j.erase("model");
    out << j.dump(2) << '\n';
    if (s.gap < -attacks::kSoundnessTolerance) {
      err << "soundness violation: gap " << fmt(s.gap) << '\n';
      return kExitViolation;
    }
    return kExitOk;
  });
}

int cmd_scan(const ScanArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.n == 0) throw ValidationError("--n must be at least 1");
    std::ofstream csv;
    if (args.csv_path) {
      csv.open(*args.csv_path);
      if (!csv) throw ValidationError("cannot write " + *args.csv_path);
    }
    const std::uint64_t seed = resolve_seed(args.seed, out);
    const attacks::ScanReport rep = attacks::soundness_scan(args.n, seed, args.bob_dims, args.workers);

    out << "samples " << rep.count << "  d_B";
    for (std::size_t i = 0; i < args.bob_dims.size(); ++i) out << (i ? "," : " ") << args.bob_dims[i];
    out << '\n';
    out << "min_gap " << fmt(rep.min_gap) << "  seed " << rep.argmin_seed << "  d_B " << rep.argmin_bob_dim << '\n';
    out << "positive_rate " << rep.positive_rate_count << '\n';
    out << "gap_histogram\n";
    for (std::size_t b = 0; b < rep.histogram.size(); ++b) {
      const std::string lo = b == 0 ? "-inf" : fmt(attacks::kHistogramEdges[b - 1]);
      const std::string hi = b == attacks::kHistogramEdges.size() ? "inf" : fmt(attacks::kHistogramEdges[b]);
      out << "  [" << lo << ", " << hi << ") " << rep.histogram[b] << '\n';
    }

    bool violated = !rep.violations.empty();
    if (args.refine > 0) {
      const attacks::AttackSample worst = attacks::random_attack(rep.argmin_seed, rep.argmin_bob_dim);
      const attacks::RefineResult r = attacks::refine_attack(worst, args.refine);
      out << "refined_gap " << fmt(r.best.gap) << "  accepted " << r.accepted << '/' << r.iterations << '\n';
      if (r.violation_found) {
        violated = true;
        err << "refinement found a gap below tolerance:\n" << attack_to_json(r.best).dump(2) << '\n';
      }
    }
    if (csv) {
      csv << "seed,d_B,certified_rate,dw_rate,gap\n";
      for (const auto& e : rep.entries)
        csv << e.seed << ',' << e.bob_dim << ',' << fmt(e.certified_rate) << ',' << fmt(e.dw_rate) << ',' << fmt(e.gap) << '\n';
    }
    out << "violations " << rep.violations.size() << '\n';
    for (const auto& v : rep.violations) err << attack_to_json(v).dump(2) << '\n';
    out << (violated ? "FAIL" : "PASS") << '\n';
    return violated ? kExitViolation : kExitOk;
  });
}

int cmd_lemmas(const LemmasArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.n == 0) throw ValidationError("--n must be at least 1");
    const std::uint64_t seed = resolve_seed(args.seed, out);
    const std::array<oracles::SuiteResult, 3> results{oracles::run_lemma1_suite(args.n, seed),
                                                      oracles::run_lemma2_suite(args.n, seed),
                                                      oracles::run_lemma3_suite(args.n, seed)};
    bool ok = true;
    for (const auto& r : results) {
      out << r.name << "  instances " << r.instances << "  skipped " << r.skipped << "  worst_gap "
          << fmt(r.worst_gap) << "  seed " << r.worst_seed << "  " << (r.passed() ? "PASS" : "FAIL") << '\n';
      ok = ok && r.passed();
    }
    return ok ? kExitOk : kExitViolation;
  });
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.from < 0.0 || args.to > 1.0) throw ValidationError("visibilities must lie in [0, 1]");
    const std::vector<double> grid = attacks::linear_grid(args.from, args.to, args.step);
    const std::vector<attacks::SweepRecord> rows = attacks::noise_sweep(grid);

    std::ofstream file;
    if (args.out_path) {
      file.open(*args.out_path);
      if (!file) throw ValidationError("cannot write " + *args.out_path);
    }
    std::ostream& dst = args.out_path ? static_cast<std::ostream&>(file) : out;
    dst << "visibility,certified_rate,shor_preskill,lambda,condition_ok\n";
    for (const auto& r : rows) {
      dst << fmt(r.visibility) << ',' << fmt(r.certificate.rate) << ',' << fmt(r.shor_preskill) << ','
          << fmt(r.certificate.lambda) << ',' << (r.certificate.condition_ok ? "true" : "false") << '\n';
    }
    if (!dst) throw ValidationError("write failed");
    return kExitOk;
  });
}

}  // namespace bb84sdi::cli
