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

#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "bb84sdi/attacks.hpp"
#include "bb84sdi/certify.hpp"
#include "bb84sdi/model.hpp"

// JSON encoding of requests, model files and results.
//
// Certify request:
//   {"format": "correlators", "correlators": {"Az":..,"Ax":..,"Bz":..,"Bx":..,
//                                             "Ezz":..,"Ezx":..,"Exz":..,"Exx":..},
//    "options": {"variant": "improved", "hab_mode": "phi_bound",
//                "zz_table": [[p00, p01], [p10, p11]]}}
// or "format": "probabilities" / "counts" with a payload under the same key:
//   {"zz": [[..],[..]], "zx": .., "xz": .., "xx": ..}   (row = Alice's outcome)
//
// Model file:
//   {"d_B": 2, "rho_AB": M, "alice": {"z": [M0, M1], "x": [M0, M1]}, "bob": {...}}
// where every matrix M is a nested array of entries, each entry either a
// number or a [re, im] pair.
namespace bb84sdi::cli {

using json = nlohmann::ordered_json;

struct CertifyRequest {
  std::string format;
  model::CorrelationSummary summary;
  certify::CertifyOptions options;
};

/// Rounds to 12 significant digits; every number the CLI prints passes
/// through here.
double round12(double x);

/// Parses a file; syntax errors become ValidationError.
json read_json_file(const std::filesystem::path& path);

CertifyRequest parse_request(const json& j);
model::MeasurementModel parse_model(const json& j);

json summary_to_json(const model::CorrelationSummary& s);
json matrix_to_json(const linalg::ComplexMatrix& m);
json model_to_json(const model::MeasurementModel& m);

/// Re-ingestable certificate: the correlators and options that produced it
/// (so `certify` on the output reproduces it) plus a "certificate" object.
json certificate_to_json(const certify::RateCertificate& c, const certify::CertifyOptions& opts);

json attack_to_json(const attacks::AttackSample& s);

}  // namespace bb84sdi::cli
