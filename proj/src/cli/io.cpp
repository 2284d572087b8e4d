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

#include "bb84sdi/cli/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bb84sdi/error.hpp"

namespace bb84sdi::cli {

using linalg::ComplexMatrix;
using linalg::cplx;
using model::Setting;

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": malformed JSON: " + e.what());
  }
}

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ValidationError("field '" + (path.empty() ? "<root>" : path) + "' must be an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError("missing field '" + join(path, key) + "'");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError("field '" + path + "' must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ValidationError("field '" + path + "' is not finite");
  return x;
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError("field '" + path + "' must be a string");
  return j.get<std::string>();
}

std::array<std::array<double, 2>, 2> matrix2(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ValidationError("field '" + path + "' must be a 2x2 array");
  std::array<std::array<double, 2>, 2> out{};
  for (std::size_t r = 0; r < 2; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != 2) throw ValidationError("field '" + rp + "' must have 2 entries");
    for (std::size_t c = 0; c < 2; ++c) out[r][c] = number(j[r][c], rp + "[" + std::to_string(c) + "]");
  }
  return out;
}

cplx entry(const json& j, const std::string& path) {
  if (j.is_number()) return number(j, path);
  if (j.is_array() && j.size() == 2) return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
  throw ValidationError("field '" + path + "' must be a number or a [re, im] pair");
}

ComplexMatrix complex_matrix(const json& j, std::size_t dim, const std::string& path) {
  if (!j.is_array() || j.size() != dim) {
    std::ostringstream msg;
    msg << "field '" << path << "' must be a " << dim << "x" << dim << " matrix";
    throw ValidationError(msg.str());
  }
  ComplexMatrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != dim) {
      std::ostringstream msg;
      msg << "field '" << rp << "' must have " << dim << " entries";
      throw ValidationError(msg.str());
    }
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = entry(j[r][c], rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

// Rethrows construction errors with the JSON path prepended.
template <typename F>
auto at_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ValidationError("field '" + path + "': " + e.what());
  }
}

model::TwoOutcomePovm povm(const json& j, std::size_t dim, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ValidationError("field '" + path + "' must be [M0, M1]");
  const ComplexMatrix m0 = complex_matrix(j[0], dim, path + "[0]");
  const ComplexMatrix m1 = complex_matrix(j[1], dim, path + "[1]");
  return at_path(path, [&] {
    return model::TwoOutcomePovm(linalg::HermitianOperator(m0), linalg::HermitianOperator(m1));
  });
}

std::array<model::TwoOutcomePovm, 2> party(const json& obj, const char* name, std::size_t dim) {
  const json& p = field(obj, name, "");
  return {povm(field(p, "z", name), dim, join(name, "z")), povm(field(p, "x", name), dim, join(name, "x"))};
}

constexpr std::array<const char*, 8> kCorrelatorKeys{"Az", "Ax", "Bz", "Bx", "Ezz", "Ezx", "Exz", "Exx"};

std::array<double*, 8> correlator_slots(model::CorrelationSummary& s) {
  return {&s.a_z, &s.a_x, &s.b_z, &s.b_x, &s.e_zz, &s.e_zx, &s.e_xz, &s.e_xx};
}

}  // namespace

CertifyRequest parse_request(const json& j) {
  CertifyRequest req;
  req.format = text(field(j, "format", ""), "format");
  const std::array<const char*, 3> formats{"correlators", "probabilities", "counts"};
  int present = 0;
  for (const char* f : formats) present += j.contains(f) ? 1 : 0;
  if (present != 1) throw ValidationError("field 'format': exactly one payload of correlators|probabilities|counts is required");

  if (req.format == "correlators") {
    const json& c = field(j, "correlators", "");
    auto slots = correlator_slots(req.summary);
    for (std::size_t i = 0; i < kCorrelatorKeys.size(); ++i)
      *slots[i] = number(field(c, kCorrelatorKeys[i], "correlators"), join("correlators", kCorrelatorKeys[i]));
    at_path("correlators", [&] {
      req.summary.validate();
      return 0;
    });
  } else if (req.format == "probabilities" || req.format == "counts") {
    const json& p = field(j, req.format, "");
    model::RawRecord raw;
    raw.kind = req.format == "counts" ? model::RawRecord::Kind::counts : model::RawRecord::Kind::probabilities;
    for (const char* key : {"zz", "zx", "xz", "xx"})
      raw.settings[key] = matrix2(field(p, key, req.format), join(req.format, key));
    const model::ProbabilityTable table = at_path(req.format, [&] { return model::ingest_counts(raw); });
    req.summary = at_path(req.format, [&] { return model::summarize(table); });
    req.options.zz_table = table.at(Setting::z, Setting::z);
  } else {
    throw ValidationError("field 'format': unknown value \"" + req.format + "\" (correlators|probabilities|counts)");
  }

  if (j.contains("options")) {
    const json& o = j["options"];
    if (!o.is_object()) throw ValidationError("field 'options' must be an object");
    if (o.contains("variant"))
      req.options.variant = at_path("options.variant", [&] { return certify::parse_variant(text(o["variant"], "options.variant")); });
    if (o.contains("hab_mode"))
      req.options.hab_mode = at_path("options.hab_mode", [&] { return certify::parse_hab_mode(text(o["hab_mode"], "options.hab_mode")); });
    if (o.contains("zz_table")) {
      entropy::JointTable t{matrix2(o["zz_table"], "options.zz_table")};
      at_path("options.zz_table", [&] {
        t.validate();
        return 0;
      });
      req.options.zz_table = t;
    }
  }
  if (req.options.hab_mode == certify::HabMode::exact && !req.options.zz_table)
    throw ValidationError("field 'options.zz_table': required when hab_mode is exact with correlator input");
  // Quantise to the printed precision so the certificate describes exactly the
  // inputs it echoes, and feeding the output back in is a fixed point.
  for (double* slot : correlator_slots(req.summary)) *slot = round12(*slot);
  if (req.options.zz_table)
    for (auto& row : req.options.zz_table->probs)
      for (double& p : row) p = round12(p);
  return req;
}

model::MeasurementModel parse_model(const json& j) {
  const json& d = field(j, "d_B", "");
  if (!d.is_number_integer() || d.get<long long>() < 1 || d.get<long long>() > static_cast<long long>(model::kMaxBobDim))
    throw ValidationError("field 'd_B' must be an integer in [1, 8]");
  const auto d_b = static_cast<std::size_t>(d.get<long long>());
  const ComplexMatrix rho = complex_matrix(field(j, "rho_AB", ""), 2 * d_b, "rho_AB");
  linalg::DensityOperator rho_ab = at_path("rho_AB", [&] { return linalg::DensityOperator(rho); });
  auto alice = party(j, "alice", 2);
  auto bob = party(j, "bob", d_b);
  return at_path("model", [&] { return model::MeasurementModel(std::move(rho_ab), std::move(alice), std::move(bob)); });
}

json summary_to_json(const model::CorrelationSummary& s) {
  json out = json::object();
  model::CorrelationSummary copy = s;
  auto slots = correlator_slots(copy);
  for (std::size_t i = 0; i < kCorrelatorKeys.size(); ++i) out[kCorrelatorKeys[i]] = round12(*slots[i]);
  return out;
}

json matrix_to_json(const ComplexMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(json::array({round12(m(r, c).real()), round12(m(r, c).imag())}));
    out.push_back(std::move(row));
  }
  return out;
}

json model_to_json(const model::MeasurementModel& m) {
  auto party_json = [](const model::TwoOutcomePovm& z, const model::TwoOutcomePovm& x) {
    return json{{"z", json::array({matrix_to_json(z.effect(0).matrix()), matrix_to_json(z.effect(1).matrix())})},
                {"x", json::array({matrix_to_json(x.effect(0).matrix()), matrix_to_json(x.effect(1).matrix())})}};
  };
  json out;
  out["d_B"] = m.bob_dim();
  out["rho_AB"] = matrix_to_json(m.rho_ab().matrix());
  out["alice"] = party_json(m.alice(Setting::z), m.alice(Setting::x));
  out["bob"] = party_json(m.bob(Setting::z), m.bob(Setting::x));
  return out;
}

namespace {

json certificate_fields(const certify::RateCertificate& c) {
  return json{{"rate", round12(c.rate)},
              {"raw_rate", round12(c.raw_rate)},
              {"lambda", round12(c.lambda)},
              {"precondition_ok", c.precondition_ok},
              {"condition_ok", c.condition_ok},
              {"variant", certify::to_string(c.variant)},
              {"hab_mode", certify::to_string(c.hab_mode)}};
}

json options_json(const certify::CertifyOptions& opts) {
  json o{{"variant", certify::to_string(opts.variant)}, {"hab_mode", certify::to_string(opts.hab_mode)}};
  if (opts.zz_table) {
    const auto& p = opts.zz_table->probs;
    o["zz_table"] = json::array({json::array({round12(p[0][0]), round12(p[0][1])}),
                                 json::array({round12(p[1][0]), round12(p[1][1])})});
  }
  return o;
}

}  // namespace

json certificate_to_json(const certify::RateCertificate& c, const certify::CertifyOptions& opts) {
  json out;
  out["format"] = "correlators";
  out["correlators"] = summary_to_json(c.inputs);
  out["options"] = options_json(opts);
  out["certificate"] = certificate_fields(c);
  return out;
}

json attack_to_json(const attacks::AttackSample& s) {
  json out;
  out["seed"] = s.seed;
  out["d_B"] = s.bob_dim();
  out["summary"] = summary_to_json(s.summary);
  out["certificate"] = certificate_fields(s.certificate);
  out["dw_rate"] = round12(s.dw_rate);
  out["gap"] = round12(s.gap);
  out["model"] = model_to_json(s.model);
  return out;
}

}  // namespace bb84sdi::cli
