// Copyright 2026 The MagniLift Authors
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

#ifndef MAGNILIFT_CLI_HPP_
#define MAGNILIFT_CLI_HPP_

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "magnilift/io.hpp"

// Command-line front end. run() is callable in-process so tests can compare
// outputs byte for byte.

namespace magnilift::cli {

using io::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInconclusive = 2;

struct CliConfig {
  std::string subcommand;
  std::string input;
  std::string output;
  std::string vector;      // certify-range: optional x_f
  std::string candidates;  // quat-check: optional competitor list
  std::string method = "auto";
  std::string kind;        // gen
  std::optional<double> tol;
  std::optional<std::int64_t> budget;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  int verbosity = 0;
  GenSpec gen;
};

/// --seed wins, then MAGNILIFT_SEED, then the library default.
inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("MAGNILIFT_SEED"); env && *env) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 0);
    if (errno != 0 || *end != '\0' || *env == '-')
      throw Error(ErrorKind::kInvalidArgument,
                  "MAGNILIFT_SEED is not an unsigned 64-bit integer: '" + std::string(env) + "'");
    return static_cast<std::uint64_t>(v);
  }
  return kDefaultSeed;
}

namespace detail {

inline bool looks_like_json(const std::string& text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && (text[pos] == '{' || text[pos] == '[');
}

inline Eigen::MatrixXd load_matrix(const std::string& path) {
  const std::string text = io::read_file(path);
  if (!looks_like_json(text)) return io::matrix_from_csv(text, path);
  const json j = io::parse_json(text, path);
  if (j.is_object()) {
    if (!j.contains("matrix")) throw Error(ErrorKind::kParse, path + ": missing key 'matrix'");
    return io::matrix_from_json(j["matrix"], path + ".matrix");
  }
  return io::matrix_from_json(j, path);
}

inline ComplexVector load_complex_vector(const std::string& path) {
  const std::string text = io::read_file(path);
  if (!looks_like_json(text)) return io::complex_vector_from_csv(text, path);
  json j = io::parse_json(text, path);
  if (j.is_object()) {
    if (!j.contains("vector")) throw Error(ErrorKind::kParse, path + ": missing key 'vector'");
    j = j["vector"];
  }
  const Eigen::MatrixXd m = io::matrix_from_json(j, path);
  if (m.cols() != 2) throw Error(ErrorKind::kParse, path + ": entries must be [re, im]");
  ComplexVector v(m.rows());
  for (Eigen::Index k = 0; k < m.rows(); ++k) v(k) = {m(k, 0), m(k, 1)};
  return v;
}

inline QuatFunction load_quat_function(const json& j, const std::string& where) {
  if (j.is_object()) {
    if (!j.contains("values")) throw Error(ErrorKind::kParse, where + ": missing key 'values'");
    return io::quat_function_from_json(j["values"], where + ".values");
  }
  return io::quat_function_from_json(j, where);
}

struct Outcome {
  json result;
  int code = kExitOk;
  std::string summary;
};

inline GraphInstance load_observed_instance(const std::string& path) {
  GraphInstance inst = io::instance_from_json(io::load_json(path), path);
  if (!inst.observation)
    throw Error(ErrorKind::kParse, path + ": instance has neither norms nor a field");
  return inst;
}

inline Outcome reconstruct_field(const CliConfig& cfg) {
  const GraphInstance inst = load_observed_instance(cfg.input);
  ReconstructionOptions opts;
  if (cfg.tol) opts.residual_tol = *cfg.tol;
  opts.threads = cfg.threads;
  std::string method = cfg.method;
  if (method == "auto") method = inst.graph.is_complete() ? "complete" : "propagate";
  ReconstructionResult r;
  if (method == "complete") {
    r = reconstruct_complete(*inst.observation, inst.graph, inst.dim, opts);
  } else if (method == "propagate") {
    r = reconstruct_propagate(*inst.observation, inst.graph, inst.dim, opts);
  } else {
    throw Error(ErrorKind::kInvalidArgument,
                "--method must be auto, complete or propagate, got '" + cfg.method + "'");
  }
  Outcome out;
  out.result = io::to_json(r);
  if (inst.field && r.status == ReconstructionStatus::kOk && r.unreached.empty()) {
    const double tol = 1e-8 * (1.0 + inst.observation->max_vertex_norm());
    out.result["matches_input_field"] = orbit_equivalent(*inst.field, r.field, tol).has_value();
  } else {
    out.result["matches_input_field"] = nullptr;
  }
  out.summary = std::string(to_string(r.status)) + ", certified_unique=" +
                (r.certified_unique ? "true" : "false");
  return out;
}

inline Outcome simplex_graph(const CliConfig& cfg) {
  const GraphInstance inst = load_observed_instance(cfg.input);
  SimplexGraphOptions opts;
  if (cfg.tol) opts.pd_tol = *cfg.tol;
  opts.threads = cfg.threads;
  const SimplexGraph sg = build_simplex_graph(inst.graph, *inst.observation, inst.dim, opts);
  const UniquenessReport report = check_uniqueness_hypotheses(sg, inst.graph);
  Outcome out;
  out.result = io::to_json(sg, report);
  out.summary = std::to_string(sg.simplices.size()) + " simplices, " +
                std::to_string(sg.edges.size()) + " edges, certified=" +
                (report.certified ? "true" : "false");
  return out;
}

inline Outcome certify_range(const CliConfig& cfg) {
  const RealMeasurementMatrix a(load_matrix(cfg.input));
  CertifyOptions opts;
  if (cfg.tol) opts.tol = *cfg.tol;
  if (cfg.budget) opts.search_budget = *cfg.budget;
  opts.seed = resolve_seed(cfg.seed);
  const Verdict v = cfg.vector.empty() ? certify_range_space(a, opts)
                                       : certify_vector(a, load_complex_vector(cfg.vector), opts);
  Outcome out;
  out.result = io::to_json(v);
  out.code = v.status == VerdictStatus::kInconclusive ? kExitInconclusive : kExitOk;
  out.summary = std::string(to_string(v.status)) + " via " + v.method;
  return out;
}

inline Outcome hat_check(const CliConfig& cfg) {
  const ComplexCoeffSeq c = io::coeffs_from_json(io::load_json(cfg.input), cfg.input);
  const CriterionReport r = check_criterion(c, cfg.tol.value_or(1e-9));
  Outcome out;
  out.result = io::to_json(r);
  out.summary = r.retrievable ? "retrievable" : "not retrievable";
  return out;
}

inline Outcome hat_recover(const CliConfig& cfg) {
  const MagnitudeSamples s = io::samples_from_json(io::load_json(cfg.input), cfg.input);
  RecoverOptions opts;
  if (cfg.tol) opts.tol = *cfg.tol;
  Outcome out;
  json classes = json::array();
  std::string status = "ok";
  try {
    for (const auto& c : recover(s, opts)) classes.push_back(io::to_json(c));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kUnboundedAmbiguity) {
      status = "unbounded_ambiguity";
    } else if (e.kind() == ErrorKind::kTooManyBranches) {
      status = "inconclusive";
      out.code = kExitInconclusive;
    } else {
      throw;
    }
  }
  out.result = {{"status", status},
                {"class_count", classes.size()},
                {"unique", status == "ok" && classes.size() == 1},
                {"classes", classes}};
  out.summary = status + ", " + std::to_string(classes.size()) + " class(es)";
  return out;
}

inline Outcome quat_check(const CliConfig& cfg) {
  const QuatFunction f = load_quat_function(io::load_json(cfg.input), cfg.input);
  std::vector<QuatFunction> candidates;
  if (!cfg.candidates.empty()) {
    const json j = io::load_json(cfg.candidates);
    const json& list = j.is_object() && j.contains("candidates") ? j["candidates"] : j;
    if (!list.is_array())
      throw Error(ErrorKind::kParse, cfg.candidates + ": expected a list of candidates");
    for (std::size_t k = 0; k < list.size(); ++k)
      candidates.push_back(
          load_quat_function(list[k], cfg.candidates + ".candidates[" + std::to_string(k) + "]"));
  }
  QuatCheckOptions opts;
  if (cfg.tol) opts.tol = *cfg.tol;
  if (cfg.budget) opts.search_budget = *cfg.budget;
  opts.seed = resolve_seed(cfg.seed);
  const QuatCheckReport r = quat_conjugate_pr_check(f, candidates, opts);
  Outcome out;
  out.result = io::to_json(r);
  out.code = r.verdict == QuatVerdict::kInconclusive ? kExitInconclusive : kExitOk;
  out.summary = std::string(to_string(r.verdict));
  return out;
}

inline Outcome affine_check(const CliConfig& cfg) {
  const AffineSystem sys = io::affine_from_json(io::load_json(cfg.input), cfg.input);
  AffineCheckOptions opts;
  if (cfg.tol) opts.tol = *cfg.tol;
  if (cfg.budget) opts.falsify_budget = *cfg.budget;
  opts.seed = resolve_seed(cfg.seed);
  const AffineReport r = check_affine_pr(sys, opts);
  Outcome out;
  out.result = io::to_json(r);
  out.code = r.verdict == AffineVerdict::kInconclusive ? kExitInconclusive : kExitOk;
  out.summary = std::string(to_string(r.verdict)) + ": " + r.reason;
  return out;
}

inline Outcome gen(const CliConfig& cfg) {
  GenSpec spec = cfg.gen;
  spec.kind = parse_gen_kind(cfg.kind);
  spec.seed = resolve_seed(cfg.seed);
  Outcome out;
  out.result = io::generate(spec);
  out.summary = "generated " + cfg.kind;
  return out;
}

inline Outcome observe_field(const CliConfig& cfg) {
  GraphInstance inst = io::instance_from_json(io::load_json(cfg.input), cfg.input);
  if (!inst.field) throw Error(ErrorKind::kParse, cfg.input + ": instance has no field");
  inst.observation = observe(inst.graph, *inst.field);
  Outcome out;
  out.result = io::instance_to_json(inst);
  out.summary = "observed " + std::to_string(inst.graph.edges().size()) + " edges";
  return out;
}

inline Outcome dispatch(const CliConfig& cfg) {
  const std::string& s = cfg.subcommand;
  if (s == "reconstruct-field") return reconstruct_field(cfg);
  if (s == "simplex-graph") return simplex_graph(cfg);
  if (s == "certify-range") return certify_range(cfg);
  if (s == "hat-check") return hat_check(cfg);
  if (s == "hat-recover") return hat_recover(cfg);
  if (s == "quat-check") return quat_check(cfg);
  if (s == "affine-check") return affine_check(cfg);
  if (s == "gen") return gen(cfg);
  return observe_field(cfg);
}

}  // namespace detail

/// Runs one CLI invocation. args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Magnitude-only reconstruction and phase retrievability certificates", "magnilift"};
  app.require_subcommand(1);
  app.fallthrough();

  auto common = [&](CLI::App* sub, const std::string& input_names, bool with_input = true) {
    if (with_input) sub->add_option(input_names, cfg.input, "Input file")->required();
    sub->add_option("-o,--output", cfg.output, "Write JSON here instead of stdout");
    sub->add_option("--tol", cfg.tol, "Tolerance override");
    sub->add_option("--budget", cfg.budget, "Search budget override")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", cfg.seed, "PRNG seed (default: MAGNILIFT_SEED or built-in)");
    sub->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_flag_function(
        "-v,--verbose", [&](std::int64_t count) { cfg.verbosity += static_cast<int>(count); },
        "Summary on stderr (repeatable)");
  };

  auto* rf = app.add_subcommand("reconstruct-field", "Recover a field up to an orthogonal matrix");
  common(rf, "-i,--input");
  rf->add_option("--method", cfg.method, "auto, complete or propagate")
      ->check(CLI::IsMember({"auto", "complete", "propagate"}));
  common(app.add_subcommand("simplex-graph", "Build the simplex graph of an instance"),
         "-i,--input");
  auto* cr = app.add_subcommand("certify-range", "Certify conjugate phase retrieval of a range");
  common(cr, "-i,--input,--matrix");
  cr->add_option("--vector", cfg.vector, "Complex vector x_f (re,im per line)");
  common(app.add_subcommand("hat-check", "Check the hat-spline criterion"), "-i,--input,--coeffs");
  common(app.add_subcommand("hat-recover", "Recover hat-spline coefficients from magnitudes"),
         "-i,--input,--samples");
  auto* qc = app.add_subcommand("quat-check", "Quaternion conjugate phase retrieval check");
  common(qc, "-i,--input,--function");
  qc->add_option("--candidates", cfg.candidates, "Competitor functions");
  common(app.add_subcommand("affine-check", "Affine phase retrieval injectivity check"),
         "-i,--input,--system");
  auto* g = app.add_subcommand("gen", "Generate a synthetic instance");
  common(g, "", false);
  g->add_option("--kind", cfg.kind, "Instance kind")->required();
  g->add_option("--n", cfg.gen.n, "Vertices, columns or parameter dimension");
  g->add_option("--d", cfg.gen.d, "Field or measurement dimension");
  g->add_option("--m", cfg.gen.m, "Matrix rows");
  g->add_option("--length", cfg.gen.length, "Chain or spline length");
  g->add_option("--refs", cfg.gen.refs, "Reference vectors per measurement");
  g->add_option("--count", cfg.gen.count, "Measurements in an affine system");
  g->add_option("--im-positions", cfg.gen.im_positions, "Nonzero-Im positions in a spline");
  common(app.add_subcommand("observe", "Compute magnitudes of a field on its graph"),
         "-i,--input");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  for (const auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();

  try {
    const detail::Outcome outcome = detail::dispatch(cfg);
    const std::string text = outcome.result.dump(2) + "\n";
    if (cfg.output.empty()) {
      out << text;
    } else {
      std::ofstream file(cfg.output, std::ios::binary);
      if (!file) throw Error(ErrorKind::kParse, "cannot write '" + cfg.output + "'");
      file << text;
    }
    if (cfg.verbosity >= 1) err << cfg.subcommand << ": " << outcome.summary << "\n";
    return outcome.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const json::exception& e) {
    err << "error: Parse: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitInputError;
}

}  // namespace magnilift::cli

#endif  // MAGNILIFT_CLI_HPP_
