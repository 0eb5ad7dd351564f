#pragma once

// Subcommand bodies for the command-line tool. Each returns a RunReport; the
// executable only parses flags, prints the report and maps it to an exit code.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tverberg/bounds.hpp"
#include "tverberg/complexes.hpp"
#include "tverberg/eqmaps.hpp"
#include "tverberg/eqmaps_harness.hpp"
#include "tverberg/errors.hpp"
#include "tverberg/json_io.hpp"
#include "tverberg/numbercert.hpp"
#include "tverberg/plmaps.hpp"

namespace tverberg::cli {

using io::Json;

enum ExitCode : int {
  kExitPass = 0,
  kExitVerdictFailure = 1,
  kExitInputError = 2,
  kExitNumerical = 3,
  kExitInternal = 4,
};

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string digest_of(const Json& j) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
  return std::string("fnv1a64:") + buf;
}

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct RunReport {
  std::string command;
  Json inputs = Json::object();
  Json digest_material;  // hashed instead of `inputs` when set (file contents)
  std::optional<std::uint64_t> seed;
  Json outputs = Json::object();
  std::vector<std::string> warnings;
  Json timings_ms = Json::object();
  bool pass = true;
  int exit_code = kExitPass;

  Json to_json() const {
    Json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["inputs_digest"] = digest_of(digest_material.is_null() ? inputs : digest_material);
    j["seed"] = seed ? Json(*seed) : Json(nullptr);
    j["outputs"] = outputs;
    j["warnings"] = warnings;
    j["pass"] = pass;
    j["timings_ms"] = timings_ms;
    return j;
  }
};

inline void set_verdict(RunReport& rep, bool pass) {
  rep.pass = pass;
  rep.exit_code = pass ? kExitPass : kExitVerdictFailure;
}

/// Report for a run that ended in an exception.
inline RunReport error_report(std::string command, Json inputs, std::exception_ptr err) {
  RunReport rep;
  rep.command = std::move(command);
  rep.inputs = std::move(inputs);
  rep.pass = false;
  Json e;
  try {
    std::rethrow_exception(err);
  } catch (const numbercert::CertificateImpossible& ex) {
    e = {{"kind", "input"}, {"message", ex.what()}, {"gcd", ex.gcd().str()}};
    rep.exit_code = kExitInputError;
  } catch (const InvalidInput& ex) {
    e = {{"kind", "input"}, {"message", ex.what()}};
    rep.exit_code = kExitInputError;
  } catch (const NumericalDegeneracy& ex) {
    e = {{"kind", "numerical"}, {"message", ex.what()}};
    rep.exit_code = kExitNumerical;
  } catch (const NonConvergence& ex) {
    e = {{"kind", "numerical"}, {"message", ex.what()}};
    rep.exit_code = kExitNumerical;
  } catch (const InternalConsistencyError& ex) {
    e = {{"kind", "internal"}, {"message", ex.what()}};
    rep.exit_code = kExitInternal;
  } catch (const std::exception& ex) {
    e = {{"kind", "internal"}, {"message", ex.what()}};
    rep.exit_code = kExitInternal;
  }
  rep.outputs["error"] = std::move(e);
  return rep;
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsArgs {
  std::int64_t r = 0;
  std::int64_t d = 0;
  std::optional<std::int64_t> k, s, q;
};

inline RunReport cmd_bounds(const BoundsArgs& a) {
  Stopwatch clock;
  RunReport rep;
  rep.command = "bounds";
  rep.inputs = {{"r", a.r}, {"d", a.d}};
  if (a.k) rep.inputs["k"] = *a.k;
  if (a.s) rep.inputs["s"] = *a.s;
  if (a.q) rep.inputs["q"] = *a.q;

  auto& out = rep.outputs;
  const auto pp = numbercert::is_prime_power(a.r);
  out["prime_power"] = pp ? Json{{"p", pp->p}, {"m", pp->m}} : Json(nullptr);
  if (pp) rep.warnings.push_back("r is a prime power; existence theorems inapplicable");

  const auto N = bounds::tverberg_N(a.r, a.d);
  const auto classic = bounds::classic_N(a.r, a.d);
  const auto F = bounds::frick_F_estimate(a.r, a.d);
  out["tverberg_N"] = N;
  out["classic_N"] = classic;
  out["frick_F_estimate"] = {{"value", to_string(F.value)},
                             {"approx_decimal", F.value.convert_to<double>()},
                             {"approximate", F.approximate}};
  out["N_exceeds_classic"] = N > classic;
  out["N_exceeds_F"] = Rational(N) > F.value;

  if (a.d >= 3) {
    const auto t = bounds::theorem1_decomposition(a.r, a.d);
    out["theorem1_decomposition"] = {{"k", t.k},
                                     {"vkf_target", t.vkf_target},
                                     {"vkf_required", t.vkf_required},
                                     {"constraint", t.constraint},
                                     {"constraint_equals_N", t.constraint == N},
                                     {"codimension_ok", t.codimension_ok}};
  } else {
    out["theorem1_decomposition"] = nullptr;
  }
  if (a.k) {
    out["skeleton"] = {{"k", *a.k},
                       {"vkf_dim", bounds::vkf_dim(*a.k, a.r)},
                       {"general_position_dim", bounds::general_position_dim(*a.k, a.r)},
                       {"constraint_N", bounds::constraint_N(*a.k, a.r)},
                       {"mw_codimension_ok", bounds::mw_codimension_ok(a.r, a.d, *a.k)}};
  }
  if (a.q) {
    const auto c = bounds::corollary_a_check(a.r, *a.q);
    out["corollary_a"] = {{"q", *a.q}, {"d", c.d}, {"target_dim", c.target_dim}, {"N", c.N}};
  }
  if (a.s) out["corollary_b"] = {{"s", *a.s}, {"holds", bounds::corollary_b_check(a.r, a.d, *a.s)}};

  rep.timings_ms["total"] = clock.elapsed_ms();
  return rep;
}

// ---------------------------------------------------------------------------
// cert

inline RunReport cmd_cert(std::int64_t r, const std::optional<std::string>& json_path = {}) {
  Stopwatch clock;
  RunReport rep;
  rep.command = "cert";
  rep.inputs = {{"r", r}};
  if (json_path) rep.inputs["json"] = *json_path;

  const auto cert = numbercert::bezout_certificate(r);
  const auto plan = numbercert::certificate_to_plan(cert);
  rep.outputs["gcd"] = numbercert::binomial_gcd(r).str();
  rep.outputs["certificate"] = io::to_json(cert);
  rep.outputs["checksum"] = cert.checksum().str();
  rep.outputs["plan"] = io::to_json(plan);
  if (json_path) io::write_json_file(*json_path, io::to_json(cert));
  set_verdict(rep, cert.valid());
  rep.timings_ms["total"] = clock.elapsed_ms();
  return rep;
}

// ---------------------------------------------------------------------------
// check

struct CheckArgs {
  std::string complex_path;
  std::string map_path;
  int r = 2;
  unsigned threads = 1;
  bool maximal_only = false;
};

inline RunReport cmd_check(const CheckArgs& a) {
  Stopwatch clock;
  RunReport rep;
  rep.command = "check";
  rep.inputs = {{"complex", a.complex_path}, {"map", a.map_path}, {"r", a.r},
                {"maximal_only", a.maximal_only}};

  const Json complex_json = io::read_json_file(a.complex_path);
  const Json map_json = io::read_json_file(a.map_path);
  rep.digest_material = {{"complex", complex_json}, {"map", map_json}, {"r", a.r},
                         {"maximal_only", a.maximal_only}};
  const auto K = io::complex_from_json(complex_json);
  const auto f = io::map_from_json(map_json, K);
  rep.timings_ms["load"] = clock.elapsed_ms();

  CheckOptions opts;
  opts.threads = a.threads;
  opts.maximal_only = a.maximal_only;
  const auto verdict = almost_r_embedding_check(f, a.r, opts);
  rep.outputs["verdict"] = verdict.pass ? "pass" : "fail";
  rep.outputs["tuples_checked"] = verdict.tuples_checked;
  if (verdict.witness) {
    rep.outputs["witness"] = io::to_json(*verdict.witness);
    rep.outputs["witness_verified"] = verify_witness(f, *verdict.witness);
  } else {
    rep.outputs["witness"] = nullptr;
  }
  set_verdict(rep, verdict.pass);
  rep.timings_ms["total"] = clock.elapsed_ms();
  return rep;
}

// ---------------------------------------------------------------------------
// eqmap

/// "auto" (certificate plan), "identity", a plan JSON file, or "1:-,2:+".
inline numbercert::ModificationPlan resolve_plan(int r, const std::string& source) {
  if (source == "auto") return numbercert::certificate_to_plan(numbercert::bezout_certificate(r));
  if (source == "identity" || source.empty()) {
    numbercert::ModificationPlan plan;
    plan.r = r;
    numbercert::validate_plan(plan);
    return plan;
  }
  if (source.ends_with(".json")) {
    auto plan = io::plan_from_json(io::read_json_file(source));
    if (plan.r != r) throw InvalidInput("plan file is for r=" + std::to_string(plan.r));
    return plan;
  }
  return numbercert::parse_plan(r, source);
}

inline Json to_json(const eqmaps::DegreeLedger& ledger) {
  Json steps = Json::array();
  for (std::size_t i = 0; i < ledger.steps.size(); ++i) {
    const auto& e = ledger.steps[i];
    steps.push_back({{"k", e.k},
                     {"sign", e.sign},
                     {"delta", e.delta.str()},
                     {"construction", eqmaps::to_string(e.construction)},
                     {"base_local_degree", e.base_local_degree},
                     {"degree_after", ledger.running[i + 1].str()}});
  }
  return {{"steps", std::move(steps)}, {"final_degree", ledger.final_degree().str()}};
}

inline Json to_json(const eqmaps::LocalDegreeReport& d) {
  return {{"construction", eqmaps::to_string(d.construction)},
          {"base_local_degree", d.base_local_degree},
          {"expected_sign", d.expected_sign},
          {"signs", d.signs},
          {"consistent", d.consistent},
          {"matches_expected", d.matches_expected}};
}

inline Json to_json(const eqmaps::MapVerification& v) {
  Json steps = Json::array();
  for (const auto& s : v.steps) {
    steps.push_back({{"k", s.degrees.k},
                     {"local_degrees", to_json(s.degrees)},
                     {"alternate_local_degrees", to_json(s.alternate)},
                     {"opposite_signs", s.opposite},
                     {"center_residual", s.center_residual},
                     {"spurious_zero_min", s.zeros.min_norm},
                     {"spurious_zero_argmin_t", s.zeros.argmin_t},
                     {"zero_search_starts", s.zeros.starts},
                     {"pass", s.pass()}});
  }
  Json j = {{"steps", std::move(steps)},
            {"equivariance",
             {{"max_residual", v.equivariance.max_residual},
              {"max_codomain_error", v.equivariance.max_codomain_error},
              {"samples", v.equivariance.samples}}},
            {"tolerances",
             {{"equivariance", eqmaps::kEquivarianceTolerance},
              {"center", eqmaps::kCenterTolerance},
              {"spurious_floor", eqmaps::kSpuriousFloor}}}};
  if (v.winding) j["winding"] = *v.winding;
  j["pass"] = v.pass();
  return j;
}

struct EqmapArgs {
  std::string mode;  // build | verify | winding
  int r = 6;
  std::string plan = "auto";
  std::uint64_t seed = 0;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> starts;
};

inline RunReport cmd_eqmap(const EqmapArgs& a) {
  Stopwatch clock;
  RunReport rep;
  rep.command = "eqmap " + a.mode;
  rep.seed = a.seed;
  rep.inputs = {{"mode", a.mode}, {"r", a.r}, {"plan", a.plan}, {"seed", a.seed}};

  if (a.mode != "build" && a.mode != "verify" && a.mode != "winding")
    throw InvalidInput("eqmap: mode must be build, verify or winding");
  const auto plan = resolve_plan(a.r, a.plan);
  rep.outputs["plan"] = io::to_json(plan);
  const auto built = eqmaps::build_from_plan(plan);
  rep.outputs["ledger"] = to_json(built.ledger);
  rep.outputs["degree_zero"] = built.ledger.final_degree() == 0;
  rep.timings_ms["build"] = clock.elapsed_ms();

  if (a.mode == "winding") {
    if (a.r != 2) throw InvalidInput("eqmap winding: requires r = 2");
    const long w = eqmaps::winding_number_r2(built.map);
    rep.outputs["winding"] = w;
    rep.outputs["matches_ledger"] = BigInt(w) == built.ledger.final_degree();
    set_verdict(rep, BigInt(w) == built.ledger.final_degree());
  } else {
    eqmaps::VerificationOptions opts;
    opts.seed = a.seed;
    const bool full = a.mode == "verify";
    opts.samples = a.samples.value_or(full ? 10'000 : 1'000);
    opts.starts = a.starts.value_or(full ? 10'000 : 1'000);
    rep.inputs["samples"] = opts.samples;
    rep.inputs["starts"] = opts.starts;
    const auto v = eqmaps::verify_built_map(built, opts);
    rep.outputs["verification"] = to_json(v);
    set_verdict(rep, v.pass());
  }
  rep.timings_ms["total"] = clock.elapsed_ms();
  return rep;
}

// ---------------------------------------------------------------------------
// delprod

inline RunReport cmd_delprod(int N, int k, int r) {
  Stopwatch clock;
  RunReport rep;
  rep.command = "delprod";
  rep.inputs = {{"N", N}, {"k", k}, {"r", r}};

  const auto K = simplex_skeleton(N, k);
  const auto stats = deleted_product_stats(K, r);
  Json cells = Json::object();
  for (const auto& [dim, count] : stats.cells_by_dim) cells[std::to_string(dim)] = count;
  rep.outputs["cells_by_dim"] = std::move(cells);
  rep.outputs["total"] = stats.total();
  rep.outputs["dimension"] = stats.dimension ? Json(*stats.dimension) : Json(nullptr);
  rep.outputs["empty"] = !stats.dimension.has_value();
  const bool free_action = verify_free_action(K, r);
  rep.outputs["free_action"] = free_action;
  set_verdict(rep, free_action);
  rep.timings_ms["total"] = clock.elapsed_ms();
  return rep;
}

// ---------------------------------------------------------------------------
// input generators

inline RunReport cmd_skeleton(int N, int k, const std::optional<std::string>& out_path) {
  RunReport rep;
  rep.command = "skeleton";
  rep.inputs = {{"N", N}, {"k", k}};
  rep.outputs["complex"] = io::to_json(simplex_skeleton(N, k));
  if (out_path) io::write_json_file(*out_path, rep.outputs["complex"]);
  return rep;
}

inline RunReport cmd_randmap(const std::string& complex_path, int d, std::uint64_t seed,
                             const std::optional<std::string>& out_path) {
  RunReport rep;
  rep.command = "randmap";
  rep.seed = seed;
  rep.inputs = {{"complex", complex_path}, {"d", d}, {"seed", seed}};
  const Json complex_json = io::read_json_file(complex_path);
  rep.digest_material = {{"complex", complex_json}, {"d", d}, {"seed", seed}};
  const auto f = random_rational_map(io::complex_from_json(complex_json), d, seed);
  rep.outputs["map"] = io::to_json(f);
  if (out_path) io::write_json_file(*out_path, rep.outputs["map"]);
  return rep;
}

}  // namespace tverberg::cli
