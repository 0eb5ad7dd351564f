// tverberg: command-line front end. Prints one JSON RunReport on stdout.
//
// Exit codes: 0 pass, 1 verdict failure, 2 input error, 3 numerical
// degeneracy, 4 internal consistency error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tverberg/commands.hpp"

namespace cli = tverberg::cli;

namespace {

template <class T>
std::optional<T> opt_if(const CLI::Option* o, const T& value) {
  return o->count() ? std::optional<T>(value) : std::nullopt;
}

int emit(const cli::RunReport& rep, bool pretty) {
  std::cout << (pretty ? rep.to_json().dump(2) : rep.to_json().dump()) << '\n';
  if (!rep.pass && rep.outputs.contains("error"))
    std::cerr << "error: " << rep.outputs["error"]["message"].get<std::string>() << '\n';
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
  return rep.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Almost r-embeddings, Tverberg-type bounds and equivariant degree certificates"};
  app.require_subcommand(1);
  bool pretty = false;
  app.add_flag("--pretty", pretty, "Indent JSON output");

  cli::BoundsArgs bounds;
  std::int64_t bk = 0, bs = 0, bq = 0;
  auto* sub_bounds = app.add_subcommand("bounds", "Table of dimension bounds for (r, d)");
  sub_bounds->add_option("--r", bounds.r, "Number of intersecting faces")->required();
  sub_bounds->add_option("--d", bounds.d, "Ambient dimension")->required();
  auto* o_k = sub_bounds->add_option("--k", bk, "Skeleton dimension");
  auto* o_s = sub_bounds->add_option("--s", bs, "Codimension shift for the large-d corollary");
  auto* o_q = sub_bounds->add_option("--q", bq, "Parameter with d = (r+1)q - 1");

  std::int64_t cert_r = 0;
  std::string cert_json;
  auto* sub_cert = app.add_subcommand("cert", "Integer certificate sum a_k C(r,k) = -1");
  sub_cert->add_option("--r", cert_r, "r >= 2, not a prime power")->required();
  auto* o_cert_json = sub_cert->add_option("--json", cert_json, "Write the certificate to this file");

  cli::CheckArgs check;
  bool parallel = false;
  auto* sub_check = app.add_subcommand("check", "Exact almost r-embedding check of a PL map");
  sub_check->add_option("--complex", check.complex_path, "Complex JSON")->required();
  sub_check->add_option("--map", check.map_path, "Map JSON")->required();
  sub_check->add_option("--r", check.r, "Number of faces")->required();
  sub_check->add_flag("--parallel", parallel, "Use TVERBERG_THREADS workers (default: all cores)");
  auto* o_threads = sub_check->add_option("--threads", check.threads, "Explicit worker count");
  sub_check->add_flag("--maximal-only", check.maximal_only, "Only test inclusion-maximal tuples");

  cli::EqmapArgs eq;
  std::size_t eq_samples = 0, eq_starts = 0;
  auto* sub_eq = app.add_subcommand("eqmap", "Equivariant self-maps of S^{2r-3}");
  sub_eq->add_option("mode", eq.mode, "build | verify | winding")
      ->required()
      ->check(CLI::IsMember({"build", "verify", "winding"}));
  sub_eq->add_option("--r", eq.r, "2 <= r <= 16")->required();
  sub_eq->add_option("--plan", eq.plan, "auto | identity | plan.json | \"1:-,2:+\"");
  sub_eq->add_option("--seed", eq.seed, "Sampling seed");
  auto* o_samples = sub_eq->add_option("--samples", eq_samples, "Equivariance samples");
  auto* o_starts = sub_eq->add_option("--starts", eq_starts, "Zero-search starts per step");

  int dp_N = 0, dp_k = 0, dp_r = 0;
  auto* sub_dp = app.add_subcommand("delprod", "Cells of the deleted product of a simplex skeleton");
  sub_dp->add_option("--N", dp_N, "Simplex dimension")->required();
  sub_dp->add_option("--k", dp_k, "Skeleton dimension")->required();
  sub_dp->add_option("--r", dp_r, "Number of factors")->required();

  int sk_N = 0, sk_k = 0;
  std::string sk_out;
  auto* sub_sk = app.add_subcommand("skeleton", "Write the k-skeleton of the N-simplex as complex JSON");
  sub_sk->add_option("--N", sk_N)->required();
  sub_sk->add_option("--k", sk_k)->required();
  auto* o_sk_out = sub_sk->add_option("--out", sk_out, "Output file");

  std::string rm_complex, rm_out;
  int rm_d = 0;
  std::uint64_t rm_seed = 0;
  auto* sub_rm = app.add_subcommand("randmap", "Write a seeded random rational map as map JSON");
  sub_rm->add_option("--complex", rm_complex)->required();
  sub_rm->add_option("--d", rm_d)->required();
  sub_rm->add_option("--seed", rm_seed);
  auto* o_rm_out = sub_rm->add_option("--out", rm_out, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitInputError;
  }

  std::string command = "unknown";
  cli::Json inputs = cli::Json::object();
  try {
    if (*sub_bounds) {
      command = "bounds";
      bounds.k = opt_if(o_k, bk);
      bounds.s = opt_if(o_s, bs);
      bounds.q = opt_if(o_q, bq);
      inputs = {{"r", bounds.r}, {"d", bounds.d}};
      return emit(cli::cmd_bounds(bounds), pretty);
    }
    if (*sub_cert) {
      command = "cert";
      inputs = {{"r", cert_r}};
      return emit(cli::cmd_cert(cert_r, opt_if(o_cert_json, cert_json)), pretty);
    }
    if (*sub_check) {
      command = "check";
      inputs = {{"complex", check.complex_path}, {"map", check.map_path}, {"r", check.r}};
      if (!o_threads->count()) check.threads = parallel ? tverberg::eqmaps::thread_count() : 1;
      return emit(cli::cmd_check(check), pretty);
    }
    if (*sub_eq) {
      command = "eqmap " + eq.mode;
      inputs = {{"mode", eq.mode}, {"r", eq.r}, {"plan", eq.plan}, {"seed", eq.seed}};
      eq.samples = opt_if(o_samples, eq_samples);
      eq.starts = opt_if(o_starts, eq_starts);
      return emit(cli::cmd_eqmap(eq), pretty);
    }
    if (*sub_dp) {
      command = "delprod";
      inputs = {{"N", dp_N}, {"k", dp_k}, {"r", dp_r}};
      return emit(cli::cmd_delprod(dp_N, dp_k, dp_r), pretty);
    }
    if (*sub_sk) {
      command = "skeleton";
      inputs = {{"N", sk_N}, {"k", sk_k}};
      return emit(cli::cmd_skeleton(sk_N, sk_k, opt_if(o_sk_out, sk_out)), pretty);
    }
    if (*sub_rm) {
      command = "randmap";
      inputs = {{"complex", rm_complex}, {"d", rm_d}, {"seed", rm_seed}};
      return emit(cli::cmd_randmap(rm_complex, rm_d, rm_seed, opt_if(o_rm_out, rm_out)), pretty);
    }
  } catch (...) {
    return emit(cli::error_report(command, inputs, std::current_exception()), pretty);
  }
  return cli::kExitInputError;
}
