#include <cstdio>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "linform/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Sidorenko/commonness toolkit for linear equations over finite fields"};
  app.require_subcommand(1);

  linform::CommandRequest req;
  std::string kind, set_file, fn_file;
  int n = 1, t = 1;
  std::uint64_t seed = 0, trials = 0;
  double c = 0.0;

  app.add_option("--format", req.format, "report format: json or table")
      ->check(CLI::IsMember({"json", "table"}));
  app.add_option("--threads", req.threads, "worker cap (requests run single-threaded)")
      ->check(CLI::PositiveNumber);

  auto add_sub = [&](const char* name, const char* desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->fallthrough();  // route --format/--threads to the parent wherever they appear
    return sub;
  };
  auto eq_arg = [&](CLI::App* sub) {
    sub->add_option("equation", req.equation,
                    "equation spec, e.g. \"L=1,-2,1; q=5\" or \"L=1,1; q=3; free=1; b=nonzero\"")
        ->required();
  };

  eq_arg(add_sub("classify", "decide Sidorenko/common via the pairing criterion"));

  auto* cmd_count = add_sub("count", "exact solution count inside a point set");
  eq_arg(cmd_count);
  cmd_count->add_option("--set", set_file, "point-set file")->required();

  auto* cmd_lambda = add_sub("lambda", "solution-density functional of a function");
  eq_arg(cmd_lambda);
  cmd_lambda->add_option("--fn", fn_file, "group-function file")->required();
  auto* fl_spectral = cmd_lambda->add_flag("--spectral", "frequency-side evaluation only");
  auto* fl_brute = cmd_lambda->add_flag("--brute", "direct average only");
  auto* fl_both = cmd_lambda->add_flag("--both", "both evaluations plus their difference");
  fl_spectral->excludes(fl_brute)->excludes(fl_both);
  fl_brute->excludes(fl_both);

  auto* cmd_fourier = add_sub("fourier", "transform a function file");
  cmd_fourier->add_option("--fn", fn_file, "group-function file")->required();
  cmd_fourier->add_flag("--inverse", req.inverse, "apply the inverse transform");

  auto* cmd_forge = add_sub("forge", "construct a verified counterexample witness");
  eq_arg(cmd_forge);
  cmd_forge->add_option("--kind", kind, "violated property: sidorenko or common")
      ->required()
      ->check(CLI::IsMember({"sidorenko", "common"}));
  auto* fo_seed = cmd_forge->add_option("--seed", seed, "sampler seed (default 0)");
  auto* fo_c = cmd_forge->add_option("--c", c, "perturbation size override");

  auto* cmd_refute = add_sub("refute", "search F_q^n for violating subsets/colorings");
  eq_arg(cmd_refute);
  cmd_refute->add_option("--kind", kind, "searched property: sidorenko or common")
      ->required()
      ->check(CLI::IsMember({"sidorenko", "common"}));
  cmd_refute->add_option("--n", n, "ambient dimension")->required();
  auto* re_random = cmd_refute->add_option("--random", trials, "sample TRIALS random objects");
  auto* re_seed = cmd_refute->add_option("--seed", seed, "sampler seed (default 0)");

  auto* cmd_hilbert = add_sub("hilbert", "embed a dimension-t combinatorial cube");
  eq_arg(cmd_hilbert);
  cmd_hilbert->add_option("--t", t, "cube dimension")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    nlohmann::json err{{"error", {{"code", "UsageError"}, {"message", e.what()}}}};
    std::fprintf(stderr, "%s\n", err.dump(2).c_str());
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  req.subcommand = sub->get_name();
  if (req.subcommand == "count") req.set_file = set_file;
  if (req.subcommand == "lambda" || req.subcommand == "fourier") req.fn_file = fn_file;
  if (req.subcommand == "lambda") {
    if (*fl_spectral) req.lambda_mode = "spectral";
    if (*fl_brute) req.lambda_mode = "brute";
    if (*fl_both) req.lambda_mode = "both";
  }
  if (req.subcommand == "forge" || req.subcommand == "refute") req.kind = kind;
  if (req.subcommand == "forge" && *fo_seed) req.seed = seed;
  if (req.subcommand == "forge" && *fo_c) req.c = c;
  if (req.subcommand == "refute") {
    req.n = n;
    if (*re_random) req.random_trials = trials;
    if (*re_seed) req.seed = seed;
  }
  if (req.subcommand == "hilbert") req.t = t;

  linform::RunResult res = linform::run(req);
  std::fputs(res.report.c_str(), res.exit_code == 2 ? stderr : stdout);
  return res.exit_code;
}
