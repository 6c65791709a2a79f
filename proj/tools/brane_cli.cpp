#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "brane/commands.hpp"

namespace {

using brane::cli::Options;

void addCommon(CLI::App* cmd, Options& opt) {
  cmd->add_option("--tol", opt.tol, "residual tolerance")->capture_default_str();
  cmd->add_option("--out", opt.out, "write the report here instead of stdout");
  cmd->add_flag("!--no-timestamp", opt.timestamp, "omit the timestamp field");
}

void addSpace(CLI::App* cmd, Options& opt) {
  cmd->add_option_function<std::string>(
         "--space", [&opt](const std::string& s) { opt.space = s == "k3" ? brane::SpaceName::K3 : brane::SpaceName::T4; },
         "cohomology model")
      ->check(CLI::IsMember({"t4", "k3"}))
      ->default_str("t4");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checks spacefilling branes on the four-torus and samples their period domain."};
  app.require_subcommand(1);

  Options opt;
  std::string first, second;

  auto* verify = app.add_subcommand("verify", "SB and HS checks for a symplectic form and a 2-form");
  verify->add_option("omega", first, "constant symplectic form file")->required();
  verify->add_option("form", second, "constant2 or trigpoly2 form file")->required();
  verify->add_option("--grid", opt.grid, "grid points per axis for non-constant forms")->capture_default_str();
  addCommon(verify, opt);

  auto* quadric = app.add_subcommand("quadric", "sample the quadric of brane classes and reconstruct branes");
  quadric->add_option("omega", first, "symplectic form or class file")->required();
  quadric->add_option("base", second, "base brane form or class file")->required();
  quadric->add_option("--samples", opt.samples, "number of samples")->capture_default_str();
  quadric->add_option("--seed", opt.seed, "sampling seed")->capture_default_str();
  addSpace(quadric, opt);
  addCommon(quadric, opt);

  auto* metric = app.add_subcommand("metric", "CSV of the induced metric on the quadric");
  metric->add_option("omega", first, "symplectic form or class file")->required();
  metric->add_option("base", second, "base brane form or class file")->required();
  auto* theta = metric->add_option_function<double>("--theta", [&](double t) { opt.theta = t; }, "chart angle");
  auto* ybar = metric->add_option("--ybar", opt.ybar, "chart fiber coordinates, comma separated")->delimiter(',');
  auto* sweep = metric->add_option_function<int>("--sweep", [&](int n) { opt.sweep = n; }, "number of random samples");
  sweep->excludes(theta)->excludes(ybar);
  metric->add_option("--seed", opt.seed, "sampling seed")->capture_default_str();
  addSpace(metric, opt);
  metric->add_option("--tol", opt.tol, "residual tolerance")->capture_default_str();
  metric->add_option("--out", opt.out, "write the CSV here instead of stdout");
  metric->add_flag("!--no-timestamp", opt.timestamp, "accepted for symmetry; CSV output carries no timestamp");

  auto* nijenhuis = app.add_subcommand("nijenhuis", "Nijenhuis defect against dF on a grid");
  nijenhuis->set_help_flag("--help", "print this help message and exit");  // -h would clash with --h
  nijenhuis->add_option("omega", first, "constant symplectic form file")->required();
  nijenhuis->add_option("form", second, "form file")->required();
  nijenhuis->add_option("--grid", opt.grid, "grid points per axis")->capture_default_str();
  nijenhuis->add_option("--h", opt.h, "finite-difference step")->capture_default_str();
  nijenhuis->add_option("--seed", opt.seed, "seed for identity sample points")->capture_default_str();
  addCommon(nijenhuis, opt);

  auto* example = app.add_subcommand("example-torus", "run the built-in torus example");
  addCommon(example, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : brane::cli::kExitInput;
  }

  if (verify->parsed()) return brane::cli::cmdVerify(first, second, opt, std::cout, std::cerr);
  if (quadric->parsed()) return brane::cli::cmdQuadric(first, second, opt, std::cout, std::cerr);
  if (metric->parsed()) return brane::cli::cmdMetric(first, second, opt, std::cout, std::cerr);
  if (nijenhuis->parsed()) return brane::cli::cmdNijenhuis(first, second, opt, std::cout, std::cerr);
  return brane::cli::cmdExampleTorus(opt, std::cout, std::cerr);
}
