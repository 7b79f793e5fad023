#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using namespace hexcmc::cli;

void add_annulus_flags(CLI::App *cmd, AnnulusArgs &a) {
  cmd->add_option("--x1", a.x1, "outer half-width")->check(CLI::PositiveNumber);
  cmd->add_option("--y1", a.y1, "outer half-height")->check(CLI::PositiveNumber);
  cmd->add_option("--hole", a.hole, "hole half-size (sets x0 and y0)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--x0", a.x0, "hole half-width, overrides --hole")->check(CLI::NonNegativeNumber);
  cmd->add_option("--y0", a.y0, "hole half-height, overrides --hole")->check(CLI::NonNegativeNumber);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Polyhedral constant mean curvature surfaces for the hexagonal norm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hexcmc 0.1.0");

  const std::vector<std::string> chain_kinds{"unduloid", "nodoid"};

  SolveArgs solve;
  auto *c_solve = app.add_subcommand("solve", "solve a Delaunay period at fixed neck parameter r");
  c_solve->add_option("--kind", solve.kind)->required()->check(CLI::IsMember(chain_kinds));
  c_solve->add_option("--r", solve.r, "neck parameter")->required()->check(CLI::NonNegativeNumber);
  c_solve->add_option("--tolerance", solve.tolerance)->check(CLI::PositiveNumber);
  c_solve->add_option("--r-max", solve.r_max, "largest r the continuation will attempt")->check(CLI::PositiveNumber);
  c_solve->add_option("--out", solve.out, "JSON output path (default stdout)");

  MeshArgs mesh;
  auto *c_mesh = app.add_subcommand("mesh", "export a surface as OBJ with a JSON sidecar");
  c_mesh->add_option("--kind", mesh.kind)
      ->required()
      ->check(CLI::IsMember({"unduloid", "nodoid", "wulff", "assembly"}));
  c_mesh->add_option("--r", mesh.r, "solve at this r instead of reading --params")->check(CLI::NonNegativeNumber);
  c_mesh->add_option("--params", mesh.params, "JSON from 'solve' or 'fit'");
  c_mesh->add_option("--out", mesh.out, "OBJ output path")->required();

  auto *c_verify = app.add_subcommand("verify", "run a verification and print a JSON report");
  c_verify->require_subcommand(1);

  LemmaArgs lemma;
  auto *c_lemma = c_verify->add_subcommand("lemma", "rectilinear isoperimetric check on an annulus");
  add_annulus_flags(c_lemma, lemma.annulus);
  c_lemma->add_option("--trials", lemma.trials)->check(CLI::NonNegativeNumber);
  c_lemma->add_option("--resolution", lemma.resolution)->check(CLI::PositiveNumber);
  c_lemma->add_option("--exhaustive", lemma.exhaustive, "grid for exhaustive rectangle unions")
      ->check(CLI::NonNegativeNumber);
  c_lemma->add_option("--seed", lemma.seed);
  c_lemma->add_option("--epsilon", lemma.epsilon, "hole size bound for the lemma regime")
      ->check(CLI::PositiveNumber);
  c_lemma->add_option("--out", lemma.out, "also write the report here");

  VariationArgs variation;
  auto *c_var = c_verify->add_subcommand("variation", "first-variation inequality for random test functions");
  add_annulus_flags(c_var, variation.annulus);
  c_var->add_option("--grid", variation.grid)->check(CLI::PositiveNumber);
  c_var->add_option("--samples", variation.samples)->check(CLI::NonNegativeNumber);
  c_var->add_option("--seed", variation.seed);
  c_var->add_option("--out", variation.out, "also write the report here");

  CurvatureArgs curvature;
  auto *c_curv = c_verify->add_subcommand("curvature", "per-class dE - 2 dV residuals");
  auto *surface_opt = c_curv->add_option("--surface", curvature.surface, "JSON from 'solve' or 'fit'");
  c_curv->add_option("--kind", curvature.kind)->check(CLI::IsMember({"wulff"}))->excludes(surface_opt);
  c_curv->add_option("--tolerance", curvature.tolerance)->check(CLI::PositiveNumber);
  c_curv->add_option("--out", curvature.out, "also write the report here");

  SweepArgs sweep;
  auto *c_sweep = app.add_subcommand("sweep", "solve a family over a list or range of r");
  c_sweep->add_option("--kind", sweep.kind)->required()->check(CLI::IsMember(chain_kinds));
  c_sweep->add_option("--r", sweep.r, "start:stop:step or a comma list")->required();
  c_sweep->add_option("--r-max", sweep.r_max)->check(CLI::PositiveNumber);
  c_sweep->add_option("--out", sweep.out, "CSV output path (default stdout)");

  FitArgs fit;
  auto *c_fit = app.add_subcommand("fit", "fit the assembly neck so the hexagon closes");
  c_fit->add_option("--m-u", fit.m_u, "unduloid periods per side")->check(CLI::PositiveNumber);
  c_fit->add_option("--m-n", fit.m_n, "nodoid periods per diagonal (default 2 m_u + 1)")
      ->check(CLI::PositiveNumber);
  c_fit->add_option("--r1-max", fit.r1_max)->check(CLI::PositiveNumber);
  c_fit->add_option("--out", fit.out, "JSON output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*c_solve) {
      return cmd_solve(solve);
    }
    if (*c_mesh) {
      return cmd_mesh(mesh);
    }
    if (*c_lemma) {
      return cmd_verify_lemma(lemma);
    }
    if (*c_var) {
      return cmd_verify_variation(variation);
    }
    if (*c_curv) {
      return cmd_verify_curvature(curvature);
    }
    if (*c_sweep) {
      return cmd_sweep(sweep);
    }
    if (*c_fit) {
      return cmd_fit(fit);
    }
  } catch (const UsageError &e) {
    std::cerr << "hexcmc: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception &e) {
    std::cerr << "hexcmc: " << e.what() << '\n';
    return kSolverFail;
  }
  return kUsage;
}
