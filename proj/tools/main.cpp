#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"

using namespace ellip::cli;

int main(int argc, char** argv) {
  CLI::App app{"ellip: kernel-embedding test of elliptical symmetry"};
  app.require_subcommand(1);

  TestOptions test;
  auto* t = app.add_subcommand("test", "Test a CSV sample for ellipticity and write a JSON report");
  t->add_option("--input", test.input, "Numeric CSV, one observation per row")->required();
  t->add_option("--output", test.output, "JSON report path")->required();
  t->add_option("--alpha", test.alpha, "Significance level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  t->add_option("--kernel", test.kernel, "Kernel family")->check(CLI::IsMember({"gaussian", "piq"}))->capture_default_str();
  t->add_option("--gamma-u", test.gamma_u, "Radius bandwidth (default: mean-distance heuristic)")->check(CLI::PositiveNumber);
  t->add_option("--gamma-theta", test.gamma_theta, "Angle bandwidth (default: heuristic)")->check(CLI::PositiveNumber);
  t->add_option("--ridge", test.ridge, "Diagonal ridge for inverses and square roots")->check(CLI::NonNegativeNumber)->capture_default_str();

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Generate a synthetic null or alternative sample");
  g->add_option("--kind", gen.kind, "null or alt")->required()->check(CLI::IsMember({"null", "alt"}));
  g->add_option("--df", gen.df, "Chi-square degrees of freedom (alt)")->check(CLI::PositiveNumber)->capture_default_str();
  g->add_option("--n", gen.n, "Observations")->required();
  g->add_option("--d", gen.d, "Dimension")->required();
  g->add_option("--seed", gen.seed, "RNG seed")->required();
  g->add_option("--output", gen.output, "CSV path")->required();

  SimulateOptions sim;
  auto* s = app.add_subcommand("simulate", "Monte-Carlo rejection rates over a scenario grid");
  s->add_option("--grid", sim.grid, "e.g. 'n=500;d=3,5;kind=null,alt;df=2,4'")->required();
  s->add_option("--reps", sim.reps, "Replicates per cell")->check(CLI::PositiveNumber)->capture_default_str();
  s->add_option("--alpha", sim.alpha, "Significance level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  s->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  s->add_option("--output-dir", sim.output_dir, "Directory for summary.json and pvalues.csv")->required();
  s->add_option("--threads", sim.threads, "Worker threads (0 = all cores)")->capture_default_str();

  BoxcoxOptions box;
  auto* b = app.add_subcommand("boxcox", "Fit and apply per-column Box-Cox transforms");
  b->add_option("--input", box.input, "Positive numeric CSV")->required();
  b->add_option("--output", box.output, "Transformed CSV path")->required();
  b->add_option("--lambdas", box.lambdas, "Optional JSON path for the fitted lambdas");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (t->parsed()) return cmd_test(test);
  if (g->parsed()) return cmd_gen(gen);
  if (s->parsed()) return cmd_simulate(sim);
  return cmd_boxcox(box);
}
