// res_eval: batch evaluation of residual-echo suppression.
//
//   res_eval simulate  --spec spec.json --out scenes --count 20 --seed 1
//   res_eval suppress  --manifest scenes/manifest.json --out sup --alphas 0.5
//   res_eval evaluate  --manifest sup/manifest.json --out report
//   res_eval sweep     --spec spec.json --alphas 0,0.25,0.5,0.75,1 --out sweep.csv
//   res_eval correlate --table report/summary.csv --metric DSML --score dnsmos

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "reseval/commands.h"
#include "reseval/error.h"
#include "reseval/suppressor.h"

namespace {

reseval::GainDomain to_domain(const std::string& name) {
  auto d = reseval::parse_gain_domain(name);
  if (!d) throw CLI::ValidationError("--gain-domain", "expected 'stft' or 'sample'");
  return *d;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Residual-echo suppression evaluation toolkit"};
  app.require_subcommand(1);

  std::size_t jobs = 1;
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  // simulate
  reseval::SimulateOptions sim;
  std::uint64_t sim_seed = 0;
  auto* simulate = app.add_subcommand("simulate", "Generate synthetic double-talk scenes");
  simulate->add_option("--spec", sim.spec_file, "Scene spec JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", sim.out_dir, "Output directory")->required();
  simulate->add_option("--count", sim.count, "Number of scenes")->check(CLI::PositiveNumber);
  auto* sim_seed_opt = simulate->add_option("--seed", sim_seed, "First seed (default: RES_EVAL_SEED, then spec)");
  simulate->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  // suppress
  reseval::SuppressOptions sup;
  double sup_alpha = 0.0;
  double sup_beta = 1.0;
  auto* suppress = app.add_subcommand("suppress", "Run the oracle suppressor over a manifest");
  suppress->add_option("--manifest", sup.manifest)->required()->check(CLI::ExistingFile);
  suppress->add_option("--out", sup.out_dir)->required();
  auto* alpha_opt = suppress->add_option("--alphas,--alpha", sup_alpha, "Design parameter alpha (beta = 1 + 15 alpha)");
  auto* beta_opt = suppress->add_option("--beta", sup_beta, "Over-suppression factor (>= 1)")->excludes(alpha_opt);
  suppress->add_option("--floor", sup.floor, "Spectral gain floor");
  suppress->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  // evaluate
  reseval::EvaluateCommandOptions ev;
  double ev_threshold = 0.0, ev_clamp = 0.0;
  std::string ev_domain = "stft";
  auto* evaluate = app.add_subcommand("evaluate", "Compute per-frame and aggregate metrics");
  evaluate->add_option("--manifest", ev.manifest)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--out", ev.out_dir, "Report directory")->required();
  auto* ev_thr_opt = evaluate->add_option("--threshold-db", ev_threshold, "Frame activity threshold (default -50)");
  auto* ev_clamp_opt = evaluate->add_option("--clamp-db", ev_clamp, "Metric clamp bound (default 120)");
  evaluate->add_option("--gain-domain", ev_domain, "stft or sample");
  evaluate->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  // sweep
  reseval::SweepOptions sw;
  std::string sw_manifest, sw_spec, sw_domain = "stft";
  std::uint64_t sw_seed = 0;
  auto* sweep = app.add_subcommand("sweep", "Alpha sweep of the oracle suppressor");
  auto* sw_man_opt = sweep->add_option("--manifest", sw_manifest)->check(CLI::ExistingFile);
  auto* sw_spec_opt = sweep->add_option("--spec", sw_spec)->check(CLI::ExistingFile)->excludes(sw_man_opt);
  sweep->add_option("--count", sw.count, "Scenes generated from --spec")->check(CLI::PositiveNumber);
  auto* sw_seed_opt = sweep->add_option("--seed", sw_seed);
  sweep->add_option("--alphas", sw.alphas, "Comma-separated alphas")->delimiter(',')->required();
  sweep->add_option("--out", sw.out_table, "Output CSV")->required();
  sweep->add_option("--group-by", sw.group_by, "Grouping fields/tags")->delimiter(',');
  sweep->add_option("--floor", sw.floor);
  sweep->add_option("--threshold-db", sw.threshold_db);
  sweep->add_option("--clamp-db", sw.clamp_db);
  sweep->add_option("--gain-domain", sw_domain, "stft or sample");
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  // correlate
  reseval::CorrelateOptions co;
  std::string co_scores, co_group, co_out;
  auto* correlate = app.add_subcommand("correlate", "PCC/SRCC between metric and score columns");
  correlate->add_option("--table", co.table, "Score table CSV")->required()->check(CLI::ExistingFile);
  auto* co_scores_opt = correlate->add_option("--scores", co_scores, "Extra CSV joined on id")->check(CLI::ExistingFile);
  correlate->add_option("--metric", co.metric_cols, "Metric column(s)")->required()->delimiter(',');
  correlate->add_option("--score", co.score_col, "Score column")->required();
  auto* co_group_opt = correlate->add_option("--group-by", co_group);
  auto* co_out_opt = correlate->add_option("--out", co_out, "Write results CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      if (*sim_seed_opt) sim.seed = sim_seed;
      sim.jobs = jobs;
      return reseval::cmd_simulate(sim, std::cerr);
    }
    if (suppress->parsed()) {
      if (*alpha_opt) sup.alpha = sup_alpha;
      if (*beta_opt) sup.beta = sup_beta;
      sup.jobs = jobs;
      return reseval::cmd_suppress(sup, std::cerr);
    }
    if (evaluate->parsed()) {
      if (*ev_thr_opt) ev.threshold_db = ev_threshold;
      if (*ev_clamp_opt) ev.clamp_db = ev_clamp;
      ev.gain_domain = to_domain(ev_domain);
      ev.jobs = jobs;
      return reseval::cmd_evaluate(ev, std::cerr);
    }
    if (sweep->parsed()) {
      if (*sw_man_opt) sw.manifest = sw_manifest;
      if (*sw_spec_opt) sw.spec_file = sw_spec;
      if (*sw_seed_opt) sw.seed = sw_seed;
      sw.gain_domain = to_domain(sw_domain);
      sw.jobs = jobs;
      return reseval::cmd_sweep(sw, std::cerr);
    }
    if (correlate->parsed()) {
      if (*co_scores_opt) co.scores = co_scores;
      if (*co_group_opt) co.group_by = co_group;
      if (*co_out_opt) co.out = co_out;
      return reseval::cmd_correlate(co, std::cout, std::cerr);
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
