#include "semcomp/pipeline.hpp"

#include "semcomp/plots.hpp"

#include <chrono>
#include <ostream>
#include <sstream>

namespace semcomp {

namespace {

void note(const StageContext &ctx, const std::string &message) {
  if (ctx.log)
    *ctx.log << message << std::endl;
}

template <class Fn> std::string render(Fn &&fn) {
  std::ostringstream out;
  fn(out);
  return out.str();
}

ExperimentConfig experiment_for(const StageContext &ctx) {
  ExperimentConfig config = ctx.config.resolved_experiment();
  config.jobs = ctx.jobs;
  return config;
}

} // namespace

std::filesystem::path StageContext::require(const Artifact &artifact) const {
  auto p = path(artifact);
  if (!std::filesystem::is_regular_file(p))
    fail(ErrorKind::MissingArtifact, std::string("missing artifact '") + artifact.name +
                                         "' (" + p.string() + "); run '" + artifact.producer +
                                         "' first");
  return p;
}

Dataset load_dataset(const StageContext &ctx) {
  std::istringstream in(read_file(ctx.require(artifacts::dataset)));
  return read_dataset_csv(in);
}

KernelModel load_global_model(const StageContext &ctx) {
  std::istringstream in(read_file(ctx.require(artifacts::global_model)));
  return read_kernel_model(in);
}

Trajectory load_trajectory(const StageContext &ctx) {
  std::istringstream in(read_file(ctx.require(artifacts::trajectory)));
  Trajectory trajectory = read_trajectory_csv(in);
  trajectory.seed = ctx.config.seed(SeedStage::Trajectory);
  return trajectory;
}

void stage_gen_world(const StageContext &ctx) {
  const MixtureSpec world = build_mixture(ctx.config.world);
  Rng rng(ctx.config.seed(SeedStage::World));
  const Dataset data = sample_labeled(world, ctx.config.dataset_size, rng);
  write_file(ctx.path(artifacts::dataset), render([&](std::ostream &o) {
               write_dataset_csv(o, data);
             }));
  note(ctx, "gen-world: wrote " + std::to_string(data.size()) + " samples to " +
                ctx.path(artifacts::dataset).string());
}

void stage_train_global(const StageContext &ctx) {
  const Dataset data = load_dataset(ctx);
  const MixtureSpec world = build_mixture(ctx.config.world);
  const auto start = std::chrono::steady_clock::now();
  const RbfTrainingResult trained =
      train_rbf_svm_detailed(data, ctx.config.global_classifier.svm);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Rng rng(ctx.config.seed(SeedStage::Holdout));
  const Dataset holdout =
      sample_labeled(world, ctx.config.global_classifier.holdout_size, rng);
  const Agreement held = accuracy(trained.model, holdout);

  write_file(ctx.path(artifacts::global_model), render([&](std::ostream &o) {
               write_model(o, trained.model);
             }));
  write_file(ctx.path(artifacts::global_eval), render([&](std::ostream &o) {
               o << "metric,value\n";
               o << "holdout_accuracy," << format_real(held.accuracy) << '\n';
               o << "holdout_n," << held.n << '\n';
               o << "support_vectors," << trained.model.support_points.size() << '\n';
               o << "prediction_ops," << prediction_ops(trained.model) << '\n';
               o << "smo_iterations," << trained.iterations << '\n';
             }));
  std::ostringstream msg;
  msg << "train-global: " << trained.model.support_points.size() << " support vectors, "
      << trained.iterations << " SMO updates in " << seconds
      << " s; held-out accuracy " << held.accuracy;
  note(ctx, msg.str());
}

void stage_gen_trajectory(const StageContext &ctx) {
  const MixtureSpec world = build_mixture(ctx.config.world);
  const Trajectory trajectory =
      sample_trajectory(world, ctx.config.trajectory.length, ctx.config.trajectory.mh,
                        ctx.config.seed(SeedStage::Trajectory));
  write_file(ctx.path(artifacts::trajectory), render([&](std::ostream &o) {
               write_trajectory_csv(o, trajectory);
             }));
  std::ostringstream msg;
  msg << "gen-trajectory: " << trajectory.points.size() << " states, acceptance rate "
      << trajectory.accept_rate;
  note(ctx, msg.str());
}

void stage_simulate(const StageContext &ctx) {
  const Dataset data = load_dataset(ctx);
  const KernelModel f = load_global_model(ctx);
  const Trajectory trajectory = load_trajectory(ctx);
  const MixtureSpec world = build_mixture(ctx.config.world);
  const auto start = std::chrono::steady_clock::now();
  const auto records = run_duplex({world, f, data, trajectory}, experiment_for(ctx),
                                  ctx.config.constraints, ctx.config.loss);
  const SummaryStats summary = summarize(records);
  write_file(ctx.path(artifacts::records), render([&](std::ostream &o) {
               write_records_csv(o, records);
             }));
  write_file(ctx.path(artifacts::summary), render([&](std::ostream &o) {
               write_summary_csv(o, summary);
             }));
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream msg;
  msg << "simulate: " << records.size() << " windows in " << seconds << " s";
  for (const auto &s : summary)
    msg << "\n  gamma " << s.gamma << ": radius " << s.radius.mean << ", accuracy "
        << s.accuracy.mean << ", f accuracy " << s.global_accuracy.mean << ", fallbacks "
        << s.fallbacks << ", infeasible " << s.infeasible;
  note(ctx, msg.str());
}

void stage_aging(const StageContext &ctx) {
  const Dataset data = load_dataset(ctx);
  const KernelModel f = load_global_model(ctx);
  const Trajectory trajectory = load_trajectory(ctx);
  const MixtureSpec world = build_mixture(ctx.config.world);
  const AgingResult result = run_aging({world, f, data, trajectory}, experiment_for(ctx),
                                       ctx.config.constraints, ctx.config.loss);
  write_file(ctx.path(artifacts::aging), render([&](std::ostream &o) {
               write_aging_csv(o, result.records);
             }));
  write_file(ctx.path(artifacts::aging_samples), render([&](std::ostream &o) {
               write_aging_samples_csv(o, result.samples);
             }));
  std::ostringstream msg;
  msg << "aging: " << result.samples.size() << " delayed evaluations";
  for (const auto &r : result.records)
    msg << "\n  gamma " << r.gamma << " delay " << r.delay_multiple << ": "
        << r.relative_accuracy;
  note(ctx, msg.str());
}

UpdatePeriodChoice stage_control(const StageContext &ctx, std::ostream &out) {
  std::istringstream in(read_file(ctx.require(artifacts::records)));
  const auto records = read_records_csv(in);
  const auto quality = control_quality(accuracies_by_gamma(records), ctx.config.control);
  const UpdatePeriodChoice choice = choose_update_period(quality, ctx.config.control);
  out << "gamma,quality\n";
  for (const auto &[gamma, q] : quality)
    out << gamma << ',' << format_real(q) << '\n';
  out << "target_accuracy = " << format_real(ctx.config.control.target_accuracy) << '\n';
  out << "gamma0 = " << choice.gamma << '\n';
  out << "target_met = " << (choice.target_met ? "true" : "false") << '\n';
  return choice;
}

void stage_report(const StageContext &ctx) {
  const CsvTable summary = read_csv_file(ctx.require(artifacts::summary));
  const CsvTable aging = read_csv_file(ctx.require(artifacts::aging));
  write_file(ctx.path(artifacts::radius_plot),
             render_band_plot(summary, "radius", "Locality radius vs. update period",
                              "sphere radius"));
  write_file(ctx.path(artifacts::accuracy_plot),
             render_band_plot(summary, "accuracy", "Local accuracy vs. update period",
                              "agreement with global classifier"));
  write_file(ctx.path(artifacts::aging_plot),
             render_aging_plot(aging, "Local classifier aging"));
  note(ctx, "report: wrote " + ctx.path(artifacts::radius_plot).string() + ", " +
                ctx.path(artifacts::accuracy_plot).string() + ", " +
                ctx.path(artifacts::aging_plot).string());
}

} // namespace semcomp
