#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "midas/error.hpp"

namespace {

using namespace midas;
using namespace midas::cli;

int exit_code(ErrorKind kind) { return 10 + static_cast<int>(kind); }

FeatureSize parse_feature_size(const std::string& text) {
  unsigned h = 0, w = 0;
  char sep = 0;
  if (std::sscanf(text.c_str(), "%u%c%u", &h, &sep, &w) == 3 && (sep == 'x' || sep == 'X')) {
    return FeatureSize{h, w};
  }
  if (std::sscanf(text.c_str(), "%u", &h) == 1 && text.find_first_not_of("0123456789") == std::string::npos) {
    return FeatureSize{h, h};
  }
  throw Error(ErrorKind::kInvalidInput, "feature size must look like 8 or 8x8, got '" + text + "'");
}

// Flags shared by every subcommand that trains a model.
struct TrainFlags {
  std::string labels = "midas";
  std::string normalize = "on";
  std::string activation = "tanh";
  std::string feature_size;
  std::string standardize = "on";
  TrainConfig config;

  void attach(CLI::App* app, bool with_labels = true) {
    if (with_labels) {
      app->add_option("--labels", labels, "Training targets")
          ->check(CLI::IsMember({"hard", "soft", "midas", "midas-hard"}))
          ->capture_default_str();
    }
    app->add_option("--normalize", normalize, "Softmax over mixed labels")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    app->add_option("--alpha", config.alpha, "Beta(alpha, alpha) mixing parameter")->capture_default_str();
    app->add_option("--epochs", config.epochs)->capture_default_str();
    app->add_option("--batch", config.batch_size)->capture_default_str();
    app->add_option("--lr", config.learning_rate)->capture_default_str();
    app->add_option("--momentum", config.momentum)->capture_default_str();
    app->add_option("--weight-decay", config.weight_decay)->capture_default_str();
    app->add_option("--hidden", config.hidden, "Hidden layer widths, e.g. 64,64")
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--activation", activation)
        ->check(CLI::IsMember({"tanh", "sigmoid"}))
        ->capture_default_str();
    feature_size = std::to_string(config.feature_size.height) + "x" + std::to_string(config.feature_size.width);
    app->add_option("--feature-size", feature_size, "Pooled feature grid HxW")->capture_default_str();
    app->add_option("--standardize", standardize, "Standardize features with train statistics")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
  }

  TrainConfig resolve(std::uint64_t seed) const {
    TrainConfig c = config;
    c.mode = parse_train_mode(labels);
    c.normalize = normalize == "on";
    c.activation = parse_activation(activation);
    c.feature_size = parse_feature_size(feature_size);
    c.standardize = standardize == "on";
    c.seed = seed;
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MIDAS: mixup of clips with soft emotion labels"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "midas 0.1.0");

  std::uint64_t seed = 0;
  try {
    seed = default_seed();
  } catch (const Error& e) {
    std::cerr << "midas: " << e.what() << "\n";
    return exit_code(e.kind());
  }
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Random seed (default from MIDAS_SEED)")->capture_default_str();
  };

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic ambiguous-expression dataset");
  SynthOptions synth_opt;
  synth->add_option("--out", synth_opt.out, "Output manifest")->required();
  synth->add_option("--classes", synth_opt.config.class_count)->capture_default_str();
  synth->add_option("--samples-per-class", synth_opt.config.samples_per_class)->capture_default_str();
  synth->add_option("--frames", synth_opt.config.shape.frames)->capture_default_str();
  synth->add_option("--height", synth_opt.config.shape.height)->capture_default_str();
  synth->add_option("--width", synth_opt.config.shape.width)->capture_default_str();
  synth->add_option("--channels", synth_opt.config.shape.channels)->capture_default_str();
  synth->add_option("--between-sd", synth_opt.config.between_sd)->capture_default_str();
  synth->add_option("--within-sd", synth_opt.config.within_sd)->capture_default_str();
  synth->add_option("--drift", synth_opt.config.drift)->capture_default_str();
  synth->add_option("--ambiguity", synth_opt.config.ambiguity, "Fraction of two-class mixtures")
      ->capture_default_str();
  synth->add_option("--annotators", synth_opt.config.annotators)->capture_default_str();
  synth->add_option("--temperature", synth_opt.config.temperature)->capture_default_str();
  add_seed(synth);

  // aggregate
  auto* aggregate = app.add_subcommand("aggregate", "Drop records without a unique most-voted class");
  fs::path agg_in, agg_out;
  aggregate->add_option("--manifest", agg_in)->required();
  aggregate->add_option("--out", agg_out)->required();

  // split
  auto* split = app.add_subcommand("split", "Stratified train/validation split");
  SplitOptions split_opt;
  fs::path split_dir;
  split->add_option("--manifest", split_opt.manifest)->required();
  split->add_option("--out", split_dir, "Directory receiving train.json and val.json")->required();
  split->add_option("--ratio", split_opt.ratio)->capture_default_str();
  add_seed(split);

  // mix
  auto* mix = app.add_subcommand("mix", "Write MIDAS-mixed clips plus a sidecar of mixing records");
  MixOptions mix_opt;
  std::string mix_labels = "soft", mix_normalize = "on";
  mix->add_option("--manifest", mix_opt.manifest)->required();
  mix->add_option("--out", mix_opt.out)->required();
  mix->add_option("--count", mix_opt.count, "Number of mixed clips (default: one per entry)");
  mix->add_option("--alpha", mix_opt.alpha)->capture_default_str();
  mix->add_option("--labels", mix_labels)->check(CLI::IsMember({"soft", "hard"}))->capture_default_str();
  mix->add_option("--normalize", mix_normalize)->check(CLI::IsMember({"on", "off"}))->capture_default_str();
  add_seed(mix);

  // train
  auto* train_cmd = app.add_subcommand("train", "Train a classifier; writes a checkpoint and history");
  TrainOptions train_opt;
  TrainFlags train_flags;
  train_cmd->add_option("--manifest", train_opt.train_manifest, "Training manifest")->required();
  train_cmd->add_option("--val", train_opt.val_manifest, "Validation manifest")->required();
  train_cmd->add_option("--out", train_opt.out, "Checkpoint path")->required();
  train_cmd->add_option("--history", train_opt.history, "History JSON (default: <out stem>.history.json)");
  train_flags.attach(train_cmd);
  add_seed(train_cmd);

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a manifest");
  EvalOptions eval_opt;
  std::string eval_csv;
  eval->add_option("--checkpoint", eval_opt.checkpoint)->required();
  eval->add_option("--manifest", eval_opt.manifest)->required();
  eval->add_option("--out", eval_opt.out, "Report JSON")->required();
  eval->add_option("--csv", eval_csv, "Optional confusion matrix CSV");

  // sweep-alpha
  auto* sweep = app.add_subcommand("sweep-alpha", "Train one model per alpha and tabulate UAR/WAR");
  SweepOptions sweep_opt;
  TrainFlags sweep_flags;
  sweep->add_option("--manifest", sweep_opt.train_manifest, "Training manifest")->required();
  sweep->add_option("--val", sweep_opt.val_manifest, "Validation manifest")->required();
  sweep->add_option("--out", sweep_opt.out, "Table JSON")->required();
  sweep->add_option("--grid", sweep_opt.grid, "Comma-separated alphas")->delimiter(',')->capture_default_str();
  sweep_flags.attach(sweep);
  add_seed(sweep);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Coexistence matrix and max-vote histogram");
  AnalyzeOptions analyze_opt;
  std::string analyze_csv;
  analyze->add_option("--manifest", analyze_opt.manifest)->required();
  analyze->add_option("--out", analyze_opt.out, "Analysis JSON")->required();
  analyze->add_option("--csv-prefix", analyze_csv, "Also write <prefix>coexistence.csv and <prefix>histogram.csv");

  // ablate
  auto* ablate = app.add_subcommand("ablate", "Clear versus mixed expression training groups");
  AblationOptions ablate_opt;
  TrainFlags ablate_flags;
  std::string balance = "on";
  std::size_t group_size = 0;
  ablate->add_option("--manifest", ablate_opt.manifest)->required();
  ablate->add_option("--out", ablate_opt.out, "Comparison table JSON")->required();
  ablate->add_option("--threshold", ablate_opt.threshold, "Clear means max soft label above this")
      ->capture_default_str();
  ablate->add_option("--ratio", ablate_opt.ratio, "Train share of the common split")->capture_default_str();
  ablate->add_option("--balance", balance)->check(CLI::IsMember({"on", "off"}))->capture_default_str();
  ablate->add_option("--group-size", group_size, "Entries per group (default: clear group size)");
  ablate_flags.attach(ablate, false);
  add_seed(ablate);

  // risk
  auto* risk = app.add_subcommand("risk", "Monte-Carlo vicinal risk of a checkpoint");
  RiskOptions risk_opt;
  std::string risk_labels = "soft", risk_normalize = "off";
  risk->add_option("--checkpoint", risk_opt.checkpoint)->required();
  risk->add_option("--manifest", risk_opt.manifest)->required();
  risk->add_option("--draws", risk_opt.vicinal.draws)->capture_default_str();
  risk->add_option("--alpha", risk_opt.vicinal.alpha)->capture_default_str();
  risk->add_option("--labels", risk_labels)->check(CLI::IsMember({"soft", "hard"}))->capture_default_str();
  risk->add_option("--normalize", risk_normalize)->check(CLI::IsMember({"on", "off"}))->capture_default_str();
  add_seed(risk);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      synth_opt.config.seed = seed;
      const auto n = cmd_synth(synth_opt);
      std::cerr << "wrote " << n << " clips to " << synth_opt.out.string() << "\n";
    } else if (aggregate->parsed()) {
      const auto removed = cmd_aggregate(agg_in, agg_out);
      std::cerr << "removed " << removed << " unresolved record" << (removed == 1 ? "" : "s") << "\n";
    } else if (split->parsed()) {
      split_opt.seed = seed;
      split_opt.train_out = split_dir / "train.json";
      split_opt.val_out = split_dir / "val.json";
      cmd_split(split_opt);
    } else if (mix->parsed()) {
      mix_opt.seed = seed;
      mix_opt.label_mode = parse_label_mode(mix_labels);
      mix_opt.normalize = mix_normalize == "on";
      cmd_mix(mix_opt);
    } else if (train_cmd->parsed()) {
      train_opt.config = train_flags.resolve(seed);
      const auto r = cmd_train(train_opt);
      const auto& best = r.history[r.best_epoch - 1];
      std::cerr << "best epoch " << r.best_epoch << ": val UAR " << best.val_uar << ", WAR "
                << best.val_war << "\n";
    } else if (eval->parsed()) {
      if (!eval_csv.empty()) eval_opt.confusion_csv = eval_csv;
      const auto doc = cmd_eval(eval_opt);
      std::cout << "uar " << doc["uar"].get<double>() << " war " << doc["war"].get<double>() << "\n";
    } else if (sweep->parsed()) {
      sweep_opt.config = sweep_flags.resolve(seed);
      std::cout << "alpha,uar,war\n";
      for (const auto& row : cmd_sweep_alpha(sweep_opt)) {
        std::cout << row.alpha << "," << row.uar << "," << row.war << "\n";
      }
    } else if (analyze->parsed()) {
      if (!analyze_csv.empty()) analyze_opt.csv_prefix = analyze_csv;
      cmd_analyze(analyze_opt);
    } else if (ablate->parsed()) {
      ablate_opt.config = ablate_flags.resolve(seed);
      ablate_opt.balance = balance == "on";
      if (group_size > 0) ablate_opt.group_size = group_size;
      const auto r = cmd_ablate(ablate_opt);
      std::cout << "group,labels,train_size,uar,war\n";
      for (const auto& c : r.cells) {
        std::cout << c.group << "," << to_string(c.mode) << "," << c.train_size << "," << c.uar << ","
                  << c.war << "\n";
      }
    } else if (risk->parsed()) {
      risk_opt.vicinal.seed = seed;
      risk_opt.vicinal.label_mode = parse_label_mode(risk_labels);
      risk_opt.vicinal.normalize = risk_normalize == "on";
      std::cout << cmd_risk(risk_opt).dump() << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "midas: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "midas: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
