#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>

#include "midas/error.hpp"
#include "midas/metrics.hpp"

namespace midas::cli {

namespace {

using json = nlohmann::ordered_json;

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

void ensure_parent(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorKind::kIo, "cannot create " + path.parent_path().string());
  }
}

void save(const LabeledDataset& ds, const fs::path& path) {
  ensure_parent(path);
  save_manifest(ds, path);
}

// Sidecar path next to `path`: same stem, new suffix.
fs::path sibling(const fs::path& path, const std::string& suffix) {
  auto out = path;
  out.replace_extension();
  out += suffix;
  return out;
}

struct Evaluation {
  ConfusionMatrix cm;
  double uar = 0.0;
  double war = 0.0;
  double uar_std_error = 0.0;
};

Evaluation evaluate(const Classifier& model, const LabeledDataset& ds, FeatureSize size) {
  std::vector<ClassId> preds(ds.size());
  std::vector<ClassId> truths(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    preds[i] = predict(model, featurize(*ds[i].clip, size));
    truths[i] = ds.hard_label(i);
  }
  Evaluation e{confusion(preds, truths, ds.class_count())};
  e.uar = uar(e.cm);
  e.war = war(e.cm);
  e.uar_std_error = uar_std_error(e.cm);
  return e;
}

}  // namespace

std::uint64_t default_seed() {
  const char* env = std::getenv("MIDAS_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(env, &used);
    if (used == std::string(env).size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::kInvalidInput, std::string("MIDAS_SEED is not an unsigned integer: ") + env);
}

void write_text(const fs::path& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

std::size_t cmd_synth(const SynthOptions& o) {
  const auto ds = generate(o.config);
  save(ds, o.out);
  return ds.size();
}

std::size_t cmd_aggregate(const fs::path& in, const fs::path& out) {
  auto r = filter_unresolved(load_manifest(in));
  save(r.kept, out);
  return r.removed;
}

void cmd_split(const SplitOptions& o) {
  const auto split = stratified_split(load_manifest(o.manifest), o.ratio, o.seed);
  save(split.train, o.train_out);
  save(split.validation, o.val_out);
}

void cmd_mix(const MixOptions& o) {
  const auto ds = load_manifest(o.manifest);
  Rng rng(o.seed);
  const auto batch =
      midas_batch(ds, o.count == 0 ? ds.size() : o.count, o.alpha, o.label_mode, o.normalize, rng);

  LabeledDataset mixed(ds.class_names(), "mix of " + o.manifest.filename().string());
  json sidecar = json::array();
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const auto& s = batch[k];
    char id[32];
    std::snprintf(id, sizeof(id), "mix_%06zu", k);
    Clip clip(id, s.clip.shape(), {s.clip.data().begin(), s.clip.data().end()});
    // Pooled annotations of both sources; the exact target is in the sidecar.
    std::vector<int> votes = ds[s.index_i].votes.vector();
    const auto& other = ds[s.index_j].votes.vector();
    for (std::size_t c = 0; c < votes.size(); ++c) votes[c] += other[c];
    mixed.add(std::make_shared<const Clip>(std::move(clip)), VoteRecord(std::move(votes)));

    json rec;
    rec["clip_id"] = id;
    rec["lambda"] = s.lambda;
    rec["source_i"] = s.source_i;
    rec["source_j"] = s.source_j;
    rec["label_mode"] = to_string(s.label_mode);
    rec["normalized"] = s.normalized;
    rec["label"] = s.label.vector();
    sidecar.push_back(std::move(rec));
  }
  save(mixed, o.out);
  write_json(sibling(o.out, ".mix.json"), sidecar);
}

TrainResult cmd_train(const TrainOptions& o) {
  const auto tr = load_manifest(o.train_manifest);
  const auto va = load_manifest(o.val_manifest);
  auto result = train(tr, va, o.config);

  Checkpoint ck{result.model, o.config.feature_size, tr.clip_shape()->channels, tr.class_names(),
                config_hash(o.config)};
  ensure_parent(o.out);
  save_checkpoint(ck, o.out);

  auto history = history_to_json(result);
  history["config"] = to_json(o.config);
  history["config_hash"] = ck.config_hash;
  write_json(o.history.empty() ? sibling(o.out, ".history.json") : o.history, history);
  return result;
}

json cmd_eval(const EvalOptions& o) {
  const auto ck = load_checkpoint(o.checkpoint);
  const auto ds = load_manifest(o.manifest);
  if (ck.class_names != ds.class_names()) {
    throw Error(ErrorKind::kDimensionMismatch, "checkpoint and manifest have different class names");
  }
  auto doc = report(ck.model, ds, ck.feature_size);
  write_json(o.out, doc);
  if (o.confusion_csv) {
    write_text(*o.confusion_csv,
               confusion_csv(evaluate(ck.model, ds, ck.feature_size).cm, ds.class_names()));
  }
  return doc;
}

std::vector<SweepRow> cmd_sweep_alpha(const SweepOptions& o) {
  if (o.grid.empty()) throw Error(ErrorKind::kInvalidInput, "alpha grid is empty");
  auto grid = o.grid;
  std::sort(grid.begin(), grid.end());
  const auto tr = load_manifest(o.train_manifest);
  const auto va = load_manifest(o.val_manifest);

  std::vector<SweepRow> rows;
  json table = json::array();
  for (double alpha : grid) {
    auto cfg = o.config;
    cfg.alpha = alpha;
    const auto result = train(tr, va, cfg);
    const auto e = evaluate(result.model, va, cfg.feature_size);
    rows.push_back({alpha, e.uar, e.war});
    table.push_back({{"alpha", alpha}, {"uar", e.uar}, {"war", e.war}, {"best_epoch", result.best_epoch}});
  }
  json doc;
  doc["labels"] = to_string(o.config.mode);
  doc["rows"] = std::move(table);
  write_json(o.out, doc);
  return rows;
}

json cmd_analyze(const AnalyzeOptions& o) {
  const auto ds = load_manifest(o.manifest);
  if (ds.empty()) throw Error(ErrorKind::kEmptyDataset, "manifest has no entries");
  const auto co = coexistence(ds);
  const auto hist = max_vote_histogram(ds);

  json matrix = json::array();
  for (std::size_t r = 0; r < co.class_count; ++r) {
    if (!co.present[r]) {
      matrix.push_back(nullptr);
      continue;
    }
    std::vector<double> row(co.ratios.begin() + r * co.class_count,
                            co.ratios.begin() + (r + 1) * co.class_count);
    matrix.push_back(row);
  }
  json doc;
  doc["class_names"] = ds.class_names();
  doc["num_samples"] = ds.size();
  doc["coexistence"] = {{"support", co.support}, {"matrix", std::move(matrix)}};
  doc["max_vote_histogram"] = {{"counts", hist}, {"percentages", histogram_percentages(hist)}};
  write_json(o.out, doc);

  if (o.csv_prefix) {
    write_text(fs::path(o.csv_prefix->string() + "coexistence.csv"), coexistence_csv(co, ds.class_names()));
    const auto pct = histogram_percentages(hist);
    std::string csv = "max_votes,count,percent\n";
    for (std::size_t k = 0; k < hist.size(); ++k) {
      char line[96];
      std::snprintf(line, sizeof(line), "%zu,%zu,%.4f\n", k, hist[k], pct[k]);
      csv += line;
    }
    write_text(fs::path(o.csv_prefix->string() + "histogram.csv"), csv);
  }
  return doc;
}

const AblationCell& AblationResult::cell(const std::string& group, TrainMode mode) const {
  for (const auto& c : cells) {
    if (c.group == group && c.mode == mode) return c;
  }
  throw Error(ErrorKind::kInvalidInput, "no ablation cell " + group + "/" + std::string(to_string(mode)));
}

AblationResult cmd_ablate(const AblationOptions& o) {
  const auto ds = load_manifest(o.manifest);
  const auto split = stratified_split(ds, o.ratio, o.config.seed);
  const auto groups =
      partition_by_ambiguity(split.train, o.threshold, o.balance, o.config.seed, o.group_size);

  AblationResult result;
  result.validation_size = split.validation.size();
  for (const auto& e : split.train.entries()) result.clear_pool += e.soft.max() > o.threshold;

  json cells = json::array();
  for (const auto& [name, group] : {std::pair<std::string, const LabeledDataset*>{"clear", &groups.clear},
                                    {"mixed", &groups.mixed}}) {
    for (TrainMode mode : {TrainMode::kSoft, TrainMode::kMidas}) {
      auto cfg = o.config;
      cfg.mode = mode;
      const auto trained = train(*group, split.validation, cfg);
      const auto e = evaluate(trained.model, split.validation, cfg.feature_size);
      AblationCell cell{name, mode, group->size(), e.uar, e.war, e.uar_std_error};
      result.cells.push_back(cell);
      cells.push_back({{"group", name},
                       {"labels", to_string(mode)},
                       {"train_size", cell.train_size},
                       {"uar", cell.uar},
                       {"war", cell.war},
                       {"uar_std_error", cell.uar_std_error}});
    }
  }
  json doc;
  doc["threshold"] = o.threshold;
  doc["seed"] = o.config.seed;
  doc["validation_size"] = result.validation_size;
  doc["clear_pool"] = result.clear_pool;
  doc["cells"] = std::move(cells);
  write_json(o.out, doc);
  return result;
}

json cmd_risk(const RiskOptions& o) {
  const auto ck = load_checkpoint(o.checkpoint);
  const auto ds = load_manifest(o.manifest);
  const Predictor predictor = [&](const Clip& clip) {
    return forward(ck.model, featurize(clip, ck.feature_size));
  };
  const auto r = vicinal_risk(predictor, ds, soft_cross_entropy, o.vicinal);
  json doc;
  doc["value"] = r.value;
  doc["stderr"] = r.std_error;
  doc["draws"] = r.num_terms;
  doc["seed"] = r.seed;
  return doc;
}

}  // namespace midas::cli
