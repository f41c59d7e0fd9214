#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "midas/dataset.hpp"
#include "midas/mixer.hpp"
#include "midas/model.hpp"
#include "midas/synth.hpp"
#include "midas/vicinal.hpp"

namespace midas::cli {

namespace fs = std::filesystem;

/// Default seed: MIDAS_SEED when set, else 0.
std::uint64_t default_seed();

void write_text(const fs::path& path, const std::string& text);

struct SynthOptions {
  SynthConfig config;
  fs::path out;
};
std::size_t cmd_synth(const SynthOptions& o);

/// Returns the number of removed (tied) records.
std::size_t cmd_aggregate(const fs::path& in, const fs::path& out);

struct SplitOptions {
  fs::path manifest;
  fs::path train_out;
  fs::path val_out;
  double ratio = 0.8;
  std::uint64_t seed = 0;
};
void cmd_split(const SplitOptions& o);

struct MixOptions {
  fs::path manifest;
  fs::path out;
  std::size_t count = 0;  // 0: one per input entry
  double alpha = kDefaultAlpha;
  LabelMode label_mode = LabelMode::kSoft;
  bool normalize = true;
  std::uint64_t seed = 0;
};
void cmd_mix(const MixOptions& o);

struct TrainOptions {
  fs::path train_manifest;
  fs::path val_manifest;
  fs::path out;      // checkpoint
  fs::path history;  // default: <out>.history.json
  TrainConfig config;
};
TrainResult cmd_train(const TrainOptions& o);

struct EvalOptions {
  fs::path checkpoint;
  fs::path manifest;
  fs::path out;
  std::optional<fs::path> confusion_csv;
};
nlohmann::ordered_json cmd_eval(const EvalOptions& o);

struct SweepOptions {
  fs::path train_manifest;
  fs::path val_manifest;
  fs::path out;
  std::vector<double> grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  TrainConfig config;
};
struct SweepRow {
  double alpha = 0.0;
  double uar = 0.0;
  double war = 0.0;
};
std::vector<SweepRow> cmd_sweep_alpha(const SweepOptions& o);

struct AnalyzeOptions {
  fs::path manifest;
  fs::path out;
  std::optional<fs::path> csv_prefix;
};
nlohmann::ordered_json cmd_analyze(const AnalyzeOptions& o);

struct AblationOptions {
  fs::path manifest;
  fs::path out;
  double threshold = 0.9;
  double ratio = 0.8;
  bool balance = true;
  std::optional<std::size_t> group_size;
  TrainConfig config;  // mode is overridden per cell
};
struct AblationCell {
  std::string group;  // "clear" or "mixed"
  TrainMode mode = TrainMode::kSoft;
  std::size_t train_size = 0;
  double uar = 0.0;
  double war = 0.0;
  double uar_std_error = 0.0;
};
struct AblationResult {
  std::size_t validation_size = 0;
  std::size_t clear_pool = 0;  // entries above the threshold before balancing
  std::vector<AblationCell> cells;

  const AblationCell& cell(const std::string& group, TrainMode mode) const;
};
AblationResult cmd_ablate(const AblationOptions& o);

struct RiskOptions {
  fs::path checkpoint;
  fs::path manifest;
  VicinalOptions vicinal;
};
/// Monte-Carlo vicinal risk of a checkpoint under soft cross-entropy.
nlohmann::ordered_json cmd_risk(const RiskOptions& o);

}  // namespace midas::cli
