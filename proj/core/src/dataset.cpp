#include "midas/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "midas/error.hpp"
#include "midas/hash.hpp"
#include "midas/rng.hpp"

namespace midas {

namespace {

using ordered_json = nlohmann::ordered_json;

// Content-addressed, so manifests sharing a directory share clip files and
// rewriting an unchanged dataset under another name changes nothing.
std::string clip_file_name(std::span<const std::uint8_t> bytes) {
  return hex16(fnv1a64(bytes)) + ".mdsc";
}

constexpr const char* kClipsDir = "clips";

// Seeded subsample without replacement when the pool is large enough,
// otherwise the whole pool topped up by draws with replacement.
std::vector<std::size_t> resample_to(const std::vector<std::size_t>& pool, std::size_t target,
                                     Rng& rng) {
  std::vector<std::size_t> out;
  if (target == 0) return out;
  if (pool.size() >= target) {
    out = pool;
    std::shuffle(out.begin(), out.end(), rng);
    out.resize(target);
    return out;
  }
  out = pool;
  while (out.size() < target) out.push_back(pool[uniform_index(rng, pool.size())]);
  return out;
}

LabeledDataset balance_group(const LabeledDataset& source, const LabeledDataset& group,
                             std::size_t group_size, Rng& rng, const char* group_name) {
  const auto targets = proportional_allocation(source.class_histogram(), group_size);
  std::vector<std::vector<std::size_t>> pools(source.class_count());
  for (std::size_t i = 0; i < group.size(); ++i) pools[group.hard_label(i).index].push_back(i);

  std::vector<std::size_t> chosen;
  for (std::size_t c = 0; c < pools.size(); ++c) {
    if (targets[c] > 0 && pools[c].empty()) {
      throw Error(ErrorKind::kInvalidInput,
                  std::string(group_name) + " group has no samples of class '" +
                      source.class_names()[c] + "' to oversample");
    }
    const auto picked = resample_to(pools[c], targets[c], rng);
    chosen.insert(chosen.end(), picked.begin(), picked.end());
  }
  std::sort(chosen.begin(), chosen.end());
  return group.subset(chosen);
}

}  // namespace

LabeledDataset::LabeledDataset(std::vector<std::string> class_names, std::string provenance)
    : class_names_(std::move(class_names)), provenance_(std::move(provenance)) {
  if (class_names_.empty()) throw Error(ErrorKind::kInvalidInput, "dataset needs at least one class");
}

void LabeledDataset::add(std::shared_ptr<const Clip> clip, VoteRecord votes,
                         std::optional<std::string> scenario) {
  if (!clip) throw Error(ErrorKind::kInvalidInput, "null clip");
  if (votes.size() != class_count()) {
    throw Error(ErrorKind::kMalformedRecord,
                "clip '" + clip->id() + "' has " + std::to_string(votes.size()) +
                    " vote classes, expected " + std::to_string(class_count()));
  }
  if (shape_ && clip->shape() != *shape_) {
    throw Error(ErrorKind::kDimensionMismatch, "clip '" + clip->id() + "' has shape " +
                                                   to_string(clip->shape()) + ", dataset uses " +
                                                   to_string(*shape_));
  }
  if (votes.total() < 1) {
    throw Error(ErrorKind::kMalformedRecord, "clip '" + clip->id() + "' has zero total votes");
  }
  DatasetEntry e;
  e.soft = aggregate_votes(votes);
  if (votes.has_unique_max()) e.hard = hard_label_of(e.soft);
  e.votes = std::move(votes);
  e.scenario = std::move(scenario);
  if (!shape_) shape_ = clip->shape();
  e.clip = std::move(clip);
  entries_.push_back(std::move(e));
}

void LabeledDataset::add(const DatasetEntry& entry) { add(entry.clip, entry.votes, entry.scenario); }

bool LabeledDataset::fully_resolved() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const DatasetEntry& e) { return e.hard.has_value(); });
}

ClassId LabeledDataset::hard_label(std::size_t i) const {
  const auto& e = entries_.at(i);
  if (!e.hard) {
    throw Error(ErrorKind::kAmbiguousLabel,
                "clip '" + e.clip_id() + "' has no single most-voted class; run filter_unresolved");
  }
  return *e.hard;
}

std::vector<std::size_t> LabeledDataset::class_histogram() const {
  std::vector<std::size_t> h(class_count(), 0);
  for (std::size_t i = 0; i < size(); ++i) ++h[hard_label(i).index];
  return h;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  LabeledDataset out = empty_like();
  for (std::size_t i : indices) out.add(entries_.at(i));
  return out;
}

LabeledDataset LabeledDataset::empty_like() const {
  return LabeledDataset(class_names_, provenance_);
}

LabeledDataset load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kMissingFile, "cannot open manifest " + path.string());
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kMalformedRecord, "manifest " + path.string() + ": " + e.what());
  }
  const auto base = path.parent_path();
  try {
    if (doc.at("version").get<int>() != 1) {
      throw Error(ErrorKind::kMalformedRecord, "unsupported manifest version");
    }
    auto names = doc.at("class_names").get<std::vector<std::string>>();
    LabeledDataset ds(std::move(names), doc.value("provenance", std::string{}));

    for (const auto& rec : doc.at("entries")) {
      const auto clip_id = rec.at("clip_id").get<std::string>();
      try {
        auto votes = VoteRecord(rec.at("votes").get<std::vector<int>>());
        const auto clip_file = rec.at("clip_file").get<std::string>();
        auto clip = std::make_shared<const Clip>(read_clip_file(base / clip_file, clip_id));
        std::optional<std::string> scenario;
        if (rec.contains("scenario")) scenario = rec.at("scenario").get<std::string>();
        ds.add(std::move(clip), std::move(votes), std::move(scenario));
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::kMalformedRecord, "clip '" + clip_id + "': " + e.what());
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::kInvalidInput) {
          throw Error(ErrorKind::kMalformedRecord, "clip '" + clip_id + "': " + e.what());
        }
        throw;
      }

      // Labels are never required in a manifest, but stored ones must agree.
      const DatasetEntry& added = ds.entries().back();
      if (rec.contains("soft")) {
        const auto stored = rec.at("soft").get<std::vector<double>>();
        bool ok = stored.size() == added.soft.size();
        for (std::size_t c = 0; ok && c < stored.size(); ++c) {
          ok = std::abs(stored[c] - added.soft[c]) <= kSimplexTolerance;
        }
        if (!ok) {
          throw Error(ErrorKind::kVoteLabelMismatch,
                      "clip '" + clip_id + "': stored soft label differs from vote average");
        }
      }
      if (rec.contains("hard")) {
        const auto& h = rec.at("hard");
        std::optional<std::size_t> stored;
        if (h.is_number_integer()) {
          stored = h.get<std::size_t>();
        } else if (h.is_string()) {
          const auto& cn = ds.class_names();
          auto it = std::find(cn.begin(), cn.end(), h.get<std::string>());
          if (it != cn.end()) stored = static_cast<std::size_t>(it - cn.begin());
        }
        if (!stored || !added.hard || *stored != added.hard->index) {
          throw Error(ErrorKind::kVoteLabelMismatch,
                      "clip '" + clip_id + "': stored hard label differs from most-voted class");
        }
      }
    }
    return ds;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kMalformedRecord, "manifest " + path.string() + ": " + e.what());
  }
}

void save_manifest(const LabeledDataset& dataset, const std::filesystem::path& path) {
  const auto base = path.parent_path();
  std::error_code ec;
  std::filesystem::create_directories(base / kClipsDir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create " + (base / kClipsDir).string());

  ordered_json doc;
  doc["version"] = 1;
  doc["class_names"] = dataset.class_names();
  if (!dataset.provenance().empty()) doc["provenance"] = dataset.provenance();
  doc["entries"] = ordered_json::array();
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& e = dataset[i];
    const auto bytes = encode_clip(*e.clip);
    const auto rel = std::string(kClipsDir) + "/" + clip_file_name(bytes);
    write_clip_bytes(bytes, base / rel);
    ordered_json rec;
    rec["clip_id"] = e.clip_id();
    rec["clip_file"] = rel;
    rec["votes"] = e.votes.vector();
    if (e.scenario) rec["scenario"] = *e.scenario;
    doc["entries"].push_back(std::move(rec));
  }

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

FilterResult filter_unresolved(const LabeledDataset& dataset) {
  FilterResult r{dataset.empty_like(), 0};
  for (const auto& e : dataset.entries()) {
    if (e.hard) {
      r.kept.add(e);
    } else {
      ++r.removed;
    }
  }
  return r;
}

SplitPair stratified_split(const LabeledDataset& dataset, double ratio, std::uint64_t seed) {
  if (dataset.empty()) throw Error(ErrorKind::kEmptyDataset, "cannot split an empty dataset");
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "split ratio must lie strictly between 0 and 1");
  }
  std::vector<std::vector<std::size_t>> by_class(dataset.class_count());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    by_class[dataset.hard_label(i).index].push_back(i);
  }

  Rng rng(seed);
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> val_idx;
  for (auto& members : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    const auto n_train = static_cast<std::size_t>(std::lround(ratio * static_cast<double>(members.size())));
    train_idx.insert(train_idx.end(), members.begin(), members.begin() + n_train);
    val_idx.insert(val_idx.end(), members.begin() + n_train, members.end());
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(val_idx.begin(), val_idx.end());
  return SplitPair{dataset.subset(train_idx), dataset.subset(val_idx), seed};
}

AmbiguityPartition partition_by_ambiguity(const LabeledDataset& dataset, double threshold,
                                          bool balance, std::uint64_t seed,
                                          std::optional<std::size_t> group_size) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "ambiguity threshold must lie in [0, 1]");
  }
  std::vector<std::size_t> clear_idx;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset[i].soft.max() > threshold) clear_idx.push_back(i);
  }
  if (clear_idx.empty()) {
    throw Error(ErrorKind::kEmptyDataset, "no clip has a maximum soft label above the threshold");
  }

  Rng rng(seed);
  std::vector<std::size_t> all(dataset.size());
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), rng);
  std::vector<std::size_t> mixed_idx(all.begin(), all.begin() + clear_idx.size());
  std::sort(mixed_idx.begin(), mixed_idx.end());

  AmbiguityPartition out{dataset.subset(clear_idx), dataset.subset(mixed_idx)};
  if (balance) {
    const std::size_t n = group_size.value_or(clear_idx.size());
    out.clear = balance_group(dataset, out.clear, n, rng, "clear");
    out.mixed = balance_group(dataset, out.mixed, n, rng, "mixed");
  }
  return out;
}

std::vector<std::size_t> max_vote_histogram(const LabeledDataset& dataset) {
  int top = 0;
  for (const auto& e : dataset.entries()) top = std::max(top, e.votes.total());
  std::vector<std::size_t> h(static_cast<std::size_t>(top) + 1, 0);
  for (const auto& e : dataset.entries()) ++h[static_cast<std::size_t>(e.votes.max_count())];
  return h;
}

std::vector<double> histogram_percentages(std::span<const std::size_t> histogram) {
  const double total = std::accumulate(histogram.begin(), histogram.end(), 0.0);
  std::vector<double> pct(histogram.size(), 0.0);
  if (total == 0.0) return pct;
  for (std::size_t k = 0; k < histogram.size(); ++k) pct[k] = 100.0 * histogram[k] / total;
  return pct;
}

std::vector<std::size_t> proportional_allocation(std::span<const std::size_t> weights,
                                                 std::size_t total) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::size_t> out(weights.size(), 0);
  if (sum == 0.0) return out;
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < weights.size(); ++c) {
    const double exact = total * (weights[c] / sum);
    out[c] = static_cast<std::size_t>(std::floor(exact));
    assigned += out[c];
    remainders.emplace_back(exact - out[c], c);
  }
  // Largest remainder first; ties go to the lower class index.
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++out[remainders[k].second];
  return out;
}

}  // namespace midas
