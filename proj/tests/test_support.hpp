#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "midas/clip.hpp"
#include "midas/dataset.hpp"
#include "midas/labels.hpp"

namespace midas::testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("midas_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline ClipShape tiny_shape() { return ClipShape{2, 4, 4, 3}; }

inline std::shared_ptr<const Clip> random_clip(const std::string& id, ClipShape shape,
                                               std::mt19937_64& rng) {
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::vector<float> data(shape.element_count());
  for (float& v : data) v = u(rng);
  return std::make_shared<const Clip>(id, shape, std::move(data));
}

// Dataset whose entry k has the given votes and a random clip.
inline LabeledDataset dataset_from_votes(const std::vector<std::vector<int>>& votes,
                                         std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  LabeledDataset ds;
  for (std::size_t k = 0; k < votes.size(); ++k) {
    ds.add(random_clip("clip" + std::to_string(k), tiny_shape(), rng), VoteRecord(votes[k]));
  }
  return ds;
}

inline std::vector<int> unanimous(std::size_t cls, int total = 10) {
  std::vector<int> v(kDefaultClassCount, 0);
  v[cls] = total;
  return v;
}

// Uniform draw from the simplex via normalized exponentials.
inline SoftLabel random_simplex(std::size_t c, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(c);
  double s = 0.0;
  for (double& x : v) s += (x = e(rng));
  for (double& x : v) x /= s;
  return SoftLabel(v);
}

inline std::vector<int> random_votes(std::size_t c, int total, std::mt19937_64& rng) {
  std::vector<int> v(c, 0);
  std::uniform_int_distribution<std::size_t> pick(0, c - 1);
  for (int s = 0; s < total; ++s) ++v[pick(rng)];
  return v;
}

}  // namespace midas::testing
