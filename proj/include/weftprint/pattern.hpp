#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "weftprint/graph.hpp"

namespace weftprint {

/// Binary over/under grid: cell (i, j) is true iff warp j passes over weft i.
class WeaveMatrix {
 public:
  WeaveMatrix(std::size_t rows, std::size_t cols, bool fill = false);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool operator()(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool v) { cells_[i * cols_ + j] = v ? 1 : 0; }

  /// Number of cells that differ; matrices must have equal shape.
  std::size_t hamming(const WeaveMatrix& other) const;
  std::string to_string() const;

  friend bool operator==(const WeaveMatrix&, const WeaveMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint8_t> cells_;
};

namespace weave {
struct Plain {};
struct Twill {
  int over = 2;
  int under = 1;
};
struct Satin {
  int period = 5;
  int step = 2;
};
struct WarpAbove {};
struct Random {
  double density = 0.5;
  std::uint64_t seed = 0;
};
}  // namespace weave

using WeaveKind = std::variant<weave::Plain, weave::Twill, weave::Satin, weave::WarpAbove, weave::Random>;

std::string describe(const WeaveKind& kind);

WeaveMatrix weave_matrix(const WeaveKind& kind, std::size_t width, std::size_t height);

/// Crossing (i, j) becomes block 4(i*w + j): nodes 0/1 are the warp pair
/// (towards rows i-1 / i+1), nodes 2/3 the weft pair (towards cols j-1 / j+1).
TextileGraph grid_to_graph(const WeaveMatrix& m);

enum class Transform { kRotate90, kRotate180, kMirror };

std::string_view to_string(Transform op);

/// Rotating by 90 degrees swaps the warp and weft families, so the
/// over/under bit of every cell flips along with the geometry.
WeaveMatrix transform(const WeaveMatrix& m, Transform op);

/// Flips every cell independently with probability `rate`.
WeaveMatrix perturb(const WeaveMatrix& m, double rate, std::uint64_t seed);

/// splitmix64 finalizer; derives independent stream seeds from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Uniform double in [0, 1) from the top 53 bits of one generator draw.
/// Written out so that streams are identical across standard libraries.
template <typename Engine>
double unit_double(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

struct CategorySpec {
  std::string name;
  WeaveKind kind;
  std::size_t count = 1;
  std::size_t width = 24;
  std::size_t height = 24;
  double perturb_fraction = 0.0;
  double perturb_rate = 0.0;
  double transform_fraction = 0.0;
  std::uint64_t seed = 0;

  std::size_t perturbed_count() const;
  std::size_t transformed_count() const;
};

struct CorpusSpec {
  std::uint64_t seed = 0;
  std::vector<CategorySpec> categories;
};

/// Throws std::invalid_argument describing the first bad field.
void check(const CorpusSpec& spec);

/// INI-style corpus description, one section per category:
///
///   seed = 42
///   [twill21]
///   kind = twill
///   over = 2
///   under = 1
///   count = 20
///   width = 24
///   height = 24
///   perturb_fraction = 0.25
///   perturb_rate = 0.03
///   transform_fraction = 0.25
///
/// Section-level `seed` overrides the seed derived from the global one;
/// `global_seed`, when given, replaces the file's global seed.
CorpusSpec parse_corpus_spec(std::string_view text, std::optional<std::uint64_t> global_seed = std::nullopt);
CorpusSpec read_corpus_spec(const std::string& path, std::optional<std::uint64_t> global_seed = std::nullopt);

struct LabeledGraph {
  std::string id;
  TextileGraph graph;
  std::string label;
};

using LabeledCorpus = std::vector<LabeledGraph>;

/// Per category, in order: clean samples, perturbed samples, then
/// rotated/mirrored samples. Output depends only on the spec.
LabeledCorpus generate_corpus(const CorpusSpec& spec);

struct ManifestEntry {
  std::string id;
  std::string path;
  std::string category;
};

/// Writes one `.tg` per sample plus `manifest.csv` into `dir`; returns the
/// manifest path.
std::string write_corpus(const LabeledCorpus& corpus, const std::string& dir);

/// Reads `id,path,category`; relative paths are resolved against the
/// manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::string& path);

}  // namespace weftprint
