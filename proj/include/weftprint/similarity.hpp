#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "weftprint/fingerprint.hpp"

namespace weftprint {

/// A fingerprint read as a sparse vector over neighborhoods.
using FrequencyVector = Fingerprint;

/// Generalized (multiset) Jaccard distance: 1 - sum(min) / sum(max).
double jaccard_dist(const FrequencyVector& r, const FrequencyVector& s);

/// Classic set Jaccard distance over the supports, for comparison runs.
double jaccard_set_dist(const FrequencyVector& r, const FrequencyVector& s);

/// Size of the symmetric difference of the supports.
std::uint64_t hamming_bool_dist(const FrequencyVector& r, const FrequencyVector& s);

/// Unnormalized L1 distance of the count vectors.
std::uint64_t hamming_freq_dist(const FrequencyVector& r, const FrequencyVector& s);

/// 1 - cosine similarity of the raw counts. One all-zero side gives 1,
/// both all-zero give 0.
double cosine_freq_dist(const FrequencyVector& r, const FrequencyVector& s);

struct CorpusStats {
  std::size_t textiles = 0;  // N
  std::unordered_map<Neighborhood, std::uint64_t, NeighborhoodHash> document_frequency;

  /// Number of textiles containing `n`; throws if `n` was never seen.
  std::uint64_t df(const Neighborhood& n) const;
};

CorpusStats corpus_stats(const std::vector<Fingerprint>& corpus);

/// A fingerprint with TF-IDF weights (1 + log10 tf) * log10(N / df).
/// Zero weights are dropped.
struct WeightedVector {
  std::vector<std::pair<Neighborhood, double>> entries;  // sorted by neighborhood
  double squared_norm = 0.0;
};

WeightedVector tfidf_weights(const FrequencyVector& r, const CorpusStats& stats);

double cosine_tfidf_dist(const FrequencyVector& r, const FrequencyVector& s, const CorpusStats& stats);

enum class Metric { kJaccard, kHammingBool, kHammingFreq, kCosineFreq, kCosineTfIdf, kJaccardSet };

/// CLI names: jaccard, hbool, hfreq, cosine, tfidf, jaccard-set.
std::string_view metric_name(Metric m);
Metric parse_metric(std::string_view name);
std::vector<Metric> core_metrics();

double distance(Metric m, const FrequencyVector& r, const FrequencyVector& s, const CorpusStats* stats = nullptr);

/// Symmetric matrix with zero diagonal, row-major.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::vector<std::string> ids, std::vector<double> values);
  explicit DistanceMatrix(std::vector<std::string> ids);

  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * ids_.size() + j]; }
  void set(std::size_t i, std::size_t j, double d) {
    values_[i * ids_.size() + j] = d;
    values_[j * ids_.size() + i] = d;
  }
  const std::vector<double>& values() const { return values_; }
  std::size_t index_of(std::string_view id) const;

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::vector<std::string> ids_;
  std::vector<double> values_;
};

/// All pairwise distances. `threads` == 0 picks the hardware concurrency;
/// the result is bit-identical for any thread count.
DistanceMatrix distance_matrix(const std::vector<Fingerprint>& corpus, const std::vector<std::string>& ids,
                               Metric metric, const CorpusStats* stats = nullptr, unsigned threads = 1);

/// CSV: header `id,<id_1>,...,<id_n>` then one row per id; %.12g values.
std::string serialize_distance_matrix(const DistanceMatrix& d);
DistanceMatrix parse_distance_matrix(std::string_view text);
DistanceMatrix read_distance_matrix(const std::string& path);

}  // namespace weftprint
