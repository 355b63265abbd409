#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "weftprint/similarity.hpp"

namespace weftprint {

/// Assignment of ids to dense cluster ids 0..count-1.
struct Partition {
  std::vector<std::string> ids;
  std::vector<int> cluster;  // cluster[i] belongs to ids[i]
  int count = 0;

  /// Builds a partition from arbitrary labels; cluster ids are assigned in
  /// order of first appearance.
  static Partition from_labels(std::vector<std::string> ids, const std::vector<std::string>& labels);
};

struct Merge {
  std::size_t left;   // representative (smallest member index) of one cluster
  std::size_t right;  // representative of the other, left < right
  double distance;    // average linkage distance at merge time
};

/// Average-linkage (UPGMA) merges until `m` clusters remain. Among equal
/// distances the pair with the smallest (left, right) representatives wins.
std::vector<Merge> upgma_merges(const DistanceMatrix& d, std::size_t m);

Partition upgma_cluster(const DistanceMatrix& d, std::size_t m);

struct PairConfusion {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
};

struct PairScores {
  PairConfusion confusion;
  double rand_index = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

/// Pair counting of clustering `found` against ground truth `truth`.
/// P = 0 when nothing is paired, F = 0 when P + R = 0.
PairScores pair_scores(const Partition& found, const Partition& truth);

/// Every id except the query, by ascending distance, ties by ascending id.
std::vector<std::size_t> rank_for_query(const DistanceMatrix& d, std::size_t query);

/// Mean of the precisions at each relevant item's rank, normalized by the
/// number of relevant items.
double average_precision(const std::vector<std::size_t>& ranked, const std::unordered_set<std::size_t>& relevant);

inline constexpr std::size_t kRecallLevels = 11;

struct RetrievalCurves {
  std::array<double, kRecallLevels> recall{};
  std::array<double, kRecallLevels> precision{};  // averaged interpolated precision
  std::array<double, kRecallLevels> f_measure{};
  double map = 0.0;
  std::size_t queries = 0;
  std::vector<std::string> skipped;  // queries without any other member in their category
};

/// Interpolated precision of one ranked list at the 11 standard recall levels.
std::array<double, kRecallLevels> interpolated_precision(const std::vector<std::size_t>& ranked,
                                                         const std::unordered_set<std::size_t>& relevant);

/// `labels[i]` is the category of `d.ids()[i]`.
RetrievalCurves interpolated_curves(const DistanceMatrix& d, const std::vector<std::string>& labels,
                                    unsigned threads = 1);

double map_score(const DistanceMatrix& d, const std::vector<std::string>& labels, unsigned threads = 1);

std::string format_scores(const PairScores& s);
std::string format_curves_csv(const RetrievalCurves& c);

}  // namespace weftprint
