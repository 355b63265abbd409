#include "weftprint/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "weftprint/parallel.hpp"

namespace weftprint {

Partition Partition::from_labels(std::vector<std::string> ids, const std::vector<std::string>& labels) {
  if (ids.size() != labels.size()) throw std::invalid_argument("ids and labels differ in length");
  Partition p;
  p.ids = std::move(ids);
  std::unordered_map<std::string, int> dense;
  for (const auto& label : labels) {
    auto [it, inserted] = dense.emplace(label, p.count);
    if (inserted) ++p.count;
    p.cluster.push_back(it->second);
  }
  return p;
}

namespace {

class AverageLinkage {
 public:
  explicit AverageLinkage(const DistanceMatrix& d)
      : n_(d.size()), sums_(d.values()), size_(n_, 1), active_(n_, true), nn_(n_, 0), nn_dist_(n_) {
    for (std::size_t a = 0; a < n_; ++a) refresh(a);
  }

  // Cluster distances are kept as sums over member pairs; the average is
  // formed on demand, so integer inputs compare exactly.
  double average(std::size_t a, std::size_t b) const {
    return sums_[a * n_ + b] / (static_cast<double>(size_[a]) * static_cast<double>(size_[b]));
  }

  Merge merge_closest() {
    std::size_t best = n_;
    for (std::size_t a = 0; a < n_; ++a) {
      if (!active_[a] || nn_[a] == n_) continue;
      if (best == n_ || better(nn_dist_[a], a, nn_[a], nn_dist_[best], best, nn_[best])) best = a;
    }
    const std::size_t lo = std::min(best, nn_[best]);
    const std::size_t hi = std::max(best, nn_[best]);
    const Merge merge{lo, hi, average(lo, hi)};

    for (std::size_t c = 0; c < n_; ++c) {
      sums_[lo * n_ + c] += sums_[hi * n_ + c];
      sums_[c * n_ + lo] = sums_[lo * n_ + c];
    }
    size_[lo] += size_[hi];
    active_[hi] = false;

    for (std::size_t c = 0; c < n_; ++c) {
      if (!active_[c] || c == lo) continue;
      if (nn_[c] == lo || nn_[c] == hi) {
        refresh(c);
      } else {
        const double d = average(lo, c);
        if (d < nn_dist_[c] || (d == nn_dist_[c] && lo < nn_[c])) {
          nn_[c] = lo;
          nn_dist_[c] = d;
        }
      }
    }
    refresh(lo);
    return merge;
  }

 private:
  // Lexicographic order on (distance, smaller representative, larger one).
  static bool better(double d1, std::size_t a1, std::size_t b1, double d2, std::size_t a2, std::size_t b2) {
    if (d1 != d2) return d1 < d2;
    const auto p1 = std::minmax(a1, b1);
    const auto p2 = std::minmax(a2, b2);
    return p1 < p2;
  }

  void refresh(std::size_t a) {
    nn_[a] = n_;
    nn_dist_[a] = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < n_; ++b) {
      if (b == a || !active_[b]) continue;
      const double d = average(a, b);
      if (nn_[a] == n_ || d < nn_dist_[a]) {
        nn_[a] = b;
        nn_dist_[a] = d;
      }
    }
  }

  std::size_t n_;
  std::vector<double> sums_;
  std::vector<std::size_t> size_;
  std::vector<bool> active_;
  std::vector<std::size_t> nn_;
  std::vector<double> nn_dist_;
};

void check_cluster_count(const DistanceMatrix& d, std::size_t m) {
  if (m < 1 || m > d.size()) {
    throw std::invalid_argument("cluster count " + std::to_string(m) + " out of range [1, " +
                                std::to_string(d.size()) + "]");
  }
}

}  // namespace

std::vector<Merge> upgma_merges(const DistanceMatrix& d, std::size_t m) {
  check_cluster_count(d, m);
  std::vector<Merge> merges;
  if (d.size() == m) return merges;
  AverageLinkage linkage(d);
  merges.reserve(d.size() - m);
  for (std::size_t step = 0; step < d.size() - m; ++step) merges.push_back(linkage.merge_closest());
  return merges;
}

Partition upgma_cluster(const DistanceMatrix& d, std::size_t m) {
  const auto merges = upgma_merges(d, m);
  const std::size_t n = d.size();
  std::vector<std::size_t> rep(n);
  std::iota(rep.begin(), rep.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};
  for (const auto& mg : merges) {
    for (std::size_t x : members[mg.right]) rep[x] = mg.left;
    members[mg.left].insert(members[mg.left].end(), members[mg.right].begin(), members[mg.right].end());
    members[mg.right].clear();
  }
  // Dense ids follow the representatives' order.
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(rep[i]);
  return Partition::from_labels(d.ids(), labels);
}

PairScores pair_scores(const Partition& found, const Partition& truth) {
  const std::size_t n = found.ids.size();
  if (truth.ids.size() != n || found.cluster.size() != n || truth.cluster.size() != n) {
    throw std::invalid_argument("partitions cover different id sets");
  }
  std::unordered_map<std::string, std::size_t> where;
  for (std::size_t i = 0; i < n; ++i) where.emplace(truth.ids[i], i);
  if (where.size() != n) throw std::invalid_argument("duplicate ids in ground truth");

  auto c2 = [](std::uint64_t x) { return x * (x > 0 ? x - 1 : 0) / 2; };
  std::map<std::pair<int, int>, std::uint64_t> table;
  std::map<int, std::uint64_t> found_sizes;
  std::map<int, std::uint64_t> truth_sizes;
  for (std::size_t i = 0; i < n; ++i) {
    auto it = where.find(found.ids[i]);
    if (it == where.end()) throw std::invalid_argument("id '" + found.ids[i] + "' missing from ground truth");
    const int a = found.cluster[i];
    const int b = truth.cluster[it->second];
    ++table[{a, b}];
    ++found_sizes[a];
    ++truth_sizes[b];
  }

  PairScores s;
  std::uint64_t same_found = 0;
  std::uint64_t same_truth = 0;
  for (const auto& [key, count] : table) s.confusion.tp += c2(count);
  for (const auto& [key, count] : found_sizes) same_found += c2(count);
  for (const auto& [key, count] : truth_sizes) same_truth += c2(count);
  s.confusion.fp = same_found - s.confusion.tp;
  s.confusion.fn = same_truth - s.confusion.tp;
  const std::uint64_t pairs = c2(n);
  s.confusion.tn = pairs - s.confusion.tp - s.confusion.fp - s.confusion.fn;

  const auto& c = s.confusion;
  s.rand_index = pairs == 0 ? 1.0 : static_cast<double>(c.tp + c.tn) / static_cast<double>(pairs);
  s.precision = same_found == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(same_found);
  s.recall = same_truth == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(same_truth);
  const double pr = s.precision + s.recall;
  s.f_measure = pr == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / pr;
  return s;
}

std::vector<std::size_t> rank_for_query(const DistanceMatrix& d, std::size_t query) {
  if (query >= d.size()) throw std::invalid_argument("unknown query index " + std::to_string(query));
  std::vector<std::size_t> ranked;
  ranked.reserve(d.size() - 1);
  for (std::size_t i = 0; i < d.size(); ++i)
    if (i != query) ranked.push_back(i);
  const auto& ids = d.ids();
  std::sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
    const double da = d(query, a);
    const double db = d(query, b);
    if (da != db) return da < db;
    return ids[a] < ids[b];
  });
  return ranked;
}

namespace {

// (rank, hits) of every relevant item in ranked order.
std::vector<std::pair<std::size_t, std::size_t>> relevant_hits(const std::vector<std::size_t>& ranked,
                                                               const std::unordered_set<std::size_t>& relevant) {
  if (relevant.empty()) throw std::invalid_argument("average precision needs at least one relevant item");
  std::vector<std::pair<std::size_t, std::size_t>> hits;
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    if (relevant.count(ranked[r]) != 0) hits.emplace_back(r + 1, hits.size() + 1);
  }
  if (hits.size() != relevant.size()) throw std::invalid_argument("relevant items missing from the ranking");
  return hits;
}

}  // namespace

double average_precision(const std::vector<std::size_t>& ranked, const std::unordered_set<std::size_t>& relevant) {
  double sum = 0.0;
  for (const auto& [rank, hit] : relevant_hits(ranked, relevant)) {
    sum += static_cast<double>(hit) / static_cast<double>(rank);
  }
  return sum / static_cast<double>(relevant.size());
}

std::array<double, kRecallLevels> interpolated_precision(const std::vector<std::size_t>& ranked,
                                                         const std::unordered_set<std::size_t>& relevant) {
  const auto hits = relevant_hits(ranked, relevant);
  const std::size_t m = relevant.size();
  std::array<double, kRecallLevels> out{};
  // Running max from the right; recall hit/m >= l/10 tested in integers.
  double best = 0.0;
  std::size_t h = hits.size();
  for (std::size_t l = kRecallLevels; l-- > 0;) {
    while (h > 0 && hits[h - 1].second * 10 >= l * m) {
      best = std::max(best, static_cast<double>(hits[h - 1].second) / static_cast<double>(hits[h - 1].first));
      --h;
    }
    out[l] = best;
  }
  return out;
}

RetrievalCurves interpolated_curves(const DistanceMatrix& d, const std::vector<std::string>& labels,
                                    unsigned threads) {
  const std::size_t n = d.size();
  if (labels.size() != n) throw std::invalid_argument("labels and distance matrix differ in size");
  if (n < 2) throw std::invalid_argument("retrieval needs at least two items");

  struct PerQuery {
    bool evaluated = false;
    double ap = 0.0;
    std::array<double, kRecallLevels> precision{};
  };
  std::vector<PerQuery> per(n);
  parallel_for(n, threads, [&](std::size_t q) {
    std::unordered_set<std::size_t> relevant;
    for (std::size_t i = 0; i < n; ++i)
      if (i != q && labels[i] == labels[q]) relevant.insert(i);
    if (relevant.empty()) return;
    const auto ranked = rank_for_query(d, q);
    per[q] = {true, average_precision(ranked, relevant), interpolated_precision(ranked, relevant)};
  });

  RetrievalCurves c;
  for (std::size_t l = 0; l < kRecallLevels; ++l) c.recall[l] = static_cast<double>(l) / 10.0;
  for (std::size_t q = 0; q < n; ++q) {
    if (!per[q].evaluated) {
      c.skipped.push_back(d.ids()[q]);
      continue;
    }
    ++c.queries;
    c.map += per[q].ap;
    for (std::size_t l = 0; l < kRecallLevels; ++l) {
      const double p = per[q].precision[l];
      const double r = c.recall[l];
      c.precision[l] += p;
      c.f_measure[l] += (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
    }
  }
  if (c.queries == 0) throw std::invalid_argument("no query has a relevant item: every category is a singleton");
  const auto q = static_cast<double>(c.queries);
  c.map /= q;
  for (std::size_t l = 0; l < kRecallLevels; ++l) {
    c.precision[l] /= q;
    c.f_measure[l] /= q;
  }
  return c;
}

double map_score(const DistanceMatrix& d, const std::vector<std::string>& labels, unsigned threads) {
  return interpolated_curves(d, labels, threads).map;
}

std::string format_scores(const PairScores& s) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "TP=%llu\nTN=%llu\nFP=%llu\nFN=%llu\nRI=%.6f\nP=%.6f\nR=%.6f\nF=%.6f\n",
                static_cast<unsigned long long>(s.confusion.tp), static_cast<unsigned long long>(s.confusion.tn),
                static_cast<unsigned long long>(s.confusion.fp), static_cast<unsigned long long>(s.confusion.fn),
                s.rand_index, s.precision, s.recall, s.f_measure);
  return buf;
}

std::string format_curves_csv(const RetrievalCurves& c) {
  std::string out = "recall_level,avg_precision,avg_fmeasure\n";
  char buf[96];
  for (std::size_t l = 0; l < kRecallLevels; ++l) {
    std::snprintf(buf, sizeof buf, "%.1f,%.6f,%.6f\n", c.recall[l], c.precision[l], c.f_measure[l]);
    out += buf;
  }
  return out;
}

}  // namespace weftprint
