#include "weftprint/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "weftprint/parallel.hpp"

namespace weftprint {

namespace {

using Entries = std::vector<Fingerprint::Entry>;

// Visits the union of two sorted supports: fn(count_in_r, count_in_s).
template <typename Fn>
void merge_walk(const Entries& r, const Entries& s, Fn&& fn) {
  auto a = r.begin();
  auto b = s.begin();
  while (a != r.end() || b != s.end()) {
    if (b == s.end() || (a != r.end() && a->first < b->first)) {
      fn(a->second, std::uint64_t{0});
      ++a;
    } else if (a == r.end() || b->first < a->first) {
      fn(std::uint64_t{0}, b->second);
      ++b;
    } else {
      fn(a->second, b->second);
      ++a;
      ++b;
    }
  }
}

// Sparse dot product that walks the smaller support and searches the larger
// one; the search window only moves forward because both are sorted.
template <typename Vec, typename Weight>
double sparse_dot(const Vec& r, const Vec& s, Weight weight) {
  const Vec& small = r.size() <= s.size() ? r : s;
  const Vec& large = r.size() <= s.size() ? s : r;
  double dot = 0.0;
  auto lo = large.begin();
  for (const auto& e : small) {
    lo = std::lower_bound(lo, large.end(), e.first,
                          [](const auto& x, const Neighborhood& key) { return x.first < key; });
    if (lo == large.end()) break;
    if (lo->first == e.first) dot += weight(e.second) * weight(lo->second);
  }
  return dot;
}

// Takes squared norms: sqrt(x * x) == x exactly, so a vector compared with
// itself yields exactly 0.
double cosine_from(double dot, double sq_r, double sq_s) {
  const bool zr = sq_r == 0.0;
  const bool zs = sq_s == 0.0;
  if (zr && zs) return 0.0;
  if (zr || zs) return 1.0;
  return std::clamp(1.0 - dot / std::sqrt(sq_r * sq_s), 0.0, 1.0);
}

double count_squared_norm(const Entries& r) {
  double sq = 0.0;
  for (const auto& e : r) sq += static_cast<double>(e.second) * static_cast<double>(e.second);
  return sq;
}

const auto as_double = [](auto v) { return static_cast<double>(v); };

}  // namespace

double jaccard_dist(const FrequencyVector& r, const FrequencyVector& s) {
  if (r.empty() && s.empty()) throw std::invalid_argument("jaccard distance is undefined on empty fingerprints");
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  merge_walk(r.entries(), s.entries(), [&](std::uint64_t a, std::uint64_t b) {
    lo += std::min(a, b);
    hi += std::max(a, b);
  });
  return 1.0 - static_cast<double>(lo) / static_cast<double>(hi);
}

double jaccard_set_dist(const FrequencyVector& r, const FrequencyVector& s) {
  if (r.empty() && s.empty()) throw std::invalid_argument("jaccard distance is undefined on empty fingerprints");
  std::uint64_t both = 0;
  std::uint64_t any = 0;
  merge_walk(r.entries(), s.entries(), [&](std::uint64_t a, std::uint64_t b) {
    both += (a > 0 && b > 0) ? 1 : 0;
    ++any;
  });
  return 1.0 - static_cast<double>(both) / static_cast<double>(any);
}

std::uint64_t hamming_bool_dist(const FrequencyVector& r, const FrequencyVector& s) {
  std::uint64_t d = 0;
  merge_walk(r.entries(), s.entries(), [&](std::uint64_t a, std::uint64_t b) { d += (a == 0) != (b == 0) ? 1 : 0; });
  return d;
}

std::uint64_t hamming_freq_dist(const FrequencyVector& r, const FrequencyVector& s) {
  std::uint64_t d = 0;
  merge_walk(r.entries(), s.entries(), [&](std::uint64_t a, std::uint64_t b) { d += a > b ? a - b : b - a; });
  return d;
}

double cosine_freq_dist(const FrequencyVector& r, const FrequencyVector& s) {
  return cosine_from(sparse_dot(r.entries(), s.entries(), as_double), count_squared_norm(r.entries()),
                     count_squared_norm(s.entries()));
}

std::uint64_t CorpusStats::df(const Neighborhood& n) const {
  auto it = document_frequency.find(n);
  if (it == document_frequency.end()) {
    throw std::invalid_argument("stale corpus statistics: neighborhood " + n.key() + " not in collection");
  }
  return it->second;
}

CorpusStats corpus_stats(const std::vector<Fingerprint>& corpus) {
  if (corpus.empty()) throw std::invalid_argument("corpus statistics need at least one fingerprint");
  CorpusStats stats;
  stats.textiles = corpus.size();
  for (const auto& fp : corpus)
    for (const auto& e : fp.entries()) ++stats.document_frequency[e.first];
  return stats;
}

WeightedVector tfidf_weights(const FrequencyVector& r, const CorpusStats& stats) {
  WeightedVector out;
  double sq = 0.0;
  const auto n = static_cast<double>(stats.textiles);
  for (const auto& [nb, tf] : r.entries()) {
    const auto df = stats.df(nb);
    if (df > stats.textiles) throw std::invalid_argument("stale corpus statistics: df exceeds N for " + nb.key());
    const double w = (1.0 + std::log10(static_cast<double>(tf))) * std::log10(n / static_cast<double>(df));
    if (w == 0.0) continue;
    out.entries.emplace_back(nb, w);
    sq += w * w;
  }
  out.squared_norm = sq;
  return out;
}

namespace {

double weighted_cosine(const WeightedVector& a, const WeightedVector& b) {
  return cosine_from(sparse_dot(a.entries, b.entries, [](double w) { return w; }), a.squared_norm, b.squared_norm);
}

}  // namespace

double cosine_tfidf_dist(const FrequencyVector& r, const FrequencyVector& s, const CorpusStats& stats) {
  return weighted_cosine(tfidf_weights(r, stats), tfidf_weights(s, stats));
}

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kJaccard: return "jaccard";
    case Metric::kHammingBool: return "hbool";
    case Metric::kHammingFreq: return "hfreq";
    case Metric::kCosineFreq: return "cosine";
    case Metric::kCosineTfIdf: return "tfidf";
    case Metric::kJaccardSet: return "jaccard-set";
  }
  return "?";
}

Metric parse_metric(std::string_view name) {
  for (Metric m : {Metric::kJaccard, Metric::kHammingBool, Metric::kHammingFreq, Metric::kCosineFreq,
                   Metric::kCosineTfIdf, Metric::kJaccardSet}) {
    if (metric_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown metric '" + std::string(name) +
                              "' (expected jaccard, hbool, hfreq, cosine, tfidf or jaccard-set)");
}

std::vector<Metric> core_metrics() {
  return {Metric::kJaccard, Metric::kHammingBool, Metric::kHammingFreq, Metric::kCosineFreq, Metric::kCosineTfIdf};
}

double distance(Metric m, const FrequencyVector& r, const FrequencyVector& s, const CorpusStats* stats) {
  switch (m) {
    case Metric::kJaccard: return jaccard_dist(r, s);
    case Metric::kJaccardSet: return jaccard_set_dist(r, s);
    case Metric::kHammingBool: return static_cast<double>(hamming_bool_dist(r, s));
    case Metric::kHammingFreq: return static_cast<double>(hamming_freq_dist(r, s));
    case Metric::kCosineFreq: return cosine_freq_dist(r, s);
    case Metric::kCosineTfIdf:
      if (stats == nullptr) throw std::invalid_argument("tfidf metric needs corpus statistics");
      return cosine_tfidf_dist(r, s, *stats);
  }
  throw std::invalid_argument("unknown metric");
}

DistanceMatrix::DistanceMatrix(std::vector<std::string> ids, std::vector<double> values)
    : ids_(std::move(ids)), values_(std::move(values)) {
  if (values_.size() != ids_.size() * ids_.size()) throw std::invalid_argument("distance matrix shape mismatch");
}

DistanceMatrix::DistanceMatrix(std::vector<std::string> ids)
    : ids_(std::move(ids)), values_(ids_.size() * ids_.size(), 0.0) {}

std::size_t DistanceMatrix::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < ids_.size(); ++i)
    if (ids_[i] == id) return i;
  throw std::invalid_argument("unknown id '" + std::string(id) + "'");
}

DistanceMatrix distance_matrix(const std::vector<Fingerprint>& corpus, const std::vector<std::string>& ids,
                               Metric metric, const CorpusStats* stats, unsigned threads) {
  if (corpus.size() != ids.size()) throw std::invalid_argument("ids and fingerprints differ in length");
  if (corpus.size() < 2) throw std::invalid_argument("distance matrix needs at least two items");
  if (metric == Metric::kCosineTfIdf && stats == nullptr) {
    throw std::invalid_argument("tfidf metric needs corpus statistics");
  }

  const std::size_t n = corpus.size();
  DistanceMatrix out(ids);

  // Per-item precomputation keeps each pair O(support).
  std::vector<double> norms;
  std::vector<WeightedVector> weighted;
  if (metric == Metric::kCosineFreq) {
    norms.resize(n);
    for (std::size_t i = 0; i < n; ++i) norms[i] = count_squared_norm(corpus[i].entries());
  } else if (metric == Metric::kCosineTfIdf) {
    weighted.resize(n);
    parallel_for(n, threads, [&](std::size_t i) { weighted[i] = tfidf_weights(corpus[i], *stats); });
  }

  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = 0.0;
      if (metric == Metric::kCosineFreq) {
        d = cosine_from(sparse_dot(corpus[i].entries(), corpus[j].entries(), as_double), norms[i], norms[j]);
      } else if (metric == Metric::kCosineTfIdf) {
        d = weighted_cosine(weighted[i], weighted[j]);
      } else {
        d = distance(metric, corpus[i], corpus[j]);
      }
      out.set(i, j, d);  // rows are disjoint per worker; (j,i) cells too
    }
  });
  return out;
}

namespace {

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string serialize_distance_matrix(const DistanceMatrix& d) {
  std::string out = "id";
  for (const auto& id : d.ids()) {
    out += ',';
    out += id;
  }
  out += '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    out += d.ids()[i];
    for (std::size_t j = 0; j < d.size(); ++j) {
      out += ',';
      out += format_value(d(i, j));
    }
    out += '\n';
  }
  return out;
}

DistanceMatrix parse_distance_matrix(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty distance matrix");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv(line);
  if (header.empty() || header[0] != "id") throw std::invalid_argument("distance matrix header must start with 'id'");
  std::vector<std::string> ids(header.begin() + 1, header.end());
  const std::size_t n = ids.size();
  std::vector<double> values;
  values.reserve(n * n);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (row >= n || fields.size() != n + 1 || fields[0] != ids[row]) {
      throw std::invalid_argument("distance matrix row " + std::to_string(row + 1) + " malformed");
    }
    for (std::size_t j = 1; j <= n; ++j) {
      char* end = nullptr;
      const double v = std::strtod(fields[j].c_str(), &end);
      if (fields[j].empty() || *end != '\0' || !(v >= 0.0)) {
        throw std::invalid_argument("distance matrix row " + std::to_string(row + 1) + ": bad value '" +
                                    fields[j] + "'");
      }
      values.push_back(v);
    }
    ++row;
  }
  if (row != n) throw std::invalid_argument("distance matrix has " + std::to_string(row) + " rows, expected " +
                                            std::to_string(n));
  DistanceMatrix d(std::move(ids), std::move(values));
  for (std::size_t i = 0; i < n; ++i) {
    if (d(i, i) != 0.0) throw std::invalid_argument("distance matrix diagonal must be zero");
    for (std::size_t j = 0; j < i; ++j)
      if (d(i, j) != d(j, i)) throw std::invalid_argument("distance matrix is not symmetric");
  }
  return d;
}

DistanceMatrix read_distance_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open distance matrix " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_distance_matrix(buf.str());
}

}  // namespace weftprint
