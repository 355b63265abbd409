// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "support.hpp"
#include "weftprint/pipeline.hpp"

using namespace weftprint;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("[%s] criterion %d: %s | %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Fingerprint fp(std::initializer_list<std::pair<const char*, std::uint64_t>> entries) {
  std::vector<Fingerprint::Entry> out;
  for (const auto& [key, count] : entries) out.emplace_back(Neighborhood::from_key(key), count);
  return Fingerprint(std::move(out));
}

Outcome worked_example() {
  const Fingerprint h1 = fp({{"A,T;A,T", 4}});
  const Fingerprint h2 = fp({{"A,T;A,T", 2}, {"N,T;N,T", 2}});
  const std::uint64_t hf = hamming_freq_dist(h1, h2);
  const double cos = cosine_freq_dist(h1, h2);
  const double err = std::abs(cos - (1.0 - std::sqrt(2.0) / 2.0));
  return {hf == 4 && err <= 1e-12, "hfreq=" + std::to_string(hf) + " cosine_err=" + fmt("%.2e", err)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(20240601);
  int mismatches = 0;
  int comparisons = 0;
  for (int t = 0; t < 200; ++t) {
    const WeaveMatrix m = testing::random_matrix(rng, 12);
    const oracle::Hypergraph h(m);
    const TextileGraph g = grid_to_graph(m);
    for (int k = 1; k <= 9; ++k) {
      ++comparisons;
      if (oracle::as_map(fingerprint(g, k)) != h.fingerprint(k)) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(comparisons) + " graph/k pairs, " + std::to_string(mismatches) + " mismatches"};
}

Outcome orientation_invariance() {
  std::mt19937_64 rng(20240602);
  std::uniform_int_distribution<std::size_t> side(3, 16);
  int mismatches = 0;
  int comparisons = 0;
  for (int t = 0; t < 50; ++t) {
    const WeaveMatrix m = testing::random_matrix(rng, side(rng), side(rng));
    for (int k : {1, 4, 9}) {
      const Fingerprint ref = fingerprint(grid_to_graph(m), k);
      for (Transform op : {Transform::kRotate90, Transform::kRotate180, Transform::kMirror}) {
        ++comparisons;
        if (fingerprint(grid_to_graph(transform(m, op)), k) != ref) ++mismatches;
      }
    }
  }
  return {mismatches == 0, std::to_string(comparisons) + " comparisons, " + std::to_string(mismatches) + " mismatches"};
}

Outcome linear_scaling() {
  // 20 graphs of 80x79 = 6320 crossings across all weave kinds, each with
  // 3% flipped cells so that neighborhoods keep diversifying as k grows.
  const std::vector<WeaveKind> kinds = {weave::Plain{},     weave::Twill{2, 1}, weave::Twill{2, 2},
                                        weave::Twill{3, 1}, weave::Twill{3, 3}, weave::Twill{4, 4},
                                        weave::Satin{5, 2}, weave::WarpAbove{}, weave::Random{0.5, 7}};
  std::vector<TextileGraph> graphs;
  for (std::size_t i = 0; i < 20; ++i) {
    graphs.push_back(grid_to_graph(perturb(weave_matrix(kinds[i % kinds.size()], 80, 79), 0.03, 1000 + i)));
  }
  constexpr int kLo = 2;
  constexpr int kHi = 9;
  constexpr int kRounds = 7;
  std::vector<std::vector<double>> samples(kHi + 1);
  std::size_t sink = 0;
  for (const auto& g : graphs) sink += fingerprint(g, kHi).support_size();  // warm-up
  // Rounds interleave all k so that slow drifts hit every k alike.
  for (int r = 0; r < kRounds; ++r) {
    for (int k = kLo; k <= kHi; ++k) {
      for (const auto& g : graphs) {
        const auto t0 = std::chrono::steady_clock::now();
        sink += fingerprint(g, k).support_size();
        const auto t1 = std::chrono::steady_clock::now();
        samples[static_cast<std::size_t>(k)].push_back(std::chrono::duration<double>(t1 - t0).count());
      }
    }
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  std::vector<double> ratio;
  for (int k = kLo; k <= kHi; ++k) ratio.push_back(median(samples[static_cast<std::size_t>(k)]) / k);
  const double center = median(ratio);
  double worst = 0.0;
  std::string detail = "time/k in us:";
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    worst = std::max(worst, std::abs(ratio[i] / center - 1.0));
    detail += " " + fmt("%.1f", ratio[i] * 1e6);
  }
  detail += "; max deviation " + fmt("%.1f%%", 100.0 * worst) + " (limit 30%)";
  if (sink == 0) detail += " [empty]";
  return {worst <= 0.30, detail};
}

struct DeskStudy {
  LabeledCorpus corpus;
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  std::vector<Fingerprint> fps_k4;
  std::vector<Fingerprint> fps_k6;
};

const DeskStudy& desk() {
  static const DeskStudy study = [] {
    DeskStudy s;
    s.corpus = generate_corpus(read_corpus_spec(WEFTPRINT_CONFIG_DIR "/desk.ini"));
    std::vector<TextileGraph> graphs;
    for (const auto& item : s.corpus) {
      s.ids.push_back(item.id);
      s.labels.push_back(item.label);
      graphs.push_back(item.graph);
    }
    s.fps_k4 = fingerprint_all(graphs, 4, 0);
    s.fps_k6 = fingerprint_all(graphs, 6, 0);
    return s;
  }();
  return study;
}

double desk_map(Metric m, const std::vector<Fingerprint>& fps) {
  const DeskStudy& s = desk();
  return map_score(corpus_distances(fps, s.ids, m, 0), s.labels, 0);
}

Outcome desk_study() {
  const DeskStudy& s = desk();
  std::map<std::string, std::size_t> per_label;
  for (const auto& l : s.labels) ++per_label[l];
  bool layout = s.corpus.size() == 180 && per_label.size() == 9;
  for (const auto& [label, n] : per_label) layout = layout && n == 20;

  const DistanceMatrix d = corpus_distances(s.fps_k4, s.ids, Metric::kJaccard, 0);
  const PairScores scores = pair_scores(upgma_cluster(d, 9), Partition::from_labels(s.ids, s.labels));
  const double map = map_score(d, s.labels, 0);
  const bool pass = layout && scores.rand_index >= 0.90 && scores.f_measure >= 0.75 && map >= 0.85;
  return {pass, "items=" + std::to_string(s.corpus.size()) + " RI=" + fmt("%.4f", scores.rand_index) +
                    " F=" + fmt("%.4f", scores.f_measure) + " MAP=" + fmt("%.4f", map) +
                    " (limits 0.90 / 0.75 / 0.85)"};
}

Outcome measure_ordering() {
  const double j = desk_map(Metric::kJaccard, desk().fps_k4);
  const double hb = desk_map(Metric::kHammingBool, desk().fps_k4);
  const double cf = desk_map(Metric::kCosineFreq, desk().fps_k4);
  return {j >= hb && j >= cf,
          "MAP jaccard=" + fmt("%.4f", j) + " hbool=" + fmt("%.4f", hb) + " cosine=" + fmt("%.4f", cf)};
}

Outcome k_plateau() {
  const double m4 = desk_map(Metric::kJaccard, desk().fps_k4);
  const double m6 = desk_map(Metric::kJaccard, desk().fps_k6);
  return {std::abs(m6 - m4) <= 0.05,
          "MAP k=4 " + fmt("%.4f", m4) + ", k=6 " + fmt("%.4f", m6) + ", |diff|=" + fmt("%.4f", std::abs(m6 - m4))};
}

Outcome eval_fixtures() {
  std::vector<std::string> failed;
  auto expect = [&](bool ok, const char* name) {
    if (!ok) failed.push_back(name);
  };
  const std::vector<std::string> ids = {"a", "b", "c"};
  const PairScores s = pair_scores(Partition::from_labels(ids, {"1", "2", "2"}), Partition::from_labels(ids, {"1", "1", "2"}));
  expect(s.confusion.tp == 0 && s.confusion.fn == 1 && s.confusion.fp == 1 && s.confusion.tn == 1, "confusion");
  expect(std::abs(s.rand_index - 1.0 / 3.0) <= 1e-12, "RI=1/3");
  expect(std::abs(average_precision({0, 1, 2, 3}, {0, 2}) - 5.0 / 6.0) <= 1e-12, "AP=5/6");
  expect(std::abs(average_precision({0, 1, 2, 3, 4}, {0, 3}) - 0.75) <= 1e-12, "AP=0.75");
  const auto ip = interpolated_precision({0, 1, 2, 3, 4}, {0, 3});
  for (std::size_t l = 0; l < kRecallLevels; ++l) expect(ip[l] == (l <= 5 ? 1.0 : 0.5), "interpolated precision");
  const DistanceMatrix d3(ids, {0, 1, 4, 1, 0, 5, 4, 5, 0});
  const auto merges = upgma_merges(d3, 1);
  expect(merges.size() == 2 && merges[0].left == 0 && merges[0].right == 1 && merges[1].distance == 4.5, "UPGMA 4.5");

  std::mt19937_64 rng(20240608);
  int oracle_mismatch = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 9;
    std::vector<std::string> mids;
    for (std::size_t i = 0; i < n; ++i) mids.push_back("m" + std::to_string(i));
    DistanceMatrix d(mids);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, static_cast<double>(1 + rng() % (t % 2 == 0 ? 5 : 100)));
    const auto got = upgma_merges(d, 1);
    const auto want = oracle::upgma(d, 1);
    bool same = got.size() == want.size();
    for (std::size_t i = 0; same && i < got.size(); ++i) {
      same = got[i].left == want[i].left && got[i].right == want[i].right &&
             std::abs(got[i].distance - want[i].distance) <= 1e-12;
    }
    if (!same) ++oracle_mismatch;
  }
  expect(oracle_mismatch == 0, "UPGMA oracle");
  std::string detail = "fixtures RI, AP x2, interpolation, UPGMA; 100 oracle matrices, " +
                       std::to_string(oracle_mismatch) + " mismatches";
  for (const auto& f : failed) detail += "; failed: " + f;
  return {failed.empty(), detail};
}

Outcome metric_properties() {
  std::mt19937_64 rng(20240609);
  std::vector<Fingerprint> pool;
  std::vector<std::string> ids;
  for (int i = 0; i < 60; ++i) {
    pool.push_back(fingerprint(grid_to_graph(testing::random_matrix(rng, 9)), 1 + i % 4));
    ids.push_back("f" + std::to_string(i));
  }
  const CorpusStats stats = corpus_stats(pool);
  std::vector<std::string> failed;
  auto expect = [&](bool ok, const std::string& name) {
    if (!ok && std::find(failed.begin(), failed.end(), name) == failed.end()) failed.push_back(name);
  };
  for (const auto& r : pool) {
    for (Metric m : core_metrics()) {
      const double self = distance(m, r, r, &stats);
      expect(m == Metric::kCosineFreq || m == Metric::kCosineTfIdf ? std::abs(self) <= 1e-12 : self == 0.0,
             "identity " + std::string(metric_name(m)));
    }
    for (const auto& s : pool) {
      for (Metric m : core_metrics()) {
        const double a = distance(m, r, s, &stats);
        const double b = distance(m, s, r, &stats);
        const bool integer = m == Metric::kHammingBool || m == Metric::kHammingFreq;
        expect(integer ? a == b : std::abs(a - b) <= 1e-12, "symmetry " + std::string(metric_name(m)));
        expect(a >= 0.0, "non-negative " + std::string(metric_name(m)));
        if (!integer) expect(a <= 1.0, "range " + std::string(metric_name(m)));
        if (integer) expect(a == std::floor(a), "integer " + std::string(metric_name(m)));
      }
    }
  }
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  int violations = 0;
  for (int t = 0; t < 10000; ++t) {
    // triples drawn within one k so that the supports can overlap
    std::size_t x = pick(rng);
    std::size_t y = pick(rng);
    std::size_t z = pick(rng);
    y = y - y % 4 + x % 4;
    z = z - z % 4 + x % 4;
    if (y >= pool.size()) y -= 4;
    if (z >= pool.size()) z -= 4;
    const double xz = jaccard_dist(pool[x], pool[z]);
    if (xz > jaccard_dist(pool[x], pool[y]) + jaccard_dist(pool[y], pool[z]) + 1e-12) ++violations;
  }
  expect(violations == 0, "triangle");
  for (std::size_t i = 0; i + 1 < pool.size(); i += 7) {
    auto scaled = [](const Fingerprint& f, std::uint64_t c) {
      std::vector<Fingerprint::Entry> e = f.entries();
      for (auto& [n, v] : e) v *= c;
      return Fingerprint(std::move(e));
    };
    const Fingerprint& r = pool[i];
    const Fingerprint& s = pool[i + 1];
    expect(std::abs(jaccard_dist(scaled(r, 3), scaled(s, 3)) - jaccard_dist(r, s)) <= 1e-12, "jaccard scaling");
    expect(std::abs(cosine_freq_dist(scaled(r, 5), scaled(s, 5)) - cosine_freq_dist(r, s)) <= 1e-12, "cosine scaling");
  }
  for (Metric m : core_metrics()) {
    const std::string one = serialize_distance_matrix(corpus_distances(pool, ids, m, 1));
    for (unsigned threads : {2U, 3U, 8U}) {
      expect(serialize_distance_matrix(corpus_distances(pool, ids, m, threads)) == one,
             "thread determinism " + std::string(metric_name(m)));
    }
  }
  std::string detail = "60 fingerprints x 5 metrics, 10000 triangle triples (" + std::to_string(violations) +
                       " violations), CSV identical for 1/2/3/8 threads";
  for (const auto& f : failed) detail += "; failed: " + f;
  return {failed.empty(), detail};
}

}  // namespace

int main() {
  report(1, "worked-example distances", worked_example);
  report(2, "fingerprint equals brute-force hypergraph oracle", oracle_equivalence);
  report(3, "orientation invariance", orientation_invariance);
  report(4, "fingerprint time linear in k", linear_scaling);
  report(5, "desk-scale clustering and retrieval", desk_study);
  report(6, "Jaccard MAP at least HammingBool and CosineFreq", measure_ordering);
  report(7, "MAP plateau between k=4 and k=6", k_plateau);
  report(8, "evaluation fixtures and UPGMA oracle", eval_fixtures);
  report(9, "metric property suite", metric_properties);
  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
