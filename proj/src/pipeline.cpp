#include "weftprint/pipeline.hpp"

#include <cstdio>
#include <set>

#include "weftprint/parallel.hpp"

namespace weftprint {

std::vector<Fingerprint> fingerprint_all(const std::vector<TextileGraph>& graphs, int k, unsigned threads) {
  std::vector<Fingerprint> out(graphs.size());
  parallel_for(graphs.size(), threads, [&](std::size_t i) { out[i] = fingerprint(graphs[i], k); });
  return out;
}

DistanceMatrix corpus_distances(const std::vector<Fingerprint>& fps, const std::vector<std::string>& ids,
                                Metric metric, unsigned threads) {
  if (metric == Metric::kCosineTfIdf) {
    const CorpusStats stats = corpus_stats(fps);
    return distance_matrix(fps, ids, metric, &stats, threads);
  }
  return distance_matrix(fps, ids, metric, nullptr, threads);
}

EvalReport evaluate_corpus(const LabeledCorpus& corpus, int k, Metric metric, std::size_t clusters,
                           unsigned threads) {
  std::vector<TextileGraph> graphs;
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  for (const auto& item : corpus) {
    graphs.push_back(item.graph);
    ids.push_back(item.id);
    labels.push_back(item.label);
  }
  if (clusters == 0) clusters = std::set<std::string>(labels.begin(), labels.end()).size();

  const auto fps = fingerprint_all(graphs, k, threads);
  const DistanceMatrix d = corpus_distances(fps, ids, metric, threads);

  EvalReport r;
  r.items = corpus.size();
  r.clusters = clusters;
  r.k = k;
  r.metric = metric;
  r.scores = pair_scores(upgma_cluster(d, clusters), Partition::from_labels(ids, labels));
  r.curves = interpolated_curves(d, labels, threads);
  return r;
}

EvalReport pipeline_run(const CorpusSpec& spec, int k, Metric metric, std::size_t clusters, unsigned threads) {
  return evaluate_corpus(generate_corpus(spec), k, metric, clusters, threads);
}

std::string format_report(const EvalReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "metric=%s\nk=%d\nitems=%zu\nclusters=%zu\n",
                std::string(metric_name(r.metric)).c_str(), r.k, r.items, r.clusters);
  std::string out = buf;
  out += format_scores(r.scores);
  std::snprintf(buf, sizeof buf, "MAP=%.6f\n", r.curves.map);
  out += buf;
  return out;
}

}  // namespace weftprint
