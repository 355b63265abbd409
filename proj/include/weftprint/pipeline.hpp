#pragma once

#include <string>
#include <vector>

#include "weftprint/eval.hpp"
#include "weftprint/fingerprint.hpp"
#include "weftprint/pattern.hpp"
#include "weftprint/similarity.hpp"

namespace weftprint {

std::vector<Fingerprint> fingerprint_all(const std::vector<TextileGraph>& graphs, int k, unsigned threads = 1);

/// Distance matrix for a metric; corpus statistics are built when needed.
DistanceMatrix corpus_distances(const std::vector<Fingerprint>& fps, const std::vector<std::string>& ids,
                                Metric metric, unsigned threads = 1);

struct EvalReport {
  std::size_t items = 0;
  std::size_t clusters = 0;
  int k = 0;
  Metric metric = Metric::kJaccard;
  PairScores scores;
  RetrievalCurves curves;
};

/// generate -> fingerprint -> distances -> UPGMA + retrieval. `clusters` == 0
/// uses the number of categories in the spec.
EvalReport pipeline_run(const CorpusSpec& spec, int k, Metric metric, std::size_t clusters = 0,
                        unsigned threads = 1);

/// Same evaluation on an already generated corpus.
EvalReport evaluate_corpus(const LabeledCorpus& corpus, int k, Metric metric, std::size_t clusters = 0,
                           unsigned threads = 1);

/// Text report: the pair scores followed by `MAP=` with 6 decimals.
std::string format_report(const EvalReport& r);

}  // namespace weftprint
