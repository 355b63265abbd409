#include "weftprint/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "weftprint/eval.hpp"
#include "weftprint/fingerprint.hpp"
#include "weftprint/graph.hpp"
#include "weftprint/parallel.hpp"
#include "weftprint/pattern.hpp"
#include "weftprint/pipeline.hpp"
#include "weftprint/similarity.hpp"

namespace weftprint::cli {

namespace fs = std::filesystem;

namespace {

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << text;
  if (!out) throw DataError("write failed for " + path);
}

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;

  unsigned thread_count() const {
    if (threads) return *threads;
    if (const char* env = std::getenv("WEFTPRINT_THREADS"); env != nullptr && *env != '\0') {
      char* end = nullptr;
      const unsigned long v = std::strtoul(env, &end, 10);
      if (*end != '\0') throw CLI::ValidationError("WEFTPRINT_THREADS", "must be a non-negative integer");
      return static_cast<unsigned>(v);
    }
    return 0;
  }
};

std::pair<int, int> parse_k_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw CLI::ValidationError("--k-range", "expected a..b");
  try {
    std::size_t used_a = 0;
    std::size_t used_b = 0;
    const int a = std::stoi(text.substr(0, dots), &used_a);
    const int b = std::stoi(text.substr(dots + 2), &used_b);
    if (used_a != dots || used_b != text.size() - dots - 2 || a < 1 || b < a || b > kMaxK) {
      throw std::invalid_argument("range");
    }
    return {a, b};
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--k-range", "expected a..b with 1 <= a <= b <= " + std::to_string(kMaxK));
  }
}

std::vector<Metric> parse_metric_list(const std::string& text) {
  std::vector<Metric> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(parse_metric(item));
    } catch (const std::invalid_argument& e) {
      throw CLI::ValidationError("--metrics", e.what());
    }
  }
  if (out.empty()) throw CLI::ValidationError("--metrics", "empty metric list");
  return out;
}

Metric metric_option(const std::string& name) {
  try {
    return parse_metric(name);
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("--metric", e.what());
  }
}

struct LoadedCorpus {
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  std::vector<TextileGraph> graphs;
};

LoadedCorpus load_manifest(const std::string& path) {
  LoadedCorpus c;
  for (auto& e : read_manifest(path)) {
    c.graphs.push_back(read_graph_file(e.path));
    c.ids.push_back(std::move(e.id));
    c.labels.push_back(std::move(e.category));
  }
  return c;
}

std::vector<std::string> truth_labels(const std::string& manifest, const DistanceMatrix& d) {
  std::map<std::string, std::string> category;
  for (const auto& e : read_manifest(manifest)) category.emplace(e.id, e.category);
  std::vector<std::string> labels;
  for (const auto& id : d.ids()) {
    auto it = category.find(id);
    if (it == category.end()) throw DataError("id '" + id + "' missing from truth manifest " + manifest);
    labels.push_back(it->second);
  }
  if (category.size() != d.size()) throw DataError("truth manifest and distance matrix list different ids");
  return labels;
}

void cmd_generate(const Globals& g, const std::string& spec_path, const std::string& out_dir, std::ostream& out) {
  const CorpusSpec spec = read_corpus_spec(spec_path, g.seed);
  const LabeledCorpus corpus = generate_corpus(spec);
  const std::string manifest = write_corpus(corpus, out_dir);
  out << "wrote " << corpus.size() << " graphs, manifest " << manifest << '\n';
}

void cmd_fingerprint(const Globals& g, const std::string& in, int k, std::string out_path, std::ostream& out) {
  if (fs::is_directory(in)) {
    std::vector<fs::path> inputs;
    for (const auto& entry : fs::directory_iterator(in))
      if (entry.is_regular_file() && entry.path().extension() == ".tg") inputs.push_back(entry.path());
    std::sort(inputs.begin(), inputs.end());
    if (inputs.empty()) throw DataError("no .tg files in " + in);
    if (out_path.empty()) out_path = in;
    fs::create_directories(out_path);
    std::vector<std::string> texts(inputs.size());
    parallel_for(inputs.size(), g.thread_count(), [&](std::size_t i) {
      texts[i] = serialize_fingerprint(fingerprint(read_graph_file(inputs[i].string()), k));
    });
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      write_text((fs::path(out_path) / inputs[i].filename()).replace_extension(".fp").string(), texts[i]);
    }
    out << "wrote " << inputs.size() << " fingerprints to " << out_path << '\n';
    return;
  }
  if (out_path.empty()) out_path = fs::path(in).replace_extension(".fp").string();
  write_text(out_path, serialize_fingerprint(fingerprint(read_graph_file(in), k)));
  out << "wrote " << out_path << '\n';
}

void cmd_distmatrix(const Globals& g, const std::string& manifest, Metric metric, int k, const std::string& out_path,
                    std::ostream& out) {
  const unsigned threads = g.thread_count();
  const LoadedCorpus c = load_manifest(manifest);
  if (c.graphs.size() < 2) throw DataError("distance matrix needs at least two graphs");
  const auto fps = fingerprint_all(c.graphs, k, threads);
  write_text(out_path, serialize_distance_matrix(corpus_distances(fps, c.ids, metric, threads)));
  out << "wrote " << c.ids.size() << "x" << c.ids.size() << " " << metric_name(metric) << " matrix to " << out_path
      << '\n';
}

void cmd_cluster(const std::string& dist, std::size_t m, const std::string& truth, const std::string& report,
                 const std::string& partition_path, std::ostream& out) {
  const DistanceMatrix d = read_distance_matrix(dist);
  const auto labels = truth_labels(truth, d);
  if (m < 1 || m > d.size()) throw DataError("--clusters must be in [1, " + std::to_string(d.size()) + "]");
  const Partition found = upgma_cluster(d, m);
  const PairScores scores = pair_scores(found, Partition::from_labels(d.ids(), labels));
  std::string text = "clusters=" + std::to_string(m) + "\n" + format_scores(scores);
  write_text(report, text);
  if (!partition_path.empty()) {
    std::string csv = "id,cluster\n";
    for (std::size_t i = 0; i < found.ids.size(); ++i) csv += found.ids[i] + "," + std::to_string(found.cluster[i]) + "\n";
    write_text(partition_path, csv);
  }
  out << text;
}

void cmd_retrieve(const Globals& g, const std::string& dist, const std::string& truth, const std::string& curves_path,
                  const std::string& report, std::ostream& out, std::ostream& err) {
  const DistanceMatrix d = read_distance_matrix(dist);
  const auto labels = truth_labels(truth, d);
  const RetrievalCurves curves = interpolated_curves(d, labels, g.thread_count());
  for (const auto& q : curves.skipped) err << "warning: query '" << q << "' has no relevant items, skipped\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "queries=%zu\nMAP=%.6f\n", curves.queries, curves.map);
  write_text(report, buf);
  if (!curves_path.empty()) write_text(curves_path, format_curves_csv(curves));
  out << buf;
}

void cmd_bench(const Globals& g, const std::string& spec_path, std::pair<int, int> ks, const std::vector<Metric>& metrics,
               int repeats, const std::string& out_path, std::ostream& out) {
  const unsigned threads = g.thread_count();
  const LabeledCorpus corpus = generate_corpus(read_corpus_spec(spec_path, g.seed));
  std::vector<TextileGraph> graphs;
  std::vector<std::string> ids;
  for (const auto& item : corpus) {
    graphs.push_back(item.graph);
    ids.push_back(item.id);
  }

  std::string csv = "metric,k,seconds\n";
  for (Metric metric : metrics) {
    for (int k = ks.first; k <= ks.second; ++k) {
      std::vector<double> runs;
      for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto fps = fingerprint_all(graphs, k, threads);
        const auto d = corpus_distances(fps, ids, metric, threads);
        const auto t1 = std::chrono::steady_clock::now();
        if (d.size() != graphs.size()) throw DataError("internal: matrix size mismatch");
        runs.push_back(std::chrono::duration<double>(t1 - t0).count());
      }
      std::nth_element(runs.begin(), runs.begin() + static_cast<long>(runs.size() / 2), runs.end());
      char buf[96];
      std::snprintf(buf, sizeof buf, "%s,%d,%.6f\n", std::string(metric_name(metric)).c_str(), k,
                    runs[runs.size() / 2]);
      csv += buf;
      out << buf;
    }
  }
  write_text(out_path, csv);
}

void cmd_pipeline(const Globals& g, const std::string& spec_path, int k, Metric metric, std::size_t clusters,
                  const std::string& report, const std::string& curves_path, std::ostream& out) {
  const EvalReport r = pipeline_run(read_corpus_spec(spec_path, g.seed), k, metric, clusters, g.thread_count());
  const std::string text = format_report(r);
  if (!report.empty()) write_text(report, text);
  if (!curves_path.empty()) write_text(curves_path, format_curves_csv(r.curves));
  out << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"weftprint: textile structure fingerprints, distances and retrieval evaluation", "weftprint"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals globals;
  app.add_option("--seed", globals.seed, "Override the corpus spec's global seed");
  app.add_option("--threads", globals.threads, "Worker threads, 0 = auto (fallback: WEFTPRINT_THREADS)");

  std::string spec_path;
  std::string out_dir;
  std::string in_path;
  std::string out_path;
  std::string manifest;
  std::string metric_text = "jaccard";
  std::string metrics_text = "jaccard,hbool,hfreq,cosine,tfidf";
  std::string dist_path;
  std::string truth;
  std::string report;
  std::string curves_path;
  std::string partition_path;
  std::string k_range = "1..9";
  int k = kDefaultK;
  int repeats = 3;
  std::size_t clusters = 0;

  auto k_check = CLI::Range(1, kMaxK);

  auto* generate = app.add_subcommand("generate", "Generate a labeled corpus of .tg files and a manifest");
  generate->add_option("--spec", spec_path, "Corpus spec (INI)")->required()->check(CLI::ExistingFile);
  generate->add_option("--out-dir", out_dir, "Output directory")->required();

  auto* fp_cmd = app.add_subcommand("fingerprint", "Compute .fp fingerprints of a .tg file or directory");
  fp_cmd->add_option("--in", in_path, ".tg file or directory")->required()->check(CLI::ExistingPath);
  fp_cmd->add_option("--k", k, "Neighborhood size")->check(k_check);
  fp_cmd->add_option("--out", out_path, ".fp file or directory (default: next to the input)");

  auto* dm = app.add_subcommand("distmatrix", "Pairwise distance matrix of a manifest's graphs");
  dm->add_option("--manifest", manifest, "Manifest CSV")->required()->check(CLI::ExistingFile);
  dm->add_option("--metric", metric_text, "jaccard|hbool|hfreq|cosine|tfidf|jaccard-set");
  dm->add_option("--k", k, "Neighborhood size")->check(k_check);
  dm->add_option("--out", out_path, "Distance matrix CSV")->required();

  auto* cluster = app.add_subcommand("cluster", "UPGMA clustering scored against ground truth");
  cluster->add_option("--dist", dist_path, "Distance matrix CSV")->required()->check(CLI::ExistingFile);
  cluster->add_option("--clusters", clusters, "Number of clusters")->required();
  cluster->add_option("--truth", truth, "Manifest with ground-truth categories")->required()->check(CLI::ExistingFile);
  cluster->add_option("--report", report, "Score report")->required();
  cluster->add_option("--partition", partition_path, "Optional id,cluster CSV");

  auto* retrieve = app.add_subcommand("retrieve", "Query-by-example retrieval: MAP and 11-point curves");
  retrieve->add_option("--dist", dist_path, "Distance matrix CSV")->required()->check(CLI::ExistingFile);
  retrieve->add_option("--truth", truth, "Manifest with ground-truth categories")->required()->check(CLI::ExistingFile);
  retrieve->add_option("--curves", curves_path, "Curves CSV");
  retrieve->add_option("--report", report, "MAP report")->required();

  auto* bench = app.add_subcommand("bench", "Time fingerprinting plus distance matrix per metric and k");
  bench->add_option("--spec", spec_path, "Corpus spec (INI)")->required()->check(CLI::ExistingFile);
  bench->add_option("--k-range", k_range, "Inclusive range a..b");
  bench->add_option("--metrics", metrics_text, "Comma-separated metric list");
  bench->add_option("--repeats", repeats, "Runs per data point (median reported)")->check(CLI::Range(1, 1000));
  bench->add_option("--out", out_path, "Timing CSV")->required();

  auto* pipe = app.add_subcommand("pipeline", "generate -> fingerprint -> distances -> cluster + retrieve");
  pipe->add_option("--spec", spec_path, "Corpus spec (INI)")->required()->check(CLI::ExistingFile);
  pipe->add_option("--k", k, "Neighborhood size")->check(k_check);
  pipe->add_option("--metric", metric_text, "jaccard|hbool|hfreq|cosine|tfidf|jaccard-set");
  pipe->add_option("--clusters", clusters, "Number of clusters (default: number of categories)");
  pipe->add_option("--report", report, "Report file");
  pipe->add_option("--curves", curves_path, "Curves CSV");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run 'weftprint --help' for usage\n";
    return kUsage;
  }

  try {
    if (*generate) {
      cmd_generate(globals, spec_path, out_dir, out);
    } else if (*fp_cmd) {
      cmd_fingerprint(globals, in_path, k, out_path, out);
    } else if (*dm) {
      cmd_distmatrix(globals, manifest, metric_option(metric_text), k, out_path, out);
    } else if (*cluster) {
      cmd_cluster(dist_path, clusters, truth, report, partition_path, out);
    } else if (*retrieve) {
      cmd_retrieve(globals, dist_path, truth, curves_path, report, out, err);
    } else if (*bench) {
      cmd_bench(globals, spec_path, parse_k_range(k_range), parse_metric_list(metrics_text), repeats, out_path, out);
    } else if (*pipe) {
      cmd_pipeline(globals, spec_path, k, metric_option(metric_text), clusters, report, curves_path, out);
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kOk;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace weftprint::cli
