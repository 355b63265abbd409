#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "weftprint/pipeline.hpp"

namespace py = pybind11;
using namespace weftprint;

namespace {

using Rows = std::vector<std::vector<bool>>;

Rows to_rows(const WeaveMatrix& m) {
  Rows rows(m.rows(), std::vector<bool>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
  return rows;
}

WeaveMatrix from_rows(const Rows& rows) {
  if (rows.empty() || rows.front().empty()) throw std::invalid_argument("weave matrix must be non-empty");
  WeaveMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw std::invalid_argument("weave matrix rows must have equal length");
    for (std::size_t j = 0; j < m.cols(); ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

WeaveKind make_kind(const std::string& kind, const py::kwargs& params) {
  auto get_int = [&](const char* key, int fallback) {
    return params.contains(key) ? params[key].cast<int>() : fallback;
  };
  if (kind == "plain") return weave::Plain{};
  if (kind == "twill") return weave::Twill{get_int("over", 2), get_int("under", 1)};
  if (kind == "satin") return weave::Satin{get_int("period", 5), get_int("step", 2)};
  if (kind == "warp_above") return weave::WarpAbove{};
  if (kind == "random") {
    weave::Random r;
    if (params.contains("density")) r.density = params["density"].cast<double>();
    if (params.contains("seed")) r.seed = params["seed"].cast<std::uint64_t>();
    return r;
  }
  throw std::invalid_argument("unknown weave kind '" + kind + "'");
}

Fingerprint fingerprint_from_dict(const std::map<std::string, std::uint64_t>& counts) {
  std::vector<Fingerprint::Entry> entries;
  entries.reserve(counts.size());
  for (const auto& [key, count] : counts) entries.emplace_back(Neighborhood::from_key(key), count);
  return Fingerprint(std::move(entries));
}

std::map<std::string, std::uint64_t> fingerprint_to_dict(const Fingerprint& fp) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& [nb, count] : fp.entries()) out.emplace(nb.key(), count);
  return out;
}

DistanceMatrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
  std::vector<std::string> ids;
  std::vector<double> values;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw std::invalid_argument("distance matrix must be square");
    ids.push_back(std::to_string(i));
    values.insert(values.end(), rows[i].begin(), rows[i].end());
  }
  return DistanceMatrix(std::move(ids), std::move(values));
}

std::vector<std::string> default_ids(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  return ids;
}

std::vector<std::string> as_strings(const std::vector<int>& labels) {
  std::vector<std::string> out;
  for (int l : labels) out.push_back(std::to_string(l));
  return out;
}

py::dict scores_dict(const PairScores& s) {
  py::dict d;
  d["tp"] = s.confusion.tp;
  d["tn"] = s.confusion.tn;
  d["fp"] = s.confusion.fp;
  d["fn"] = s.confusion.fn;
  d["rand_index"] = s.rand_index;
  d["precision"] = s.precision;
  d["recall"] = s.recall;
  d["f_measure"] = s.f_measure;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Textile hypergraph fingerprints, distance measures and evaluation";

  py::class_<TextileGraph>(m, "TextileGraph")
      .def_property_readonly("crossing_count", &TextileGraph::crossing_count)
      .def_property_readonly("node_count", &TextileGraph::node_count)
      .def("nodes",
           [](const TextileGraph& g) {
             std::vector<std::tuple<int, bool, int>> out;
             for (const auto& n : g.nodes()) out.emplace_back(n.next_node, n.on_top, n.opposite_node);
             return out;
           },
           "List of (next_node, on_top, opposite_node); next_node is -1 at a thread end.")
      .def("edge_label", [](const TextileGraph& g, std::size_t i) { return std::string(1, to_char(edge_label(g, i))); })
      .def("terminal_count", [](const TextileGraph& g) { return terminal_count(g); })
      .def(py::self == py::self)
      .def("__repr__", [](const TextileGraph& g) {
        return "<TextileGraph crossings=" + std::to_string(g.crossing_count()) + ">";
      });

  m.def("parse_graph", [](const std::string& text) { return parse_graph(text); }, py::arg("text"));
  m.def("serialize_graph", &serialize_graph, py::arg("graph"));
  m.def("validate",
        [](const TextileGraph& g) {
          std::vector<std::string> out;
          for (const auto& v : validate(g).violations) out.push_back(v.message);
          return out;
        },
        py::arg("graph"), "Violation messages; empty when the graph is valid.");

  m.def("weave_matrix",
        [](const std::string& kind, std::size_t width, std::size_t height, const py::kwargs& params) {
          return to_rows(weave_matrix(make_kind(kind, params), width, height));
        },
        py::arg("kind"), py::arg("width"), py::arg("height"),
        "Rows of booleans; kinds: plain, twill(over, under), satin(period, step), warp_above, random(density, seed).");
  m.def("grid_to_graph", [](const Rows& rows) { return grid_to_graph(from_rows(rows)); }, py::arg("rows"));

  py::class_<Fingerprint>(m, "Fingerprint")
      .def(py::init(&fingerprint_from_dict), py::arg("counts"))
      .def("to_dict", &fingerprint_to_dict)
      .def_property_readonly("support_size", &Fingerprint::support_size)
      .def_property_readonly("total", &Fingerprint::total)
      .def("__len__", &Fingerprint::support_size)
      .def("__getitem__", [](const Fingerprint& fp, const std::string& key) { return fp.count(Neighborhood::from_key(key)); })
      .def(py::self == py::self)
      .def("__repr__", [](const Fingerprint& fp) {
        return "<Fingerprint support=" + std::to_string(fp.support_size()) + " total=" + std::to_string(fp.total()) + ">";
      });

  m.def("fingerprint", &fingerprint, py::arg("graph"), py::arg("k") = kDefaultK);

  m.def("jaccard_dist", &jaccard_dist);
  m.def("hamming_bool_dist", &hamming_bool_dist);
  m.def("hamming_freq_dist", &hamming_freq_dist);
  m.def("cosine_freq_dist", &cosine_freq_dist);
  m.def("cosine_tfidf_dist",
        [](const Fingerprint& r, const Fingerprint& s, const std::vector<Fingerprint>& corpus) {
          return cosine_tfidf_dist(r, s, corpus_stats(corpus));
        },
        py::arg("r"), py::arg("s"), py::arg("corpus"));

  py::enum_<Metric>(m, "Metric")
      .value("JACCARD", Metric::kJaccard)
      .value("HAMMING_BOOL", Metric::kHammingBool)
      .value("HAMMING_FREQ", Metric::kHammingFreq)
      .value("COSINE_FREQ", Metric::kCosineFreq)
      .value("COSINE_TFIDF", Metric::kCosineTfIdf)
      .value("JACCARD_SET", Metric::kJaccardSet);

  m.def("distance",
        [](const std::string& metric, const Fingerprint& r, const Fingerprint& s,
           const std::optional<std::vector<Fingerprint>>& corpus) {
          const Metric mt = parse_metric(metric);
          if (corpus) {
            const CorpusStats stats = corpus_stats(*corpus);
            return distance(mt, r, s, &stats);
          }
          return distance(mt, r, s);
        },
        py::arg("metric"), py::arg("r"), py::arg("s"), py::arg("corpus") = py::none());

  m.def("distance_matrix",
        [](const std::vector<Fingerprint>& fps, const std::string& metric, unsigned threads) {
          const DistanceMatrix d = corpus_distances(fps, default_ids(fps.size()), parse_metric(metric), threads);
          std::vector<std::vector<double>> rows(d.size(), std::vector<double>(d.size()));
          for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = 0; j < d.size(); ++j) rows[i][j] = d(i, j);
          return rows;
        },
        py::arg("fingerprints"), py::arg("metric") = "jaccard", py::arg("threads") = 1,
        "Pairwise distances as a list of rows; metric names: jaccard, hbool, hfreq, cosine, tfidf, jaccard-set.");

  m.def("upgma_merges",
        [](const std::vector<std::vector<double>>& rows, std::size_t clusters) {
          std::vector<std::tuple<std::size_t, std::size_t, double>> out;
          for (const auto& mg : upgma_merges(matrix_from_rows(rows), clusters)) out.emplace_back(mg.left, mg.right, mg.distance);
          return out;
        },
        py::arg("distances"), py::arg("clusters"));
  m.def("upgma_cluster",
        [](const std::vector<std::vector<double>>& rows, std::size_t clusters) {
          return upgma_cluster(matrix_from_rows(rows), clusters).cluster;
        },
        py::arg("distances"), py::arg("clusters"), "Dense cluster id per item.");

  m.def("pair_scores",
        [](const std::vector<int>& found, const std::vector<int>& truth) {
          const auto ids = default_ids(found.size());
          return scores_dict(pair_scores(Partition::from_labels(ids, as_strings(found)),
                                         Partition::from_labels(ids, as_strings(truth))));
        },
        py::arg("found"), py::arg("truth"));
  m.def("average_precision",
        [](const std::vector<std::size_t>& ranked, const std::vector<std::size_t>& relevant) {
          return average_precision(ranked, {relevant.begin(), relevant.end()});
        },
        py::arg("ranked"), py::arg("relevant"));
  m.def("interpolated_precision",
        [](const std::vector<std::size_t>& ranked, const std::vector<std::size_t>& relevant) {
          return interpolated_precision(ranked, {relevant.begin(), relevant.end()});
        },
        py::arg("ranked"), py::arg("relevant"));

  py::class_<CorpusSpec>(m, "CorpusSpec")
      .def_readonly("seed", &CorpusSpec::seed)
      .def_property_readonly("categories", [](const CorpusSpec& s) {
        std::vector<std::string> names;
        for (const auto& c : s.categories) names.push_back(c.name);
        return names;
      });
  m.def("parse_corpus_spec", &parse_corpus_spec, py::arg("text"), py::arg("seed") = py::none());
  m.def("generate_corpus",
        [](const CorpusSpec& spec) {
          std::vector<std::tuple<std::string, TextileGraph, std::string>> out;
          for (auto& item : generate_corpus(spec)) out.emplace_back(item.id, std::move(item.graph), item.label);
          return out;
        },
        py::arg("spec"), "List of (id, graph, category).");

  m.def("pipeline_run",
        [](const CorpusSpec& spec, int k, const std::string& metric, std::size_t clusters, unsigned threads) {
          const EvalReport r = pipeline_run(spec, k, parse_metric(metric), clusters, threads);
          py::dict d = scores_dict(r.scores);
          d["items"] = r.items;
          d["clusters"] = r.clusters;
          d["map"] = r.curves.map;
          d["precision_curve"] = r.curves.precision;
          d["f_measure_curve"] = r.curves.f_measure;
          d["report"] = format_report(r);
          return d;
        },
        py::arg("spec"), py::arg("k") = kDefaultK, py::arg("metric") = "jaccard", py::arg("clusters") = 0,
        py::arg("threads") = 1);
}
