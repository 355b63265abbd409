#include "weftprint/pattern.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace weftprint {

WeaveMatrix::WeaveMatrix(std::size_t rows, std::size_t cols, bool fill)
    : rows_(rows), cols_(cols), cells_(rows * cols, fill ? 1 : 0) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("weave matrix needs at least one row and column");
}

std::size_t WeaveMatrix::hamming(const WeaveMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw std::invalid_argument("matrix shape mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < cells_.size(); ++i) d += cells_[i] != other.cells_[i] ? 1 : 0;
  return d;
}

std::string WeaveMatrix::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) ? '1' : '0';
    s += '\n';
  }
  return s;
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t positive_mod(long long a, long long m) { return static_cast<std::size_t>(((a % m) + m) % m); }

}  // namespace

std::string describe(const WeaveKind& kind) {
  return std::visit(
      Overloaded{
          [](const weave::Plain&) { return std::string("plain"); },
          [](const weave::Twill& t) { return "twill(" + std::to_string(t.over) + "," + std::to_string(t.under) + ")"; },
          [](const weave::Satin& s) { return "satin(" + std::to_string(s.period) + "," + std::to_string(s.step) + ")"; },
          [](const weave::WarpAbove&) { return std::string("warp_above"); },
          [](const weave::Random& r) {
            std::ostringstream os;
            os << "random(" << r.density << "," << r.seed << ")";
            return os.str();
          },
      },
      kind);
}

WeaveMatrix weave_matrix(const WeaveKind& kind, std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) throw std::invalid_argument("weave dimensions must be >= 1");
  WeaveMatrix m(height, width);
  const auto w = static_cast<long long>(width);
  const auto h = static_cast<long long>(height);

  std::visit(
      Overloaded{
          [&](const weave::Plain&) {
            for (long long i = 0; i < h; ++i)
              for (long long j = 0; j < w; ++j) m.set(i, j, (i + j) % 2 == 0);
          },
          [&](const weave::Twill& t) {
            if (t.over < 1 || t.under < 1) throw std::invalid_argument("twill needs over >= 1 and under >= 1");
            const long long period = t.over + t.under;
            for (long long i = 0; i < h; ++i)
              for (long long j = 0; j < w; ++j)
                m.set(i, j, positive_mod(j - i, period) < static_cast<std::size_t>(t.over));
          },
          [&](const weave::Satin& s) {
            if (s.period < 5 || s.step <= 1 || s.step >= s.period - 1 || std::gcd(s.step, s.period) != 1) {
              throw std::invalid_argument("invalid satin parameters " + describe(kind) +
                                          ": need period >= 5, 1 < step < period-1, gcd(step, period) = 1");
            }
            for (long long i = 0; i < h; ++i)
              for (long long j = 0; j < w; ++j)
                m.set(i, j, positive_mod(j, s.period) == positive_mod(i * s.step, s.period));
          },
          [&](const weave::WarpAbove&) {
            for (long long i = 0; i < h; ++i)
              for (long long j = 0; j < w; ++j) m.set(i, j, true);
          },
          [&](const weave::Random& r) {
            if (!(r.density >= 0.0 && r.density <= 1.0)) throw std::invalid_argument("random density must be in [0,1]");
            std::mt19937_64 rng(r.seed);
            for (long long i = 0; i < h; ++i)
              for (long long j = 0; j < w; ++j) m.set(i, j, unit_double(rng) < r.density);
          },
      },
      kind);
  return m;
}

TextileGraph grid_to_graph(const WeaveMatrix& m) {
  const std::size_t h = m.rows();
  const std::size_t w = m.cols();
  std::vector<CrossingNode> nodes(4 * w * h);
  auto block = [w](std::size_t i, std::size_t j) { return static_cast<NodeIndex>(4 * (i * w + j)); };

  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = 0; j < w; ++j) {
      const NodeIndex b = block(i, j);
      const bool warp_over = m(i, j);
      CrossingNode* n = &nodes[static_cast<std::size_t>(b)];
      n[0] = {i > 0 ? block(i - 1, j) + 1 : kTerminal, warp_over, b + 1};
      n[1] = {i + 1 < h ? block(i + 1, j) + 0 : kTerminal, warp_over, b + 0};
      n[2] = {j > 0 ? block(i, j - 1) + 3 : kTerminal, !warp_over, b + 3};
      n[3] = {j + 1 < w ? block(i, j + 1) + 2 : kTerminal, !warp_over, b + 2};
    }
  }
  return TextileGraph(std::move(nodes));
}

std::string_view to_string(Transform op) {
  switch (op) {
    case Transform::kRotate90: return "rotate90";
    case Transform::kRotate180: return "rotate180";
    case Transform::kMirror: return "mirror";
  }
  return "?";
}

WeaveMatrix transform(const WeaveMatrix& m, Transform op) {
  const std::size_t h = m.rows();
  const std::size_t w = m.cols();
  switch (op) {
    case Transform::kRotate90: {
      // transpose, reverse rows, then swap the thread families
      WeaveMatrix r(w, h);
      for (std::size_t a = 0; a < w; ++a)
        for (std::size_t b = 0; b < h; ++b) r.set(a, b, !m(b, w - 1 - a));
      return r;
    }
    case Transform::kRotate180: {
      WeaveMatrix r(h, w);
      for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < w; ++j) r.set(i, j, m(h - 1 - i, w - 1 - j));
      return r;
    }
    case Transform::kMirror: {
      WeaveMatrix r(h, w);
      for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < w; ++j) r.set(i, j, m(i, w - 1 - j));
      return r;
    }
  }
  throw std::invalid_argument("unknown transform");
}

WeaveMatrix perturb(const WeaveMatrix& m, double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("perturbation rate must be in [0,1]");
  WeaveMatrix r = m;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (unit_double(rng) < rate) r.set(i, j, !m(i, j));
  return r;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::size_t CategorySpec::perturbed_count() const {
  return static_cast<std::size_t>(std::llround(perturb_fraction * static_cast<double>(count)));
}

std::size_t CategorySpec::transformed_count() const {
  return static_cast<std::size_t>(std::llround(transform_fraction * static_cast<double>(count)));
}

void check(const CorpusSpec& spec) {
  if (spec.categories.empty()) throw std::invalid_argument("corpus spec has no categories");
  std::vector<std::string> seen;
  for (const auto& c : spec.categories) {
    const std::string where = "category '" + c.name + "': ";
    if (c.name.empty()) throw std::invalid_argument("category with empty name");
    for (const auto& s : seen)
      if (s == c.name) throw std::invalid_argument(where + "duplicate category name");
    seen.push_back(c.name);
    if (c.count < 1) throw std::invalid_argument(where + "count must be >= 1");
    if (c.width < 1 || c.height < 1) throw std::invalid_argument(where + "grid size must be >= 1");
    auto unit = [&](double v, const char* field) {
      if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(where + field + " must be in [0,1]");
    };
    unit(c.perturb_fraction, "perturb_fraction");
    unit(c.perturb_rate, "perturb_rate");
    unit(c.transform_fraction, "transform_fraction");
    if (c.perturbed_count() + c.transformed_count() > c.count) {
      throw std::invalid_argument(where + "perturbed and transformed samples exceed count");
    }
    (void)weave_matrix(c.kind, 1, 1);  // surfaces kind parameter errors
  }
}

namespace {

namespace pt = boost::property_tree;

template <typename T>
T get_number(const pt::ptree& section, const std::string& key, T fallback, const std::string& where) {
  auto v = section.get_optional<std::string>(key);
  if (!v) return fallback;
  std::istringstream in(*v);
  T out{};
  if constexpr (std::is_unsigned_v<T>) {
    if (!v->empty() && v->front() == '-') throw std::invalid_argument(where + key + " must be non-negative");
  }
  in >> out;
  if (in.fail() || !(in >> std::ws).eof()) {
    throw std::invalid_argument(where + "cannot parse " + key + " = '" + *v + "'");
  }
  return out;
}

WeaveKind parse_kind(const pt::ptree& section, const std::string& where, std::uint64_t seed) {
  const std::string kind = section.get<std::string>("kind", "");
  if (kind == "plain") return weave::Plain{};
  if (kind == "twill") {
    return weave::Twill{get_number<int>(section, "over", 2, where), get_number<int>(section, "under", 1, where)};
  }
  if (kind == "satin") {
    return weave::Satin{get_number<int>(section, "period", 5, where), get_number<int>(section, "step", 2, where)};
  }
  if (kind == "warp_above") return weave::WarpAbove{};
  if (kind == "random") return weave::Random{get_number<double>(section, "density", 0.5, where), seed};
  throw std::invalid_argument(where + "unknown kind '" + kind +
                              "' (expected plain, twill, satin, warp_above or random)");
}

}  // namespace

CorpusSpec parse_corpus_spec(std::string_view text, std::optional<std::uint64_t> global_seed) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument("corpus spec line " + std::to_string(e.line()) + ": " + e.message());
  }

  CorpusSpec spec;
  spec.seed = global_seed ? *global_seed : get_number<std::uint64_t>(tree, "seed", 0, "");
  std::size_t index = 0;
  for (const auto& [name, section] : tree) {
    if (section.empty()) {
      if (name != "seed") throw std::invalid_argument("unknown global key '" + name + "'");
      continue;
    }
    const std::string where = "category '" + name + "': ";
    static const char* const kKnown[] = {"kind",  "over",  "under",  "period",           "step",
                                         "density", "count", "width", "height",        "perturb_fraction",
                                         "perturb_rate",  "transform_fraction", "seed"};
    for (const auto& kv : section) {
      bool known = false;
      for (const char* k : kKnown) known = known || kv.first == k;
      if (!known) throw std::invalid_argument(where + "unknown key '" + kv.first + "'");
    }
    CategorySpec c;
    c.name = name;
    c.seed = get_number<std::uint64_t>(section, "seed", derive_seed(spec.seed, index), where);
    c.kind = parse_kind(section, where, c.seed);
    c.count = get_number<std::size_t>(section, "count", 1, where);
    c.width = get_number<std::size_t>(section, "width", 24, where);
    c.height = get_number<std::size_t>(section, "height", c.width, where);
    c.perturb_fraction = get_number<double>(section, "perturb_fraction", 0.0, where);
    c.perturb_rate = get_number<double>(section, "perturb_rate", 0.0, where);
    c.transform_fraction = get_number<double>(section, "transform_fraction", 0.0, where);
    spec.categories.push_back(std::move(c));
    ++index;
  }
  check(spec);
  return spec;
}

CorpusSpec read_corpus_spec(const std::string& path, std::optional<std::uint64_t> global_seed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus spec " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corpus_spec(buf.str(), global_seed);
}

namespace {

std::string sample_id(const std::string& category, std::size_t i) {
  std::string num = std::to_string(i);
  if (num.size() < 3) num.insert(0, 3 - num.size(), '0');
  return category + "_" + num;
}

}  // namespace

LabeledCorpus generate_corpus(const CorpusSpec& spec) {
  check(spec);
  static constexpr Transform kCycle[] = {Transform::kRotate90, Transform::kMirror, Transform::kRotate180};

  LabeledCorpus corpus;
  for (const auto& c : spec.categories) {
    const std::size_t n_perturbed = c.perturbed_count();
    const std::size_t n_transformed = c.transformed_count();
    const std::size_t n_clean = c.count - n_perturbed - n_transformed;
    const WeaveMatrix base = weave_matrix(c.kind, c.width, c.height);
    for (std::size_t s = 0; s < c.count; ++s) {
      WeaveMatrix m = base;
      if (s >= n_clean && s < n_clean + n_perturbed) {
        m = perturb(m, c.perturb_rate, derive_seed(c.seed, s));
      } else if (s >= n_clean + n_perturbed) {
        m = transform(m, kCycle[(s - n_clean - n_perturbed) % 3]);
      }
      corpus.push_back({sample_id(c.name, s), grid_to_graph(m), c.name});
    }
  }
  return corpus;
}

std::string write_corpus(const LabeledCorpus& corpus, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path manifest = fs::path(dir) / "manifest.csv";
  std::ofstream out(manifest, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + manifest.string());
  out << "id,path,category\n";
  for (const auto& item : corpus) {
    const std::string file = item.id + ".tg";
    write_graph_file((fs::path(dir) / file).string(), item.graph);
    out << item.id << ',' << file << ',' << item.label << '\n';
  }
  return manifest.string();
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  namespace fs = std::filesystem;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path);
  const fs::path base = fs::path(path).parent_path();
  std::vector<ManifestEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "id,path,category") throw std::runtime_error(path + ": expected header 'id,path,category'");
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected 3 fields");
    }
    ManifestEntry e{line.substr(0, c1), line.substr(c1 + 1, c2 - c1 - 1), line.substr(c2 + 1)};
    if (fs::path(e.path).is_relative()) e.path = (base / e.path).string();
    out.push_back(std::move(e));
  }
  if (out.empty()) throw std::runtime_error(path + ": manifest lists no graphs");
  return out;
}

}  // namespace weftprint
