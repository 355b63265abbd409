#include "weftprint/fingerprint.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include <absl/container/flat_hash_map.h>
#include <boost/sort/spreadsort/integer_sort.hpp>

namespace weftprint {

char to_char(Symbol s) {
  static constexpr char kChars[] = {'A', 'N', 'T', '0'};
  return kChars[static_cast<int>(s)];
}

Symbol symbol_from_char(char c) {
  switch (c) {
    case 'A': return Symbol::kA;
    case 'N': return Symbol::kN;
    case 'T': return Symbol::kT;
    case '0': return Symbol::kPad;
    default: throw std::invalid_argument(std::string("invalid arm symbol '") + c + "'");
  }
}

ArmSequence ArmSequence::from_string(std::string_view s) {
  if (s.empty() || s.size() > static_cast<std::size_t>(kMaxK)) {
    throw std::invalid_argument("arm length must be in [1, " + std::to_string(kMaxK) + "]");
  }
  std::uint64_t packed = 0;
  bool ended = false;
  for (char c : s) {
    const Symbol sym = symbol_from_char(c);
    if (ended != (sym == Symbol::kPad)) {
      throw std::invalid_argument("malformed arm '" + std::string(s) + "': padding must follow exactly one T");
    }
    ended = ended || sym == Symbol::kT;
    packed = (packed << 2) | static_cast<std::uint64_t>(sym);
  }
  return {static_cast<int>(s.size()), packed};
}

std::string ArmSequence::to_string() const {
  std::string s(static_cast<std::size_t>(k_), '?');
  for (int l = 0; l < k_; ++l) s[static_cast<std::size_t>(l)] = to_char((*this)[l]);
  return s;
}

Neighborhood::Neighborhood(std::pair<ArmSequence, ArmSequence> first,
                           std::pair<ArmSequence, ArmSequence> second) {
  const int k = first.first.k();
  if (first.second.k() != k || second.first.k() != k || second.second.k() != k) {
    throw std::invalid_argument("neighborhood arms must share one length");
  }
  *this = from_packed(k, first.first.packed(), first.second.packed(), second.first.packed(), second.second.packed());
}

Neighborhood Neighborhood::from_packed(int k, std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  Neighborhood n;
  n.k_ = static_cast<std::uint8_t>(k);
  if (b < a) std::swap(a, b);
  if (d < c) std::swap(c, d);
  if (c < a || (c == a && d < b)) {
    std::swap(a, c);
    std::swap(b, d);
  }
  n.arms_ = {a, b, c, d};
  std::uint64_t h = 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(k) + 1U);
  for (std::uint64_t arm : n.arms_) {
    h ^= arm + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
  }
  n.hash_ = h ^ (h >> 33);
  return n;
}

Neighborhood Neighborhood::from_key(std::string_view key) {
  const auto semi = key.find(';');
  if (semi == std::string_view::npos) throw std::invalid_argument("neighborhood key lacks ';': " + std::string(key));
  auto pair = [&](std::string_view part) {
    const auto comma = part.find(',');
    if (comma == std::string_view::npos) throw std::invalid_argument("neighborhood key lacks ',': " + std::string(key));
    return std::pair{ArmSequence::from_string(part.substr(0, comma)), ArmSequence::from_string(part.substr(comma + 1))};
  };
  return Neighborhood(pair(key.substr(0, semi)), pair(key.substr(semi + 1)));
}

std::string Neighborhood::key() const {
  std::string s;
  s.reserve(4 * static_cast<std::size_t>(k_) + 3);
  s += arm(0, 0).to_string();
  s += ',';
  s += arm(0, 1).to_string();
  s += ';';
  s += arm(1, 0).to_string();
  s += ',';
  s += arm(1, 1).to_string();
  return s;
}

Fingerprint::Fingerprint(std::vector<Entry> entries) {
  // Radix-sorting compact (hash, index) keys and gathering once keeps this
  // close to linear in the support size; equal hashes fall back to the full
  // order.
  std::vector<std::pair<std::uint64_t, std::uint32_t>> order(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) order[i] = {entries[i].first.hash(), static_cast<std::uint32_t>(i)};
  boost::sort::spreadsort::integer_sort(
      order.begin(), order.end(), [](const auto& o, unsigned shift) { return o.first >> shift; },
      [](const auto& x, const auto& y) { return x.first < y.first; });
  for (auto run = order.begin(); run != order.end();) {
    auto end = std::find_if(run, order.end(), [&](const auto& o) { return o.first != run->first; });
    if (end - run > 1) {
      std::sort(run, end, [&](const auto& x, const auto& y) { return entries[x.second].first < entries[y.second].first; });
    }
    run = end;
  }
  entries_.reserve(entries.size());
  for (const auto& [h, i] : order) {
    Entry& e = entries[i];
    if (e.second == 0) continue;
    if (!entries_.empty() && entries_.back().first == e.first) {
      entries_.back().second += e.second;
    } else {
      entries_.push_back(std::move(e));
    }
  }
}

std::uint64_t Fingerprint::total() const {
  std::uint64_t t = 0;
  for (const auto& e : entries_) t += e.second;
  return t;
}

std::uint64_t Fingerprint::count(const Neighborhood& n) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                             [](const Entry& e, const Neighborhood& key) { return e.first < key; });
  return it != entries_.end() && it->first == n ? it->second : 0;
}

namespace {

void check_k(int k) {
  if (k < 1 || k > kMaxK) {
    throw std::invalid_argument("neighborhood size k must be in [1, " + std::to_string(kMaxK) + "], got " +
                                std::to_string(k));
  }
}

// Hot loop shared by arm_walk and fingerprint; no bounds checks.
inline std::uint64_t walk_packed(const CrossingNode* nodes, NodeIndex current, int k) {
  std::uint64_t packed = 0;
  for (int l = 0; l < k; ++l) {
    const CrossingNode& here = nodes[current];
    const NodeIndex next = here.next_node;
    if (next == kTerminal) {
      packed = (packed << 2) | static_cast<std::uint64_t>(Symbol::kT);
      const int pads = k - l - 1;
      // 2*pads < 64 because k <= 32 and l >= 0
      packed = (packed << (2 * pads)) | ((std::uint64_t{1} << (2 * pads)) - 1);
      return packed;
    }
    const CrossingNode& there = nodes[next];
    const auto sym = here.on_top != there.on_top ? Symbol::kA : Symbol::kN;
    packed = (packed << 2) | static_cast<std::uint64_t>(sym);
    current = there.opposite_node;
  }
  return packed;
}

}  // namespace

ArmSequence arm_walk(const TextileGraph& g, std::size_t start, int k) {
  check_k(k);
  (void)g.at(start);
  return {k, walk_packed(g.nodes().data(), static_cast<NodeIndex>(start), k)};
}

Neighborhood crossing_neighborhood(const TextileGraph& g, std::size_t crossing, int k) {
  check_k(k);
  if (crossing >= g.crossing_count()) {
    throw std::out_of_range("crossing " + std::to_string(crossing) + " out of range");
  }
  const CrossingNode* nodes = g.nodes().data();
  ArmSequence top[2];
  ArmSequence bottom[2];
  int nt = 0;
  int nb = 0;
  for (std::size_t j = 0; j < 4; ++j) {
    const std::size_t i = 4 * crossing + j;
    const ArmSequence arm(k, walk_packed(nodes, static_cast<NodeIndex>(i), k));
    if (nodes[i].on_top) {
      if (nt == 2) throw std::invalid_argument("crossing " + std::to_string(crossing) + " has more than two top nodes");
      top[nt++] = arm;
    } else {
      if (nb == 2) throw std::invalid_argument("crossing " + std::to_string(crossing) + " has fewer than two top nodes");
      bottom[nb++] = arm;
    }
  }
  return Neighborhood({top[0], top[1]}, {bottom[0], bottom[1]});
}

Fingerprint fingerprint(const TextileGraph& g, int k) {
  check_k(k);
  const std::size_t n = g.crossing_count();
  const CrossingNode* nodes = g.nodes().data();
  // Sized for the worst case (all neighborhoods distinct) so that the
  // table never rehashes and the cost per crossing stays flat in k.
  absl::flat_hash_map<Neighborhood, std::uint64_t, NeighborhoodHash> counts;
  counts.reserve(n);
  for (std::size_t c = 0; c < n; ++c) {
    const auto b = static_cast<NodeIndex>(4 * c);
    std::uint64_t arm[4];
    for (int j = 0; j < 4; ++j) arm[j] = walk_packed(nodes, b + j, k);
    // Node 0 pairs with the one other node sharing its on_top flag; valid
    // graphs have exactly one such node.
    const bool t0 = nodes[b].on_top;
    const int mate = nodes[b + 1].on_top == t0 ? 1 : (nodes[b + 2].on_top == t0 ? 2 : 3);
    const int x = mate == 1 ? 2 : 1;
    const int y = mate == 3 ? 2 : 3;
    ++counts[Neighborhood::from_packed(k, arm[0], arm[mate], arm[x], arm[y])];
  }
  return Fingerprint(std::vector<Fingerprint::Entry>(counts.begin(), counts.end()));
}

std::string serialize_fingerprint(const Fingerprint& fp) {
  std::vector<std::pair<std::string, std::uint64_t>> lines;
  lines.reserve(fp.support_size());
  for (const auto& [nb, count] : fp.entries()) lines.emplace_back(nb.key(), count);
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& [key, count] : lines) {
    out += key;
    out += ' ';
    out += std::to_string(count);
    out += '\n';
  }
  return out;
}

Fingerprint parse_fingerprint(std::string_view text) {
  std::vector<Fingerprint::Entry> entries;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto space = line.find(' ');
    if (space == std::string_view::npos) {
      throw std::invalid_argument("fingerprint line " + std::to_string(line_no) + ": expected '<key> <count>'");
    }
    std::uint64_t count = 0;
    const std::string_view num = line.substr(space + 1);
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), count);
    if (ec != std::errc{} || ptr != num.data() + num.size() || count == 0) {
      throw std::invalid_argument("fingerprint line " + std::to_string(line_no) + ": bad count");
    }
    entries.emplace_back(Neighborhood::from_key(line.substr(0, space)), count);
  }
  return Fingerprint(std::move(entries));
}

}  // namespace weftprint
