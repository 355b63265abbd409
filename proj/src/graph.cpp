#include "weftprint/graph.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace weftprint {

const CrossingNode& TextileGraph::at(std::size_t i) const {
  if (i >= nodes_.size()) {
    throw std::out_of_range("node index " + std::to_string(i) + " out of range [0, " +
                            std::to_string(nodes_.size()) + ")");
  }
  return nodes_[i];
}

char to_char(EdgeLabel label) {
  switch (label) {
    case EdgeLabel::kAlternating: return 'A';
    case EdgeLabel::kNonAlternating: return 'N';
    case EdgeLabel::kTerminated: return 'T';
  }
  return '?';
}

EdgeLabel edge_label(const TextileGraph& g, std::size_t i) {
  const CrossingNode& n = g.at(i);
  if (n.next_node == kTerminal) return EdgeLabel::kTerminated;
  return n.on_top != g.at(static_cast<std::size_t>(n.next_node)).on_top
             ? EdgeLabel::kAlternating
             : EdgeLabel::kNonAlternating;
}

bool ValidationReport::has(Rule rule) const {
  for (const auto& v : violations)
    if (v.rule == rule) return true;
  return false;
}

std::string ValidationReport::summary() const {
  if (ok()) return "ok";
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += '\n';
    out += v.message;
  }
  return out;
}

ValidationReport validate(const TextileGraph& g) {
  ValidationReport report;
  auto fail = [&](std::size_t node, Rule rule, std::string msg) {
    report.violations.push_back({node, rule, std::move(msg)});
  };

  const std::size_t count = g.node_count();
  if (count == 0 || count % 4 != 0) {
    fail(0, Rule::kNodeCount,
         "node count " + std::to_string(count) + " is not a positive multiple of four");
    return report;
  }
  const auto in_range = [count](NodeIndex v) {
    return v >= 0 && static_cast<std::size_t>(v) < count;
  };

  // Range problems make every later check meaningless for that node.
  std::vector<bool> sane(count, true);
  for (std::size_t i = 0; i < count; ++i) {
    const CrossingNode& n = g.node(i);
    if (n.next_node != kTerminal && !in_range(n.next_node)) {
      fail(i, Rule::kIndexRange, "next node of " + std::to_string(i) + " out of range");
      sane[i] = false;
    }
    if (!in_range(n.opposite_node)) {
      fail(i, Rule::kIndexRange, "opposite node of " + std::to_string(i) + " out of range");
      sane[i] = false;
    }
  }

  for (std::size_t i = 0; i < count; ++i) {
    if (!sane[i]) continue;
    const CrossingNode& n = g.node(i);
    const auto opp = static_cast<std::size_t>(n.opposite_node);
    if (opp == i || TextileGraph::crossing_of(opp) != TextileGraph::crossing_of(i)) {
      fail(i, Rule::kOppositeBlock,
           "opposite node of " + std::to_string(i) + " is not another node of its crossing");
    } else if (sane[opp] && static_cast<std::size_t>(g.node(opp).opposite_node) != i) {
      fail(i, Rule::kOppositeInvolution,
           "opposite relation is not an involution at " + std::to_string(i));
    } else if (g.node(opp).on_top != n.on_top) {
      fail(i, Rule::kOppositeTopMismatch,
           "on_top differs between " + std::to_string(i) + " and its opposite node");
    }

    if (n.next_node == kTerminal) continue;
    const auto next = static_cast<std::size_t>(n.next_node);
    if (TextileGraph::crossing_of(next) == TextileGraph::crossing_of(i)) {
      fail(i, Rule::kSelfCrossingOmega,
           "Omega edge at " + std::to_string(i) + " stays inside its own crossing");
    } else if (!sane[next] || g.node(next).next_node != static_cast<NodeIndex>(i)) {
      fail(i, Rule::kAsymmetricOmega, "asymmetric Omega edge at " + std::to_string(i));
    }
  }

  for (std::size_t c = 0; c < g.crossing_count(); ++c) {
    int tops = 0;
    for (std::size_t j = 0; j < 4; ++j) tops += g.node(4 * c + j).on_top ? 1 : 0;
    if (tops != 2) {
      fail(4 * c, Rule::kTopEdgeCount,
           "top-edge count " + std::to_string(tops) + " != 2 in crossing " + std::to_string(c));
    }
  }
  return report;
}

std::size_t terminal_count(const TextileGraph& g) {
  std::size_t t = 0;
  for (const auto& n : g.nodes()) t += n.next_node == kTerminal ? 1 : 0;
  return t;
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column),
      detail_(what) {}

InvalidGraph::InvalidGraph(ValidationReport report)
    : std::runtime_error("invalid textile graph: " + report.summary()),
      report_(std::move(report)) {}

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> split_fields(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    out.push_back({line.substr(i, j - i), i + 1});
    i = j;
  }
  return out;
}

long long parse_int(const Token& tok, std::size_t line) {
  long long v = 0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(line, tok.column, "expected an integer, got '" + std::string(tok.text) + "'");
  }
  return v;
}

}  // namespace

TextileGraph parse_graph(std::string_view text) {
  std::vector<CrossingNode> nodes;
  long long declared = -1;
  long long extra = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;

  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    auto fields = split_fields(line);
    if (fields.empty() || fields.front().text.front() == '#') {
      if (end == text.size()) break;
      continue;
    }

    if (declared < 0) {
      if (fields[0].text != "crossings") {
        throw ParseError(line_no, fields[0].column, "expected 'crossings <n>' header");
      }
      if (fields.size() != 2) {
        throw ParseError(line_no, fields[0].column, "header takes exactly one value");
      }
      declared = parse_int(fields[1], line_no);
      if (declared < 1) throw ParseError(line_no, fields[1].column, "crossing count must be >= 1");
      if (declared > (1LL << 29)) throw ParseError(line_no, fields[1].column, "crossing count too large");
      nodes.reserve(static_cast<std::size_t>(4 * declared));
    } else {
      if (fields.size() != 4) {
        throw ParseError(line_no, fields[0].column,
                         "expected 4 fields '<id> <next> <top> <opp>', got " +
                             std::to_string(fields.size()));
      }
      const long long limit = 4 * declared;
      if (static_cast<long long>(nodes.size()) + extra >= limit) {
        ++extra;  // reported as a count mismatch once the whole file is read
        if (end == text.size()) break;
        continue;
      }
      const long long id = parse_int(fields[0], line_no);
      if (id != static_cast<long long>(nodes.size())) {
        throw ParseError(line_no, fields[0].column,
                         "expected node id " + std::to_string(nodes.size()) + ", got " +
                             std::to_string(id));
      }
      const long long next = parse_int(fields[1], line_no);
      if (next != kTerminal && (next < 0 || next >= limit)) {
        throw ParseError(line_no, fields[1].column, "next index " + std::to_string(next) + " out of range");
      }
      const long long top = parse_int(fields[2], line_no);
      if (top != 0 && top != 1) throw ParseError(line_no, fields[2].column, "top flag must be 0 or 1");
      const long long opp = parse_int(fields[3], line_no);
      if (opp < 0 || opp >= limit) {
        throw ParseError(line_no, fields[3].column, "opposite index " + std::to_string(opp) + " out of range");
      }
      nodes.push_back({static_cast<NodeIndex>(next), top == 1, static_cast<NodeIndex>(opp)});
    }
    if (end == text.size()) break;
  }

  if (declared < 0) throw ParseError(line_no, 1, "missing 'crossings <n>' header");
  const long long found = static_cast<long long>(nodes.size()) + extra;
  if (found != 4 * declared) {
    throw ParseError(line_no, 1,
                     "node count " + std::to_string(found) + " not equal to 4*" +
                         std::to_string(declared));
  }

  TextileGraph g(std::move(nodes));
  if (auto report = validate(g); !report.ok()) throw InvalidGraph(std::move(report));
  return g;
}

std::string serialize_graph(const TextileGraph& g) {
  std::string out;
  out.reserve(16 + g.node_count() * 16);
  out += "crossings ";
  out += std::to_string(g.crossing_count());
  out += '\n';
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const CrossingNode& n = g.node(i);
    out += std::to_string(i);
    out += ' ';
    out += std::to_string(n.next_node);
    out += n.on_top ? " 1 " : " 0 ";
    out += std::to_string(n.opposite_node);
    out += '\n';
  }
  return out;
}

TextileGraph read_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open graph file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_graph(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), path + ": " + e.detail());
  }
}

void write_graph_file(const std::string& path, const TextileGraph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write graph file " + path);
  out << serialize_graph(g);
}

}  // namespace weftprint
