#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace weftprint {

/// Index of a crossing vertex in the flat node array. Crossing c owns
/// indices 4c .. 4c+3.
using NodeIndex = std::int32_t;

/// next_node value for an arm that ends in a terminal (thread end).
inline constexpr NodeIndex kTerminal = -1;

struct CrossingNode {
  NodeIndex next_node = kTerminal;  // Omega edge endpoint or kTerminal
  bool on_top = false;              // endpoint of the crossing's top edge
  NodeIndex opposite_node = 0;      // same-thread partner in the crossing

  friend bool operator==(const CrossingNode&, const CrossingNode&) = default;
};

/// Crossing-based textile hypergraph stored as a flat node array.
///
/// Hyperedges are the implicit 4-node blocks, terminals are implicit as
/// kTerminal sentinels. The constructor does not check invariants so that
/// malformed graphs can be represented and reported by validate();
/// parse_graph() and the generators only ever return valid graphs.
class TextileGraph {
 public:
  TextileGraph() = default;
  explicit TextileGraph(std::vector<CrossingNode> nodes) : nodes_(std::move(nodes)) {}

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t crossing_count() const { return nodes_.size() / 4; }

  const CrossingNode& node(std::size_t i) const { return nodes_[i]; }
  const CrossingNode& at(std::size_t i) const;
  const std::vector<CrossingNode>& nodes() const { return nodes_; }

  static constexpr std::size_t crossing_of(std::size_t node) { return node / 4; }

  friend bool operator==(const TextileGraph&, const TextileGraph&) = default;

 private:
  std::vector<CrossingNode> nodes_;
};

enum class EdgeLabel : std::uint8_t { kAlternating, kNonAlternating, kTerminated };

char to_char(EdgeLabel label);

/// Label of the Omega edge leaving node i.
EdgeLabel edge_label(const TextileGraph& g, std::size_t i);

enum class Rule {
  kNodeCount,        // node count not a positive multiple of four
  kIndexRange,       // next/opposite index outside [0, 4n)
  kOppositeBlock,    // opposite partner outside the node's crossing, or itself
  kOppositeInvolution,
  kOppositeTopMismatch,
  kTopEdgeCount,     // crossing without exactly two on_top nodes
  kAsymmetricOmega,
  kSelfCrossingOmega,
};

struct Violation {
  std::size_t node;  // offending node (or first node of the crossing)
  Rule rule;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(Rule rule) const;
  std::string summary() const;
};

ValidationReport validate(const TextileGraph& g);

/// Number of nodes whose arm ends in a terminal.
std::size_t terminal_count(const TextileGraph& g);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

/// Thrown when a syntactically correct graph breaks a structural invariant.
class InvalidGraph : public std::runtime_error {
 public:
  explicit InvalidGraph(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Parses the line-oriented `.tg` format:
///
///   crossings <n>
///   <id> <next> <top> <opp>      (exactly 4n lines, ids 0..4n-1 in order)
///
/// '#' starts a comment line, blank lines are ignored.
TextileGraph parse_graph(std::string_view text);

/// Canonical `.tg` text; parse_graph(serialize_graph(g)) == g.
std::string serialize_graph(const TextileGraph& g);

TextileGraph read_graph_file(const std::string& path);
void write_graph_file(const std::string& path, const TextileGraph& g);

}  // namespace weftprint
