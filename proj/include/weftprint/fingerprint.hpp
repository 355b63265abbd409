#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "weftprint/graph.hpp"

namespace weftprint {

/// Arm symbols in canonical sort order. kPad fills an arm after it hits a
/// thread end and serializes as '0'.
enum class Symbol : std::uint8_t { kA = 0, kN = 1, kT = 2, kPad = 3 };

char to_char(Symbol s);
Symbol symbol_from_char(char c);

/// Largest supported neighborhood size; an arm packs 2 bits per step into
/// one 64-bit word.
inline constexpr int kMaxK = 32;
inline constexpr int kDefaultK = 4;

/// Label sequence of length k along one arm of a crossing. Symbols are
/// packed most-significant first, so integer order is lexicographic order.
class ArmSequence {
 public:
  ArmSequence() = default;
  ArmSequence(int k, std::uint64_t packed) : packed_(packed), k_(static_cast<std::uint8_t>(k)) {}

  static ArmSequence from_string(std::string_view s);

  int k() const { return k_; }
  std::uint64_t packed() const { return packed_; }
  Symbol operator[](int l) const {
    return static_cast<Symbol>((packed_ >> (2 * (k_ - 1 - l))) & 3U);
  }
  std::string to_string() const;

  friend bool operator==(const ArmSequence&, const ArmSequence&) = default;
  friend auto operator<=>(const ArmSequence& a, const ArmSequence& b) {
    if (a.k_ != b.k_) return a.k_ <=> b.k_;
    return a.packed_ <=> b.packed_;
  }

 private:
  std::uint64_t packed_ = 0;
  std::uint8_t k_ = 0;
};

/// Canonical k-neighborhood: two unordered pairs of arms. Within a pair the
/// smaller arm comes first; the pairs are ordered by their concatenation.
///
/// Neighborhoods are totally ordered by (hash, k, arms). The order is only
/// used to line up sparse vectors, so a cached hash up front keeps sorting
/// cheap; text output is sorted by key instead.
class Neighborhood {
 public:
  Neighborhood() = default;
  /// Canonicalizes; arms may be given in any order within and across pairs.
  Neighborhood(std::pair<ArmSequence, ArmSequence> first, std::pair<ArmSequence, ArmSequence> second);

  /// Same as the constructor, from raw packed arms of length k.
  static Neighborhood from_packed(int k, std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d);

  /// Parses the `.fp` key syntax, e.g. "A0,TA;NN,NN".
  static Neighborhood from_key(std::string_view key);

  int k() const { return k_; }
  ArmSequence arm(int pair, int index) const { return {k_, arms_[static_cast<std::size_t>(2 * pair + index)]}; }
  std::string key() const;

  std::size_t hash() const { return static_cast<std::size_t>(hash_); }

  friend bool operator==(const Neighborhood&, const Neighborhood&) = default;
  friend auto operator<=>(const Neighborhood&, const Neighborhood&) = default;
  friend bool operator<(const Neighborhood& a, const Neighborhood& b) {
    if (a.hash_ != b.hash_) return a.hash_ < b.hash_;
    if (a.k_ != b.k_) return a.k_ < b.k_;
    for (std::size_t i = 0; i < 4; ++i) {
      if (a.arms_[i] != b.arms_[i]) return a.arms_[i] < b.arms_[i];
    }
    return false;
  }

 private:
  std::uint64_t hash_ = 0;
  std::uint8_t k_ = 0;
  std::array<std::uint64_t, 4> arms_{};
};

struct NeighborhoodHash {
  std::size_t operator()(const Neighborhood& n) const { return n.hash(); }
};

/// Multiset of neighborhoods, stored as (neighborhood, count) entries sorted
/// by the neighborhood order. Counts are always positive. Also serves as the sparse
/// frequency vector that the distance measures operate on.
class Fingerprint {
 public:
  using Entry = std::pair<Neighborhood, std::uint64_t>;

  Fingerprint() = default;
  /// Merges duplicate keys and drops zero counts.
  explicit Fingerprint(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::uint64_t total() const;
  /// Count of `n`, 0 if absent.
  std::uint64_t count(const Neighborhood& n) const;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;

 private:
  std::vector<Entry> entries_;
};

/// Walks the thread leaving node `start` across up to k Omega edges.
ArmSequence arm_walk(const TextileGraph& g, std::size_t start, int k);

Neighborhood crossing_neighborhood(const TextileGraph& g, std::size_t crossing, int k);

/// Multiset of all crossing neighborhoods; O(n k) for n crossings.
Fingerprint fingerprint(const TextileGraph& g, int k = kDefaultK);

/// `.fp` text: one `<key> <count>` line per neighborhood, sorted bytewise by key.
std::string serialize_fingerprint(const Fingerprint& fp);
Fingerprint parse_fingerprint(std::string_view text);

}  // namespace weftprint
