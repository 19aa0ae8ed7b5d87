#pragma once

#include "dchain/bitset.hpp"
#include "dchain/numeric.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dchain {

/// A finite strict partial order on elements 0..size()-1. The stored relation
/// is always the transitive closure; `below(a)` holds every b with b < a.
class Poset {
 public:
  using Relation = std::pair<std::size_t, std::size_t>;

  /// Builds the closure of an arbitrary generating relation set. Rejects
  /// out-of-range indices, self-loops and cycles.
  static Poset from_relations(std::size_t size, const std::vector<Relation>& generators);

  /// Takes a full relation matrix (lt[a][b] iff a < b) and validates that it is
  /// already irreflexive, asymmetric and transitively closed.
  static Poset from_matrix(const std::vector<std::vector<bool>>& lt);

  /// Takes rows that are already a strict order (row b = elements below b);
  /// closure and acyclicity are verified with row-subset checks.
  static Poset from_closed_rows(std::vector<Bitset> below);

  /// Antichain of the given size.
  explicit Poset(std::size_t size);

  std::size_t size() const { return below_.size(); }
  bool less(std::size_t a, std::size_t b) const { return below_[b].test(a); }
  bool comparable(std::size_t a, std::size_t b) const { return less(a, b) || less(b, a); }
  const Bitset& below(std::size_t a) const { return below_[a]; }
  const Bitset& above(std::size_t a) const { return above_[a]; }
  std::size_t relation_count() const;
  std::vector<Relation> relations() const;

  /// Optional per-element level tags carried through composition; purely informational.
  const std::vector<int>& level_hint() const { return level_hint_; }
  void set_level_hint(std::vector<int> levels);

  friend bool operator==(const Poset& a, const Poset& b) { return a.below_ == b.below_; }

 private:
  Poset() = default;
  void rebuild_above();

  std::vector<Bitset> below_;
  std::vector<Bitset> above_;
  std::vector<int> level_hint_;
};

/// Returns a description of the first violated strict-order axiom, if any.
/// Works on the raw matrix view so it can audit any constructed poset.
std::optional<std::string> strict_order_violation(const Poset& p);

enum class BaseName { E, B, D3, Q, R, S, Sp };

std::string_view base_name_string(BaseName name);
std::optional<BaseName> parse_base_name(std::string_view token);
const std::vector<BaseName>& all_base_names();

/// Level sizes of each base poset, bottom level first.
std::vector<std::size_t> base_level_sizes(BaseName name);

/// Complete inter-level order on the given level sizes.
Poset levelled_poset(const std::vector<std::size_t>& level_sizes);
Poset base_poset(BaseName name);
/// Same, from a textual identifier; unknown identifiers are rejected.
Poset base_poset(std::string_view name);
/// Chain with `length` elements.
Poset path_poset(std::size_t length);

Poset oplus(const Poset& lower, const Poset& upper);
/// Glues the greatest element of `lower` to the least element of `upper`.
/// Elements of `lower` keep their indices; `upper`'s least element is dropped
/// and the rest follow in order.
Poset otimes(const Poset& lower, const Poset& upper);
Poset dual(const Poset& p);

std::optional<std::size_t> greatest_element(const Poset& p);
std::optional<std::size_t> least_element(const Poset& p);

/// Number of elements in a longest chain.
std::size_t longest_chain(const Poset& p);
/// Per-element height (longest chain ending at the element) and depth
/// (longest chain starting at it), both counting the element itself.
std::vector<std::size_t> heights(const Poset& p);
std::vector<std::size_t> depths(const Poset& p);

/// (|P| + L(P)) / 2 - 1.
Rational b_value(const Poset& p);

inline constexpr std::size_t kIsomorphismLimit = 25;
/// Order-isomorphism test; rejects inputs above kIsomorphismLimit elements.
bool is_isomorphic(const Poset& a, const Poset& b);

/// Custom poset text: "poset <n>" followed by "a < b" lines (0-based).
Poset parse_poset_text(std::string_view text);
Poset load_poset_file(const std::string& path);
std::string format_poset_text(const Poset& p);

}  // namespace dchain
