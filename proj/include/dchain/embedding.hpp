#pragma once

#include "dchain/bitset.hpp"
#include "dchain/budget.hpp"
#include "dchain/family.hpp"
#include "dchain/poset.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace dchain {

/// Pattern element index -> host element index. Injective and order
/// preserving in one direction (pattern a < b implies host f(a) < f(b)).
using Embedding = std::vector<std::size_t>;

enum class SearchStatus { Found, NotFound, Aborted };

/// Restrictions on where a pattern may land in a host.
struct HostRestriction {
  /// Only these host elements may be used; null means all of them.
  const Bitset* allowed = nullptr;
  /// When set, the image must contain this host element.
  std::optional<std::size_t> required;
};

/// Weak-subposet search for a fixed pattern. Construction precomputes the
/// pattern's degrees, heights and depths so the matcher can be reused across
/// many hosts; `find` is const and safe to call concurrently.
///
/// The search is a constraint-propagation backtrack: candidate sets are
/// bitsets filtered by comparability counts and chain heights, every
/// assignment narrows the candidates of related pattern elements, and the
/// next element is the one with the fewest remaining candidates (ties go to
/// higher degree, then lower index). Candidates are tried in ascending host
/// order so witnesses are reproducible.
class PatternMatcher {
 public:
  explicit PatternMatcher(const Poset& pattern);

  const Poset& pattern() const { return pattern_; }

  SearchStatus find(const Poset& host, const HostRestriction& where, Embedding& out,
                    SearchBudget* budget = nullptr) const;
  std::optional<Embedding> find(const Poset& host) const;

 private:
  Poset pattern_;
  std::vector<std::size_t> down_;
  std::vector<std::size_t> up_;
  std::vector<std::size_t> height_;
  std::vector<std::size_t> depth_;
  std::vector<std::size_t> rank_;  // position in the static most-constrained-first order
  std::vector<std::size_t> order_;
};

std::optional<Embedding> embeds_weak(const Poset& pattern, const Poset& host);

/// Independent check of injectivity and order preservation.
bool is_valid_embedding(const Poset& pattern, const Poset& host, const Embedding& map);

/// The family ordered by strict inclusion; element i is the i-th member.
Poset family_poset(const Family& f);

/// Embedding into the family's members (indices into f.members()), if any.
std::optional<Embedding> find_in_family(const Family& f, const Poset& pattern);
bool is_p_free(const Family& f, const Poset& pattern);

/// Members hit by an embedding, as a family.
Family embedding_image(const Family& f, const Embedding& map);

}  // namespace dchain
