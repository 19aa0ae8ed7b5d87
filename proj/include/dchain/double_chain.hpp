#pragma once

#include "dchain/budget.hpp"
#include "dchain/certificate.hpp"
#include "dchain/family.hpp"
#include "dchain/numeric.hpp"
#include "dchain/poset.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace dchain {

/// The 2n sets attached to a maximal chain: the primary line L_0..L_n (L_i is
/// the first i elements of the permutation) and the secondary line
/// M_1..M_{n-1} with M_i = L_{i-1} + (L_{i+1} \ L_i).
struct DoubleChain {
  std::vector<unsigned> perm;  // 1-based elements
  std::vector<Mask> primary;   // L_0..L_n
  std::vector<Mask> secondary; // M_1..M_{n-1}, stored at index i-1

  unsigned ground_size() const { return static_cast<unsigned>(perm.size()); }
  Mask L(std::size_t i) const { return primary.at(i); }
  Mask M(std::size_t i) const { return secondary.at(i - 1); }
  bool contains(Mask f) const;
  /// All 2n sets as a family (distinct for every n >= 1).
  Family as_family() const;
};

/// Rejects anything that is not a permutation of 1..n.
DoubleChain double_chain(const std::vector<unsigned>& perm);

/// Number of the n! double chains containing f: n! for the empty set and
/// [n], 2 |f|! (n-|f|)! otherwise. Requires n >= 2.
BigInt count_containing(Mask f, unsigned n);

/// Per-subset containment counts obtained by walking all n! double chains.
/// Index is the subset mask. Work is split over `jobs` threads.
std::vector<BigInt> enumerate_containing_counts(unsigned n, unsigned jobs = 1);

struct DoubleChainAudit {
  unsigned n = 0;
  std::size_t subsets = 0;
  std::size_t matches = 0;
  std::vector<Mask> mismatches;
  /// Sum over all double chains D of |F cap D| for F = the whole power set,
  /// from enumeration and from the closed form t*n! + sum 2|F|!(n-|F|)!.
  BigInt incidence_enumerated = 0;
  BigInt incidence_closed_form = 0;
  bool passed() const { return matches == subsets && incidence_enumerated == incidence_closed_form; }
};

/// Compares enumeration against the closed form for every subset of [n].
DoubleChainAudit audit_double_chains(unsigned n, unsigned jobs = 1);

/// Sum over members of 1 / C(n, |F|).
Rational chain_lubell_sum(const Family& f);
/// t/2 + sum over members other than the empty set and [n] of 1 / C(n, |F|),
/// where t counts how many of those two extremes are members. Requires n >= 2.
Rational double_lubell_sum(const Family& f);

// ---------------------------------------------------------------------------
// Infinite double chain

enum class Line { L, M };

/// Element of the infinite double chain: L_i or M_i for any integer column i.
struct ChainElement {
  Line line;
  long column;
  friend auto operator<=>(const ChainElement&, const ChainElement&) = default;
};

/// Strict order of the infinite double chain: for i < j, L_i < L_j,
/// L_i < M_j and M_i < L_j; M_i < M_j iff j >= i + 2.
bool chain_less(const ChainElement& a, const ChainElement& b);

/// Poset induced on the given elements (kept in the given order).
Poset chain_subposet(const std::vector<ChainElement>& elements);
/// Window lo..hi with elements L_lo, M_lo, L_{lo+1}, M_{lo+1}, ...
Poset window_poset(long lo, long hi);
std::vector<ChainElement> window_elements(long lo, long hi);

/// "L0 M1 L1"
std::string format_chain_elements(const std::vector<ChainElement>& elements);

/// Places elements into a concrete double chain of [n] (identity
/// permutation); returns the family of their sets. Columns are shifted so the
/// smallest lands on 1.
Family realize_in_double_chain(const std::vector<ChainElement>& elements);

struct WindowOptions {
  std::uint64_t max_nodes = 0;
  std::optional<std::chrono::milliseconds> time_limit;
  unsigned jobs = 1;
};

struct WindowResult {
  Verdict verdict = Verdict::Inconclusive;
  /// A subset of the requested size that avoids the pattern (verdict Fail).
  std::vector<ChainElement> counterexample;
  std::uint64_t configurations = 0;  // complete configurations examined
  std::uint64_t nodes = 0;           // search nodes, including pruned prefixes
};

/// Decides whether every (2m+1)-element subset of the infinite double chain
/// contains `pattern` as a weak subposet. Subsets are enumerated as canonical
/// column configurations (gaps of 1 or 2; a gap of 2 only between two columns
/// that both hold an M) with pruning of prefixes that already contain the
/// pattern. `twice_m` is 2m.
WindowResult window_search(const Poset& pattern, unsigned twice_m, const WindowOptions& options = {});

/// Certificate wrapper around window_search. Rejects m < 0 and m with 2m not integral.
Certificate window_condition(const Poset& pattern, const Rational& m, const std::string& expr_text,
                             const WindowOptions& options = {});

/// Collapses every inter-column gap above 2 to 2 and shifts the first column to 0.
std::vector<ChainElement> compress_gaps(std::vector<ChainElement> elements);

}  // namespace dchain
