#pragma once

#include "dchain/certificate.hpp"
#include "dchain/double_chain.hpp"
#include "dchain/embedding.hpp"
#include "dchain/expr.hpp"
#include "dchain/family.hpp"
#include "dchain/numeric.hpp"
#include "dchain/poset.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

namespace dchain {

inline constexpr unsigned kLaExhaustiveMaxN = 3;
/// Families of [6] already use all 64 bits of the member mask.
inline constexpr unsigned kLaAbsoluteMaxN = 6;

struct LaOptions {
  unsigned max_n = 5;
  std::uint64_t max_nodes = 0;
  std::optional<std::chrono::milliseconds> time_limit;
};

enum class LaStatus { Exact, Inconclusive };

struct LaResult {
  LaStatus status = LaStatus::Exact;
  /// La(n, P) when exact; otherwise the best lower bound found.
  std::size_t value = 0;
  Family witness;
  /// Upper bound still open when the search stopped early (equals value when exact).
  std::size_t upper_bound = 0;
  std::uint64_t nodes = 0;
  std::string method;
};

/// Largest P-free family of subsets of [n], by complete search: every family
/// for n <= 3, branch and bound above that. Never returns a heuristic value;
/// a spent budget yields LaStatus::Inconclusive.
LaResult la_exact(unsigned n, const Poset& pattern, const LaOptions& options = {});

enum class BoundKind { SharpSigma, Coarse };
std::string_view bound_kind_string(BoundKind k);

struct UpperBound {
  Rational value;
  BoundKind kind;
};

/// Sigma(n, b(P)) when b(P) is an integer and b(P)+1 <= n, else b(P) * C(n, floor(n/2)).
UpperBound upper_bound_theorem4(const Poset& pattern, unsigned n);
/// Sigma(n, |P|-1), the bound that follows from the path theorem.
BigInt old_bound(const Poset& pattern, unsigned n);

struct ScanOptions {
  unsigned jobs = 1;
  std::uint64_t max_nodes = 0;  // embedding-search nodes over the whole scan; 0 = unlimited
  std::optional<std::chrono::milliseconds> time_limit;
};

/// Checks that every family of m consecutive levels of [n] is P-free for
/// all n <= n_max. A pass is finite-range evidence for e(P) >= m only; a spent
/// budget gives an inconclusive certificate.
Certificate e_lower_scan(const Poset& pattern, unsigned m, unsigned n_max, const std::string& expr_text,
                         const ScanOptions& options);
inline Certificate e_lower_scan(const Poset& pattern, unsigned m, unsigned n_max, const std::string& expr_text,
                                unsigned jobs = 1) {
  return e_lower_scan(pattern, m, n_max, expr_text, ScanOptions{jobs, 0, std::nullopt});
}

struct LevelWitness {
  unsigned n = 0;
  unsigned k = 0;
  Embedding embedding;  // into levels_family(n, k, m) member indices
  Family image;
};

/// Looks for the pattern inside m consecutive levels of [n], n <= n_max
/// (n ascending, k descending). A hit shows e(P) < m.
std::optional<LevelWitness> e_upper_witness(const Poset& pattern, unsigned m, unsigned n_max);

/// Lower bound for e built up the expression tree: base posets contribute
/// their b value, a linear sum adds 1 more, a gluing adds nothing extra.
/// Rejects file leaves.
long e_composition_bound(const PosetExpr& expr);

struct VerifyOptions {
  /// Largest n for which the exact branch is attempted.
  unsigned exact_max_n = 5;
  LaOptions la{5, 3'000'000, std::nullopt};
  WindowOptions window{};
};

/// Checks La(n, P) = Sigma(n, b(P)) = Sigma(n, e(P)) for an expression over
/// the seven base posets. Runs la_exact where feasible; otherwise (or when
/// la_exact runs out of budget) certifies the property pair "middle b levels
/// are P-free" and "window condition at m = b(P)" with verdict property-pass.
Certificate verify_main_theorem(const PosetExpr& expr, unsigned n, const VerifyOptions& options = {});

}  // namespace dchain
