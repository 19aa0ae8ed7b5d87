#pragma once

#include "dchain/numeric.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dchain {

/// Subset of [n] as a bitmask; element i (1-based) is bit i-1.
using Mask = std::uint64_t;

inline constexpr unsigned kMaxGroundSize = 64;

inline Mask full_mask(unsigned n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }

/// Orders subsets by (size, numeric value).
bool subset_order(Mask a, Mask b);

/// A set of distinct subsets of [n], stored sorted by (size, value).
class Family {
 public:
  explicit Family(unsigned n = 0);
  /// Sorts the members; rejects masks outside [n] and repeated members.
  Family(unsigned n, std::vector<Mask> members);

  unsigned ground_size() const { return n_; }
  const std::vector<Mask>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(Mask m) const;

  friend bool operator==(const Family&, const Family&) = default;

 private:
  unsigned n_;
  std::vector<Mask> members_;
};

/// Sum of the m largest binomial coefficients C(n, i). 0 for m = 0, 2^n once
/// m reaches n+1.
BigInt sigma(unsigned n, unsigned m);

/// All subsets of sizes k..k+m-1.
Family levels_family(unsigned n, unsigned k, unsigned m);
/// The m levels around n/2, starting at floor((n-m+1)/2); has sigma(n, m) members.
Family middle_levels_family(unsigned n, unsigned m);
Family power_set(unsigned n);
/// Replaces every member by its complement in [n].
Family complement_family(const Family& f);

/// "{1,3}" with 1-based elements.
std::string format_subset(Mask m);
/// Family text format: "family <n>" then one "{i,j,...}" per line.
std::string format_family_text(const Family& f);
Family parse_family_text(std::string_view text);
Family load_family_file(const std::string& path);

}  // namespace dchain
