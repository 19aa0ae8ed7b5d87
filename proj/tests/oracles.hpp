#pragma once
// Brute-force reference computations used only by tests. Nothing here shares
// code with the search routines it is compared against.

#include "dchain/family.hpp"
#include "dchain/numeric.hpp"
#include "dchain/poset.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using dchain::Mask;

/// Tries every injective map, no pruning beyond injectivity.
// Number of injective maps embeds_by_enumeration would try is at most `limit`.
inline bool enumeration_feasible(std::size_t k, std::size_t n, double limit = 5e6) {
  double maps = 1;
  for (std::size_t i = 0; i < k && i < n; ++i) maps *= static_cast<double>(n - i);
  return maps <= limit;
}

inline bool embeds_by_enumeration(const dchain::Poset& pattern, const dchain::Poset& host) {
  const std::size_t k = pattern.size();
  const std::size_t n = host.size();
  if (k > n) return false;
  std::vector<std::size_t> map(k);
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> place = [&](std::size_t i) -> bool {
    if (i == k) {
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
          if (pattern.less(a, b) && !host.less(map[a], map[b])) return false;
      return true;
    }
    for (std::size_t h = 0; h < n; ++h) {
      if (used[h]) continue;
      used[h] = true;
      map[i] = h;
      if (place(i + 1)) return true;
      used[h] = false;
    }
    return false;
  };
  return place(0);
}

/// Longest chain by memoized DFS over the raw relation.
inline std::size_t longest_path(const dchain::Poset& p) {
  std::vector<std::size_t> memo(p.size(), 0);
  std::function<std::size_t(std::size_t)> up = [&](std::size_t a) -> std::size_t {
    if (memo[a] != 0) return memo[a];
    std::size_t best = 0;
    for (std::size_t b = 0; b < p.size(); ++b)
      if (p.less(a, b)) best = std::max(best, up(b));
    return memo[a] = best + 1;
  };
  std::size_t best = 0;
  for (std::size_t a = 0; a < p.size(); ++a) best = std::max(best, up(a));
  return best;
}

/// Sum of the m largest entries of Pascal row n, by building the row and sorting.
inline dchain::BigInt sigma_by_sort(unsigned n, unsigned m) {
  std::vector<dchain::BigInt> row{1};
  for (unsigned r = 0; r < n; ++r) {
    std::vector<dchain::BigInt> next(row.size() + 1, 0);
    for (std::size_t i = 0; i < row.size(); ++i) {
      next[i] += row[i];
      next[i + 1] += row[i];
    }
    row = std::move(next);
  }
  std::sort(row.begin(), row.end(), std::greater<>());
  dchain::BigInt total = 0;
  for (unsigned i = 0; i < m && i < row.size(); ++i) total += row[i];
  return total;
}

/// Double chains built from std::set arithmetic; counts how many contain each subset.
inline std::map<std::set<unsigned>, std::size_t> double_chain_counts(unsigned n) {
  std::vector<unsigned> perm(n);
  for (unsigned i = 0; i < n; ++i) perm[i] = i + 1;
  std::map<std::set<unsigned>, std::size_t> counts;
  do {
    std::vector<std::set<unsigned>> L(n + 1);
    for (unsigned i = 1; i <= n; ++i) {
      L[i] = L[i - 1];
      L[i].insert(perm[i - 1]);
    }
    std::set<std::set<unsigned>> sets(L.begin(), L.end());
    for (unsigned i = 1; i + 1 <= n; ++i) {
      std::set<unsigned> m = L[i - 1];
      for (unsigned x : L[i + 1])
        if (!L[i].count(x)) m.insert(x);
      sets.insert(m);
    }
    for (const auto& s : sets) ++counts[s];
  } while (std::next_permutation(perm.begin(), perm.end()));
  return counts;
}

inline std::set<unsigned> to_set(Mask m) {
  std::set<unsigned> s;
  for (unsigned i = 0; i < 64; ++i)
    if ((m >> i) & 1U) s.insert(i + 1);
  return s;
}

/// Inclusion poset of a family, built from explicit subset tests.
inline dchain::Poset inclusion_poset(const std::vector<Mask>& members) {
  std::vector<std::vector<bool>> lt(members.size(), std::vector<bool>(members.size(), false));
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = 0; j < members.size(); ++j)
      lt[i][j] = i != j && (members[i] & members[j]) == members[i] && members[i] != members[j];
  return dchain::Poset::from_matrix(lt);
}

/// La(n, P) for n <= 3 by trying every family with the enumeration embedder.
inline std::size_t la_by_enumeration(unsigned n, const dchain::Poset& pattern) {
  const std::size_t total = std::size_t{1} << n;
  std::size_t best = 0;
  for (std::uint64_t fam = 0; fam < (std::uint64_t{1} << total); ++fam) {
    const auto size = static_cast<std::size_t>(std::popcount(fam));
    if (size <= best) continue;
    std::vector<Mask> members;
    for (Mask s = 0; s < total; ++s)
      if ((fam >> s) & 1U) members.push_back(s);
    if (!embeds_by_enumeration(pattern, inclusion_poset(members))) best = size;
  }
  return best;
}

/// Random poset: random DAG on a shuffled order, then closure.
inline dchain::Poset random_poset(std::mt19937& rng, std::size_t size, double density) {
  std::vector<std::size_t> order(size);
  for (std::size_t i = 0; i < size; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution edge(density);
  std::vector<dchain::Poset::Relation> rel;
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = i + 1; j < size; ++j)
      if (edge(rng)) rel.emplace_back(order[i], order[j]);
  return dchain::Poset::from_relations(size, rel);
}

}  // namespace oracle
