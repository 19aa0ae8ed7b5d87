#include "dchain/embedding.hpp"

#include "dchain/error.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace dchain {

namespace {

using Word = Bitset::Word;

// Comparability counts and chain lengths of host elements, measured inside
// the allowed subset only.
struct HostProfile {
  std::vector<std::size_t> down, up, height, depth;
};

HostProfile profile_host(const Poset& host, const Bitset& allowed) {
  const std::size_t n = host.size();
  HostProfile hp{std::vector<std::size_t>(n, 0), std::vector<std::size_t>(n, 0), std::vector<std::size_t>(n, 0),
                 std::vector<std::size_t>(n, 0)};
  std::vector<std::size_t> members;
  allowed.for_each([&](std::size_t h) {
    members.push_back(h);
    hp.down[h] = host.below(h).intersect_count(allowed);
    hp.up[h] = host.above(h).intersect_count(allowed);
  });
  // Inside the allowed set, x < y implies down[x] < down[y].
  std::stable_sort(members.begin(), members.end(),
                   [&](std::size_t a, std::size_t b) { return hp.down[a] < hp.down[b]; });
  for (std::size_t h : members) {
    std::size_t best = 0;
    host.below(h).for_each([&](std::size_t y) {
      if (allowed.test(y)) best = std::max(best, hp.height[y]);
    });
    hp.height[h] = best + 1;
  }
  for (auto it = members.rbegin(); it != members.rend(); ++it) {
    std::size_t best = 0;
    host.above(*it).for_each([&](std::size_t y) {
      if (allowed.test(y)) best = std::max(best, hp.depth[y]);
    });
    hp.depth[*it] = best + 1;
  }
  return hp;
}

class Search {
 public:
  Search(const Poset& pattern, const std::vector<std::size_t>& rank, const Poset& host, SearchBudget* budget)
      : pattern_(pattern),
        rank_(rank),
        host_(host),
        budget_(budget),
        k_(pattern.size()),
        w_((host.size() + Bitset::kWordBits - 1) / Bitset::kWordBits),
        frames_((k_ + 1) * k_ * w_, 0),
        assigned_(k_, 0),
        map_(k_, 0) {}

  Word* cand(std::size_t level, std::size_t p) { return frames_.data() + (level * k_ + p) * w_; }

  bool aborted() const { return aborted_; }
  const Embedding& map() const { return map_; }

  bool solve(std::size_t level) {
    if (level == k_) return true;

    std::size_t p = k_;
    std::size_t best = 0;
    for (std::size_t q = 0; q < k_; ++q) {
      if (assigned_[q]) continue;
      const std::size_t c = count(cand(level, q));
      if (p == k_ || c < best || (c == best && rank_[q] < rank_[p])) {
        p = q;
        best = c;
      }
    }

    const Word* mine = cand(level, p);
    for (std::size_t wi = 0; wi < w_; ++wi) {
      Word bits = mine[wi];
      while (bits != 0) {
        const std::size_t h = wi * Bitset::kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        if (budget_ != nullptr && !budget_->tick()) {
          aborted_ = true;
          return false;
        }
        if (!propagate(level, p, h)) continue;
        assigned_[p] = 1;
        map_[p] = h;
        if (solve(level + 1)) return true;
        assigned_[p] = 0;
        if (aborted_) return false;
      }
    }
    return false;
  }

 private:
  std::size_t count(const Word* s) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < w_; ++i) c += static_cast<std::size_t>(std::popcount(s[i]));
    return c;
  }

  // Narrows every unassigned element's candidates for the choice p -> h.
  bool propagate(std::size_t level, std::size_t p, std::size_t h) {
    const Word* below_h = host_.below(h).data();
    const Word* above_h = host_.above(h).data();
    const std::size_t hw = h / Bitset::kWordBits;
    const Word hbit = Word{1} << (h % Bitset::kWordBits);
    for (std::size_t q = 0; q < k_; ++q) {
      if (assigned_[q] || q == p) continue;
      const Word* src = cand(level, q);
      Word* dst = cand(level + 1, q);
      Word any = 0;
      if (pattern_.less(q, p)) {
        for (std::size_t i = 0; i < w_; ++i) any |= dst[i] = src[i] & below_h[i];
      } else if (pattern_.less(p, q)) {
        for (std::size_t i = 0; i < w_; ++i) any |= dst[i] = src[i] & above_h[i];
      } else {
        for (std::size_t i = 0; i < w_; ++i) dst[i] = src[i];
        dst[hw] &= ~hbit;
        for (std::size_t i = 0; i < w_; ++i) any |= dst[i];
      }
      if (any == 0) return false;
    }
    return true;
  }

  const Poset& pattern_;
  const std::vector<std::size_t>& rank_;
  const Poset& host_;
  SearchBudget* budget_;
  std::size_t k_;
  std::size_t w_;
  std::vector<Word> frames_;
  std::vector<char> assigned_;
  Embedding map_;
  bool aborted_ = false;
};

}  // namespace

PatternMatcher::PatternMatcher(const Poset& pattern)
    : pattern_(pattern), height_(heights(pattern)), depth_(depths(pattern)) {
  const std::size_t k = pattern.size();
  down_.resize(k);
  up_.resize(k);
  for (std::size_t p = 0; p < k; ++p) {
    down_[p] = pattern.below(p).count();
    up_[p] = pattern.above(p).count();
  }
  order_.resize(k);
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::size_t a, std::size_t b) { return down_[a] + up_[a] > down_[b] + up_[b]; });
  rank_.resize(k);
  for (std::size_t i = 0; i < k; ++i) rank_[order_[i]] = i;
}

SearchStatus PatternMatcher::find(const Poset& host, const HostRestriction& where, Embedding& out,
                                  SearchBudget* budget) const {
  const std::size_t k = pattern_.size();
  const std::size_t n = host.size();
  if (k == 0) {
    out.clear();
    return SearchStatus::Found;
  }
  Bitset allowed = where.allowed != nullptr ? *where.allowed : Bitset::full(n);
  if (allowed.size() != n) throw Error("allowed set does not match the host size");
  if (where.required) {
    if (*where.required >= n) throw Error("required host element out of range");
    if (!allowed.test(*where.required)) return SearchStatus::NotFound;
  }
  if (allowed.count() < k) return SearchStatus::NotFound;

  const HostProfile hp = profile_host(host, allowed);
  std::vector<Bitset> domain(k, Bitset(n));
  for (std::size_t p = 0; p < k; ++p)
    allowed.for_each([&](std::size_t h) {
      if (hp.down[h] >= down_[p] && hp.up[h] >= up_[p] && hp.height[h] >= height_[p] && hp.depth[h] >= depth_[p])
        domain[p].set(h);
    });

  Search search(pattern_, rank_, host, budget);
  const std::size_t w = (n + Bitset::kWordBits - 1) / Bitset::kWordBits;
  auto load = [&](std::size_t p, const Bitset& b) {
    std::copy(b.data(), b.data() + w, search.cand(0, p));
    return b.any();
  };

  auto run = [&]() -> SearchStatus {
    if (search.solve(0)) {
      out = search.map();
      return SearchStatus::Found;
    }
    return search.aborted() ? SearchStatus::Aborted : SearchStatus::NotFound;
  };

  if (!where.required) {
    for (std::size_t p = 0; p < k; ++p)
      if (!load(p, domain[p])) return SearchStatus::NotFound;
    return run();
  }

  // Some pattern element must land on the required host element; the cases
  // are disjoint, so try each in the static order.
  const std::size_t r = *where.required;
  for (std::size_t p : order_) {
    if (!domain[p].test(r)) continue;
    bool viable = true;
    for (std::size_t q = 0; q < k && viable; ++q) {
      Bitset d(n);
      if (q == p) {
        d.set(r);
      } else {
        d = domain[q];
        d.reset(r);
      }
      viable = load(q, d);
    }
    if (!viable) continue;
    SearchStatus s = run();
    if (s != SearchStatus::NotFound) return s;
  }
  return SearchStatus::NotFound;
}

std::optional<Embedding> PatternMatcher::find(const Poset& host) const {
  Embedding out;
  if (find(host, HostRestriction{}, out) == SearchStatus::Found) return out;
  return std::nullopt;
}

std::optional<Embedding> embeds_weak(const Poset& pattern, const Poset& host) {
  return PatternMatcher(pattern).find(host);
}

bool is_valid_embedding(const Poset& pattern, const Poset& host, const Embedding& map) {
  if (map.size() != pattern.size()) return false;
  for (std::size_t a = 0; a < map.size(); ++a) {
    if (map[a] >= host.size()) return false;
    for (std::size_t b = 0; b < map.size(); ++b) {
      if (a != b && map[a] == map[b]) return false;
      if (pattern.less(a, b) && !host.less(map[a], map[b])) return false;
    }
  }
  return true;
}

Poset family_poset(const Family& f) {
  const auto& m = f.members();
  const std::size_t n = m.size();
  std::vector<Bitset> below(n, Bitset(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i)
      if ((m[i] & m[j]) == m[i] && m[i] != m[j]) below[j].set(i);
  return Poset::from_closed_rows(std::move(below));
}

std::optional<Embedding> find_in_family(const Family& f, const Poset& pattern) {
  return embeds_weak(pattern, family_poset(f));
}

bool is_p_free(const Family& f, const Poset& pattern) { return !find_in_family(f, pattern).has_value(); }

Family embedding_image(const Family& f, const Embedding& map) {
  std::vector<Mask> out;
  out.reserve(map.size());
  for (std::size_t idx : map) out.push_back(f.members().at(idx));
  return Family(f.ground_size(), std::move(out));
}

}  // namespace dchain
