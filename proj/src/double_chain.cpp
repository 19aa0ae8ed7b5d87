#include "dchain/double_chain.hpp"

#include "dchain/embedding.hpp"
#include "dchain/error.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <limits>
#include <mutex>
#include <thread>

namespace dchain {

bool DoubleChain::contains(Mask f) const {
  return std::find(primary.begin(), primary.end(), f) != primary.end() ||
         std::find(secondary.begin(), secondary.end(), f) != secondary.end();
}

Family DoubleChain::as_family() const {
  std::vector<Mask> all = primary;
  all.insert(all.end(), secondary.begin(), secondary.end());
  return Family(ground_size(), std::move(all));
}

DoubleChain double_chain(const std::vector<unsigned>& perm) {
  const auto n = static_cast<unsigned>(perm.size());
  if (n > kMaxGroundSize) throw Error("permutation longer than the ground-set limit");
  Mask seen = 0;
  for (unsigned x : perm) {
    if (x < 1 || x > n) throw Error("not a permutation: element " + std::to_string(x) + " outside 1.." + std::to_string(n));
    const Mask bit = Mask{1} << (x - 1);
    if ((seen & bit) != 0) throw Error("not a permutation: element " + std::to_string(x) + " repeats");
    seen |= bit;
  }
  DoubleChain dc;
  dc.perm = perm;
  dc.primary.push_back(0);
  for (unsigned x : perm) dc.primary.push_back(dc.primary.back() | (Mask{1} << (x - 1)));
  for (unsigned i = 1; i + 1 <= n; ++i)
    dc.secondary.push_back(dc.primary[i - 1] | (dc.primary[i + 1] & ~dc.primary[i]));
  return dc;
}

BigInt count_containing(Mask f, unsigned n) {
  if (n < 2) throw Error("double chains need n >= 2 (the secondary line is empty otherwise)");
  if (n > kMaxGroundSize || (f & ~full_mask(n)) != 0) throw Error("subset is not contained in [n]");
  const auto size = static_cast<unsigned>(std::popcount(f));
  if (size == 0 || size == n) return factorial(n);
  return 2 * factorial(size) * factorial(n - size);
}

namespace {

constexpr unsigned kMaxEnumeration = 11;

// Walks all permutations that start with `first`, adding containment counts.
void count_with_first(unsigned n, unsigned first, std::vector<std::uint64_t>& counts) {
  std::vector<unsigned> rest;
  for (unsigned x = 1; x <= n; ++x)
    if (x != first) rest.push_back(x);
  std::vector<unsigned> perm(n);
  std::vector<Mask> L(n + 1);
  do {
    perm[0] = first;
    std::copy(rest.begin(), rest.end(), perm.begin() + 1);
    L[0] = 0;
    for (unsigned i = 0; i < n; ++i) L[i + 1] = L[i] | (Mask{1} << (perm[i] - 1));
    for (unsigned i = 0; i <= n; ++i) ++counts[L[i]];
    for (unsigned i = 1; i + 1 <= n; ++i) ++counts[L[i - 1] | (L[i + 1] & ~L[i])];
  } while (std::next_permutation(rest.begin(), rest.end()));
}

}  // namespace

std::vector<BigInt> enumerate_containing_counts(unsigned n, unsigned jobs) {
  if (n < 1 || n > kMaxEnumeration)
    throw Error("double-chain enumeration supports 1 <= n <= " + std::to_string(kMaxEnumeration));
  jobs = std::clamp(jobs, 1U, n);
  std::vector<std::vector<std::uint64_t>> partial(jobs, std::vector<std::uint64_t>(std::size_t{1} << n, 0));
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < jobs; ++w)
      workers.emplace_back([&, w] {
        for (unsigned first = 1 + w; first <= n; first += jobs) count_with_first(n, first, partial[w]);
      });
  }
  std::vector<BigInt> out(std::size_t{1} << n, 0);
  for (const auto& p : partial)
    for (std::size_t i = 0; i < p.size(); ++i) out[i] += p[i];
  return out;
}

DoubleChainAudit audit_double_chains(unsigned n, unsigned jobs) {
  if (n < 2) throw Error("double chains need n >= 2 (the secondary line is empty otherwise)");
  DoubleChainAudit audit;
  audit.n = n;
  const auto counts = enumerate_containing_counts(n, jobs);
  audit.subsets = counts.size();
  for (Mask f = 0; f < counts.size(); ++f) {
    if (counts[f] == count_containing(f, n))
      ++audit.matches;
    else
      audit.mismatches.push_back(f);
    audit.incidence_enumerated += counts[f];
    const auto size = static_cast<unsigned>(std::popcount(f));
    audit.incidence_closed_form +=
        (size == 0 || size == n) ? factorial(n) : BigInt(2 * factorial(size) * factorial(n - size));
  }
  return audit;
}

Rational chain_lubell_sum(const Family& f) {
  Rational total = 0;
  for (Mask m : f.members())
    total += Rational(1, binomial(f.ground_size(), static_cast<unsigned>(std::popcount(m))));
  return total;
}

Rational double_lubell_sum(const Family& f) {
  const unsigned n = f.ground_size();
  if (n < 2) throw Error("double chains need n >= 2 (the secondary line is empty otherwise)");
  Rational total = 0;
  const Mask all = full_mask(n);
  for (Mask m : f.members()) {
    if (m == 0 || m == all)
      total += Rational(1, 2);
    else
      total += Rational(1, binomial(n, static_cast<unsigned>(std::popcount(m))));
  }
  return total;
}

// ---------------------------------------------------------------------------
// Infinite double chain

bool chain_less(const ChainElement& a, const ChainElement& b) {
  if (a.column >= b.column) return false;
  if (a.line == Line::M && b.line == Line::M) return b.column >= a.column + 2;
  return true;
}

Poset chain_subposet(const std::vector<ChainElement>& elements) {
  const std::size_t n = elements.size();
  std::vector<Bitset> below(n, Bitset(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      if (i != j && elements[i] == elements[j]) throw Error("repeated double-chain element");
      if (chain_less(elements[i], elements[j])) below[j].set(i);
    }
  return Poset::from_closed_rows(std::move(below));
}

std::vector<ChainElement> window_elements(long lo, long hi) {
  if (lo > hi) throw Error("window needs lo <= hi");
  std::vector<ChainElement> out;
  for (long c = lo; c <= hi; ++c) {
    out.push_back({Line::L, c});
    out.push_back({Line::M, c});
  }
  return out;
}

Poset window_poset(long lo, long hi) { return chain_subposet(window_elements(lo, hi)); }

std::string format_chain_elements(const std::vector<ChainElement>& elements) {
  std::string out;
  for (const auto& e : elements) {
    if (!out.empty()) out += ' ';
    out += (e.line == Line::L ? "L" : "M") + std::to_string(e.column);
  }
  return out;
}

Family realize_in_double_chain(const std::vector<ChainElement>& elements) {
  if (elements.empty()) return Family(2);
  long lo = elements.front().column;
  long hi = lo;
  for (const auto& e : elements) {
    lo = std::min(lo, e.column);
    hi = std::max(hi, e.column);
  }
  const long n = hi - lo + 2;
  if (n > static_cast<long>(kMaxGroundSize)) throw Error("configuration too wide to realize");
  std::vector<unsigned> perm(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = static_cast<unsigned>(i + 1);
  const DoubleChain dc = double_chain(perm);
  std::vector<Mask> sets;
  for (const auto& e : elements) {
    const auto col = static_cast<std::size_t>(e.column - lo + 1);
    sets.push_back(e.line == Line::L ? dc.L(col) : dc.M(col));
  }
  return Family(static_cast<unsigned>(n), std::move(sets));
}

std::vector<ChainElement> compress_gaps(std::vector<ChainElement> elements) {
  std::sort(elements.begin(), elements.end(), [](const ChainElement& a, const ChainElement& b) {
    return a.column != b.column ? a.column < b.column : a.line < b.line;
  });
  long prev_orig = 0;
  long prev_new = 0;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const long orig = elements[i].column;
    if (i == 0) {
      prev_orig = orig;
      prev_new = 0;
    } else if (orig != prev_orig) {
      prev_new += std::min(orig - prev_orig, 2L);
      prev_orig = orig;
    }
    elements[i].column = prev_new;
  }
  return elements;
}

namespace {

enum class Content { L, M, LM };

struct ColumnStep {
  Content content;
  long gap;  // 0 for the first column
};

// Depth-first search for a configuration of exactly `target` elements that
// avoids the pattern. Prefixes that already contain the pattern are pruned:
// every extension of them contains it too.
class WindowSearch {
 public:
  WindowSearch(const PatternMatcher& matcher, std::size_t target, SearchBudget& budget)
      : matcher_(matcher), target_(target), budget_(budget) {}

  // Replays a fixed column prefix, then searches below it. Returns true when
  // a counterexample was found (left in elements_).
  bool run(const std::vector<ColumnStep>& prefix) {
    elements_.clear();
    long col = 0;
    bool prev_m = false;
    for (const auto& step : prefix) {
      col += step.gap;
      if (!push_column(step.content, col)) return false;
      prev_m = step.content != Content::L;
    }
    if (elements_.size() == target_) return true;
    return extend(col, prev_m, prefix.empty());
  }

  const std::vector<ChainElement>& elements() const { return elements_; }
  bool aborted() const { return aborted_; }
  std::uint64_t configurations() const { return configurations_; }

 private:
  bool contains_with_last() {
    Poset host = chain_subposet(elements_);
    Embedding e;
    auto s = matcher_.find(host, HostRestriction{nullptr, elements_.size() - 1}, e);
    return s == SearchStatus::Found;
  }

  // Appends the column; false (with elements restored) if the pattern appears.
  bool push_column(Content c, long col) {
    const std::size_t before = elements_.size();
    ++configurations_;
    if (c != Content::M) {
      elements_.push_back({Line::L, col});
      if (contains_with_last()) {
        elements_.resize(before);
        return false;
      }
    }
    if (c != Content::L) {
      elements_.push_back({Line::M, col});
      if (contains_with_last()) {
        elements_.resize(before);
        return false;
      }
    }
    return true;
  }

  bool extend(long col, bool prev_m, bool first) {
    for (Content c : {Content::L, Content::M, Content::LM}) {
      const std::size_t weight = c == Content::LM ? 2 : 1;
      if (elements_.size() + weight > target_) continue;
      const bool has_m = c != Content::L;
      for (long gap : {1L, 2L}) {
        if (first && gap == 2) continue;
        if (!first && gap == 2 && !(prev_m && has_m)) continue;
        if (!budget_.tick()) {
          aborted_ = true;
          return false;
        }
        const long next = first ? 0 : col + gap;
        const std::size_t before = elements_.size();
        if (!push_column(c, next)) continue;
        if (elements_.size() == target_) return true;
        if (extend(next, has_m, false)) return true;
        if (aborted_) return false;
        elements_.resize(before);
      }
    }
    return false;
  }

  const PatternMatcher& matcher_;
  std::size_t target_;
  SearchBudget& budget_;
  std::vector<ChainElement> elements_;
  bool aborted_ = false;
  std::uint64_t configurations_ = 0;
};

// Column prefixes of length <= depth, in search order, used as parallel tasks.
// Only the leaves (prefixes of exactly `depth` columns or complete sizes) are
// returned; together they partition the search space.
void collect_prefixes(std::size_t target, std::size_t depth, std::vector<ColumnStep>& cur, std::size_t weight,
                      bool prev_m, std::vector<std::vector<ColumnStep>>& out) {
  if (cur.size() == depth || weight == target) {
    out.push_back(cur);
    return;
  }
  const bool first = cur.empty();
  for (Content c : {Content::L, Content::M, Content::LM}) {
    const std::size_t w = c == Content::LM ? 2 : 1;
    if (weight + w > target) continue;
    const bool has_m = c != Content::L;
    for (long gap : {1L, 2L}) {
      if (first && gap == 2) continue;
      if (!first && gap == 2 && !(prev_m && has_m)) continue;
      cur.push_back({c, first ? 0 : gap});
      collect_prefixes(target, depth, cur, weight + w, has_m, out);
      cur.pop_back();
    }
  }
}

}  // namespace

WindowResult window_search(const Poset& pattern, unsigned twice_m, const WindowOptions& options) {
  const std::size_t target = static_cast<std::size_t>(twice_m) + 1;
  const PatternMatcher matcher(pattern);
  SearchBudget budget(options.max_nodes, options.time_limit);

  std::vector<std::vector<ColumnStep>> tasks;
  std::vector<ColumnStep> cur;
  collect_prefixes(target, 3, cur, 0, false, tasks);

  const unsigned jobs = std::max(1U, options.jobs);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> first_fail{std::numeric_limits<std::size_t>::max()};
  std::atomic<bool> aborted{false};
  std::atomic<std::uint64_t> configurations{0};
  std::vector<std::vector<ChainElement>> found(tasks.size());

  auto worker = [&] {
    WindowSearch search(matcher, target, budget);
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) break;
      if (t > first_fail.load()) continue;
      if (search.run(tasks[t])) {
        found[t] = search.elements();
        std::size_t cur_fail = first_fail.load();
        while (t < cur_fail && !first_fail.compare_exchange_weak(cur_fail, t)) {
        }
      }
      if (search.aborted()) {
        aborted = true;
        break;
      }
    }
    configurations += search.configurations();
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }

  WindowResult result;
  result.configurations = configurations.load();
  result.nodes = budget.nodes();
  const std::size_t fail = first_fail.load();
  if (fail != std::numeric_limits<std::size_t>::max()) {
    result.verdict = Verdict::Fail;
    result.counterexample = found[fail];
  } else if (aborted.load()) {
    result.verdict = Verdict::Inconclusive;
  } else {
    result.verdict = Verdict::Pass;
  }
  return result;
}

Certificate window_condition(const Poset& pattern, const Rational& m, const std::string& expr_text,
                             const WindowOptions& options) {
  if (m < 0) throw Error("window condition needs m >= 0");
  const Rational twice = 2 * m;
  if (!is_integral(twice)) throw Error("window condition needs 2m to be an integer, got m=" + to_string(m));
  const auto twice_m = static_cast<unsigned>(boost::multiprecision::numerator(twice));

  const auto start = std::chrono::steady_clock::now();
  const WindowResult r = window_search(pattern, twice_m, options);
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();

  Certificate c;
  c.claim = "window-condition";
  c.set("expr", expr_text);
  c.set("m", to_string(m));
  c.set("subset_size", std::to_string(twice_m + 1));
  c.set("pattern_size", std::to_string(pattern.size()));
  c.set("value", r.verdict == Verdict::Pass   ? "all-contain"
                 : r.verdict == Verdict::Fail ? "counterexample"
                                              : "unknown");
  const std::size_t guaranteed = pattern.size() + longest_chain(pattern) - 1;
  c.set("expected", twice_m + 1 >= guaranteed ? "all-contain" : "unknown");
  c.set("regime", is_integral(m) ? "integer-m: Sigma(n,m) bound for n >= m+1"
                                 : "half-integer-m: only the m*C(n,floor(n/2)) bound");
  c.set("configurations", std::to_string(r.configurations));
  c.set("nodes", std::to_string(r.nodes));
  if (r.verdict == Verdict::Inconclusive) c.set("note", "search budget exhausted before completion");
  if (r.verdict == Verdict::Fail) {
    c.set("witness_elements", format_chain_elements(r.counterexample));
    c.witness = realize_in_double_chain(r.counterexample);
  }
  c.set("elapsed_ms", std::to_string(elapsed));
  c.verdict = r.verdict;
  return c;
}

}  // namespace dchain
