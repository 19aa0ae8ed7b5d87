#include "dchain/extremal.hpp"

#include "dchain/budget.hpp"
#include "dchain/error.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdlib>
#include <limits>
#include <thread>

namespace dchain {

namespace {

using Set64 = std::uint64_t;

Bitset to_bitset(Set64 s, std::size_t size) {
  Bitset b(size);
  for (Set64 t = s; t != 0; t &= t - 1) b.set(static_cast<std::size_t>(std::countr_zero(t)));
  return b;
}

// Search state shared by both la_exact strategies: the Boolean lattice of
// [n] as host, families as bitsets over its members.
class LatticeSearch {
 public:
  LatticeSearch(unsigned n, const Poset& pattern, SearchBudget& budget)
      : universe_(power_set(n)), host_(family_poset(universe_)), matcher_(pattern), budget_(budget) {}

  std::size_t size() const { return universe_.size(); }
  const Family& universe() const { return universe_; }

  bool free(Set64 family) const {
    Bitset allowed = to_bitset(family, size());
    Embedding e;
    return matcher_.find(host_, HostRestriction{&allowed, std::nullopt}, e) == SearchStatus::NotFound;
  }

  // Assumes `family` is P-free; decides whether adding `extra` keeps it so.
  bool free_with(Set64 family, std::size_t extra) const {
    Bitset allowed = to_bitset(family | (Set64{1} << extra), size());
    Embedding e;
    return matcher_.find(host_, HostRestriction{&allowed, extra}, e) == SearchStatus::NotFound;
  }

  Family to_family(Set64 s) const {
    std::vector<Mask> members;
    for (Set64 t = s; t != 0; t &= t - 1) members.push_back(universe_.members()[std::countr_zero(t)]);
    return Family(universe_.ground_size(), std::move(members));
  }

  Set64 from_family(const Family& f) const {
    Set64 s = 0;
    for (std::size_t i = 0; i < universe_.size(); ++i)
      if (f.contains(universe_.members()[i])) s |= Set64{1} << i;
    return s;
  }

  SearchBudget& budget() { return budget_; }

 private:
  Family universe_;
  Poset host_;
  PatternMatcher matcher_;
  SearchBudget& budget_;
};

class BranchAndBound {
 public:
  BranchAndBound(LatticeSearch& lattice, Set64 incumbent) : lattice_(lattice), best_(incumbent) {}

  void run(const std::vector<std::size_t>& candidates) { search(0, candidates); }

  Set64 best() const { return best_; }
  bool aborted() const { return aborted_; }
  std::size_t open_bound() const { return open_bound_; }

 private:
  static std::size_t count(Set64 s) { return static_cast<std::size_t>(std::popcount(s)); }

  void search(Set64 chosen, std::vector<std::size_t> cand) {
    if (count(chosen) > count(best_)) best_ = chosen;
    while (!cand.empty()) {
      const std::size_t frame_bound = count(chosen) + cand.size();
      if (frame_bound <= count(best_)) return;
      if (!lattice_.budget().tick()) {
        aborted_ = true;
        open_bound_ = std::max(open_bound_, frame_bound);
        return;
      }
      const std::size_t c = cand.front();
      cand.erase(cand.begin());
      const Set64 with = chosen | (Set64{1} << c);
      // Containment is monotone, so a subset that cannot join now never can
      // deeper in this branch.
      std::vector<std::size_t> next;
      next.reserve(cand.size());
      for (std::size_t d : cand)
        if (lattice_.free_with(with, d)) next.push_back(d);
      search(with, std::move(next));
      if (aborted_) {
        open_bound_ = std::max(open_bound_, frame_bound);
        return;
      }
    }
  }

  LatticeSearch& lattice_;
  Set64 best_;
  bool aborted_ = false;
  std::size_t open_bound_ = 0;
};

}  // namespace

LaResult la_exact(unsigned n, const Poset& pattern, const LaOptions& options) {
  if (options.max_n > kLaAbsoluteMaxN)
    throw Error("la_exact limit cannot exceed n=" + std::to_string(kLaAbsoluteMaxN));
  if (n > options.max_n)
    throw Error("la_exact is limited to n <= " + std::to_string(options.max_n) + ", got n=" + std::to_string(n));
  if (pattern.size() == 0) throw Error("pattern poset must have at least one element");

  LaResult r;
  // Every nonempty family contains the one-element poset.
  if (pattern.size() == 1) {
    r.witness = Family(n);
    r.method = "trivial";
    return r;
  }

  SearchBudget budget(options.max_nodes, options.time_limit);
  LatticeSearch lattice(n, pattern, budget);
  const std::size_t total = lattice.size();

  if (n <= kLaExhaustiveMaxN) {
    r.method = "exhaustive";
    Set64 best = 0;
    const Set64 limit = Set64{1} << total;
    for (Set64 fam = 1; fam < limit; ++fam) {
      if (std::popcount(fam) <= std::popcount(best)) continue;
      budget.tick();
      if (lattice.free(fam)) best = fam;
    }
    r.value = static_cast<std::size_t>(std::popcount(best));
    r.upper_bound = r.value;
    r.witness = lattice.to_family(best);
    r.nodes = budget.nodes();
    return r;
  }

  r.method = "branch-and-bound";
  // Seed with the largest P-free band of middle levels.
  Set64 seed = 0;
  for (unsigned m = n + 1; m >= 1; --m) {
    Family band = middle_levels_family(n, m);
    Set64 s = lattice.from_family(band);
    if (lattice.free(s)) {
      seed = s;
      break;
    }
  }

  // Subsets closest to the middle first.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < total; ++i)
    if (lattice.free_with(0, i)) order.push_back(i);
  const auto& members = lattice.universe().members();
  auto key = [&](std::size_t i) {
    const int size = std::popcount(members[i]);
    return std::make_tuple(std::abs(2 * size - static_cast<int>(n)), size, members[i]);
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

  BranchAndBound bb(lattice, seed);
  bb.run(order);

  r.value = static_cast<std::size_t>(std::popcount(bb.best()));
  r.witness = lattice.to_family(bb.best());
  r.nodes = budget.nodes();
  if (bb.aborted()) {
    r.status = LaStatus::Inconclusive;
    r.upper_bound = std::max(bb.open_bound(), r.value);
  } else {
    r.upper_bound = r.value;
  }
  return r;
}

std::string_view bound_kind_string(BoundKind k) { return k == BoundKind::SharpSigma ? "sharp-sigma" : "coarse"; }

UpperBound upper_bound_theorem4(const Poset& pattern, unsigned n) {
  const Rational b = b_value(pattern);
  if (is_integral(b) && b + 1 <= n) {
    const auto m = static_cast<unsigned>(boost::multiprecision::numerator(b));
    return {Rational(sigma(n, m)), BoundKind::SharpSigma};
  }
  return {b * Rational(binomial(n, n / 2)), BoundKind::Coarse};
}

BigInt old_bound(const Poset& pattern, unsigned n) {
  return sigma(n, static_cast<unsigned>(pattern.size() - 1));
}

namespace {

struct LevelTask {
  unsigned n;
  unsigned k;
};

std::vector<LevelTask> level_tasks(unsigned m, unsigned n_min, unsigned n_max, bool k_descending) {
  std::vector<LevelTask> tasks;
  for (unsigned n = n_min; n <= n_max; ++n) {
    if (m == 0 || m - 1 > n) continue;
    const unsigned k_max = n - (m - 1);
    for (unsigned i = 0; i <= k_max; ++i) tasks.push_back({n, k_descending ? k_max - i : i});
  }
  return tasks;
}

}  // namespace

Certificate e_lower_scan(const Poset& pattern, unsigned m, unsigned n_max, const std::string& expr_text,
                         const ScanOptions& options) {
  Certificate c;
  c.claim = "e-lower-scan";
  c.set("expr", expr_text);
  c.set("m", std::to_string(m));
  c.set("n_max", std::to_string(n_max));
  c.set("range", "0<=n<=" + std::to_string(n_max) + ", every k with k+m-1<=n");
  c.set("expected", "all level families P-free");

  const auto tasks = level_tasks(m, 0, n_max, false);
  if (m == 0) {
    c.set("value", "0 families checked");
    c.set("note", "m=0 selects no levels; the empty family is P-free");
    c.verdict = Verdict::Pass;
    return c;
  }

  const PatternMatcher matcher(pattern);
  SearchBudget budget(options.max_nodes, options.time_limit);
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> first_fail{kNone};
  std::atomic<std::size_t> first_abort{kNone};
  std::vector<Embedding> found(tasks.size());
  auto lower_to = [](std::atomic<std::size_t>& slot, std::size_t t) {
    std::size_t cur = slot.load();
    while (t < cur && !slot.compare_exchange_weak(cur, t)) {
    }
  };
  auto worker = [&] {
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      if (t > first_fail.load()) continue;
      const Family fam = levels_family(tasks[t].n, tasks[t].k, m);
      Embedding e;
      switch (matcher.find(family_poset(fam), HostRestriction{}, e, &budget)) {
        case SearchStatus::Found:
          found[t] = std::move(e);
          lower_to(first_fail, t);
          break;
        case SearchStatus::Aborted: lower_to(first_abort, t); break;
        case SearchStatus::NotFound: break;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned j = 1; j < std::max(1U, options.jobs); ++j) pool.emplace_back(worker);
    worker();
  }

  const std::size_t fail = first_fail.load();
  const std::size_t abort = first_abort.load();
  if (abort < fail) {
    // Every family before the first aborted check is known to be P-free.
    c.set("value", std::to_string(abort) + " families checked before the budget ran out, all P-free");
    c.set("note", "budget exhausted at n=" + std::to_string(tasks[abort].n) + ", k=" + std::to_string(tasks[abort].k) +
                      "; the scan is complete only for n<" + std::to_string(tasks[abort].n));
    c.set("nodes", std::to_string(budget.nodes()));
    c.verdict = Verdict::Inconclusive;
  } else if (fail == kNone) {
    c.set("value", std::to_string(tasks.size()) + " families checked, all P-free");
    c.set("note", "finite-range evidence for e(P)>=" + std::to_string(m) + " up to n=" + std::to_string(n_max) +
                      "; not a proof for all n");
    c.verdict = Verdict::Pass;
  } else {
    const auto& t = tasks[fail];
    const Family fam = levels_family(t.n, t.k, m);
    c.set("n", std::to_string(t.n));
    c.set("k", std::to_string(t.k));
    c.set("value", "pattern found in levels " + std::to_string(t.k) + ".." + std::to_string(t.k + m - 1) + " of [" +
                       std::to_string(t.n) + "]");
    c.witness = embedding_image(fam, found[fail]);
    c.verdict = Verdict::Fail;
  }
  return c;
}

std::optional<LevelWitness> e_upper_witness(const Poset& pattern, unsigned m, unsigned n_max) {
  if (m == 0) throw Error("e_upper_witness needs m >= 1");
  const PatternMatcher matcher(pattern);
  for (const auto& t : level_tasks(m, 0, n_max, true)) {
    const Family fam = levels_family(t.n, t.k, m);
    if (auto e = matcher.find(family_poset(fam))) return LevelWitness{t.n, t.k, *e, embedding_image(fam, *e)};
  }
  return std::nullopt;
}

long e_composition_bound(const PosetExpr& expr) {
  switch (expr.kind()) {
    case PosetExpr::Kind::Base: {
      const Rational b = b_value(base_poset(expr.base_name()));
      return boost::multiprecision::numerator(b).convert_to<long>();
    }
    case PosetExpr::Kind::File:
      throw Error("e is only known for the seven base posets; leaf '@" + expr.path() + "' is not one");
    case PosetExpr::Kind::Oplus: return e_composition_bound(expr.left()) + e_composition_bound(expr.right()) + 1;
    case PosetExpr::Kind::Otimes: return e_composition_bound(expr.left()) + e_composition_bound(expr.right());
  }
  throw Error("corrupt expression node");
}

Certificate verify_main_theorem(const PosetExpr& expr, unsigned n, const VerifyOptions& options) {
  if (!expr.base_leaves_only()) throw Error("the exact theorem covers expressions over E, B, D3, Q, R, S, S' only");
  const Poset p = eval_expr(expr);
  const Rational b = b_value(p);
  if (!is_integral(b)) throw Error("b(P)=" + to_string(b) + " is not an integer");
  if (b + 1 > n)
    throw Error("the theorem needs n >= b(P)+1 = " + to_string(Rational(b + 1)) + ", got n=" + std::to_string(n));
  const auto bi = static_cast<unsigned>(boost::multiprecision::numerator(b));
  const long e = e_composition_bound(expr);
  const BigInt expected = sigma(n, bi);

  const auto start = std::chrono::steady_clock::now();
  Certificate c;
  c.claim = "main-theorem";
  c.set("expr", to_string(expr));
  c.set("n", std::to_string(n));
  c.set("b", std::to_string(bi));
  c.set("e", std::to_string(e));
  c.set("expected", to_string(expected));

  auto finish = [&](Certificate& cert) {
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    cert.set("elapsed_ms", std::to_string(ms));
    return cert;
  };

  std::string fallback_reason = "n=" + std::to_string(n) + " is above the exact-search limit " +
                                std::to_string(options.exact_max_n);
  if (n <= options.exact_max_n && n <= options.la.max_n) {
    const LaResult la = la_exact(n, p, options.la);
    if (la.status == LaStatus::Exact) {
      c.set("method", "la-exact/" + la.method);
      c.set("value", std::to_string(la.value));
      c.witness = la.witness;
      c.verdict = (BigInt(la.value) == expected && e == static_cast<long>(bi)) ? Verdict::Pass : Verdict::Fail;
      return finish(c);
    }
    fallback_reason = "la_exact budget exhausted at " + std::to_string(la.nodes) + " nodes (best " +
                      std::to_string(la.value) + ", open bound " + std::to_string(la.upper_bound) + ")";
  }

  c.set("method", "property");
  c.set("note", fallback_reason + "; checked middle-levels freeness, window condition at m=b and the Lubell equality");
  const Family middle = middle_levels_family(n, bi);
  c.set("value", std::to_string(middle.size()));
  const bool middle_free = is_p_free(middle, p);
  c.set("middle_levels_free", middle_free ? "yes" : "no");
  const Certificate window = window_condition(p, b, to_string(expr), options.window);
  c.set("window_condition", std::string(verdict_string(window.verdict)));
  const bool lubell_equal = double_lubell_sum(middle) == b;
  c.set("lubell_equality", lubell_equal ? "yes" : "no");
  const bool e_equal = e == static_cast<long>(bi);

  if (!middle_free || window.verdict == Verdict::Fail || !lubell_equal || !e_equal || BigInt(middle.size()) != expected)
    c.verdict = Verdict::Fail;
  else if (window.verdict == Verdict::Inconclusive)
    c.verdict = Verdict::Inconclusive;
  else
    c.verdict = Verdict::PropertyPass;
  return finish(c);
}

}  // namespace dchain
