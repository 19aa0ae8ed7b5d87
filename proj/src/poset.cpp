#include "dchain/poset.hpp"

#include "dchain/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <tuple>

namespace dchain {

Poset::Poset(std::size_t size) : below_(size, Bitset(size)), above_(size, Bitset(size)) {}

Poset Poset::from_relations(std::size_t size, const std::vector<Relation>& generators) {
  Poset p(size);
  for (auto [a, b] : generators) {
    if (a >= size || b >= size)
      throw Error("relation " + std::to_string(a) + " < " + std::to_string(b) + " is out of range for " +
                  std::to_string(size) + " elements");
    if (a == b) throw Error("relation " + std::to_string(a) + " < " + std::to_string(a) + " is reflexive");
    p.below_[b].set(a);
  }
  // Warshall over bit rows: if k < j then everything below k is below j.
  for (std::size_t k = 0; k < size; ++k)
    for (std::size_t j = 0; j < size; ++j)
      if (p.below_[j].test(k)) p.below_[j] |= p.below_[k];
  for (std::size_t a = 0; a < size; ++a)
    if (p.below_[a].test(a)) throw Error("relations contain a cycle through element " + std::to_string(a));
  p.rebuild_above();
  return p;
}

Poset Poset::from_matrix(const std::vector<std::vector<bool>>& lt) {
  const std::size_t n = lt.size();
  Poset p(n);
  for (std::size_t a = 0; a < n; ++a) {
    if (lt[a].size() != n) throw Error("relation matrix is not square");
    for (std::size_t b = 0; b < n; ++b)
      if (lt[a][b]) p.below_[b].set(a);
  }
  p.rebuild_above();
  if (auto v = strict_order_violation(p)) throw Error("not a strict partial order: " + *v);
  return p;
}

Poset Poset::from_closed_rows(std::vector<Bitset> below) {
  const std::size_t n = below.size();
  for (std::size_t b = 0; b < n; ++b) {
    if (below[b].size() != n) throw Error("relation row has the wrong width");
    if (below[b].test(b)) throw Error("irreflexivity fails at " + std::to_string(b));
    below[b].for_each([&](std::size_t a) {
      if (below[a].test(b)) throw Error("asymmetry fails at " + std::to_string(a) + "," + std::to_string(b));
      if (!below[a].is_subset_of(below[b])) throw Error("relation rows are not transitively closed at " + std::to_string(b));
    });
  }
  Poset p;
  p.below_ = std::move(below);
  p.rebuild_above();
  return p;
}

void Poset::rebuild_above() {
  const std::size_t n = size();
  above_.assign(n, Bitset(n));
  for (std::size_t b = 0; b < n; ++b) below_[b].for_each([&](std::size_t a) { above_[a].set(b); });
}

std::size_t Poset::relation_count() const {
  std::size_t c = 0;
  for (const auto& row : below_) c += row.count();
  return c;
}

std::vector<Poset::Relation> Poset::relations() const {
  std::vector<Relation> out;
  for (std::size_t b = 0; b < size(); ++b) below_[b].for_each([&](std::size_t a) { out.emplace_back(a, b); });
  std::sort(out.begin(), out.end());
  return out;
}

void Poset::set_level_hint(std::vector<int> levels) {
  if (!levels.empty() && levels.size() != size()) throw Error("level hint size does not match poset size");
  level_hint_ = std::move(levels);
}

std::optional<std::string> strict_order_violation(const Poset& p) {
  const std::size_t n = p.size();
  for (std::size_t a = 0; a < n; ++a) {
    if (p.less(a, a)) return "irreflexivity fails at " + std::to_string(a);
    for (std::size_t b = 0; b < n; ++b) {
      if (p.less(a, b) && p.less(b, a))
        return "asymmetry fails at " + std::to_string(a) + "," + std::to_string(b);
      if (!p.less(a, b)) continue;
      for (std::size_t c = 0; c < n; ++c)
        if (p.less(b, c) && !p.less(a, c))
          return "transitivity fails at " + std::to_string(a) + "<" + std::to_string(b) + "<" + std::to_string(c);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Base posets

namespace {

struct BaseInfo {
  BaseName name;
  std::string_view spelling;
  std::vector<std::size_t> levels;
};

const std::vector<BaseInfo>& base_table() {
  static const std::vector<BaseInfo> table = {
      {BaseName::E, "E", {1}},          {BaseName::B, "B", {2, 2}},       {BaseName::D3, "D3", {1, 3, 1}},
      {BaseName::Q, "Q", {2, 3, 2}},    {BaseName::R, "R", {1, 4, 4, 1}}, {BaseName::S, "S", {1, 4, 2}},
      {BaseName::Sp, "S'", {2, 4, 1}},
  };
  return table;
}

}  // namespace

std::string_view base_name_string(BaseName name) {
  for (const auto& info : base_table())
    if (info.name == name) return info.spelling;
  return "?";
}

std::optional<BaseName> parse_base_name(std::string_view token) {
  if (token == "Sp") return BaseName::Sp;
  for (const auto& info : base_table())
    if (info.spelling == token) return info.name;
  return std::nullopt;
}

const std::vector<BaseName>& all_base_names() {
  static const std::vector<BaseName> names = {BaseName::E, BaseName::B, BaseName::D3, BaseName::Q,
                                              BaseName::R, BaseName::S, BaseName::Sp};
  return names;
}

std::vector<std::size_t> base_level_sizes(BaseName name) {
  for (const auto& info : base_table())
    if (info.name == name) return info.levels;
  throw Error("unknown base poset");
}

Poset levelled_poset(const std::vector<std::size_t>& level_sizes) {
  std::vector<int> level_of;
  for (std::size_t lvl = 0; lvl < level_sizes.size(); ++lvl)
    level_of.insert(level_of.end(), level_sizes[lvl], static_cast<int>(lvl));
  std::vector<Poset::Relation> rel;
  for (std::size_t a = 0; a < level_of.size(); ++a)
    for (std::size_t b = 0; b < level_of.size(); ++b)
      if (level_of[a] < level_of[b]) rel.emplace_back(a, b);
  Poset p = Poset::from_relations(level_of.size(), rel);
  p.set_level_hint(std::move(level_of));
  return p;
}

Poset base_poset(BaseName name) { return levelled_poset(base_level_sizes(name)); }

Poset base_poset(std::string_view name) {
  auto parsed = parse_base_name(name);
  if (!parsed) throw Error("unknown base poset '" + std::string(name) + "'");
  return base_poset(*parsed);
}

Poset path_poset(std::size_t length) {
  if (length == 0) throw Error("a path poset needs at least one element");
  return levelled_poset(std::vector<std::size_t>(length, 1));
}

// ---------------------------------------------------------------------------
// Composition

namespace {

std::vector<int> shifted_levels(const Poset& p, int offset) {
  std::vector<int> out = p.level_hint();
  if (out.empty()) {
    auto h = heights(p);
    out.assign(h.begin(), h.end());
    for (auto& v : out) --v;
  }
  for (auto& v : out) v += offset;
  return out;
}

int top_level(const std::vector<int>& levels) { return levels.empty() ? -1 : *std::max_element(levels.begin(), levels.end()); }

}  // namespace

Poset oplus(const Poset& lower, const Poset& upper) {
  const std::size_t n1 = lower.size();
  const std::size_t n = n1 + upper.size();
  std::vector<Poset::Relation> rel;
  for (auto [a, b] : lower.relations()) rel.emplace_back(a, b);
  for (auto [a, b] : upper.relations()) rel.emplace_back(a + n1, b + n1);
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t b = n1; b < n; ++b) rel.emplace_back(a, b);
  Poset p = Poset::from_relations(n, rel);
  auto lv = shifted_levels(lower, 0);
  auto uv = shifted_levels(upper, top_level(lv) + 1);
  lv.insert(lv.end(), uv.begin(), uv.end());
  p.set_level_hint(std::move(lv));
  return p;
}

Poset otimes(const Poset& lower, const Poset& upper) {
  auto top = greatest_element(lower);
  if (!top) throw Error("left operand of otimes has no greatest element");
  auto bottom = least_element(upper);
  if (!bottom) throw Error("right operand of otimes has no least element");

  const std::size_t n1 = lower.size();
  std::vector<std::size_t> remap(upper.size());
  for (std::size_t i = 0, next = n1; i < upper.size(); ++i) remap[i] = (i == *bottom) ? *top : next++;

  std::vector<Poset::Relation> rel = lower.relations();
  for (auto [a, b] : upper.relations()) rel.emplace_back(remap[a], remap[b]);
  Poset p = Poset::from_relations(n1 + upper.size() - 1, rel);

  auto lv = shifted_levels(lower, 0);
  auto uv = shifted_levels(upper, lv[*top] - shifted_levels(upper, 0)[*bottom]);
  for (std::size_t i = 0; i < upper.size(); ++i)
    if (i != *bottom) lv.push_back(uv[i]);
  p.set_level_hint(std::move(lv));
  return p;
}

Poset dual(const Poset& p) {
  std::vector<Poset::Relation> rel;
  for (auto [a, b] : p.relations()) rel.emplace_back(b, a);
  Poset d = Poset::from_relations(p.size(), rel);
  if (!p.level_hint().empty()) {
    auto lv = p.level_hint();
    const int top = top_level(lv);
    for (auto& v : lv) v = top - v;
    d.set_level_hint(std::move(lv));
  }
  return d;
}

std::optional<std::size_t> greatest_element(const Poset& p) {
  for (std::size_t a = 0; a < p.size(); ++a)
    if (p.below(a).count() + 1 == p.size()) return a;
  return std::nullopt;
}

std::optional<std::size_t> least_element(const Poset& p) {
  for (std::size_t a = 0; a < p.size(); ++a)
    if (p.above(a).count() + 1 == p.size()) return a;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Measures

namespace {

// Elements sorted so that every element follows everything below it: a < b
// implies below(a) is a strict subset of below(b).
std::vector<std::size_t> linear_extension(const Poset& p) {
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p.below(a).count() < p.below(b).count(); });
  return order;
}

}  // namespace

std::vector<std::size_t> heights(const Poset& p) {
  std::vector<std::size_t> h(p.size(), 1);
  for (std::size_t a : linear_extension(p))
    p.below(a).for_each([&](std::size_t b) { h[a] = std::max(h[a], h[b] + 1); });
  return h;
}

std::vector<std::size_t> depths(const Poset& p) {
  std::vector<std::size_t> d(p.size(), 1);
  auto order = linear_extension(p);
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    p.above(*it).for_each([&](std::size_t b) { d[*it] = std::max(d[*it], d[b] + 1); });
  return d;
}

std::size_t longest_chain(const Poset& p) {
  auto h = heights(p);
  return h.empty() ? 0 : *std::max_element(h.begin(), h.end());
}

Rational b_value(const Poset& p) {
  return Rational(static_cast<long long>(p.size() + longest_chain(p)), 2) - 1;
}

// ---------------------------------------------------------------------------
// Isomorphism

namespace {

using Signature = std::array<std::size_t, 4>;

std::vector<Signature> signatures(const Poset& p) {
  auto h = heights(p);
  auto d = depths(p);
  std::vector<Signature> out(p.size());
  for (std::size_t a = 0; a < p.size(); ++a) out[a] = {h[a], d[a], p.below(a).count(), p.above(a).count()};
  return out;
}

bool extend_isomorphism(const Poset& a, const Poset& b, const std::vector<Signature>& sa,
                        const std::vector<Signature>& sb, const std::vector<std::size_t>& order,
                        std::size_t depth, std::vector<std::size_t>& map, std::vector<bool>& used) {
  if (depth == order.size()) return true;
  const std::size_t x = order[depth];
  for (std::size_t y = 0; y < b.size(); ++y) {
    if (used[y] || sa[x] != sb[y]) continue;
    bool ok = true;
    for (std::size_t i = 0; i < depth && ok; ++i) {
      const std::size_t px = order[i];
      ok = a.less(px, x) == b.less(map[px], y) && a.less(x, px) == b.less(y, map[px]);
    }
    if (!ok) continue;
    map[x] = y;
    used[y] = true;
    if (extend_isomorphism(a, b, sa, sb, order, depth + 1, map, used)) return true;
    used[y] = false;
  }
  return false;
}

}  // namespace

bool is_isomorphic(const Poset& a, const Poset& b) {
  if (a.size() > kIsomorphismLimit || b.size() > kIsomorphismLimit)
    throw Error("isomorphism test is limited to " + std::to_string(kIsomorphismLimit) + " elements");
  if (a.size() != b.size() || a.relation_count() != b.relation_count()) return false;
  auto sa = signatures(a);
  auto sb = signatures(b);
  auto ms_a = sa;
  auto ms_b = sb;
  std::sort(ms_a.begin(), ms_a.end());
  std::sort(ms_b.begin(), ms_b.end());
  if (ms_a != ms_b) return false;

  // Map elements with the rarest signatures first.
  std::vector<std::size_t> order(a.size());
  std::iota(order.begin(), order.end(), 0);
  auto freq = [&](std::size_t x) { return std::count(ms_a.begin(), ms_a.end(), sa[x]); };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return freq(x) < freq(y); });

  std::vector<std::size_t> map(a.size());
  std::vector<bool> used(b.size(), false);
  return extend_isomorphism(a, b, sa, sb, order, 0, map, used);
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::size_t parse_index(std::string_view tok, std::size_t line) {
  tok = trim(tok);
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty())
    throw ParseError("expected a non-negative integer, got '" + std::string(tok) + "'", line);
  return v;
}

}  // namespace

Poset parse_poset_text(std::string_view text) {
  std::optional<std::size_t> size;
  std::vector<Poset::Relation> rel;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (!size) {
      if (line.substr(0, 5) != "poset") throw ParseError("poset file must start with 'poset <n>'", line_no);
      size = parse_index(line.substr(5), line_no);
      if (*size == 0) throw ParseError("a poset needs at least one element", line_no);
      continue;
    }
    auto lt = line.find('<');
    if (lt == std::string_view::npos) throw ParseError("expected a relation 'a < b'", line_no);
    std::size_t a = parse_index(line.substr(0, lt), line_no);
    std::size_t b = parse_index(line.substr(lt + 1), line_no);
    if (a >= *size || b >= *size) throw ParseError("element index out of range", line_no);
    rel.emplace_back(a, b);
  }
  if (!size) throw ParseError("empty poset description", line_no);
  return Poset::from_relations(*size, rel);
}

Poset load_poset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open poset file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_poset_text(buf.str());
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

std::string format_poset_text(const Poset& p) {
  std::ostringstream out;
  out << "poset " << p.size() << '\n';
  for (auto [a, b] : p.relations()) out << a << " < " << b << '\n';
  return out.str();
}

}  // namespace dchain
