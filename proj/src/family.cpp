#include "dchain/family.hpp"

#include "dchain/error.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace dchain {

bool subset_order(Mask a, Mask b) {
  const int pa = std::popcount(a);
  const int pb = std::popcount(b);
  return pa != pb ? pa < pb : a < b;
}

namespace {

void check_ground(unsigned n) {
  if (n > kMaxGroundSize)
    throw Error("ground set size " + std::to_string(n) + " exceeds the limit of " + std::to_string(kMaxGroundSize));
}

// Gosper's hack over all k-subsets of [n], in increasing numeric order.
template <typename F>
void for_each_k_subset(unsigned n, unsigned k, F&& f) {
  if (k > n) return;
  if (k == 0) {
    f(Mask{0});
    return;
  }
  const Mask limit = full_mask(n);
  Mask m = full_mask(k);
  while (true) {
    f(m);
    if (m == (limit & ~full_mask(n - k))) break;
    const Mask c = m & (~m + 1);
    const Mask r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
}

}  // namespace

Family::Family(unsigned n) : n_(n) { check_ground(n); }

Family::Family(unsigned n, std::vector<Mask> members) : n_(n), members_(std::move(members)) {
  check_ground(n);
  const Mask limit = full_mask(n);
  for (Mask m : members_)
    if ((m & ~limit) != 0) throw Error("subset " + format_subset(m) + " is not contained in [" + std::to_string(n) + "]");
  std::sort(members_.begin(), members_.end(), subset_order);
  if (auto dup = std::adjacent_find(members_.begin(), members_.end()); dup != members_.end())
    throw Error("subset " + format_subset(*dup) + " appears twice");
}

bool Family::contains(Mask m) const { return std::binary_search(members_.begin(), members_.end(), m, subset_order); }

BigInt sigma(unsigned n, unsigned m) {
  if (m == 0) return 0;
  if (m >= n + 1) return BigInt(1) << n;
  BigInt total = 0;
  for (unsigned i = (n - m + 1) / 2; i <= (n + m - 1) / 2; ++i) total += binomial(n, i);
  return total;
}

Family levels_family(unsigned n, unsigned k, unsigned m) {
  check_ground(n);
  if (m == 0) throw Error("levels_family needs at least one level");
  if (k + m - 1 > n)
    throw Error("levels " + std::to_string(k) + ".." + std::to_string(k + m - 1) + " do not fit in [" +
                std::to_string(n) + "]");
  std::vector<Mask> members;
  for (unsigned size = k; size < k + m; ++size) for_each_k_subset(n, size, [&](Mask s) { members.push_back(s); });
  return Family(n, std::move(members));
}

Family middle_levels_family(unsigned n, unsigned m) {
  if (m == 0 || m > n + 1)
    throw Error("middle levels need 1 <= m <= n+1, got m=" + std::to_string(m) + " for n=" + std::to_string(n));
  return levels_family(n, (n - m + 1) / 2, m);
}

Family power_set(unsigned n) { return levels_family(n, 0, n + 1); }

Family complement_family(const Family& f) {
  std::vector<Mask> out;
  out.reserve(f.size());
  const Mask all = full_mask(f.ground_size());
  for (Mask m : f.members()) out.push_back(all & ~m);
  return Family(f.ground_size(), std::move(out));
}

std::string format_subset(Mask m) {
  std::string s = "{";
  bool first = true;
  for (unsigned i = 0; i < 64; ++i) {
    if (((m >> i) & 1U) == 0) continue;
    if (!first) s += ',';
    s += std::to_string(i + 1);
    first = false;
  }
  return s + "}";
}

std::string format_family_text(const Family& f) {
  std::string out = "family " + std::to_string(f.ground_size()) + "\n";
  for (Mask m : f.members()) out += format_subset(m) + "\n";
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

unsigned parse_unsigned(std::string_view tok, std::size_t line) {
  tok = trim(tok);
  unsigned v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("expected a non-negative integer, got '" + std::string(tok) + "'", line);
  return v;
}

}  // namespace

Family parse_family_text(std::string_view text) {
  bool have_header = false;
  unsigned n = 0;
  std::vector<Mask> members;
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
    if (!have_header) {
      if (line.substr(0, 6) != "family") throw ParseError("family file must start with 'family <n>'", line_no);
      n = parse_unsigned(line.substr(6), line_no);
      if (n > kMaxGroundSize) throw ParseError("ground set too large", line_no);
      have_header = true;
      continue;
    }
    if (line.front() != '{' || line.back() != '}') throw ParseError("expected a set literal '{...}'", line_no);
    std::string_view body = trim(line.substr(1, line.size() - 2));
    Mask m = 0;
    while (!body.empty()) {
      auto comma = body.find(',');
      std::string_view tok = body.substr(0, comma);
      unsigned e = parse_unsigned(tok, line_no);
      if (e < 1 || e > n) throw ParseError("element " + std::to_string(e) + " outside [1," + std::to_string(n) + "]", line_no);
      m |= Mask{1} << (e - 1);
      if (comma == std::string_view::npos) break;
      body = body.substr(comma + 1);
    }
    members.push_back(m);
  }
  if (!have_header) throw ParseError("empty family description", line_no);
  return Family(n, std::move(members));
}

Family load_family_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open family file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_family_text(buf.str());
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

}  // namespace dchain
