#include "dchain/certificate.hpp"

#include "dchain/error.hpp"

namespace dchain {

std::string_view verdict_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::PropertyPass: return "property-pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Verdict parse_verdict(std::string_view s) {
  for (Verdict v : {Verdict::Pass, Verdict::PropertyPass, Verdict::Fail, Verdict::Inconclusive})
    if (verdict_string(v) == s) return v;
  throw Error("unknown verdict '" + std::string(s) + "'");
}

Certificate& Certificate::set(const std::string& key, std::string value) {
  if (key == "claim" || key == "verdict" || key == "witness") throw Error("reserved certificate key '" + key + "'");
  if (key.find('=') != std::string::npos || value.find('\n') != std::string::npos)
    throw Error("certificate field '" + key + "' is not representable on one line");
  for (auto& [k, v] : fields)
    if (k == key) {
      v = std::move(value);
      return *this;
    }
  fields.emplace_back(key, std::move(value));
  return *this;
}

std::optional<std::string> Certificate::get(std::string_view key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return v;
  return std::nullopt;
}

std::string Certificate::serialize() const {
  std::string out = "claim=" + claim + "\n";
  for (const auto& [k, v] : fields) out += k + "=" + v + "\n";
  out += "verdict=" + std::string(verdict_string(verdict)) + "\n";
  if (witness) out += "witness:\n" + format_family_text(*witness) + "end\n";
  return out;
}

Certificate Certificate::parse(std::string_view text) {
  Certificate c;
  bool have_claim = false;
  bool have_verdict = false;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line == "witness:") {
      auto stop = text.find("\nend", start - 1);
      if (stop == std::string_view::npos) throw ParseError("unterminated witness block", line_no);
      c.witness = parse_family_text(text.substr(start, stop + 1 - start));
      start = stop + 5;
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value", line_no);
    std::string key(line.substr(0, eq));
    std::string value(line.substr(eq + 1));
    if (key == "claim") {
      c.claim = value;
      have_claim = true;
    } else if (key == "verdict") {
      c.verdict = parse_verdict(value);
      have_verdict = true;
    } else {
      c.set(key, value);
    }
  }
  if (!have_claim || !have_verdict) throw ParseError("certificate needs claim and verdict", line_no);
  return c;
}

}  // namespace dchain
