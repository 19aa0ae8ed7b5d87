#pragma once

#include "dchain/family.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dchain {

enum class Verdict { Pass, PropertyPass, Fail, Inconclusive };

std::string_view verdict_string(Verdict v);
Verdict parse_verdict(std::string_view s);
inline bool is_passing(Verdict v) { return v == Verdict::Pass || v == Verdict::PropertyPass; }

/// Outcome of one verification run. Serialized as `key=value` lines in field
/// insertion order (claim first, verdict last), followed by an optional
/// witness block:
///
///     witness:
///     family 3
///     {1}
///     {1,2}
///     end
///
/// Stable keys: claim, expr, n, m, k, value, expected, verdict, witness.
/// Other keys (note, range, nodes, ...) may appear; `elapsed_ms` is the only
/// nondeterministic one.
struct Certificate {
  std::string claim;
  std::vector<std::pair<std::string, std::string>> fields;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<Family> witness;

  /// Sets a field, replacing an earlier value with the same key.
  Certificate& set(const std::string& key, std::string value);
  std::optional<std::string> get(std::string_view key) const;

  std::string serialize() const;
  static Certificate parse(std::string_view text);
};

}  // namespace dchain
