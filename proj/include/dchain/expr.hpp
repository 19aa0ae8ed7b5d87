#pragma once

#include "dchain/poset.hpp"

#include <functional>
#include <memory>
#include <string>
#include <string_view>

namespace dchain {

/// Syntax tree over base posets (and externally loaded posets) joined by the
/// linear sum and one-point gluing. Nodes are immutable and shared.
class PosetExpr {
 public:
  enum class Kind { Base, File, Oplus, Otimes };

  static PosetExpr base(BaseName name);
  static PosetExpr file(std::string path, Poset poset);
  static PosetExpr oplus(PosetExpr lower, PosetExpr upper);
  static PosetExpr otimes(PosetExpr lower, PosetExpr upper);

  Kind kind() const { return node_->kind; }
  BaseName base_name() const { return node_->base; }
  const std::string& path() const { return node_->path; }
  /// Loaded poset of a File leaf.
  const Poset& file_poset() const { return *node_->poset; }
  const PosetExpr& left() const { return *node_->left; }
  const PosetExpr& right() const { return *node_->right; }

  /// True when every leaf is one of the seven base posets.
  bool base_leaves_only() const;

 private:
  struct Node {
    Kind kind;
    BaseName base = BaseName::E;
    std::string path;
    std::shared_ptr<const Poset> poset;
    std::shared_ptr<const PosetExpr> left;
    std::shared_ptr<const PosetExpr> right;
  };
  explicit PosetExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Evaluates the tree. A gluing node whose operands lack the required
/// greatest/least element is rejected with its path from the root
/// (e.g. "root.left.right").
Poset eval_expr(const PosetExpr& expr);

/// Prints with `+` for the linear sum and `*` for gluing, adding parentheses
/// only where the default precedence would regroup.
std::string to_string(const PosetExpr& expr);

using PosetLoader = std::function<Poset(const std::string& path)>;

/// Grammar:
///   sum  := prod (('+' | '⊕') prod)*
///   prod := atom (('*' | '⊗') atom)*
///   atom := E | B | D3 | Q | R | S | S' | Sp | '@' path | '(' sum ')'
/// The result is evaluated once so a returned expression is always well-formed.
PosetExpr parse_expr(std::string_view text, const PosetLoader& loader = load_poset_file);

}  // namespace dchain
