#include "dchain/expr.hpp"

#include "dchain/error.hpp"

#include <cctype>

namespace dchain {

PosetExpr PosetExpr::base(BaseName name) {
  return PosetExpr(std::make_shared<const Node>(Node{Kind::Base, name, {}, nullptr, nullptr, nullptr}));
}

PosetExpr PosetExpr::file(std::string path, Poset poset) {
  return PosetExpr(std::make_shared<const Node>(
      Node{Kind::File, BaseName::E, std::move(path), std::make_shared<const Poset>(std::move(poset)), nullptr, nullptr}));
}

PosetExpr PosetExpr::oplus(PosetExpr lower, PosetExpr upper) {
  return PosetExpr(std::make_shared<const Node>(Node{Kind::Oplus, BaseName::E, {}, nullptr,
                                                     std::make_shared<const PosetExpr>(std::move(lower)),
                                                     std::make_shared<const PosetExpr>(std::move(upper))}));
}

PosetExpr PosetExpr::otimes(PosetExpr lower, PosetExpr upper) {
  return PosetExpr(std::make_shared<const Node>(Node{Kind::Otimes, BaseName::E, {}, nullptr,
                                                     std::make_shared<const PosetExpr>(std::move(lower)),
                                                     std::make_shared<const PosetExpr>(std::move(upper))}));
}

bool PosetExpr::base_leaves_only() const {
  switch (kind()) {
    case Kind::Base: return true;
    case Kind::File: return false;
    default: return left().base_leaves_only() && right().base_leaves_only();
  }
}

namespace {

Poset eval_at(const PosetExpr& e, const std::string& path) {
  switch (e.kind()) {
    case PosetExpr::Kind::Base: return base_poset(e.base_name());
    case PosetExpr::Kind::File: return e.file_poset();
    case PosetExpr::Kind::Oplus: return oplus(eval_at(e.left(), path + ".left"), eval_at(e.right(), path + ".right"));
    case PosetExpr::Kind::Otimes: {
      Poset lower = eval_at(e.left(), path + ".left");
      Poset upper = eval_at(e.right(), path + ".right");
      if (!greatest_element(lower))
        throw Error("otimes at " + path + ": left operand '" + to_string(e.left()) + "' has no greatest element");
      if (!least_element(upper))
        throw Error("otimes at " + path + ": right operand '" + to_string(e.right()) + "' has no least element");
      return otimes(lower, upper);
    }
  }
  throw Error("corrupt expression node");
}

// Binding strength: 1 for sums, 2 for products, 3 for atoms.
int strength(const PosetExpr& e) {
  switch (e.kind()) {
    case PosetExpr::Kind::Oplus: return 1;
    case PosetExpr::Kind::Otimes: return 2;
    default: return 3;
  }
}

std::string print(const PosetExpr& e, int min_strength) {
  std::string s;
  switch (e.kind()) {
    case PosetExpr::Kind::Base: return std::string(base_name_string(e.base_name()));
    case PosetExpr::Kind::File: return "@" + e.path();
    case PosetExpr::Kind::Oplus: s = print(e.left(), 1) + " + " + print(e.right(), 2); break;
    case PosetExpr::Kind::Otimes: s = print(e.left(), 2) + " * " + print(e.right(), 3); break;
  }
  return strength(e) < min_strength ? "(" + s + ")" : s;
}

class Parser {
 public:
  Parser(std::string_view text, const PosetLoader& loader) : text_(text), loader_(loader) {}

  PosetExpr parse() {
    PosetExpr e = parse_sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  PosetExpr parse_sum() {
    PosetExpr e = parse_product();
    while (accept("+") || accept("⊕")) e = PosetExpr::oplus(std::move(e), parse_product());
    return e;
  }

  PosetExpr parse_product() {
    PosetExpr e = parse_atom();
    while (accept("*") || accept("⊗")) e = PosetExpr::otimes(std::move(e), parse_atom());
    return e;
  }

  PosetExpr parse_atom() {
    skip_space();
    if (pos_ == text_.size()) fail("unexpected end of expression");
    if (accept("(")) {
      PosetExpr e = parse_sum();
      if (!accept(")")) fail("expected ')'");
      return e;
    }
    if (accept("@")) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != ')' &&
             text_[pos_] != '+' && text_[pos_] != '*')
        ++pos_;
      if (pos_ == start) fail("expected a file path after '@'");
      std::string path(text_.substr(start, pos_ - start));
      return PosetExpr::file(path, loader_(path));
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '\'') ++pos_;
    std::string_view token = text_.substr(start, pos_ - start);
    if (token.empty()) fail("expected a poset name");
    auto name = parse_base_name(token);
    if (!name) {
      pos_ = start;
      fail("unknown poset name '" + std::string(token) + "'");
    }
    return PosetExpr::base(*name);
  }

  std::string_view text_;
  const PosetLoader& loader_;
  std::size_t pos_ = 0;
};

}  // namespace

Poset eval_expr(const PosetExpr& expr) { return eval_at(expr, "root"); }

std::string to_string(const PosetExpr& expr) { return print(expr, 1); }

PosetExpr parse_expr(std::string_view text, const PosetLoader& loader) {
  PosetExpr e = Parser(text, loader).parse();
  eval_expr(e);
  return e;
}

}  // namespace dchain
