#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cedas/expr.hpp"

namespace cedas {

/// Formulae are stored desugared: only True, AP, Not, And, Next and Until
/// appear. Derived operators (F, G, or, implies, false) are rewritten by the
/// parser and the constructors below.
enum class LtlOp : uint8_t { True, Ap, Not, And, Next, Until };

struct LtlFormula;
using LtlPtr = std::shared_ptr<const LtlFormula>;

struct LtlFormula {
  LtlOp op;
  int ap = -1;
  LtlPtr lhs, rhs;
};

inline LtlPtr ltl_true() {
  static const LtlPtr t = std::make_shared<LtlFormula>(LtlFormula{LtlOp::True, -1, nullptr, nullptr});
  return t;
}
inline LtlPtr ltl_ap(int id) {
  return std::make_shared<LtlFormula>(LtlFormula{LtlOp::Ap, id, nullptr, nullptr});
}

inline bool is_true(const LtlPtr& f) { return f->op == LtlOp::True; }
inline bool is_false(const LtlPtr& f) {
  return f->op == LtlOp::Not && is_true(f->lhs);
}

/// Negation with double-negation removal.
inline LtlPtr ltl_not(LtlPtr f) {
  if (f->op == LtlOp::Not) return f->lhs;
  return std::make_shared<LtlFormula>(LtlFormula{LtlOp::Not, -1, std::move(f), nullptr});
}
inline LtlPtr ltl_false() { return ltl_not(ltl_true()); }

/// Conjunction with constant folding.
inline LtlPtr ltl_and(LtlPtr a, LtlPtr b) {
  if (is_true(a)) return b;
  if (is_true(b)) return a;
  if (is_false(a)) return a;
  if (is_false(b)) return b;
  return std::make_shared<LtlFormula>(LtlFormula{LtlOp::And, -1, std::move(a), std::move(b)});
}
inline LtlPtr ltl_next(LtlPtr f) {
  return std::make_shared<LtlFormula>(LtlFormula{LtlOp::Next, -1, std::move(f), nullptr});
}
inline LtlPtr ltl_until(LtlPtr a, LtlPtr b) {
  return std::make_shared<LtlFormula>(LtlFormula{LtlOp::Until, -1, std::move(a), std::move(b)});
}

// Derived forms.
inline LtlPtr ltl_or(LtlPtr a, LtlPtr b) { return ltl_not(ltl_and(ltl_not(a), ltl_not(b))); }
inline LtlPtr ltl_implies(LtlPtr a, LtlPtr b) { return ltl_not(ltl_and(std::move(a), ltl_not(b))); }
inline LtlPtr ltl_finally(LtlPtr f) { return ltl_until(ltl_true(), std::move(f)); }
inline LtlPtr ltl_globally(LtlPtr f) { return ltl_not(ltl_finally(ltl_not(std::move(f)))); }

/// The checker always translates the negation of the requested property.
inline LtlPtr negate(LtlPtr f) { return ltl_not(std::move(f)); }

struct AtomicProposition {
  int id = -1;
  std::string name;
  ExprPtr expr;  // Boolean over globals and location predicates
};

inline std::string print_ltl(const LtlFormula& f,
                             const std::vector<AtomicProposition>* aps = nullptr) {
  auto name = [&](int id) {
    if (aps) return (*aps)[static_cast<size_t>(id)].name;
    return "p" + std::to_string(id);
  };
  switch (f.op) {
    case LtlOp::True: return "true";
    case LtlOp::Ap: return name(f.ap);
    case LtlOp::Not: return "!(" + print_ltl(*f.lhs, aps) + ")";
    case LtlOp::And: return "(" + print_ltl(*f.lhs, aps) + " && " + print_ltl(*f.rhs, aps) + ")";
    case LtlOp::Next: return "X (" + print_ltl(*f.lhs, aps) + ")";
    case LtlOp::Until: return "(" + print_ltl(*f.lhs, aps) + " U " + print_ltl(*f.rhs, aps) + ")";
  }
  return "?";
}

inline bool ltl_equal(const LtlFormula& a, const LtlFormula& b) {
  if (a.op != b.op || a.ap != b.ap) return false;
  if (!!a.lhs != !!b.lhs || !!a.rhs != !!b.rhs) return false;
  if (a.lhs && !ltl_equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !ltl_equal(*a.rhs, *b.rhs)) return false;
  return true;
}

namespace detail {

/// LTL concrete syntax: `G F X U ! && || ->`, parentheses, `true`, `false`
/// and named propositions. Unary operators bind tightest, then U
/// (right-associative), then `&&`, `||` and `->`.
class LtlParser {
 public:
  LtlParser(std::string_view text, const std::map<std::string, int>& bindings)
      : text_(text), bindings_(bindings) {}

  LtlPtr parse() {
    auto f = parse_implies();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError({1, static_cast<int>(pos_ + 1)},
                       "trailing input in LTL formula: `" + std::string(text_.substr(pos_)) + "`");
    return f;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_).starts_with(tok)) {
      // a keyword must not run into an identifier character
      if (std::isalpha(static_cast<unsigned char>(tok[0]))) {
        size_t after = pos_ + tok.size();
        if (after < text_.size() &&
            (std::isalnum(static_cast<unsigned char>(text_[after])) || text_[after] == '_'))
          return false;
      }
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  LtlPtr parse_implies() {
    auto l = parse_or();
    if (eat("->")) return ltl_implies(std::move(l), parse_implies());
    return l;
  }
  LtlPtr parse_or() {
    auto l = parse_and();
    while (eat("||")) l = ltl_or(std::move(l), parse_and());
    return l;
  }
  LtlPtr parse_and() {
    auto l = parse_until();
    while (eat("&&")) l = ltl_and(std::move(l), parse_until());
    return l;
  }
  LtlPtr parse_until() {
    auto l = parse_unary();
    if (eat("U")) return ltl_until(std::move(l), parse_until());
    return l;
  }
  LtlPtr parse_unary() {
    if (eat("!")) return ltl_not(parse_unary());
    if (eat("X")) return ltl_next(parse_unary());
    if (eat("F")) return ltl_finally(parse_unary());
    if (eat("G")) return ltl_globally(parse_unary());
    return parse_atom();
  }
  LtlPtr parse_atom() {
    skip_ws();
    if (eat("(")) {
      auto f = parse_implies();
      if (!eat(")"))
        throw ParseError({1, static_cast<int>(pos_ + 1)}, "expected `)` in LTL formula");
      return f;
    }
    if (eat("true")) return ltl_true();
    if (eat("false")) return ltl_false();
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_)
      throw ParseError({1, static_cast<int>(pos_ + 1)}, "expected LTL atom");
    std::string name(text_.substr(start, pos_ - start));
    auto it = bindings_.find(name);
    if (it == bindings_.end())
      throw ParseError({1, static_cast<int>(start + 1)},
                       "unbound proposition `" + name + "`");
    return ltl_ap(it->second);
  }

  std::string_view text_;
  const std::map<std::string, int>& bindings_;
  size_t pos_ = 0;
};

}  // namespace detail

/// Parses and desugars an LTL formula. Every proposition name must appear in
/// `bindings` (name to proposition id).
inline LtlPtr parse_ltl(std::string_view text, const std::map<std::string, int>& bindings) {
  return detail::LtlParser(text, bindings).parse();
}

}  // namespace cedas
