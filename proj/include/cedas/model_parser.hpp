#pragma once

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "cedas/model.hpp"

namespace cedas {

namespace detail {

enum class Tok : uint8_t {
  End, Ident, Number, String, HashProperty,
  LBrace, RBrace, LParen, RParen, Semi, Comma, Arrow, At, Bang, Question,
  DotDot, Assign, Eq, Ne, Le, Ge, Lt, Gt, Plus, Minus, Star, Slash, Percent,
  AndAnd, OrOr,
  // keywords
  KwByte, KwInt, KwInput, KwChan, KwProcess, KwState, KwInit, KwTrans,
  KwGuard, KwSync, KwEffect, KwAp, KwLtl, KwTrue, KwFalse,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int64_t number = 0;
  SourceLoc loc;
};

class ModelLexer {
 public:
  explicit ModelLexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_ws();
      Token t;
      t.loc = {line_, col_};
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        t.kind = Tok::Number;
        t.text = std::string(src_.substr(start, pos_ - start));
        t.number = std::stoll(t.text);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          advance();
        t.text = std::string(src_.substr(start, pos_ - start));
        t.kind = keyword(t.text);
      } else if (c == '"') {
        advance();
        std::string s;
        while (pos_ < src_.size() && src_[pos_] != '"') {
          if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) advance();
          s += src_[pos_];
          advance();
        }
        if (pos_ >= src_.size()) throw ParseError(t.loc, "unterminated string literal");
        advance();
        t.kind = Tok::String;
        t.text = std::move(s);
      } else if (c == '#') {
        size_t start = pos_;
        advance();
        while (pos_ < src_.size() &&
               std::isalpha(static_cast<unsigned char>(src_[pos_])))
          advance();
        std::string word(src_.substr(start, pos_ - start));
        if (word != "#property") throw ParseError(t.loc, "unknown directive `" + word + "`");
        t.kind = Tok::HashProperty;
      } else {
        t.kind = punct(t.loc);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
    ++pos_;
  }

  void skip_ws() {
    for (;;) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
      if (pos_ + 1 < src_.size() && src_[pos_] == '/' && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      return;
    }
  }

  static Tok keyword(const std::string& w) {
    static const std::map<std::string, Tok, std::less<>> kw = {
        {"byte", Tok::KwByte}, {"int", Tok::KwInt}, {"input", Tok::KwInput},
        {"chan", Tok::KwChan}, {"process", Tok::KwProcess}, {"state", Tok::KwState},
        {"init", Tok::KwInit}, {"trans", Tok::KwTrans}, {"guard", Tok::KwGuard},
        {"sync", Tok::KwSync}, {"effect", Tok::KwEffect}, {"ap", Tok::KwAp},
        {"ltl", Tok::KwLtl}, {"true", Tok::KwTrue}, {"false", Tok::KwFalse},
    };
    auto it = kw.find(w);
    return it == kw.end() ? Tok::Ident : it->second;
  }

  Tok punct(SourceLoc loc) {
    auto two = [&](char a, char b) {
      return src_[pos_] == a && pos_ + 1 < src_.size() && src_[pos_ + 1] == b;
    };
    if (two('-', '>')) { advance(); advance(); return Tok::Arrow; }
    if (two('.', '.')) { advance(); advance(); return Tok::DotDot; }
    if (two('=', '=')) { advance(); advance(); return Tok::Eq; }
    if (two('!', '=')) { advance(); advance(); return Tok::Ne; }
    if (two('<', '=')) { advance(); advance(); return Tok::Le; }
    if (two('>', '=')) { advance(); advance(); return Tok::Ge; }
    if (two('&', '&')) { advance(); advance(); return Tok::AndAnd; }
    if (two('|', '|')) { advance(); advance(); return Tok::OrOr; }
    char c = src_[pos_];
    advance();
    switch (c) {
      case '{': return Tok::LBrace;
      case '}': return Tok::RBrace;
      case '(': return Tok::LParen;
      case ')': return Tok::RParen;
      case ';': return Tok::Semi;
      case ',': return Tok::Comma;
      case '@': return Tok::At;
      case '!': return Tok::Bang;
      case '?': return Tok::Question;
      case '=': return Tok::Assign;
      case '<': return Tok::Lt;
      case '>': return Tok::Gt;
      case '+': return Tok::Plus;
      case '-': return Tok::Minus;
      case '*': return Tok::Star;
      case '/': return Tok::Slash;
      case '%': return Tok::Percent;
      default:
        throw ParseError(loc, std::string("unexpected character `") + c + "`");
    }
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

/// Recursive-descent expression parser over the shared token stream.
/// Produces name-only references; resolution happens in a later pass.
class ExprParser {
 public:
  ExprParser(const std::vector<Token>& toks, size_t& pos) : toks_(toks), pos_(pos) {}

  ExprPtr parse() { return parse_or(); }

 private:
  const Token& cur() const { return toks_[pos_]; }
  bool eat(Tok k) {
    if (cur().kind != k) return false;
    ++pos_;
    return true;
  }

  ExprPtr binary(ExprOp op, ExprPtr l, ExprPtr r, SourceLoc loc) {
    auto e = std::make_unique<Expr>();
    e->op = op;
    e->loc = loc;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
  }

  ExprPtr parse_or() {
    auto l = parse_and();
    while (cur().kind == Tok::OrOr) {
      SourceLoc loc = cur().loc;
      ++pos_;
      l = binary(ExprOp::Or, std::move(l), parse_and(), loc);
    }
    return l;
  }
  ExprPtr parse_and() {
    auto l = parse_eq();
    while (cur().kind == Tok::AndAnd) {
      SourceLoc loc = cur().loc;
      ++pos_;
      l = binary(ExprOp::And, std::move(l), parse_eq(), loc);
    }
    return l;
  }
  ExprPtr parse_eq() {
    auto l = parse_rel();
    for (;;) {
      if (cur().kind == Tok::Eq || cur().kind == Tok::Ne) {
        ExprOp op = cur().kind == Tok::Eq ? ExprOp::Eq : ExprOp::Ne;
        SourceLoc loc = cur().loc;
        ++pos_;
        l = binary(op, std::move(l), parse_rel(), loc);
      } else {
        return l;
      }
    }
  }
  ExprPtr parse_rel() {
    auto l = parse_add();
    for (;;) {
      ExprOp op;
      switch (cur().kind) {
        case Tok::Lt: op = ExprOp::Lt; break;
        case Tok::Le: op = ExprOp::Le; break;
        case Tok::Gt: op = ExprOp::Gt; break;
        case Tok::Ge: op = ExprOp::Ge; break;
        default: return l;
      }
      SourceLoc loc = cur().loc;
      ++pos_;
      l = binary(op, std::move(l), parse_add(), loc);
    }
  }
  ExprPtr parse_add() {
    auto l = parse_mul();
    for (;;) {
      if (cur().kind == Tok::Plus || cur().kind == Tok::Minus) {
        ExprOp op = cur().kind == Tok::Plus ? ExprOp::Add : ExprOp::Sub;
        SourceLoc loc = cur().loc;
        ++pos_;
        l = binary(op, std::move(l), parse_mul(), loc);
      } else {
        return l;
      }
    }
  }
  ExprPtr parse_mul() {
    auto l = parse_unary();
    for (;;) {
      ExprOp op;
      switch (cur().kind) {
        case Tok::Star: op = ExprOp::Mul; break;
        case Tok::Slash: op = ExprOp::Div; break;
        case Tok::Percent: op = ExprOp::Mod; break;
        default: return l;
      }
      SourceLoc loc = cur().loc;
      ++pos_;
      l = binary(op, std::move(l), parse_unary(), loc);
    }
  }
  ExprPtr parse_unary() {
    if (cur().kind == Tok::Minus || cur().kind == Tok::Bang) {
      auto e = std::make_unique<Expr>();
      e->op = cur().kind == Tok::Minus ? ExprOp::Neg : ExprOp::Not;
      e->loc = cur().loc;
      ++pos_;
      e->lhs = parse_unary();
      return e;
    }
    return parse_primary();
  }
  ExprPtr parse_primary() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Number: {
        ++pos_;
        return make_literal(t.number, t.loc);
      }
      case Tok::KwTrue:
      case Tok::KwFalse: {
        auto e = std::make_unique<Expr>();
        e->op = ExprOp::BoolLit;
        e->value = t.kind == Tok::KwTrue ? 1 : 0;
        e->loc = t.loc;
        ++pos_;
        return e;
      }
      case Tok::LParen: {
        ++pos_;
        auto e = parse_or();
        if (!eat(Tok::RParen)) throw ParseError(cur().loc, "expected `)`");
        return e;
      }
      case Tok::Ident: {
        ++pos_;
        if (cur().kind == Tok::At) {
          ++pos_;
          if (cur().kind != Tok::Ident)
            throw ParseError(cur().loc, "expected location name after `@`");
          auto e = std::make_unique<Expr>();
          e->op = ExprOp::AtLoc;
          e->loc = t.loc;
          e->at_process_name = t.text;
          e->at_location_name = cur().text;
          ++pos_;
          return e;
        }
        auto e = std::make_unique<Expr>();
        e->op = ExprOp::Var;
        e->loc = t.loc;
        e->var.name = t.text;
        return e;
      }
      default:
        throw ParseError(t.loc, "expected expression, got `" + t.text + "`");
    }
  }

  const std::vector<Token>& toks_;
  size_t& pos_;
};

}  // namespace detail

/// Name-resolution and type-checking pass shared by model parsing and by
/// expressions arriving from the CLI or `#property` blocks.
class ExprResolver {
 public:
  explicit ExprResolver(const Model& m) : m_(m) {}

  /// scope_process = -1 restricts variable lookup to globals (property scope).
  void resolve(Expr& e, int scope_process, bool expect_bool) const {
    resolve_rec(e, scope_process);
    if (expect_bool != e.is_boolean()) {
      throw ParseError(e.loc, std::string("expected a ") +
                                  (expect_bool ? "Boolean" : "integer") +
                                  " expression: " + expr_to_string(e));
    }
  }

  /// Locates a writable variable for an effect target.
  VarRef resolve_target(const std::string& name, int scope_process, SourceLoc loc) const {
    if (auto v = lookup(name, scope_process)) return *v;
    throw ParseError(loc, "unresolved variable `" + name + "`");
  }

 private:
  std::optional<VarRef> lookup(const std::string& name, int scope_process) const {
    if (scope_process >= 0) {
      const auto& locals = m_.processes[static_cast<size_t>(scope_process)].locals;
      for (const auto& v : locals)
        if (v.name == name)
          return VarRef{false, v.slot, v.width, v.name};
    }
    for (const auto& v : m_.globals)
      if (v.name == name)
        return VarRef{v.is_input, v.slot, v.width, v.name};
    return std::nullopt;
  }

  void resolve_rec(Expr& e, int scope_process) const {
    switch (e.op) {
      case ExprOp::Literal:
      case ExprOp::BoolLit:
        return;
      case ExprOp::Var: {
        auto v = lookup(e.var.name, scope_process);
        if (!v) throw ParseError(e.loc, "unresolved variable `" + e.var.name + "`");
        e.var = *v;
        return;
      }
      case ExprOp::AtLoc: {
        for (size_t p = 0; p < m_.processes.size(); ++p) {
          if (m_.processes[p].name != e.at_process_name) continue;
          const auto& locs = m_.processes[p].locations;
          for (size_t l = 0; l < locs.size(); ++l) {
            if (locs[l] == e.at_location_name) {
              e.at_process = static_cast<int>(p);
              e.at_location = static_cast<int>(l);
              return;
            }
          }
          throw ParseError(e.loc, "process `" + e.at_process_name +
                                      "` has no location `" + e.at_location_name + "`");
        }
        throw ParseError(e.loc, "unresolved process `" + e.at_process_name + "`");
      }
      case ExprOp::Not:
        resolve_rec(*e.lhs, scope_process);
        require_bool(*e.lhs);
        return;
      case ExprOp::Neg:
        resolve_rec(*e.lhs, scope_process);
        require_int(*e.lhs);
        return;
      case ExprOp::And:
      case ExprOp::Or:
        resolve_rec(*e.lhs, scope_process);
        resolve_rec(*e.rhs, scope_process);
        require_bool(*e.lhs);
        require_bool(*e.rhs);
        return;
      default:  // arithmetic and comparisons take integer operands
        resolve_rec(*e.lhs, scope_process);
        resolve_rec(*e.rhs, scope_process);
        require_int(*e.lhs);
        require_int(*e.rhs);
        return;
    }
  }

  static void require_bool(const Expr& e) {
    if (!e.is_boolean())
      throw ParseError(e.loc, "expected a Boolean operand: " + expr_to_string(e));
  }
  static void require_int(const Expr& e) {
    if (e.is_boolean())
      throw ParseError(e.loc, "expected an integer operand: " + expr_to_string(e));
  }

  const Model& m_;
};

namespace detail {

class ModelParser {
 public:
  explicit ModelParser(std::string_view text) : toks_(ModelLexer(text).run()) {}

  Model parse(std::string name) {
    m_.name = std::move(name);
    while (cur().kind != Tok::End) parse_item();
    analyze();
    return std::move(m_);
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& next() const { return toks_[pos_ + 1]; }
  Token expect(Tok k, const char* what) {
    if (cur().kind != k)
      throw ParseError(cur().loc, std::string("expected ") + what + ", got `" + cur().text + "`");
    Token t = cur();
    ++pos_;
    return t;
  }

  void parse_item() {
    switch (cur().kind) {
      case Tok::KwInput:
      case Tok::KwByte:
      case Tok::KwInt:
        m_.globals.push_back(parse_var_decl(/*allow_input=*/true));
        return;
      case Tok::KwChan: {
        SourceLoc loc = cur().loc;
        ++pos_;
        Token id = expect(Tok::Ident, "channel name");
        expect(Tok::Semi, "`;`");
        m_.channels.push_back({id.text, loc});
        return;
      }
      case Tok::KwProcess:
        parse_process();
        return;
      case Tok::HashProperty:
        parse_property();
        return;
      default:
        throw ParseError(cur().loc, "expected declaration, got `" + cur().text + "`");
    }
  }

  VarDecl parse_var_decl(bool allow_input) {
    VarDecl d;
    d.loc = cur().loc;
    if (cur().kind == Tok::KwInput) {
      if (!allow_input)
        throw ParseError(cur().loc, "input variables may only be declared globally");
      d.is_input = true;
      ++pos_;
    }
    if (cur().kind == Tok::KwByte) d.width = Width::Byte;
    else if (cur().kind == Tok::KwInt) d.width = Width::Int;
    else throw ParseError(cur().loc, "expected `byte` or `int`");
    ++pos_;
    d.name = expect(Tok::Ident, "variable name").text;
    expect(Tok::Assign, "`=`");
    int64_t first = parse_const_expr();
    if (d.is_input) {
      expect(Tok::DotDot, "`..` in input range");
      int64_t second = parse_const_expr();
      d.lo = first;
      d.hi = second;
    } else {
      d.init = first;
    }
    expect(Tok::Semi, "`;`");
    return d;
  }

  int64_t parse_const_expr() {
    SourceLoc loc = cur().loc;
    ExprParser ep(toks_, pos_);
    ExprPtr e = ep.parse();
    return fold_const(*e, loc);
  }

  int64_t fold_const(const Expr& e, SourceLoc loc) {
    if (e.op == ExprOp::Var || e.op == ExprOp::AtLoc)
      throw ParseError(loc, "constant expression required");
    if (e.lhs && (e.lhs->op == ExprOp::Var || e.lhs->op == ExprOp::AtLoc))
      throw ParseError(loc, "constant expression required");
    if (e.rhs && (e.rhs->op == ExprOp::Var || e.rhs->op == ExprOp::AtLoc))
      throw ParseError(loc, "constant expression required");
    EvalContext empty{};
    return eval_int(e, empty);
  }

  void parse_process() {
    ProcessDef p;
    p.loc = cur().loc;
    ++pos_;
    p.name = expect(Tok::Ident, "process name").text;
    expect(Tok::LBrace, "`{`");
    while (cur().kind == Tok::KwByte || cur().kind == Tok::KwInt || cur().kind == Tok::KwInput)
      p.locals.push_back(parse_var_decl(/*allow_input=*/false));
    // state list
    expect(Tok::KwState, "`state`");
    for (;;) {
      p.locations.push_back(expect(Tok::Ident, "location name").text);
      if (!try_eat(Tok::Comma)) break;
    }
    expect(Tok::Semi, "`;`");
    expect(Tok::KwInit, "`init`");
    Token init = expect(Tok::Ident, "initial location");
    expect(Tok::Semi, "`;`");
    pending_inits_.push_back(init);
    if (cur().kind == Tok::KwTrans) {
      ++pos_;
      for (;;) {
        p.transitions.push_back(parse_transition(p));
        if (!try_eat(Tok::Comma)) break;
      }
      expect(Tok::Semi, "`;`");
    }
    expect(Tok::RBrace, "`}`");
    m_.processes.push_back(std::move(p));
  }

  TransitionDef parse_transition(const ProcessDef& p) {
    // `p` is not yet in m_.processes; its future index is m_.processes.size().
    TransitionDef t;
    t.loc = cur().loc;
    Token from = expect(Tok::Ident, "source location");
    expect(Tok::Arrow, "`->`");
    Token to = expect(Tok::Ident, "target location");
    t.from = location_index(p, from);
    t.to = location_index(p, to);
    expect(Tok::LBrace, "`{`");
    bool saw_guard = false, saw_sync = false, saw_effect = false;
    while (cur().kind != Tok::RBrace) {
      switch (cur().kind) {
        case Tok::KwGuard: {
          if (saw_guard) throw ParseError(cur().loc, "duplicate `guard`");
          saw_guard = true;
          ++pos_;
          ExprParser ep(toks_, pos_);
          t.guard = ep.parse();
          expect(Tok::Semi, "`;`");
          break;
        }
        case Tok::KwSync: {
          if (saw_sync) throw ParseError(cur().loc, "duplicate `sync`");
          saw_sync = true;
          ++pos_;
          Token ch = expect(Tok::Ident, "channel name");
          SyncDir dir;
          if (try_eat(Tok::Bang)) dir = SyncDir::Send;
          else if (try_eat(Tok::Question)) dir = SyncDir::Recv;
          else throw ParseError(cur().loc, "expected `!` or `?` after channel name");
          expect(Tok::Semi, "`;`");
          pending_syncs_.push_back({m_.processes.size(), p.transitions.size(), ch});
          t.sync = SyncRef{-1, dir};
          break;
        }
        case Tok::KwEffect: {
          if (saw_effect) throw ParseError(cur().loc, "duplicate `effect`");
          saw_effect = true;
          ++pos_;
          for (;;) {
            Assignment a;
            Token target = expect(Tok::Ident, "assignment target");
            a.loc = target.loc;
            a.target.name = target.text;
            expect(Tok::Assign, "`=`");
            ExprParser ep(toks_, pos_);
            a.value = ep.parse();
            t.effects.push_back(std::move(a));
            if (!try_eat(Tok::Comma)) break;
          }
          expect(Tok::Semi, "`;`");
          break;
        }
        default:
          throw ParseError(cur().loc, "expected `guard`, `sync` or `effect`");
      }
    }
    ++pos_;  // RBrace
    return t;
  }

  static int location_index(const ProcessDef& p, const Token& t) {
    for (size_t i = 0; i < p.locations.size(); ++i)
      if (p.locations[i] == t.text) return static_cast<int>(i);
    throw ParseError(t.loc, "unknown location `" + t.text + "` in process `" + p.name + "`");
  }

  void parse_property() {
    SourceLoc loc = cur().loc;
    ++pos_;
    if (try_eat(Tok::KwAp)) {
      ApBinding b;
      b.loc = loc;
      b.name = expect(Tok::Ident, "proposition name").text;
      expect(Tok::Assign, "`=`");
      ExprParser ep(toks_, pos_);
      b.expr = ep.parse();
      expect(Tok::Semi, "`;`");
      m_.ap_bindings.push_back(std::move(b));
    } else if (try_eat(Tok::KwLtl)) {
      Token s = expect(Tok::String, "quoted LTL formula");
      expect(Tok::Semi, "`;`");
      if (m_.ltl_text)
        throw ParseError(loc, "duplicate `#property ltl` block");
      m_.ltl_text = s.text;
    } else {
      throw ParseError(cur().loc, "expected `ap` or `ltl` after `#property`");
    }
  }

  bool try_eat(Tok k) {
    if (cur().kind != k) return false;
    ++pos_;
    return true;
  }

  // ---- semantic analysis -------------------------------------------------

  void analyze() {
    if (m_.processes.empty())
      throw ParseError({1, 1}, "a model needs at least one process");
    check_names();
    assign_slots();
    resolve_inits();
    resolve_syncs();
    ExprResolver res(m_);
    for (size_t pi = 0; pi < m_.processes.size(); ++pi) {
      auto& p = m_.processes[pi];
      for (auto& t : p.transitions) {
        if (t.guard) {
          res.resolve(*t.guard, static_cast<int>(pi), /*expect_bool=*/true);
          if (mentions_location(*t.guard))
            m_.warnings.push_back({t.loc,
                "guard in process `" + p.name + "` reads a process location"});
        }
        for (auto& a : t.effects) {
          a.target = res.resolve_target(a.target.name, static_cast<int>(pi), a.loc);
          res.resolve(*a.value, static_cast<int>(pi), /*expect_bool=*/false);
        }
      }
    }
    for (auto& b : m_.ap_bindings)
      res.resolve(*b.expr, -1, /*expect_bool=*/true);
  }

  void check_names() {
    std::set<std::string> vars, chans, procs, aps;
    for (const auto& g : m_.globals) {
      if (!vars.insert(g.name).second)
        throw ParseError(g.loc, "duplicate variable `" + g.name + "`");
      check_range(g);
    }
    for (const auto& c : m_.channels) {
      if (vars.count(c.name) || !chans.insert(c.name).second)
        throw ParseError(c.loc, "duplicate identifier `" + c.name + "`");
    }
    for (const auto& p : m_.processes) {
      if (!procs.insert(p.name).second || vars.count(p.name) || chans.count(p.name))
        throw ParseError(p.loc, "duplicate identifier `" + p.name + "`");
      std::set<std::string> locals = vars, locs;
      for (const auto& v : p.locals) {
        if (!locals.insert(v.name).second)
          throw ParseError(v.loc, "duplicate variable `" + v.name + "`");
        check_range(v);
      }
      for (const auto& l : p.locations)
        if (!locs.insert(l).second)
          throw ParseError(p.loc, "duplicate location `" + l + "` in process `" + p.name + "`");
      if (p.locations.size() > 255)
        throw ParseError(p.loc, "process `" + p.name + "` has more than 255 locations");
    }
    for (const auto& b : m_.ap_bindings)
      if (!aps.insert(b.name).second)
        throw ParseError(b.loc, "duplicate proposition `" + b.name + "`");
  }

  void check_range(const VarDecl& d) {
    int64_t max = width_mask(d.width);
    if (d.is_input) {
      if (d.lo < 0 || d.lo > d.hi || d.hi > max)
        throw ParseError(d.loc, "invalid input range " + std::to_string(d.lo) + ".." +
                                    std::to_string(d.hi) + " for `" + d.name + "` (width " +
                                    std::to_string(static_cast<int>(d.width)) + ")");
    } else {
      if (d.init < 0 || d.init > max)
        throw ParseError(d.loc, "initial value " + std::to_string(d.init) +
                                    " does not fit `" + d.name + "`");
    }
  }

  void assign_slots() {
    for (auto& g : m_.globals) {
      if (g.is_input) {
        g.slot = static_cast<int>(m_.input_layout.size());
        m_.input_layout.push_back({g.name, g.width, 0, g.lo, g.hi});
      } else {
        g.slot = static_cast<int>(m_.explicit_layout.size());
        m_.explicit_layout.push_back({g.name, g.width, g.init, 0, 0});
      }
    }
    for (auto& p : m_.processes) {
      for (auto& v : p.locals) {
        v.slot = static_cast<int>(m_.explicit_layout.size());
        m_.explicit_layout.push_back({p.name + "." + v.name, v.width, v.init, 0, 0});
      }
    }
  }

  void resolve_inits() {
    for (size_t i = 0; i < m_.processes.size(); ++i)
      m_.processes[i].initial = location_index(m_.processes[i], pending_inits_[i]);
  }

  void resolve_syncs() {
    for (auto& [pi, ti, ch] : pending_syncs_) {
      int idx = -1;
      for (size_t i = 0; i < m_.channels.size(); ++i)
        if (m_.channels[i].name == ch.text) idx = static_cast<int>(i);
      if (idx < 0) throw ParseError(ch.loc, "undeclared channel `" + ch.text + "`");
      m_.processes[pi].transitions[ti].sync->channel = idx;
    }
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  Model m_;
  std::vector<Token> pending_inits_;
  std::vector<std::tuple<size_t, size_t, Token>> pending_syncs_;
};

}  // namespace detail

/// Parses and semantically analyzes a model. Throws ParseError with a
/// line:column position on any syntax, resolution or typing problem.
inline Model parse_model(std::string_view text, std::string name = "model") {
  return detail::ModelParser(text).parse(std::move(name));
}

/// Parses a standalone Boolean expression in property scope (globals and
/// location predicates only). Used for `--ap name=expr` bindings.
inline ExprPtr parse_property_expr(std::string_view text, const Model& m) {
  auto toks = detail::ModelLexer(text).run();
  size_t pos = 0;
  detail::ExprParser ep(toks, pos);
  ExprPtr e = ep.parse();
  if (toks[pos].kind != detail::Tok::End)
    throw ParseError(toks[pos].loc, "trailing input after expression");
  ExprResolver(m).resolve(*e, -1, /*expect_bool=*/true);
  return e;
}

}  // namespace cedas
