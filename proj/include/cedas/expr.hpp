#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <sstream>
#include <string>

#include "cedas/diagnostics.hpp"

namespace cedas {

/// Values of model variables as stored in a state. Widths are 8 or 16 bits;
/// a 16-bit cell holds either.
using Value = uint16_t;

enum class Width : uint8_t { Byte = 8, Int = 16 };

inline uint32_t width_mask(Width w) { return w == Width::Byte ? 0xffu : 0xffffu; }

/// Truncate a wide result to the declared width (two's complement).
/// Applied only when a value is stored by an assignment; expression
/// evaluation itself runs in the wide signed domain.
inline Value wrap_width(int64_t v, Width w) {
  return static_cast<Value>(static_cast<uint64_t>(v) & width_mask(w));
}

enum class ExprOp : uint8_t {
  Literal, BoolLit, Var, AtLoc,
  Neg, Not,
  Add, Sub, Mul, Div, Mod,
  Lt, Le, Gt, Ge, Eq, Ne,
  And, Or,
};

/// Reference to a declared variable, resolved during semantic analysis.
struct VarRef {
  bool is_input = false;
  int slot = -1;  // index into the explicit or input layout
  Width width = Width::Byte;
  std::string name;
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  ExprOp op;
  SourceLoc loc;
  int64_t value = 0;  // Literal
  VarRef var;         // Var
  int at_process = -1;  // AtLoc
  int at_location = -1;
  std::string at_process_name, at_location_name;
  ExprPtr lhs, rhs;

  bool is_boolean() const {
    switch (op) {
      case ExprOp::BoolLit:
      case ExprOp::Not: case ExprOp::AtLoc:
      case ExprOp::Lt: case ExprOp::Le: case ExprOp::Gt: case ExprOp::Ge:
      case ExprOp::Eq: case ExprOp::Ne:
      case ExprOp::And: case ExprOp::Or:
        return true;
      default:
        return false;
    }
  }
};

inline ExprPtr make_literal(int64_t v, SourceLoc loc = {}) {
  auto e = std::make_unique<Expr>();
  e->op = ExprOp::Literal;
  e->value = v;
  e->loc = loc;
  return e;
}

inline ExprPtr clone_expr(const Expr& e) {
  auto c = std::make_unique<Expr>();
  c->op = e.op;
  c->loc = e.loc;
  c->value = e.value;
  c->var = e.var;
  c->at_process = e.at_process;
  c->at_location = e.at_location;
  c->at_process_name = e.at_process_name;
  c->at_location_name = e.at_location_name;
  if (e.lhs) c->lhs = clone_expr(*e.lhs);
  if (e.rhs) c->rhs = clone_expr(*e.rhs);
  return c;
}

/// Everything an expression can read: the location of every process, the
/// explicit variable cells, and one evaluation of the input variables.
struct EvalContext {
  std::span<const Value> locations;
  std::span<const Value> explicits;
  std::span<const Value> inputs;
};

namespace detail {

inline int expr_precedence(ExprOp op) {
  switch (op) {
    case ExprOp::Or: return 1;
    case ExprOp::And: return 2;
    case ExprOp::Eq: case ExprOp::Ne: return 3;
    case ExprOp::Lt: case ExprOp::Le: case ExprOp::Gt: case ExprOp::Ge: return 4;
    case ExprOp::Add: case ExprOp::Sub: return 5;
    case ExprOp::Mul: case ExprOp::Div: case ExprOp::Mod: return 6;
    case ExprOp::Neg: case ExprOp::Not: return 7;
    default: return 8;
  }
}

inline const char* expr_op_token(ExprOp op) {
  switch (op) {
    case ExprOp::Add: return "+";
    case ExprOp::Sub: return "-";
    case ExprOp::Mul: return "*";
    case ExprOp::Div: return "/";
    case ExprOp::Mod: return "%";
    case ExprOp::Lt: return "<";
    case ExprOp::Le: return "<=";
    case ExprOp::Gt: return ">";
    case ExprOp::Ge: return ">=";
    case ExprOp::Eq: return "==";
    case ExprOp::Ne: return "!=";
    case ExprOp::And: return "&&";
    case ExprOp::Or: return "||";
    default: return "?";
  }
}

inline void print_expr_rec(const Expr& e, std::ostream& os, int parent_prec) {
  int prec = expr_precedence(e.op);
  switch (e.op) {
    case ExprOp::Literal: os << e.value; return;
    case ExprOp::BoolLit: os << (e.value ? "true" : "false"); return;
    case ExprOp::Var: os << e.var.name; return;
    case ExprOp::AtLoc: os << e.at_process_name << '@' << e.at_location_name; return;
    case ExprOp::Neg:
    case ExprOp::Not:
      os << (e.op == ExprOp::Neg ? '-' : '!');
      print_expr_rec(*e.lhs, os, prec);
      return;
    default: {
      bool parens = prec < parent_prec;
      if (parens) os << '(';
      print_expr_rec(*e.lhs, os, prec);
      os << ' ' << expr_op_token(e.op) << ' ';
      // left-associative chains reprint without parens on the left only
      print_expr_rec(*e.rhs, os, prec + 1);
      if (parens) os << ')';
      return;
    }
  }
}

}  // namespace detail

inline std::string expr_to_string(const Expr& e) {
  std::ostringstream os;
  detail::print_expr_rec(e, os, 0);
  return os.str();
}

inline int64_t eval_int(const Expr& e, const EvalContext& ctx);

inline bool eval_bool(const Expr& e, const EvalContext& ctx) {
  switch (e.op) {
    case ExprOp::BoolLit: return e.value != 0;
    case ExprOp::AtLoc:
      return ctx.locations[static_cast<size_t>(e.at_process)] ==
             static_cast<Value>(e.at_location);
    case ExprOp::Not: return !eval_bool(*e.lhs, ctx);
    case ExprOp::And: return eval_bool(*e.lhs, ctx) && eval_bool(*e.rhs, ctx);
    case ExprOp::Or: return eval_bool(*e.lhs, ctx) || eval_bool(*e.rhs, ctx);
    case ExprOp::Lt: return eval_int(*e.lhs, ctx) < eval_int(*e.rhs, ctx);
    case ExprOp::Le: return eval_int(*e.lhs, ctx) <= eval_int(*e.rhs, ctx);
    case ExprOp::Gt: return eval_int(*e.lhs, ctx) > eval_int(*e.rhs, ctx);
    case ExprOp::Ge: return eval_int(*e.lhs, ctx) >= eval_int(*e.rhs, ctx);
    case ExprOp::Eq: return eval_int(*e.lhs, ctx) == eval_int(*e.rhs, ctx);
    case ExprOp::Ne: return eval_int(*e.lhs, ctx) != eval_int(*e.rhs, ctx);
    default:
      throw Error("expression is not Boolean: " + expr_to_string(e));
  }
}

/// Arithmetic runs in int64, wide enough that no 16-bit operand chain of the
/// grammar can overflow an intermediate; wraparound happens at store time.
inline int64_t eval_int(const Expr& e, const EvalContext& ctx) {
  switch (e.op) {
    case ExprOp::Literal: return e.value;
    case ExprOp::Var:
      return e.var.is_input ? ctx.inputs[static_cast<size_t>(e.var.slot)]
                            : ctx.explicits[static_cast<size_t>(e.var.slot)];
    case ExprOp::Neg: return -eval_int(*e.lhs, ctx);
    case ExprOp::Add: return eval_int(*e.lhs, ctx) + eval_int(*e.rhs, ctx);
    case ExprOp::Sub: return eval_int(*e.lhs, ctx) - eval_int(*e.rhs, ctx);
    case ExprOp::Mul: return eval_int(*e.lhs, ctx) * eval_int(*e.rhs, ctx);
    case ExprOp::Div: {
      int64_t d = eval_int(*e.rhs, ctx);
      if (d == 0) throw EvalError("division by zero", expr_to_string(e));
      return eval_int(*e.lhs, ctx) / d;
    }
    case ExprOp::Mod: {
      int64_t d = eval_int(*e.rhs, ctx);
      if (d == 0) throw EvalError("modulo by zero", expr_to_string(e));
      return eval_int(*e.lhs, ctx) % d;
    }
    default:
      throw Error("expression is not integer: " + expr_to_string(e));
  }
}

/// True when the expression reads any input variable.
inline bool mentions_input(const Expr& e) {
  if (e.op == ExprOp::Var) return e.var.is_input;
  if (e.lhs && mentions_input(*e.lhs)) return true;
  if (e.rhs && mentions_input(*e.rhs)) return true;
  return false;
}

inline bool mentions_location(const Expr& e) {
  if (e.op == ExprOp::AtLoc) return true;
  if (e.lhs && mentions_location(*e.lhs)) return true;
  if (e.rhs && mentions_location(*e.rhs)) return true;
  return false;
}

}  // namespace cedas
