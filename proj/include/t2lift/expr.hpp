#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "t2lift/errors.hpp"
#include "t2lift/rational.hpp"

namespace t2lift {

namespace detail {
struct RatFunc;
}

enum class ExprKind { Constant, Variable, Sum, Product, Power, Call };
enum class CallKind { Sin, Cos, Exp };

const char* call_name(CallKind k);

class Expr;

// Coordinate name -> value binding for numeric evaluation.
using Point = std::map<std::string, double>;

namespace detail {

struct ExprNode {
  ExprKind kind = ExprKind::Constant;
  Rational value;           // Constant
  std::string name;         // Variable
  CallKind call = CallKind::Sin;
  int exponent = 1;         // Power
  std::vector<Expr> kids;   // Sum/Product operands; Power base; Call argument
  bool canonical = false;

  // Canonical form, computed once on demand and shared by all users of this
  // node (nodes are immutable and may be reachable from several expressions).
  mutable std::once_flag rat_once;
  mutable std::shared_ptr<const RatFunc> rat;
};

}  // namespace detail

// Immutable symbolic expression over named real coordinates: exact rational
// constants, variables, sums, products, integer powers, and the opaque
// analytic atoms sin/cos/exp. Cheap to copy (shared tree).
class Expr {
public:
  Expr();  // the constant 0

  static Expr constant(Rational value);
  static Expr integer(long value);
  static Expr variable(std::string name);

  ExprKind kind() const { return node_->kind; }
  const Rational& constant_value() const;    // pre: kind() == Constant
  const std::string& variable_name() const;  // pre: kind() == Variable
  CallKind call_kind() const;                // pre: kind() == Call
  int power_exponent() const;                // pre: kind() == Power
  std::span<const Expr> operands() const { return node_->kids; }

  bool is_canonical() const { return node_->canonical; }

  // Canonical form: expanded rational function over coordinates and atoms,
  // numerator/denominator reduced, sin^2 rewritten via sin^2+cos^2 = 1.
  // Idempotent; canonical zero is exactly the constant 0.
  Expr simplified() const;
  bool is_zero() const;
  bool is_constant() const;  // canonicalizes, true iff a bare constant

  Expr derivative(const std::string& var) const;
  double evaluate(const Point& point) const;

  // Deterministic text form; parse_expr(str()) canonicalizes back to *this
  // for canonical expressions.
  std::string str() const;

  // Sorted unique names of variables occurring anywhere in the tree.
  std::vector<std::string> variables() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

  Expr& operator+=(const Expr& other) { return *this = *this + other; }
  Expr& operator-=(const Expr& other) { return *this = *this - other; }
  Expr& operator*=(const Expr& other) { return *this = *this * other; }

  friend Expr pow(const Expr& base, int exponent);
  friend Expr sin(const Expr& arg);
  friend Expr cos(const Expr& arg);
  friend Expr exp(const Expr& arg);

  // Structural (syntactic) identity, not mathematical equality.
  friend bool identical(const Expr& a, const Expr& b);

  using NodePtr = std::shared_ptr<const detail::ExprNode>;
  explicit Expr(NodePtr node) : node_(std::move(node)) {}
  const detail::ExprNode& node() const { return *node_; }
  const NodePtr& node_ptr() const { return node_; }

private:
  NodePtr node_;
};

// Recursive-descent parser for the infix grammar: + - * / ^, parentheses,
// integer/decimal literals, identifiers, and sin/cos/exp calls. '^' binds
// tightest and is right-associative with integer exponents only. Every
// identifier must appear in allowed_vars. Returns the canonicalized Expr.
Expr parse_expr(std::string_view text, std::span<const std::string> allowed_vars);

// Spec-facing free-function spellings.
inline Expr simplify(const Expr& e) { return e.simplified(); }
inline Expr differentiate(const Expr& e, const std::string& var) { return e.derivative(var); }
inline double evaluate(const Expr& e, const Point& p) { return e.evaluate(p); }

// a - b canonicalizes to 0. Complete for expressions rational in coordinates
// and in atoms of identical arguments; identities that relate atoms with
// different arguments (e.g. double-angle) are out of scope for the kernel.
bool symbolically_equal(const Expr& a, const Expr& b);

// Guard against runaway expression growth. Canonicalization throws
// ResourceError once an intermediate polynomial exceeds the budget
// (counted in monomial-entry nodes).
std::size_t expr_node_budget();
void set_expr_node_budget(std::size_t budget);

}  // namespace t2lift
