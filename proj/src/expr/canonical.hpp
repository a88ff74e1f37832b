#pragma once

// Internal canonical-form engine for Expr: multivariate rational functions
// whose "variables" (symbols) are coordinates and interned sin/cos/exp atoms.
// Not part of the public API.

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "t2lift/expr.hpp"

namespace t2lift::detail {

struct Symbol {
  enum class Kind { Call, Var };
  Kind kind;
  CallKind call = CallKind::Sin;  // Kind::Call
  std::string name;               // Kind::Var
  Expr arg;                       // canonical argument tree, Kind::Call
  std::string key;                // interning identity and total-order key
};

using SymId = std::uint32_t;

// Global append-only registry of symbols. Symbols are interned by key so a
// SymId comparison is an exact identity test; the key string also provides
// an order that does not depend on interning sequence.
class SymbolTable {
public:
  static SymbolTable& instance();

  SymId intern_var(const std::string& name);
  SymId intern_call(CallKind call, const Expr& canonical_arg);
  // cos atom with the same argument as the given sin atom
  SymId cos_partner(SymId sin_id);

  const Symbol& at(SymId id) const;
  bool less(SymId a, SymId b) const;

private:
  mutable std::shared_mutex mu_;
  std::deque<Symbol> symbols_;
  std::unordered_map<std::string, SymId> index_;

  SymId intern(Symbol sym);
};

// Sorted ascending by symbol key order; exponents strictly positive.
using Monomial = std::vector<std::pair<SymId, int>>;

// Lexicographic order: the earliest symbol (in key order) with differing
// exponent decides, higher exponent wins.
struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

class Poly {
public:
  using TermMap = std::map<Monomial, Rational, MonoLess>;

  Poly() = default;
  static Poly zero() { return Poly(); }
  static Poly constant(const Rational& c);
  static Poly symbol(SymId id, int exponent = 1);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  const Rational& constant_value() const;  // pre: is_constant() && !is_zero()

  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  // Largest monomial in the term order and its coefficient.
  const Monomial& leading_monomial() const;
  const Rational& leading_coefficient() const;

  std::set<SymId> support() const;
  int degree_in(SymId id) const;
  bool contains_symbol(SymId id) const;

  void add_term(const Monomial& mono, const Rational& coeff);  // accumulate

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a);
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  bool operator==(const Poly& o) const { return terms_ == o.terms_; }

  Poly scaled(const Rational& c) const;
  Poly pow(int k) const;  // k >= 0

  // d/d(symbol) as a polynomial (the symbol treated as a free variable)
  Poly derivative_wrt(SymId id) const;

  // Number of budget "nodes" this polynomial accounts for.
  std::size_t node_count() const;

private:
  TermMap terms_;
};

// sin-power elimination: every sin(u)^e with e >= 2 is rewritten through
// sin^2(u) = 1 - cos^2(u), leaving sin exponents <= 1.
Poly trig_reduce(const Poly& p);

// Exact division; throws std::logic_error if b does not divide a.
Poly exact_divide(const Poly& a, const Poly& b);

// Multivariate gcd over Q via primitive pseudo-remainder sequences.
// Result is unit-normalized (leading coefficient 1); gcd of anything with a
// constant is 1. gcd(0, b) = b.
Poly poly_gcd(const Poly& a, const Poly& b);

// Rational function in canonical form. Invariants after normalize():
//   - num, den trig-reduced; den free of sin symbols,
//   - gcd(num, den) = 1, den has leading coefficient 1,
//   - num == 0  =>  den == 1.
struct RatFunc {
  Poly num;
  Poly den = Poly::constant(1);

  static RatFunc from_poly(Poly p) { return RatFunc{std::move(p), Poly::constant(1)}; }
  static RatFunc constant(const Rational& c) { return from_poly(Poly::constant(c)); }

  bool is_zero() const { return num.is_zero(); }
  bool operator==(const RatFunc& o) const { return num == o.num && den == o.den; }
};

void normalize(RatFunc& f);

RatFunc operator+(const RatFunc& a, const RatFunc& b);
RatFunc operator-(const RatFunc& a, const RatFunc& b);
RatFunc operator*(const RatFunc& a, const RatFunc& b);
RatFunc operator/(const RatFunc& a, const RatFunc& b);
RatFunc operator-(const RatFunc& a);
RatFunc rat_pow(const RatFunc& f, int k);

void check_budget(std::size_t nodes);

// Conversions between the tree form and the canonical engine (expr.cpp).
const RatFunc& to_rat(const Expr& e);
Expr to_tree(const RatFunc& f);
RatFunc rat_derivative(const RatFunc& f, const std::string& var);

}  // namespace t2lift::detail
