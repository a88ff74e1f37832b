#include "canonical.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <mutex>
#include <stdexcept>

namespace t2lift {

namespace {
std::atomic<std::size_t> g_node_budget{200000};
}

std::size_t expr_node_budget() { return g_node_budget.load(); }
void set_expr_node_budget(std::size_t budget) { g_node_budget.store(budget); }

namespace detail {

void check_budget(std::size_t nodes) {
  if (nodes > g_node_budget.load())
    throw ResourceError("expression exceeds node budget of " +
                        std::to_string(g_node_budget.load()) + " nodes");
}

// ---------------------------------------------------------------------------
// SymbolTable

SymbolTable& SymbolTable::instance() {
  static SymbolTable table;
  return table;
}

SymId SymbolTable::intern(Symbol sym) {
  std::unique_lock lock(mu_);
  auto it = index_.find(sym.key);
  if (it != index_.end()) return it->second;
  SymId id = static_cast<SymId>(symbols_.size());
  index_.emplace(sym.key, id);
  symbols_.push_back(std::move(sym));
  return id;
}

SymId SymbolTable::intern_var(const std::string& name) {
  Symbol s;
  s.kind = Symbol::Kind::Var;
  s.name = name;
  s.key = "v:" + name;
  return intern(std::move(s));
}

SymId SymbolTable::intern_call(CallKind call, const Expr& canonical_arg) {
  Symbol s;
  s.kind = Symbol::Kind::Call;
  s.call = call;
  s.arg = canonical_arg;
  s.key = std::string("f:") + call_name(call) + "(" + canonical_arg.str() + ")";
  return intern(std::move(s));
}

SymId SymbolTable::cos_partner(SymId sin_id) {
  Expr arg;
  {
    std::shared_lock lock(mu_);
    const Symbol& s = symbols_[sin_id];
    assert(s.kind == Symbol::Kind::Call && s.call == CallKind::Sin);
    arg = s.arg;
  }
  return intern_call(CallKind::Cos, arg);
}

const Symbol& SymbolTable::at(SymId id) const {
  std::shared_lock lock(mu_);
  return symbols_[id];  // deque elements are address-stable
}

bool SymbolTable::less(SymId a, SymId b) const {
  if (a == b) return false;
  std::shared_lock lock(mu_);
  return symbols_[a].key < symbols_[b].key;
}

// ---------------------------------------------------------------------------
// Monomial order

bool MonoLess::operator()(const Monomial& a, const Monomial& b) const {
  const SymbolTable& tab = SymbolTable::instance();
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (i == a.size()) {
      // a has exponent 0 on b's remaining (earlier-or-later) symbols:
      // the first remaining symbol of b has exponent >0 in b, 0 in a.
      return true;  // a < b
    }
    if (j == b.size()) return false;
    SymId sa = a[i].first, sb = b[j].first;
    if (sa == sb) {
      if (a[i].second != b[j].second) return a[i].second < b[j].second;
      ++i, ++j;
      continue;
    }
    // The earlier symbol is held by exactly one side with positive exponent;
    // that side is lexicographically larger.
    if (tab.less(sa, sb)) return false;  // a holds the earlier symbol
    return true;
  }
  return false;
}

namespace {

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  const SymbolTable& tab = SymbolTable::instance();
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i, ++j;
    } else if (tab.less(a[i].first, b[j].first)) {
      out.push_back(a[i++]);
    } else {
      out.push_back(b[j++]);
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) out.push_back(b[j]);
  return out;
}

// a / b componentwise; throws std::logic_error if not divisible.
Monomial mono_div(const Monomial& a, const Monomial& b) {
  Monomial out;
  std::size_t i = 0;
  for (const auto& [sym, exp] : b) {
    while (i < a.size() && a[i].first != sym) out.push_back(a[i++]);
    if (i == a.size() || a[i].second < exp)
      throw std::logic_error("monomial division is not exact");
    if (a[i].second > exp) out.emplace_back(sym, a[i].second - exp);
    ++i;
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  return out;
}

bool mono_divides(const Monomial& b, const Monomial& a) {
  std::size_t i = 0;
  for (const auto& [sym, exp] : b) {
    while (i < a.size() && a[i].first != sym) ++i;
    if (i == a.size() || a[i].second < exp) return false;
  }
  return true;
}

int mono_exponent(const Monomial& m, SymId id) {
  for (const auto& [sym, exp] : m)
    if (sym == id) return exp;
  return 0;
}

Monomial mono_without(const Monomial& m, SymId id) {
  Monomial out;
  out.reserve(m.size());
  for (const auto& e : m)
    if (e.first != id) out.push_back(e);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Poly

Poly Poly::constant(const Rational& c) {
  Poly p;
  if (sgn(c) != 0) p.terms_.emplace(Monomial{}, c);
  return p;
}

Poly Poly::symbol(SymId id, int exponent) {
  Poly p;
  if (exponent == 0) return constant(1);
  p.terms_.emplace(Monomial{{id, exponent}}, Rational(1));
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

const Rational& Poly::constant_value() const {
  assert(is_constant() && !is_zero());
  return terms_.begin()->second;
}

const Monomial& Poly::leading_monomial() const {
  assert(!terms_.empty());
  return terms_.rbegin()->first;
}

const Rational& Poly::leading_coefficient() const {
  assert(!terms_.empty());
  return terms_.rbegin()->second;
}

std::set<SymId> Poly::support() const {
  std::set<SymId> out;
  for (const auto& [mono, coeff] : terms_)
    for (const auto& [sym, exp] : mono) out.insert(sym);
  return out;
}

int Poly::degree_in(SymId id) const {
  int deg = 0;
  for (const auto& [mono, coeff] : terms_)
    deg = std::max(deg, mono_exponent(mono, id));
  return deg;
}

bool Poly::contains_symbol(SymId id) const {
  for (const auto& [mono, coeff] : terms_)
    if (mono_exponent(mono, id) > 0) return true;
  return false;
}

void Poly::add_term(const Monomial& mono, const Rational& coeff) {
  if (sgn(coeff) == 0) return;
  auto [it, inserted] = terms_.emplace(mono, coeff);
  if (!inserted) {
    it->second += coeff;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

std::size_t Poly::node_count() const {
  std::size_t n = 0;
  for (const auto& [mono, coeff] : terms_) n += 1 + mono.size();
  return n;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [mono, coeff] : b.terms_) out.add_term(mono, coeff);
  check_budget(out.node_count());
  return out;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [mono, coeff] : b.terms_) {
    Rational neg = -coeff;
    out.add_term(mono, neg);
  }
  check_budget(out.node_count());
  return out;
}

Poly operator-(const Poly& a) {
  Poly out;
  for (const auto& [mono, coeff] : a.terms_) out.terms_.emplace(mono, -coeff);
  return out;
}

Poly operator*(const Poly& a, const Poly& b) {
  check_budget(a.term_count() * b.term_count());
  Poly out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      Rational c = ca * cb;
      out.add_term(mono_mul(ma, mb), c);
    }
  check_budget(out.node_count());
  return out;
}

Poly Poly::scaled(const Rational& c) const {
  Poly out;
  if (sgn(c) == 0) return out;
  for (const auto& [mono, coeff] : terms_) {
    Rational v = coeff * c;
    out.terms_.emplace(mono, v);
  }
  return out;
}

Poly Poly::pow(int k) const {
  assert(k >= 0);
  Poly result = Poly::constant(1);
  Poly base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    base = (k >>= 1) ? base * base : base;
  }
  return result;
}

Poly Poly::derivative_wrt(SymId id) const {
  Poly out;
  for (const auto& [mono, coeff] : terms_) {
    int e = mono_exponent(mono, id);
    if (e == 0) continue;
    Monomial m = mono_without(mono, id);
    if (e > 1) {
      // reinsert with exponent e-1, keeping sort order
      Monomial withsym;
      const SymbolTable& tab = SymbolTable::instance();
      bool placed = false;
      for (const auto& entry : m) {
        if (!placed && tab.less(id, entry.first)) {
          withsym.emplace_back(id, e - 1);
          placed = true;
        }
        withsym.push_back(entry);
      }
      if (!placed) withsym.emplace_back(id, e - 1);
      m = std::move(withsym);
    }
    Rational c = coeff * e;
    out.add_term(m, c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// trig reduction

namespace {

// first sin symbol with exponent >= minexp anywhere in p, or -1
long find_sin_symbol(const Poly& p, int minexp) {
  const SymbolTable& tab = SymbolTable::instance();
  for (const auto& [mono, coeff] : p.terms())
    for (const auto& [sym, exp] : mono) {
      const Symbol& s = tab.at(sym);
      if (s.kind == Symbol::Kind::Call && s.call == CallKind::Sin && exp >= minexp)
        return static_cast<long>(sym);
    }
  return -1;
}

}  // namespace

Poly trig_reduce(const Poly& p) {
  SymbolTable& tab = SymbolTable::instance();
  Poly current = p;
  for (;;) {
    long sid = find_sin_symbol(current, 2);
    if (sid < 0) return current;
    SymId s = static_cast<SymId>(sid);
    SymId c = tab.cos_partner(s);
    // 1 - cos^2
    Poly one_minus_c2 = Poly::constant(1) - Poly::symbol(c, 2);
    Poly out;
    for (const auto& [mono, coeff] : current.terms()) {
      int e = mono_exponent(mono, s);
      if (e < 2) {
        out.add_term(mono, coeff);
        continue;
      }
      Monomial rest = mono_without(mono, s);
      Poly piece = Poly::zero();
      piece.add_term(rest, coeff);
      if (e & 1) piece = piece * Poly::symbol(s, 1);
      piece = piece * one_minus_c2.pow(e / 2);
      out += piece;
    }
    current = std::move(out);
  }
}

// ---------------------------------------------------------------------------
// exact division and gcd

Poly exact_divide(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::logic_error("exact_divide by zero polynomial");
  if (b.is_constant()) {
    Rational inv = 1 / b.constant_value();
    return a.scaled(inv);
  }
  Poly rem = a;
  Poly quot;
  while (!rem.is_zero()) {
    const Monomial& mr = rem.leading_monomial();
    const Monomial& mb = b.leading_monomial();
    Monomial mq = mono_div(mr, mb);  // throws if not divisible
    Rational cq = rem.leading_coefficient() / b.leading_coefficient();
    Poly t;
    t.add_term(mq, cq);
    quot += t;
    rem -= t * b;
  }
  return quot;
}

namespace {

// univariate view in a chosen main symbol, coefficients free of it
struct UPoly {
  std::vector<Poly> coeff;  // coeff[e] of main^e
  int degree() const { return static_cast<int>(coeff.size()) - 1; }
  bool is_zero() const { return coeff.empty(); }
  const Poly& lc() const { return coeff.back(); }
  void trim() {
    while (!coeff.empty() && coeff.back().is_zero()) coeff.pop_back();
  }
};

UPoly to_upoly(const Poly& p, SymId main) {
  UPoly u;
  for (const auto& [mono, c] : p.terms()) {
    int e = mono_exponent(mono, main);
    if (static_cast<int>(u.coeff.size()) <= e) u.coeff.resize(e + 1);
    u.coeff[e].add_term(mono_without(mono, main), c);
  }
  u.trim();
  return u;
}

Poly from_upoly(const UPoly& u, SymId main) {
  Poly out;
  for (int e = 0; e < static_cast<int>(u.coeff.size()); ++e) {
    if (u.coeff[e].is_zero()) continue;
    out += e == 0 ? u.coeff[e] : u.coeff[e] * Poly::symbol(main, e);
  }
  return out;
}

UPoly upoly_scale(const UPoly& u, const Poly& f) {
  UPoly out;
  out.coeff.reserve(u.coeff.size());
  for (const Poly& c : u.coeff) out.coeff.push_back(c * f);
  out.trim();
  return out;
}

UPoly upoly_shift_scale(const UPoly& u, const Poly& f, int shift) {
  UPoly out;
  out.coeff.resize(u.coeff.size() + shift);
  for (std::size_t i = 0; i < u.coeff.size(); ++i) out.coeff[i + shift] = u.coeff[i] * f;
  out.trim();
  return out;
}

UPoly upoly_sub(const UPoly& a, const UPoly& b) {
  UPoly out;
  out.coeff.resize(std::max(a.coeff.size(), b.coeff.size()));
  for (std::size_t i = 0; i < out.coeff.size(); ++i) {
    if (i < a.coeff.size()) out.coeff[i] += a.coeff[i];
    if (i < b.coeff.size()) out.coeff[i] -= b.coeff[i];
  }
  out.trim();
  return out;
}

// pseudo-remainder of a by b in the main symbol (up to a unit factor,
// which the primitive PRS discards anyway)
UPoly pseudo_rem(UPoly a, const UPoly& b) {
  const Poly& lb = b.lc();
  while (!a.is_zero() && a.degree() >= b.degree()) {
    int shift = a.degree() - b.degree();
    Poly la = a.lc();
    a = upoly_sub(upoly_scale(a, lb), upoly_shift_scale(b, la, shift));
  }
  return a;
}

Poly unit_normalize(const Poly& p) {
  if (p.is_zero()) return p;
  Rational inv = 1 / p.leading_coefficient();
  return p.scaled(inv);
}

Poly upoly_content(const UPoly& u) {
  Poly c = Poly::zero();
  for (const Poly& q : u.coeff) {
    if (q.is_zero()) continue;
    c = c.is_zero() ? q : poly_gcd(c, q);
    if (c.is_constant()) return Poly::constant(1);
  }
  return c.is_zero() ? Poly::constant(1) : unit_normalize(c);
}

UPoly upoly_primitive(const UPoly& u, const Poly& content) {
  if (content.is_constant()) {
    UPoly out = u;
    if (!content.is_zero() && content.constant_value() != 1) {
      Rational inv = 1 / content.constant_value();
      for (Poly& c : out.coeff) c = c.scaled(inv);
    }
    return out;
  }
  UPoly out;
  out.coeff.reserve(u.coeff.size());
  for (const Poly& c : u.coeff)
    out.coeff.push_back(c.is_zero() ? c : exact_divide(c, content));
  return out;
}

// gcd of monomial m with every monomial of p (componentwise min exponents)
Monomial mono_gcd_with_poly(Monomial m, const Poly& p) {
  for (const auto& [mono, coeff] : p.terms()) {
    Monomial next;
    for (const auto& [sym, exp] : m) {
      int other = mono_exponent(mono, sym);
      int e = std::min(exp, other);
      if (e > 0) next.emplace_back(sym, e);
    }
    m = std::move(next);
    if (m.empty()) break;
  }
  return m;
}

}  // namespace

Poly poly_gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return unit_normalize(b);
  if (b.is_zero()) return unit_normalize(a);
  if (a.is_constant() || b.is_constant()) return Poly::constant(1);
  if (a == b) return unit_normalize(a);

  // monomial fast path
  if (a.term_count() == 1 || b.term_count() == 1) {
    const Poly& mono_side = a.term_count() == 1 ? a : b;
    const Poly& other = a.term_count() == 1 ? b : a;
    Monomial g = mono_gcd_with_poly(mono_side.leading_monomial(), other);
    Poly out;
    out.add_term(g, Rational(1));
    return out;
  }

  std::set<SymId> sa = a.support();
  std::set<SymId> sb = b.support();
  std::vector<SymId> common;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                        std::back_inserter(common));
  if (common.empty()) return Poly::constant(1);

  // main symbol: smallest combined degree keeps the PRS short
  SymId main = common.front();
  int best = a.degree_in(main) + b.degree_in(main);
  for (SymId s : common) {
    int d = a.degree_in(s) + b.degree_in(s);
    if (d < best) best = d, main = s;
  }

  UPoly ua = to_upoly(a, main);
  UPoly ub = to_upoly(b, main);
  Poly ca = upoly_content(ua);
  Poly cb = upoly_content(ub);
  Poly cont = poly_gcd(ca, cb);
  ua = upoly_primitive(ua, ca);
  ub = upoly_primitive(ub, cb);
  if (ua.degree() < ub.degree()) std::swap(ua, ub);

  for (;;) {
    UPoly r = pseudo_rem(ua, ub);
    if (r.is_zero()) {
      Poly g = from_upoly(ub, main);
      return unit_normalize(cont * g);
    }
    if (r.degree() == 0) return unit_normalize(cont);
    ua = std::move(ub);
    ub = upoly_primitive(r, upoly_content(r));
  }
}

// ---------------------------------------------------------------------------
// RatFunc

void normalize(RatFunc& f) {
  f.num = trig_reduce(f.num);
  f.den = trig_reduce(f.den);
  if (f.den.is_zero()) throw ZeroDivisionError("division by an expression that is identically zero");
  if (f.num.is_zero()) {
    f.den = Poly::constant(1);
    return;
  }

  // Clear sin atoms out of the denominator by conjugate multiplication:
  // den = A + B*sin(u)  ->  multiply through by (A - B*sin(u)); the new
  // denominator A^2 - B^2*(1 - cos^2(u)) is sin(u)-free. This keeps the
  // reduced fraction unique in the quotient ring modulo sin^2+cos^2-1.
  SymbolTable& tab = SymbolTable::instance();
  for (;;) {
    long sid = find_sin_symbol(f.den, 1);
    if (sid < 0) break;
    SymId s = static_cast<SymId>(sid);
    Poly A, B;
    for (const auto& [mono, coeff] : f.den.terms()) {
      int e = mono_exponent(mono, s);
      if (e == 0)
        A.add_term(mono, coeff);
      else
        B.add_term(mono_without(mono, s), coeff);  // e == 1 after trig_reduce
    }
    Poly conj = A - B * Poly::symbol(s, 1);
    f.num = trig_reduce(f.num * conj);
    f.den = trig_reduce(f.den * conj);
    if (f.den.is_zero()) throw ZeroDivisionError("denominator is identically zero modulo sin^2+cos^2=1");
    if (f.num.is_zero()) {
      f.den = Poly::constant(1);
      return;
    }
  }

  if (f.den.is_constant()) {
    Rational inv = 1 / f.den.constant_value();
    f.num = f.num.scaled(inv);
    f.den = Poly::constant(1);
    return;
  }

  Poly g = poly_gcd(f.num, f.den);
  if (!g.is_constant()) {
    f.num = exact_divide(f.num, g);
    f.den = exact_divide(f.den, g);
  }
  if (f.den.is_constant()) {
    Rational inv = 1 / f.den.constant_value();
    f.num = f.num.scaled(inv);
    f.den = Poly::constant(1);
    return;
  }
  Rational inv = 1 / f.den.leading_coefficient();
  f.num = f.num.scaled(inv);
  f.den = f.den.scaled(inv);
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  RatFunc out;
  if (a.den == b.den) {
    out.num = a.num + b.num;
    out.den = a.den;
  } else {
    out.num = a.num * b.den + b.num * a.den;
    out.den = a.den * b.den;
  }
  normalize(out);
  return out;
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) {
  RatFunc out;
  if (a.den == b.den) {
    out.num = a.num - b.num;
    out.den = a.den;
  } else {
    out.num = a.num * b.den - b.num * a.den;
    out.den = a.den * b.den;
  }
  normalize(out);
  return out;
}

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  RatFunc out{a.num * b.num, a.den * b.den};
  normalize(out);
  return out;
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  RatFunc out{a.num * b.den, a.den * b.num};
  normalize(out);
  return out;
}

RatFunc operator-(const RatFunc& a) { return RatFunc{-a.num, a.den}; }

RatFunc rat_pow(const RatFunc& f, int k) {
  if (k == 0) return RatFunc::constant(1);
  RatFunc out = k > 0 ? RatFunc{f.num.pow(k), f.den.pow(k)}
                      : RatFunc{f.den.pow(-k), f.num.pow(-k)};
  normalize(out);
  return out;
}

}  // namespace detail
}  // namespace t2lift
