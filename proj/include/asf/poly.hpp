#pragma once

// Dense univariate polynomials over the ambient field.

#include <cassert>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "asf/error.hpp"
#include "asf/gf.hpp"

namespace asf {

using gf::Elem;
using gf::Field;
using gf::FieldPtr;

class Poly {
public:
  Poly() = default;
  explicit Poly(const Field& F) : F_(&F) {}
  Poly(const Field& F, std::vector<Elem> coeffs) : F_(&F), c_(std::move(coeffs)) { trim(); }

  static Poly constant(const Field& F, Elem c) { return Poly(F, {c}); }
  static Poly x(const Field& F) { return Poly(F, {F.zero(), F.one()}); }
  static Poly monomial(const Field& F, Elem c, std::size_t d) {
    std::vector<Elem> v(d + 1, F.zero());
    v[d] = c;
    return Poly(F, std::move(v));
  }
  /// x - a
  static Poly linear(const Field& F, Elem a) { return Poly(F, {F.neg(a), F.one()}); }

  const Field& field() const { return *F_; }
  const Field* field_ptr() const { return F_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  bool is_one() const { return c_.size() == 1 && c_[0].rep == 1; }
  Elem lead() const { return c_.empty() ? Elem{0} : c_.back(); }
  Elem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Elem{0}; }
  const std::vector<Elem>& coeffs() const { return c_; }
  bool is_monic() const { return !c_.empty() && c_.back().rep == 1; }

  /// Lowest exponent with a nonzero coefficient (order of vanishing at 0); -1 for the zero polynomial.
  int low_order() const {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (c_[i].rep)
        return static_cast<int>(i);
    return -1;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  Poly operator-() const {
    Poly r = *this;
    for (auto& e : r.c_)
      e = F_->neg(e);
    return r;
  }

  Poly& operator+=(const Poly& b) {
    adopt(b);
    if (c_.size() < b.c_.size())
      c_.resize(b.c_.size(), Elem{0});
    for (std::size_t i = 0; i < b.c_.size(); ++i)
      c_[i] = F_->add(c_[i], b.c_[i]);
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& b) {
    adopt(b);
    if (c_.size() < b.c_.size())
      c_.resize(b.c_.size(), Elem{0});
    for (std::size_t i = 0; i < b.c_.size(); ++i)
      c_[i] = F_->sub(c_[i], b.c_[i]);
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    const Field* F = a.F_ ? a.F_ : b.F_;
    if (a.is_zero() || b.is_zero())
      return F ? Poly(*F) : Poly();
    std::vector<Elem> r(a.c_.size() + b.c_.size() - 1, Elem{0});
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (!a.c_[i].rep)
        continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        if (b.c_[j].rep)
          r[i + j] = F->add(r[i + j], F->mul(a.c_[i], b.c_[j]));
    }
    return Poly(*F, std::move(r));
  }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }

  Poly scaled(Elem s) const {
    if (!s.rep)
      return Poly(*F_);
    Poly r = *this;
    for (auto& e : r.c_)
      e = F_->mul(e, s);
    return r;
  }

  Poly monic() const {
    if (is_zero() || is_monic())
      return *this;
    return scaled(F_->inv(lead()));
  }

  /// Quotient and remainder; throws DomainError on division by zero.
  static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero())
      throw DomainError("polynomial division by zero");
    const Field& F = *b.F_;
    if (a.degree() < b.degree())
      return {Poly(F), a.F_ ? a : Poly(F)};
    std::vector<Elem> rem = a.c_;
    std::vector<Elem> quo(a.c_.size() - b.c_.size() + 1, Elem{0});
    const Elem inv_lead = F.inv(b.lead());
    const std::size_t db = b.c_.size() - 1;
    for (std::size_t i = rem.size(); i-- > db;) {
      if (!rem[i].rep)
        continue;
      const Elem c = F.mul(rem[i], inv_lead);
      quo[i - db] = c;
      const Elem nc = F.neg(c);
      for (std::size_t j = 0; j <= db; ++j)
        if (b.c_[j].rep)
          rem[i - db + j] = F.add(rem[i - db + j], F.mul(nc, b.c_[j]));
    }
    rem.resize(db);
    return {Poly(F, std::move(quo)), Poly(F, std::move(rem))};
  }
  friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
  friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

  /// Exact division; throws ConsistencyError if b does not divide a.
  static Poly exact_div(const Poly& a, const Poly& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero())
      throw ConsistencyError("inexact polynomial division");
    return q;
  }

  /// Monic gcd (zero if both are zero).
  static Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
      Poly r = a % b;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  Elem eval(Elem a) const {
    Elem acc{0};
    for (std::size_t i = c_.size(); i-- > 0;)
      acc = F_->add(F_->mul(acc, a), c_[i]);
    return acc;
  }

  Poly pow(std::uint64_t e) const {
    Poly r = constant(*F_, F_->one());
    Poly b = *this;
    for (; e; e >>= 1) {
      if (e & 1)
        r *= b;
      if (e > 1)
        b *= b;
    }
    return r;
  }

  static Poly pow_mod(Poly base, std::uint64_t e, const Poly& m) {
    Poly r = constant(m.field(), m.field().one()) % m;
    base = base % m;
    for (; e; e >>= 1) {
      if (e & 1)
        r = (r * base) % m;
      if (e > 1)
        base = (base * base) % m;
    }
    return r;
  }

  /// Apply e -> e^{p^j} to every coefficient.
  Poly frobenius_coeffs(long long j) const {
    Poly r = *this;
    for (auto& e : r.c_)
      e = F_->frobenius(e, j);
    return r;
  }

  /// this^p, using linearity of the Frobenius: coefficients to the p, exponents times p.
  Poly pth_power() const {
    if (is_zero())
      return *this;
    const std::uint32_t p = F_->characteristic();
    std::vector<Elem> r((c_.size() - 1) * p + 1, Elem{0});
    for (std::size_t i = 0; i < c_.size(); ++i)
      r[i * p] = F_->frobenius(c_[i], 1);
    return Poly(*F_, std::move(r));
  }

  /// this(g) by Horner.
  Poly compose(const Poly& g) const {
    Poly acc(*F_);
    for (std::size_t i = c_.size(); i-- > 0;)
      acc = acc * g + constant(*F_, c_[i]);
    return acc;
  }

  /// this(x + a).
  Poly taylor_shift(Elem a) const {
    std::vector<Elem> r = c_;
    const std::size_t n = r.size();
    // Repeated synthetic division.
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = n - 1; j > i; --j)
        r[j - 1] = F_->add(r[j - 1], F_->mul(a, r[j]));
    return Poly(*F_, std::move(r));
  }

  /// x^deg * this(1/x) with deg = degree().
  Poly reversed() const {
    std::vector<Elem> r(c_.rbegin(), c_.rend());
    return Poly(*F_, std::move(r));
  }

  Poly derivative() const {
    if (c_.size() <= 1)
      return Poly(*F_);
    std::vector<Elem> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
      r[i - 1] = F_->mul(F_->from_int(static_cast<long long>(i)), c_[i]);
    return Poly(*F_, std::move(r));
  }

  /// Roots in the ambient field with multiplicity, ascending; the unsplit cofactor is returned too.
  std::pair<std::vector<std::pair<Elem, int>>, Poly> roots_with_cofactor() const {
    if (is_zero())
      throw DomainError("roots of the zero polynomial");
    std::vector<std::pair<Elem, int>> out;
    Poly rest = *this;
    if (rest.degree() <= 0)
      return {out, rest};
    for (std::uint32_t rep = 0; rep < F_->size() && rest.degree() > 0; ++rep) {
      const Elem a{rep};
      int mult = 0;
      while (rest.degree() > 0 && !rest.eval(a).rep) {
        rest = exact_div(rest, linear(*F_, a));
        ++mult;
      }
      if (mult)
        out.emplace_back(a, mult);
    }
    return {out, rest};
  }

  /// Degree of the smallest extension of the ambient field over which this polynomial splits.
  std::uint32_t splitting_degree() const {
    Poly f = *this;
    std::uint32_t need = 1;
    const std::uint64_t Q = F_->size();
    Poly xq = x(*F_);
    for (std::uint32_t j = 1; f.degree() > 0; ++j) {
      xq = pow_mod(xq, Q, f);
      Poly g = gcd(f, xq - x(*F_));
      if (g.degree() > 0) {
        need = std::lcm(need, j);
        while (true) {
          f = exact_div(f, g);
          Poly h = gcd(f, g);
          if (h.degree() <= 0)
            break;
          g = h;
        }
        if (f.degree() > 0)
          xq = xq % f;
      }
      if (j > 64)
        throw ConsistencyError("distinct-degree factorization did not terminate");
    }
    return need;
  }

  std::string to_string() const {
    if (is_zero())
      return "0";
    std::string s;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (!c_[i].rep)
        continue;
      if (!s.empty())
        s += " + ";
      s += F_->to_string(c_[i]);
      if (i)
        s += "*x^" + std::to_string(i);
    }
    return s;
  }

private:
  void adopt(const Poly& b) {
    if (!F_)
      F_ = b.F_;
  }
  void trim() {
    while (!c_.empty() && c_.back().rep == 0)
      c_.pop_back();
  }

  const Field* F_ = nullptr;
  std::vector<Elem> c_;
};

} // namespace asf
