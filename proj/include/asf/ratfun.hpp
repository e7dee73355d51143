#pragma once

// Rational functions in one variable x over the ambient field, and the degree-one places of K(x).

#include <array>
#include <climits>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asf/error.hpp"
#include "asf/poly.hpp"

namespace asf {

/// A point of the projective line over the ambient field. Infinity sorts after every finite place.
struct Place {
  bool infinite = false;
  Elem at{};

  static Place infinity() { return Place{true, Elem{}}; }
  static Place finite(Elem a) { return Place{false, a}; }

  friend bool operator==(const Place& a, const Place& b) {
    return a.infinite == b.infinite && (a.infinite || a.at == b.at);
  }
  friend std::strong_ordering operator<=>(const Place& a, const Place& b) {
    if (a.infinite != b.infinite)
      return a.infinite ? std::strong_ordering::greater : std::strong_ordering::less;
    if (a.infinite)
      return std::strong_ordering::equal;
    return a.at <=> b.at;
  }

  std::string to_string() const { return infinite ? std::string("inf") : "x=" + std::to_string(at.rep); }
};

using Divisor = std::map<Place, int>;

inline int divisor_degree(const Divisor& d) {
  int s = 0;
  for (const auto& [_, m] : d)
    s += m;
  return s;
}

/// Coefficients of s^{v0}, s^{v0+1}, ... in the uniformizer s of `place`.
struct LaurentSeries {
  Place place;
  int v0 = 0;
  std::vector<Elem> coeffs;
  bool is_zero = false;

  /// Coefficient of s^e (zero outside the stored range).
  Elem at(int e) const {
    if (e < v0 || e - v0 >= static_cast<int>(coeffs.size()))
      return Elem{0};
    return coeffs[static_cast<std::size_t>(e - v0)];
  }
};

inline constexpr int kInfiniteValuation = INT_MAX;

class RatFun {
public:
  RatFun() = default;
  explicit RatFun(const Field& F) : num_(F), den_(Poly::constant(F, F.one())) {}
  RatFun(Poly num) : num_(std::move(num)), den_(Poly::constant(num_.field(), num_.field().one())) {}
  RatFun(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  static RatFun constant(const Field& F, Elem c) { return RatFun(Poly::constant(F, c)); }
  static RatFun x(const Field& F) { return RatFun(Poly::x(F)); }

  const Field& field() const { return num_.field(); }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }
  bool is_polynomial() const { return den_.degree() == 0; }
  /// Constant value; only meaningful when is_constant().
  Elem constant_value() const { return num_.coeff(0); }

  friend bool operator==(const RatFun& a, const RatFun& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

  RatFun operator-() const { return RatFun(-num_, den_, Normalized{}); }

  friend RatFun operator+(const RatFun& a, const RatFun& b) {
    if (a.is_zero())
      return b;
    if (b.is_zero())
      return a;
    if (a.den_ == b.den_)
      return RatFun(a.num_ + b.num_, a.den_);
    if (a.den_.is_one())
      return RatFun(a.num_ * b.den_ + b.num_, b.den_, Normalized{});
    if (b.den_.is_one())
      return RatFun(a.num_ + b.num_ * a.den_, a.den_, Normalized{});
    return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }
  friend RatFun operator*(const RatFun& a, const RatFun& b) {
    if (a.is_zero() || b.is_zero())
      return RatFun(a.field());
    if (a.den_.is_one() && b.den_.is_one())
      return RatFun(a.num_ * b.num_, a.den_, Normalized{});
    // Cross-cancel before multiplying to keep degrees small.
    Poly g1 = Poly::gcd(a.num_, b.den_);
    Poly g2 = Poly::gcd(b.num_, a.den_);
    Poly n = Poly::exact_div(a.num_, g1) * Poly::exact_div(b.num_, g2);
    Poly d = Poly::exact_div(a.den_, g2) * Poly::exact_div(b.den_, g1);
    return RatFun(std::move(n), std::move(d), Normalized{}).fix_lead();
  }
  RatFun inverse() const {
    if (is_zero())
      throw DomainError("inverse of the zero rational function");
    return RatFun(den_, num_, Normalized{}).fix_lead();
  }
  friend RatFun operator/(const RatFun& a, const RatFun& b) { return a * b.inverse(); }
  RatFun& operator+=(const RatFun& b) { return *this = *this + b; }
  RatFun& operator-=(const RatFun& b) { return *this = *this - b; }
  RatFun& operator*=(const RatFun& b) { return *this = *this * b; }

  RatFun scaled(Elem c) const {
    if (!c.rep)
      return RatFun(field());
    return RatFun(num_.scaled(c), den_, Normalized{});
  }

  RatFun pow(long long e) const {
    if (e < 0)
      return inverse().pow(-e);
    return RatFun(num_.pow(static_cast<std::uint64_t>(e)), den_.pow(static_cast<std::uint64_t>(e)), Normalized{});
  }

  /// this^p.
  RatFun pth_power() const { return RatFun(num_.pth_power(), den_.pth_power(), Normalized{}); }

  /// Apply e -> e^{p^j} to all coefficients (x untouched).
  RatFun frobenius_coeffs(long long j) const {
    return RatFun(num_.frobenius_coeffs(j), den_.frobenius_coeffs(j), Normalized{});
  }

  /// this(inner).
  RatFun compose(const RatFun& inner) const {
    // num(inner) / den(inner), homogenized with inner = a/b.
    const Poly& a = inner.num_;
    const Poly& b = inner.den_;
    const int dn = num_.degree(), dd = den_.degree();
    const int D = std::max(dn, dd);
    if (is_zero())
      return *this;
    auto homog = [&](const Poly& P) {
      Poly acc(field());
      std::vector<Poly> bpow(static_cast<std::size_t>(D + 1), Poly::constant(field(), field().one()));
      for (int i = 1; i <= D; ++i)
        bpow[i] = bpow[i - 1] * b;
      Poly apow = Poly::constant(field(), field().one());
      for (int i = 0; i <= P.degree(); ++i) {
        if (P.coeff(i).rep)
          acc += (apow * bpow[D - i]).scaled(P.coeff(i));
        apow *= a;
      }
      return acc;
    };
    return RatFun(homog(num_), homog(den_));
  }

  /// f(a), or nothing at a pole.
  std::optional<Elem> eval_at(Elem a) const {
    const Field& F = field();
    const Elem d = den_.eval(a);
    if (!d.rep)
      return std::nullopt;
    return F.div(num_.eval(a), d);
  }

  int valuation_at(const Place& P) const {
    if (is_zero())
      return kInfiniteValuation;
    if (P.infinite)
      return den_.degree() - num_.degree();
    return order_at(num_, P.at) - order_at(den_, P.at);
  }

  /// First `terms` coefficients of the expansion at P in its uniformizer (x - a, or 1/x).
  LaurentSeries laurent_at(const Place& P, int terms) const {
    if (terms < 1)
      throw UsageError("laurent_at needs at least one term");
    const Field& F = field();
    LaurentSeries out;
    out.place = P;
    if (is_zero()) {
      out.is_zero = true;
      out.coeffs.assign(static_cast<std::size_t>(terms), F.zero());
      return out;
    }
    Poly N, D;
    int shift;
    if (P.infinite) {
      N = num_.reversed();
      D = den_.reversed();
      shift = den_.degree() - num_.degree();
    } else {
      N = num_.taylor_shift(P.at);
      D = den_.taylor_shift(P.at);
      shift = 0;
    }
    const int ln = N.low_order(), ld = D.low_order();
    out.v0 = shift + ln - ld;
    // Power-series division of N / s^ln by D / s^ld.
    std::vector<Elem> n(static_cast<std::size_t>(terms), F.zero()), d(static_cast<std::size_t>(terms), F.zero());
    for (int i = 0; i < terms; ++i) {
      n[i] = N.coeff(static_cast<std::size_t>(ln + i));
      d[i] = D.coeff(static_cast<std::size_t>(ld + i));
    }
    const Elem d0inv = F.inv(d[0]);
    out.coeffs.assign(static_cast<std::size_t>(terms), F.zero());
    for (int i = 0; i < terms; ++i) {
      Elem acc = n[i];
      for (int j = 1; j <= i; ++j)
        if (d[j].rep && out.coeffs[i - j].rep)
          acc = F.sub(acc, F.mul(d[j], out.coeffs[i - j]));
      out.coeffs[i] = F.mul(acc, d0inv);
    }
    return out;
  }

  /// Poles (finite ones ascending, then infinity). Throws InsufficientField if the denominator
  /// does not split.
  std::vector<Place> poles() const {
    std::vector<Place> out;
    auto [roots, rest] = den_.roots_with_cofactor();
    if (rest.degree() > 0)
      throw InsufficientField("denominator does not split", field().degree() * rest.splitting_degree());
    for (const auto& [a, _] : roots)
      out.push_back(Place::finite(a));
    if (num_.degree() > den_.degree())
      out.push_back(Place::infinity());
    return out;
  }

  Divisor divisor() const {
    if (is_zero())
      throw DomainError("divisor of the zero function");
    Divisor D;
    auto add_roots = [&](const Poly& P, int sign) {
      auto [roots, rest] = P.roots_with_cofactor();
      if (rest.degree() > 0)
        throw InsufficientField("polynomial does not split", field().degree() * rest.splitting_degree());
      for (const auto& [a, m] : roots)
        D[Place::finite(a)] += sign * m;
    };
    add_roots(num_, 1);
    add_roots(den_, -1);
    const int vinf = den_.degree() - num_.degree();
    if (vinf)
      D[Place::infinity()] = vinf;
    return D;
  }

  /// Möbius coefficients (a, b, c, d) with this = (a x + b)/(c x + d), ad - bc != 0.
  std::optional<std::array<Elem, 4>> as_mobius() const {
    if (num_.degree() > 1 || den_.degree() > 1)
      return std::nullopt;
    const Field& F = field();
    std::array<Elem, 4> m{num_.coeff(1), num_.coeff(0), den_.coeff(1), den_.coeff(0)};
    if (F.sub(F.mul(m[0], m[3]), F.mul(m[1], m[2])).rep == 0)
      return std::nullopt;
    return m;
  }

  std::string to_string() const {
    if (den_.is_one())
      return "(" + num_.to_string() + ")";
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
  }

  /// Canonical text form used for hashing: coefficient reps of num then den.
  void serialize(std::string& out) const {
    auto put = [&](const Poly& P) {
      out += '[';
      for (const auto& e : P.coeffs()) {
        out += std::to_string(e.rep);
        out += ',';
      }
      out += ']';
    };
    put(num_);
    out += '/';
    put(den_);
  }

private:
  struct Normalized {};
  // Caller guarantees gcd(num, den) = 1; the denominator may still need to be made monic.
  RatFun(Poly num, Poly den, Normalized) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero())
      throw DomainError("zero denominator");
    if (num_.is_zero())
      den_ = Poly::constant(num_.field(), num_.field().one());
  }
  RatFun& fix_lead() {
    if (!den_.is_monic()) {
      const Elem l = field().inv(den_.lead());
      num_ = num_.scaled(l);
      den_ = den_.scaled(l);
    }
    return *this;
  }

  void normalize() {
    if (den_.is_zero())
      throw DomainError("zero denominator");
    const Field& F = den_.field();
    if (num_.field_ptr() == nullptr)
      num_ = Poly(F);
    if (num_.is_zero()) {
      den_ = Poly::constant(F, F.one());
      return;
    }
    if (den_.degree() > 0) {
      Poly g = Poly::gcd(num_, den_);
      if (g.degree() > 0) {
        num_ = Poly::exact_div(num_, g);
        den_ = Poly::exact_div(den_, g);
      }
    }
    fix_lead();
  }

  static int order_at(const Poly& P, Elem a) {
    int k = 0;
    Poly cur = P;
    const Poly lin = Poly::linear(P.field(), a);
    while (!cur.is_zero() && !cur.eval(a).rep) {
      cur = Poly::exact_div(cur, lin);
      ++k;
    }
    return k;
  }

  Poly num_;
  Poly den_;
};

inline RatFun operator*(Elem c, const RatFun& f) { return f.scaled(c); }

} // namespace asf
