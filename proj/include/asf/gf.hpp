#pragma once

// Arithmetic in one ambient finite field F_{p^k}.
//
// Elements are stored as integers rep = sum c_i p^i, where (c_0, ..., c_{k-1}) are the coordinates
// in the power basis of F_p[X]/(modulus). The prime field is therefore {0, ..., p-1} and the
// "enumeration order" used for every deterministic choice is plain integer order of reps.
// Multiplication goes through log/antilog tables, addition through Zech logarithms.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "asf/error.hpp"

namespace asf::gf {

struct Elem {
  std::uint32_t rep = 0;

  friend constexpr bool operator==(Elem, Elem) = default;
  friend constexpr auto operator<=>(Elem, Elem) = default;
};

inline constexpr std::uint32_t kMaxFieldSize = 1u << 20;

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2)
    return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0)
      return false;
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0)
        n /= d;
    }
  }
  if (n > 1)
    out.push_back(n);
  return out;
}

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--)
    r *= b;
  return r;
}

// Dense polynomials over the prime field F_p, low degree first. Only used to pick and test moduli.
using PrimePoly = std::vector<std::uint32_t>;

inline void trim(PrimePoly& a) {
  while (!a.empty() && a.back() == 0)
    a.pop_back();
}

inline std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::uint64_t r = 1, b = a % p;
  for (std::uint32_t e = p - 2; e; e >>= 1, b = b * b % p)
    if (e & 1)
      r = r * b % p;
  return static_cast<std::uint32_t>(r);
}

inline PrimePoly poly_mod(PrimePoly a, const PrimePoly& m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint32_t lead_inv = inv_mod(m.back(), p);
  while (a.size() > dm) {
    const std::uint64_t c = std::uint64_t(a.back()) * lead_inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i)
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - c) * m[i]) % p);
    trim(a);
  }
  return a;
}

inline PrimePoly poly_mulmod(const PrimePoly& a, const PrimePoly& b, const PrimePoly& m, std::uint32_t p) {
  if (a.empty() || b.empty())
    return {};
  PrimePoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t(a[i]) * b[j]) % p);
  return poly_mod(std::move(r), m, p);
}

inline PrimePoly poly_powmod(PrimePoly base, std::uint64_t e, const PrimePoly& m, std::uint32_t p) {
  PrimePoly r{1};
  base = poly_mod(std::move(base), m, p);
  for (; e; e >>= 1) {
    if (e & 1)
      r = poly_mulmod(r, base, m, p);
    base = poly_mulmod(base, base, m, p);
  }
  return r;
}

inline PrimePoly poly_gcd(PrimePoly a, PrimePoly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    a = poly_mod(std::move(a), b, p);
    std::swap(a, b);
  }
  return a;
}

// Ben-Or: f of degree k is irreducible iff gcd(X^{p^i} - X, f) = 1 for all i <= k/2.
inline bool is_irreducible(const PrimePoly& f, std::uint32_t p) {
  const std::size_t k = f.size() - 1;
  if (k == 1)
    return true;
  if (f[0] == 0)
    return false;
  PrimePoly xp{0, 1};
  for (std::size_t i = 1; i <= k / 2; ++i) {
    xp = poly_powmod(xp, p, f, p);
    PrimePoly diff = xp;
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    if (diff.empty())
      return false;
    if (poly_gcd(f, diff, p).size() != 1)
      return false;
  }
  return true;
}

/// Lexicographically least monic irreducible polynomial of degree k over F_p: coefficients
/// (c_{k-1}, ..., c_0) compared left to right.
inline PrimePoly least_irreducible(std::uint32_t p, std::uint32_t k) {
  const std::uint64_t count = ipow(p, k);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    PrimePoly f(k + 1, 0);
    std::uint64_t r = idx;
    for (std::uint32_t i = 0; i < k; ++i, r /= p)
      f[i] = static_cast<std::uint32_t>(r % p);
    f[k] = 1;
    if (is_irreducible(f, p))
      return f;
  }
  throw ConsistencyError("no irreducible polynomial found");
}

} // namespace detail

/// One finite field F_{p^k}; immutable after construction and shared by reference.
class Field {
public:
  Field(std::uint32_t p, std::uint32_t k) : p_(p), k_(k) {
    if (!detail::is_prime(p))
      throw UsageError("characteristic " + std::to_string(p) + " is not prime");
    if (k == 0)
      throw UsageError("extension degree must be positive");
    const double approx = std::pow(double(p), double(k));
    if (approx > double(kMaxFieldSize))
      throw UsageError("ambient field F_" + std::to_string(p) + "^" + std::to_string(k) + " exceeds the table limit of " +
                       std::to_string(kMaxFieldSize) + " elements");
    size_ = static_cast<std::uint32_t>(detail::ipow(p, k));
    choose_modulus();
    build_tables();
  }

  std::uint32_t characteristic() const noexcept { return p_; }
  std::uint32_t degree() const noexcept { return k_; }
  std::uint32_t size() const noexcept { return size_; }
  const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

  Elem zero() const noexcept { return Elem{0}; }
  Elem one() const noexcept { return Elem{1}; }
  Elem from_int(long long v) const noexcept {
    const long long m = ((v % static_cast<long long>(p_)) + p_) % p_;
    return Elem{static_cast<std::uint32_t>(m)};
  }
  Elem from_rep(std::uint32_t rep) const {
    if (rep >= size_)
      throw DomainError("representation out of range");
    return Elem{rep};
  }
  /// Primitive element used for the log tables (least primitive rep).
  Elem generator() const noexcept { return Elem{exp_[1 % (size_ - 1)]}; }

  bool is_zero(Elem a) const noexcept { return a.rep == 0; }
  bool is_one(Elem a) const noexcept { return a.rep == 1; }

  Elem add(Elem a, Elem b) const noexcept {
    if (a.rep == 0)
      return b;
    if (b.rep == 0)
      return a;
    const std::uint32_t order = size_ - 1;
    const std::uint32_t la = log_[a.rep], lb = log_[b.rep];
    const std::uint32_t d = lb >= la ? lb - la : lb + order - la;
    const std::int32_t z = zech_[d];
    if (z < 0)
      return Elem{0};
    std::uint32_t l = la + static_cast<std::uint32_t>(z);
    if (l >= order)
      l -= order;
    return Elem{exp_[l]};
  }
  Elem neg(Elem a) const noexcept {
    if (a.rep == 0 || p_ == 2)
      return a;
    std::uint32_t l = log_[a.rep] + (size_ - 1) / 2;
    if (l >= size_ - 1)
      l -= size_ - 1;
    return Elem{exp_[l]};
  }
  Elem sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const noexcept {
    if (a.rep == 0 || b.rep == 0)
      return Elem{0};
    std::uint32_t l = log_[a.rep] + log_[b.rep];
    if (l >= size_ - 1)
      l -= size_ - 1;
    return Elem{exp_[l]};
  }
  Elem inv(Elem a) const {
    if (a.rep == 0)
      throw DomainError("inverse of zero");
    const std::uint32_t l = log_[a.rep];
    return Elem{exp_[l == 0 ? 0 : size_ - 1 - l]};
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, long long e) const {
    if (a.rep == 0) {
      if (e < 0)
        throw DomainError("negative power of zero");
      return e == 0 ? one() : zero();
    }
    const long long order = size_ - 1;
    long long l = (static_cast<long long>(log_[a.rep]) * (((e % order) + order) % order)) % order;
    return Elem{exp_[static_cast<std::uint32_t>(l)]};
  }
  /// a^{p^j}; j may be any integer (negative j gives iterated p-th roots).
  Elem frobenius(Elem a, long long j = 1) const noexcept {
    if (a.rep == 0)
      return a;
    const long long jj = ((j % static_cast<long long>(k_)) + k_) % k_;
    const std::uint64_t order = size_ - 1;
    std::uint64_t l = log_[a.rep];
    for (long long i = 0; i < jj; ++i)
      l = l * p_ % order;
    return Elem{exp_[static_cast<std::uint32_t>(l)]};
  }
  Elem pth_root(Elem a) const noexcept { return frobenius(a, static_cast<long long>(k_) - 1); }

  /// Discrete log base generator(); undefined for zero.
  std::uint32_t log(Elem a) const {
    if (a.rep == 0)
      throw DomainError("log of zero");
    return log_[a.rep];
  }
  Elem exp(std::uint64_t l) const noexcept { return Elem{exp_[static_cast<std::uint32_t>(l % (size_ - 1))]}; }

  bool divides_degree(std::uint32_t d) const noexcept { return d > 0 && k_ % d == 0; }

  /// Membership in F_{p^d}: e^{p^d} = e.
  bool in_subfield(Elem a, std::uint32_t d) const {
    if (!divides_degree(d))
      throw UsageError("F_" + std::to_string(p_) + "^" + std::to_string(d) + " is not a subfield of the ambient field");
    if (a.rep == 0)
      return true;
    const std::uint32_t step = (size_ - 1) / static_cast<std::uint32_t>(detail::ipow(p_, d) - 1);
    return log_[a.rep] % step == 0;
  }

  /// Elements of F_{p^d} in enumeration (rep) order.
  std::vector<Elem> subfield_elements(std::uint32_t d) const {
    if (!divides_degree(d))
      throw UsageError("F_" + std::to_string(p_) + "^" + std::to_string(d) + " is not a subfield of the ambient field");
    const std::uint32_t sub = static_cast<std::uint32_t>(detail::ipow(p_, d));
    const std::uint32_t step = (size_ - 1) / (sub - 1);
    std::vector<Elem> out;
    out.reserve(sub);
    out.push_back(zero());
    for (std::uint32_t i = 0; i < sub - 1; ++i)
      out.push_back(Elem{exp_[i * step]});
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<std::uint32_t> coordinates(Elem a) const {
    std::vector<std::uint32_t> c(k_);
    std::uint32_t r = a.rep;
    for (std::uint32_t i = 0; i < k_; ++i, r /= p_)
      c[i] = r % p_;
    return c;
  }

  std::string to_string(Elem a) const { return std::to_string(a.rep); }

private:
  void choose_modulus() { modulus_ = detail::least_irreducible(p_, k_); }

  detail::PrimePoly to_poly(std::uint32_t rep) const {
    detail::PrimePoly a(k_, 0);
    for (std::uint32_t i = 0; i < k_; ++i, rep /= p_)
      a[i] = rep % p_;
    detail::trim(a);
    return a;
  }

  std::uint32_t from_poly(const detail::PrimePoly& a) const {
    std::uint32_t rep = 0;
    for (std::size_t i = a.size(); i-- > 0;)
      rep = rep * p_ + a[i];
    return rep;
  }

  std::uint32_t slow_pow(std::uint32_t rep, std::uint64_t e) const {
    return from_poly(detail::poly_powmod(to_poly(rep), e, modulus_, p_));
  }

  void build_tables() {
    const std::uint32_t order = size_ - 1;
    log_.assign(size_, 0);
    exp_.assign(std::max<std::uint32_t>(order, 1), 1);
    zech_.assign(std::max<std::uint32_t>(order, 1), -1);
    if (size_ == 2) {
      exp_[0] = 1;
      log_[1] = 0;
      zech_[0] = -1;
      return;
    }
    const auto factors = detail::prime_factors(order);
    std::uint32_t g = 0;
    for (std::uint32_t cand = 2; cand < size_; ++cand) {
      bool primitive = true;
      for (auto l : factors)
        if (slow_pow(cand, order / l) == 1) {
          primitive = false;
          break;
        }
      if (primitive) {
        g = cand;
        break;
      }
    }
    if (g == 0)
      throw ConsistencyError("no primitive element");
    // Multiplication by g as an F_p-linear map on coordinates.
    std::vector<std::vector<std::uint32_t>> columns(k_);
    for (std::uint32_t i = 0; i < k_; ++i) {
      detail::PrimePoly basis(i + 1, 0);
      basis[i] = 1;
      auto prod = detail::poly_mulmod(basis, to_poly(g), modulus_, p_);
      prod.resize(k_, 0);
      columns[i] = std::move(prod);
    }
    std::vector<std::uint32_t> cur(k_, 0), next(k_);
    cur[0] = 1;
    for (std::uint32_t l = 0; l < order; ++l) {
      std::uint32_t rep = 0;
      for (std::size_t i = k_; i-- > 0;)
        rep = rep * p_ + cur[i];
      exp_[l] = rep;
      log_[rep] = l;
      std::fill(next.begin(), next.end(), 0);
      for (std::uint32_t i = 0; i < k_; ++i)
        if (cur[i])
          for (std::uint32_t j = 0; j < k_; ++j)
            next[j] = (next[j] + cur[i] * columns[i][j]) % p_;
      std::swap(cur, next);
    }
    for (std::uint32_t l = 0; l < order; ++l) {
      const std::uint32_t e = exp_[l];
      const std::uint32_t d0 = e % p_;
      const std::uint32_t plus_one = e - d0 + (d0 + 1) % p_;
      zech_[l] = plus_one == 0 ? -1 : static_cast<std::int32_t>(log_[plus_one]);
    }
  }

  std::uint32_t p_;
  std::uint32_t k_;
  std::uint32_t size_ = 0;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::int32_t> zech_;
};

using FieldPtr = std::shared_ptr<const Field>;

/// Smallest field containing F_{p^d} for every requested d. Deterministic in (p, degrees).
inline FieldPtr build_ambient(std::uint32_t p, const std::set<std::uint32_t>& required_degrees) {
  if (!detail::is_prime(p))
    throw UsageError("characteristic " + std::to_string(p) + " is not prime");
  if (required_degrees.empty())
    throw UsageError("no subfield degrees requested");
  std::uint32_t k = 1;
  for (auto d : required_degrees) {
    if (d == 0)
      throw UsageError("subfield degree must be positive");
    k = std::lcm(k, d);
  }
  return std::make_shared<const Field>(p, k);
}

/// Sum of e^{(p^{d2})^j} over j < d1/d2; the relative trace F_{p^{d1}} -> F_{p^{d2}}.
inline Elem rel_trace(const Field& F, Elem e, std::uint32_t from_degree, std::uint32_t to_degree) {
  if (to_degree == 0 || from_degree % to_degree != 0 || !F.divides_degree(from_degree))
    throw UsageError("trace needs to_degree | from_degree | ambient degree");
  if (!F.in_subfield(e, from_degree))
    throw DomainError("element is not in F_" + std::to_string(F.characteristic()) + "^" + std::to_string(from_degree));
  Elem acc = F.zero();
  Elem term = e;
  for (std::uint32_t j = 0; j < from_degree / to_degree; ++j) {
    acc = F.add(acc, term);
    term = F.frobenius(term, to_degree);
  }
  return acc;
}

/// Exponent n with q = p^n, or a usage error.
inline std::uint32_t log_p(const Field& F, std::uint64_t q) {
  std::uint32_t n = 0;
  std::uint64_t v = 1;
  while (v < q) {
    v *= F.characteristic();
    ++n;
  }
  if (v != q || n == 0)
    throw UsageError(std::to_string(q) + " is not a positive power of " + std::to_string(F.characteristic()));
  return n;
}

/// Least-rep y in F_{p^d} with y^q - y = c, if any. Solvable iff the trace of c from F_{p^d} down to
/// F_q vanishes.
inline std::optional<Elem> as_solve(const Field& F, Elem c, std::uint64_t q, std::uint32_t search_degree) {
  const std::uint32_t n = log_p(F, q);
  if (search_degree % n != 0 || !F.divides_degree(search_degree))
    throw UsageError("search field must contain F_q and lie in the ambient field");
  if (!F.in_subfield(c, search_degree))
    return std::nullopt;
  if (!F.is_zero(rel_trace(F, c, search_degree, n)))
    return std::nullopt;
  for (Elem y : F.subfield_elements(search_degree))
    if (F.sub(F.frobenius(y, n), y) == c)
      return y;
  throw ConsistencyError("trace criterion promised a solution that was not found");
}

inline Elem pth_root(const Field& F, Elem e) { return F.pth_root(e); }

// Deterministic constant choices: least rep satisfying the predicate.

inline Elem least_nonsquare(const Field& F, std::uint32_t n) {
  if (F.characteristic() == 2)
    throw UsageError("every element is a square in characteristic 2");
  const std::uint64_t q = detail::ipow(F.characteristic(), n);
  for (Elem e : F.subfield_elements(n))
    if (!F.is_zero(e) && !F.is_one(F.pow(e, static_cast<long long>((q - 1) / 2))))
      return e;
  throw ConsistencyError("no non-square found");
}

/// Least square root of e inside F_{p^d}.
inline std::optional<Elem> least_sqrt(const Field& F, Elem e, std::uint32_t d) {
  for (Elem r : F.subfield_elements(d))
    if (F.mul(r, r) == e)
      return r;
  return std::nullopt;
}

/// Least element of F_{q^r} (q = p^n) lying in no proper intermediate field F_{q^s}, s | r.
inline Elem least_generator(const Field& F, std::uint32_t n, std::uint32_t r) {
  for (Elem e : F.subfield_elements(n * r)) {
    bool proper = true;
    for (std::uint32_t s = 1; s < r; ++s)
      if (r % s == 0 && F.in_subfield(e, n * s)) {
        proper = false;
        break;
      }
    if (proper)
      return e;
  }
  throw ConsistencyError("no generator of F_{q^r} over F_q found");
}

/// Least element of F_q (q = 2^n) with absolute trace 1.
inline Elem least_trace_one(const Field& F, std::uint32_t n) {
  for (Elem e : F.subfield_elements(n))
    if (F.is_one(rel_trace(F, e, n, 1)))
      return e;
  throw ConsistencyError("no trace-one element found");
}

/// Least root of X^2 + X + c in F_{p^d}.
inline std::optional<Elem> least_quadratic_as_root(const Field& F, Elem c, std::uint32_t d) {
  for (Elem e : F.subfield_elements(d))
    if (F.is_zero(F.add(F.add(F.mul(e, e), e), c)))
      return e;
  return std::nullopt;
}

/// Least element of F_{p^big} outside F_{p^small}.
inline Elem least_outside(const Field& F, std::uint32_t small, std::uint32_t big) {
  for (Elem e : F.subfield_elements(big))
    if (!F.in_subfield(e, small))
      return e;
  throw ConsistencyError("subfield is not proper");
}

/// Least root of the least irreducible polynomial of degree k over F_p. Its minimal polynomial
/// does not depend on the ambient field, so constants chosen this way give Galois-conjugate
/// curves in every ambient field.
inline Elem canonical_root(const Field& F, std::uint32_t k) {
  if (!F.divides_degree(k))
    throw InsufficientField("canonical root", k);
  const auto f = detail::least_irreducible(F.characteristic(), k);
  for (Elem e : F.subfield_elements(k)) {
    Elem acc = F.zero();
    for (auto it = f.rbegin(); it != f.rend(); ++it)
      acc = F.add(F.mul(acc, e), F.from_int(*it));
    if (!acc.rep)
      return e;
  }
  throw ConsistencyError("irreducible polynomial has no root in its splitting field");
}

/// What a family needs from the constant field.
struct ConstantsRequest {
  std::uint32_t n = 1;            // q = p^n
  bool nonsquare = false;         // odd p: non-square eps in F_q
  bool sqrt_nonsquare = false;    // and its least square root in F_{q^2}
  std::uint32_t generator_r = 0;  // eta generating F_{q^r} over F_q (0 = none)
  bool trace_one = false;         // even p: eps in F_q with Tr_{F_q/F_2}(eps) = 1
  bool xi = false;                // and the least root of X^2 + X + eps
};

struct Constants {
  std::optional<Elem> epsilon;
  std::optional<Elem> sqrt_epsilon;
  std::optional<Elem> eta;
  std::optional<Elem> xi;
};

inline Constants find_constants(const Field& F, const ConstantsRequest& req) {
  Constants c;
  const bool even = F.characteristic() == 2;
  if ((req.nonsquare || req.sqrt_nonsquare) && even)
    throw UsageError("non-square constants requested in characteristic 2");
  if ((req.trace_one || req.xi) && !even)
    throw UsageError("trace-one constants are only defined for characteristic 2");
  if (req.nonsquare || req.sqrt_nonsquare)
    c.epsilon = least_nonsquare(F, req.n);
  if (req.sqrt_nonsquare) {
    if (!F.divides_degree(2 * req.n))
      throw InsufficientField("square root of the non-square", 2 * req.n);
    c.sqrt_epsilon = least_sqrt(F, *c.epsilon, 2 * req.n);
    if (!c.sqrt_epsilon)
      throw InsufficientField("square root of the non-square", 2 * req.n);
  }
  if (req.trace_one || req.xi)
    c.epsilon = least_trace_one(F, req.n);
  if (req.xi) {
    if (!F.divides_degree(2 * req.n))
      throw InsufficientField("root of X^2 + X + eps", 2 * req.n);
    c.xi = least_quadratic_as_root(F, *c.epsilon, 2 * req.n);
    if (!c.xi)
      throw InsufficientField("root of X^2 + X + eps", 2 * req.n);
  }
  if (req.generator_r > 0)
    c.eta = least_generator(F, req.n, req.generator_r);
  return c;
}

} // namespace asf::gf

template <>
struct std::hash<asf::gf::Elem> {
  std::size_t operator()(asf::gf::Elem e) const noexcept { return std::hash<std::uint32_t>{}(e.rep); }
};
