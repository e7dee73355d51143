#pragma once

// Brute-force point counts and L-polynomials, used as an independent check of the genus engine.

#include <boost/multiprecision/cpp_int.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "asf/asgenus.hpp"
#include "asf/error.hpp"
#include "asf/families.hpp"
#include "asf/gf.hpp"

namespace asf {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Maximum q^m enumerated by the oracle.
inline constexpr std::uint64_t kMaxEnumeration = 30'000'000;

struct CountSeries {
  std::string family;
  std::uint64_t q = 0;
  std::uint32_t base_degree = 1; // counts are over F_{Q^m}, Q = q^base_degree
  std::uint64_t base = 0;        // Q
  std::vector<std::pair<unsigned, long long>> counts; // (m, N_m), m = 1, 2, ...
};

struct LPoly {
  std::uint64_t base = 0;      // Q
  std::vector<BigInt> coeffs;  // a_0 = 1, ..., a_{2g}
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

namespace detail {

template <class Fn>
long long parallel_sum(std::size_t count, unsigned workers, Fn fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1)
    return fn(0, count);
  std::vector<long long> partial(workers, 0);
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      const std::size_t b = std::min(count, w * chunk), e = std::min(count, b + chunk);
      partial[w] = fn(b, e);
    });
  for (auto& t : pool)
    t.join();
  return std::accumulate(partial.begin(), partial.end(), 0LL);
}

inline void check_enumeration(const Field& F, std::uint32_t n, unsigned m) {
  if (!F.divides_degree(n * m))
    throw InsufficientField("ambient field lacks F_{q^m}", n * m);
  if (gf::detail::ipow(F.characteristic(), n * m) > kMaxEnumeration)
    throw UsageError("q^m exceeds the enumeration budget");
}

} // namespace detail

/// #{(x0, y) in F_{q^m}^{1+r} : y_i^q - y_i = f_i(x0)} over x0 that are poles of no f_i.
inline long long affine_count(const AbelianASSpec& spec, unsigned m, unsigned workers = 1) {
  const Field& F = spec.F();
  detail::check_enumeration(F, spec.n, m);
  const auto xs = F.subfield_elements(spec.n * m);
  const long long q = static_cast<long long>(spec.q);
  return detail::parallel_sum(xs.size(), workers, [&](std::size_t b, std::size_t e) {
    long long acc = 0;
    for (std::size_t i = b; i < e; ++i) {
      long long prod = 1;
      for (const auto& fi : spec.f) {
        const auto v = fi.eval_at(xs[i]);
        if (!v) {
          prod = -1;
          break;
        }
        if (!F.in_subfield(*v, spec.n * m) || gf::rel_trace(F, *v, spec.n * m, spec.n).rep) {
          prod = 0;
          break;
        }
        prod *= q;
      }
      if (prod > 0)
        acc += prod;
    }
    return acc;
  });
}

/// Affine points of (s^q - t)(t^q - s) = 1 over F_{q^m} (the same equation in characteristic 2
/// as (s^q + t)(t^q + s) = 1). With A = s^q - t the condition reads A^q + 1/A = s^{q^2} - s, so
/// the pairs are counted through a histogram of the left side.
inline long long singer_plane_affine_count(const Field& F, std::uint32_t n, unsigned m, unsigned workers = 1) {
  detail::check_enumeration(F, n, m);
  const auto elems = F.subfield_elements(n * m);
  std::vector<std::uint32_t> hist(F.size(), 0);
  for (Elem A : elems)
    if (A.rep)
      ++hist[F.add(F.frobenius(A, n), F.inv(A)).rep];
  return detail::parallel_sum(elems.size(), workers, [&](std::size_t b, std::size_t e) {
    long long acc = 0;
    for (std::size_t i = b; i < e; ++i)
      acc += hist[F.sub(F.frobenius(elems[i], 2 * n), elems[i]).rep];
    return acc;
  });
}

/// Direct enumeration of all pairs (s, t); slow reference for the histogram count.
inline long long singer_plane_affine_count_pairs(const Field& F, std::uint32_t n, unsigned m) {
  detail::check_enumeration(F, n, m);
  const auto elems = F.subfield_elements(n * m);
  std::vector<Elem> frob(F.size());
  for (Elem e : elems)
    frob[e.rep] = F.frobenius(e, n);
  long long acc = 0;
  for (Elem s : elems)
    for (Elem t : elems)
      if (F.is_one(F.mul(F.sub(frob[s.rep], t), F.sub(frob[t.rep], s))))
        ++acc;
  return acc;
}

/// Least d such that every layer has coefficients in F_{q^d}; 1 for the Singer plane models.
inline std::uint32_t definition_degree(const FamilySpec& fs) {
  if (fs.plane != PlaneModel::None)
    return 1;
  const Field& F = fs.F();
  for (std::uint32_t d = 1; d * fs.n <= F.degree(); ++d) {
    if (!F.divides_degree(d * fs.n))
      continue;
    bool ok = true;
    for (const auto& fi : fs.spec->f)
      for (const Poly* P : {&fi.num(), &fi.den()})
        for (Elem c : P->coeffs())
          ok = ok && F.in_subfield(c, d * fs.n);
    if (ok)
      return d;
  }
  throw ConsistencyError("layer coefficients lie outside the ambient field");
}

/// Rational places over F_{q^m} lying above the place P of K(x) (P rational over F_{q^m}).
/// Each nonzero a in F_q^r gives the degree-p subextension T^p - T = sum a_i f_i. Those unramified
/// at P, with 0, form the dual V of the unramified quotient. If each of them has a residue of
/// absolute trace zero, Frobenius is trivial on that quotient and there are |V| rational places
/// above P; otherwise there are none.
inline long long places_above(const AbelianASSpec& spec, const Place& P, unsigned m) {
  const Field& F = spec.F();
  const auto Fq = F.subfield_elements(spec.n);
  const std::size_t r = spec.r();
  long long unramified = 0;
  std::vector<std::size_t> idx(r, 0);
  while (true) {
    std::size_t k = 0;
    while (k < r && ++idx[k] == Fq.size())
      idx[k++] = 0;
    if (k == r)
      break;
    RatFun R(F);
    for (std::size_t i = 0; i < r; ++i)
      if (Fq[idx[i]].rep)
        R += spec.f[i].scaled(Fq[idx[i]]);
    const ReduceResult red = as_reduce(R, P);
    if (red.m > 0)
      continue;
    if (!F.in_subfield(red.residue, spec.n * m) || gf::rel_trace(F, red.residue, spec.n * m, 1).rep)
      return 0;
    ++unramified;
  }
  return 1 + unramified;
}

/// Rational places over F_{q^m}, excluding the affine ones: places above infinity and above the
/// rational finite poles of the layers.
inline long long boundary_count(const FamilySpec& fs, unsigned m) {
  if (fs.plane != PlaneModel::None)
    return 2; // the unique zero and the unique pole of x = t^q -+ s, both fixed by Frobenius
  const AbelianASSpec& S = *fs.spec;
  const Field& F = S.F();
  std::set<Place> places{Place::infinity()};
  for (const auto& fi : S.f)
    for (const Place& P : fi.poles())
      if (P.infinite || F.in_subfield(P.at, fs.n * m))
        places.insert(P);
  long long acc = 0;
  for (const Place& P : places)
    acc += places_above(S, P, m);
  return acc;
}

/// N_m: rational places over F_{q^m}. The ambient field of fs must contain F_{q^m}.
inline long long place_count(const FamilySpec& fs, unsigned m, unsigned workers = 1) {
  if (m == 0)
    throw UsageError("m must be positive");
  const std::uint32_t d = definition_degree(fs);
  if (m % d)
    throw UsageError(fs.name + " is defined over F_{q^" + std::to_string(d) + "}; m must be a multiple of " +
                     std::to_string(d));
  if (fs.plane != PlaneModel::None)
    return singer_plane_affine_count(fs.F(), fs.n, m, workers) + boundary_count(fs, m);
  return affine_count(*fs.spec, m, workers) + boundary_count(fs, m);
}

/// Largest m whose count fits the enumeration and field-size budgets.
inline unsigned max_countable_m(const std::string& family, std::uint64_t q) {
  const FamilySpec base = build_family(family, q, {}, BuildOptions{.full = false});
  const std::uint64_t Q = gf::detail::ipow(q, definition_degree(base));
  const std::uint64_t cap = std::min<std::uint64_t>(kMaxEnumeration, gf::kMaxFieldSize);
  unsigned m = 0;
  for (std::uint64_t v = Q; v <= cap; v *= Q)
    ++m;
  return m;
}

/// Counts N_1..N_{max_m} over the field of definition F_Q, Q = q^d. Each count builds the layers
/// in the smallest ambient field that holds F_{Q^m}.
inline CountSeries count_series(const std::string& family, std::uint64_t q, unsigned max_m, unsigned workers = 1) {
  const FamilySpec base = build_family(family, q, {}, BuildOptions{.full = false});
  const std::uint32_t d = definition_degree(base);
  CountSeries cs;
  cs.family = family;
  cs.q = q;
  cs.base_degree = d;
  cs.base = gf::detail::ipow(q, d);
  if (max_m > max_countable_m(family, q))
    throw UsageError("count over F_{q^" + std::to_string(d * max_m) + "} exceeds the enumeration budget");
  for (unsigned m = 1; m <= max_m; ++m) {
    const std::uint32_t deg = base.n * d * m;
    if (base.plane != PlaneModel::None) {
      const FieldPtr F = gf::build_ambient(base.p, {deg});
      cs.counts.emplace_back(m, singer_plane_affine_count(*F, base.n, m, workers) + 2);
      continue;
    }
    const FamilySpec fs = build_family(family, q, {deg}, BuildOptions{.full = false});
    cs.counts.emplace_back(m, place_count(fs, d * m, workers));
  }
  return cs;
}

namespace detail {

inline BigInt big_pow(std::uint64_t b, unsigned e) {
  BigInt r = 1;
  for (unsigned i = 0; i < e; ++i)
    r *= b;
  return r;
}

using RatPoly = std::vector<BigRational>; // ascending coefficients

inline void trim(RatPoly& a) {
  while (!a.empty() && a.back() == 0)
    a.pop_back();
}

inline RatPoly rat_mod(RatPoly a, const RatPoly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    const BigRational c = a.back() / b.back();
    const std::size_t sh = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i)
      a[sh + i] -= c * b[i];
    trim(a);
  }
  return a;
}

inline RatPoly rat_div(RatPoly a, const RatPoly& b) {
  trim(a);
  if (a.size() < b.size())
    return {};
  RatPoly qt(a.size() - b.size() + 1, 0);
  while (a.size() >= b.size() && !a.empty()) {
    const BigRational c = a.back() / b.back();
    const std::size_t sh = a.size() - b.size();
    qt[sh] = c;
    for (std::size_t i = 0; i < b.size(); ++i)
      a[sh + i] -= c * b[i];
    trim(a);
  }
  return qt;
}

inline RatPoly squarefree_part(const RatPoly& P) {
  RatPoly d;
  for (std::size_t i = 1; i < P.size(); ++i)
    d.push_back(P[i] * static_cast<long long>(i));
  trim(d);
  if (d.empty())
    return P;
  RatPoly a = P, b = d;
  while (!b.empty()) {
    RatPoly r = rat_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return rat_div(P, a);
}

/// All roots of the reversed L-polynomial T^{2g} L(1/T) have absolute value sqrt(Q).
inline bool roots_on_circle(const LPoly& L, double tol = 1e-6) {
  const int deg = L.degree();
  if (deg <= 0)
    return true;
  RatPoly rev(static_cast<std::size_t>(deg) + 1);
  for (int i = 0; i <= deg; ++i)
    rev[static_cast<std::size_t>(deg - i)] = BigRational(L.coeffs[static_cast<std::size_t>(i)]);
  RatPoly sf = squarefree_part(rev);
  const int k = static_cast<int>(sf.size()) - 1;
  if (k <= 0)
    return true;
  // Scale T = sqrt(Q) U so that the roots should land on the unit circle.
  const double sq = std::sqrt(static_cast<double>(L.base));
  std::vector<double> c(static_cast<std::size_t>(k) + 1);
  const double lead = sf.back().convert_to<double>();
  for (int i = 0; i <= k; ++i)
    c[static_cast<std::size_t>(i)] = sf[static_cast<std::size_t>(i)].convert_to<double>() / lead * std::pow(sq, i - k);
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(k, k);
  for (int i = 1; i < k; ++i)
    comp(i, i - 1) = 1.0;
  for (int i = 0; i < k; ++i)
    comp(i, k - 1) = -c[static_cast<std::size_t>(i)];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  for (int i = 0; i < k; ++i)
    if (std::abs(std::abs(es.eigenvalues()[i]) - 1.0) > tol)
      return false;
  return true;
}

} // namespace detail

/// Newton-sum reconstruction of the degree-2g L-polynomial from N_1..N_g, completed by the
/// functional equation. Further counts, if present, must be reproduced by the result.
inline LPoly lpoly_from_counts(const CountSeries& cs, int g) {
  if (g < 0)
    throw UsageError("genus must be nonnegative");
  std::vector<BigInt> S; // S[m] = Q^m + 1 - N_m
  S.push_back(0);
  for (std::size_t i = 0; i < cs.counts.size(); ++i) {
    if (cs.counts[i].first != i + 1)
      throw UsageError("count series must list m = 1, 2, ... in order");
    S.push_back(detail::big_pow(cs.base, static_cast<unsigned>(i + 1)) + 1 - cs.counts[i].second);
  }
  if (static_cast<int>(cs.counts.size()) < g)
    throw UsageError("need counts for m = 1.." + std::to_string(g));
  LPoly L;
  L.base = cs.base;
  L.coeffs.assign(static_cast<std::size_t>(2 * g) + 1, 0);
  L.coeffs[0] = 1;
  // L(T) = exp(-sum S_m T^m / m): k a_k = -sum_{j=1..k} S_j a_{k-j}.
  for (int k = 1; k <= g; ++k) {
    BigInt acc = 0;
    for (int j = 1; j <= k; ++j)
      acc += S[static_cast<std::size_t>(j)] * L.coeffs[static_cast<std::size_t>(k - j)];
    if (acc % k != 0)
      throw OracleInconsistency("non-integral L-polynomial coefficient a_" + std::to_string(k));
    L.coeffs[static_cast<std::size_t>(k)] = -acc / k;
  }
  for (int i = 0; i < g; ++i)
    L.coeffs[static_cast<std::size_t>(2 * g - i)] = detail::big_pow(cs.base, static_cast<unsigned>(g - i)) * L.coeffs[static_cast<std::size_t>(i)];
  // Power sums of the completed polynomial must match every count given.
  for (std::size_t m = static_cast<std::size_t>(g) + 1; m < S.size(); ++m) {
    BigInt acc = 0;
    for (std::size_t j = 1; j < m; ++j)
      if (m - j <= static_cast<std::size_t>(2 * g))
        acc += S[j] * L.coeffs[m - j];
    const BigInt am = m <= static_cast<std::size_t>(2 * g) ? L.coeffs[m] : BigInt(0);
    // m a_m = -sum_{j<m} S_j a_{m-j} - S_m a_0
    if (BigInt(static_cast<long long>(m)) * am != -acc - S[m])
      throw OracleInconsistency("count N_" + std::to_string(m) + " contradicts the functional equation");
  }
  if (!detail::roots_on_circle(L))
    throw OracleInconsistency("L-polynomial roots are off the circle |T| = Q^(-1/2)");
  return L;
}

/// (genus, p-rank) = (deg L / 2, degree of L mod p).
inline Invariants invariants_from_lpoly(const LPoly& L, std::uint32_t p) {
  if (L.coeffs.empty() || L.coeffs[0] != 1)
    throw DomainError("L-polynomial must have constant term 1");
  if (L.degree() % 2)
    throw DomainError("L-polynomial has odd degree");
  int top = 0;
  for (int i = 0; i <= L.degree(); ++i)
    if (L.coeffs[static_cast<std::size_t>(i)] % p != 0)
      top = i;
  return {L.degree() / 2, top};
}

/// |N_m - (Q^m + 1)| <= 2 g Q^{m/2} for every count.
inline bool weil_bound_holds(const CountSeries& cs, long long g) {
  for (const auto& [m, N] : cs.counts) {
    const long double dev = std::fabs(static_cast<long double>(N) - (std::pow(static_cast<long double>(cs.base), m) + 1));
    if (dev > 2.0L * g * std::pow(static_cast<long double>(cs.base), m / 2.0L) + 1e-6L)
      return false;
  }
  return true;
}

/// Number of places of each degree d (Moebius inversion of the counts); nullopt if some value is
/// negative or fractional.
inline std::optional<std::vector<long long>> places_by_degree(const CountSeries& cs) {
  auto mobius = [](unsigned k) {
    int mu = 1;
    for (unsigned d = 2; d * d <= k; ++d)
      if (k % d == 0) {
        k /= d;
        if (k % d == 0)
          return 0;
        mu = -mu;
      }
    return k > 1 ? -mu : mu;
  };
  std::vector<long long> out;
  for (std::size_t i = 0; i < cs.counts.size(); ++i) {
    const unsigned d = static_cast<unsigned>(i + 1);
    long long acc = 0;
    for (unsigned e = 1; e <= d; ++e)
      if (d % e == 0)
        acc += mobius(d / e) * cs.counts[e - 1].second;
    if (acc < 0 || acc % d)
      return std::nullopt;
    out.push_back(acc / d);
  }
  return out;
}

struct ZetaReport {
  CountSeries series;
  std::optional<LPoly> l_poly;
  std::optional<Invariants> invariants;
  bool weil_ok = false;
  bool mobius_ok = false;
  std::string error; // oracle inconsistency message, if any
};

/// Counts to max_m (default: g over the field of definition, capped by the budget), then the
/// L-polynomial and its invariants when the counts reach m = g.
inline ZetaReport zeta_report(const std::string& family, std::uint64_t q, long long g, unsigned max_m = 0,
                              unsigned workers = 1) {
  ZetaReport rep;
  const unsigned mm = max_m ? max_m : std::min<unsigned>(static_cast<unsigned>(std::max<long long>(g, 1)), max_countable_m(family, q));
  rep.series = count_series(family, q, mm, workers);
  rep.weil_ok = weil_bound_holds(rep.series, g);
  rep.mobius_ok = places_by_degree(rep.series).has_value();
  if (static_cast<long long>(rep.series.counts.size()) < g) {
    rep.error = "counts reach m = " + std::to_string(rep.series.counts.size()) + " < g = " + std::to_string(g) +
                "; L-polynomial not reconstructed";
    return rep;
  }
  try {
    rep.l_poly = lpoly_from_counts(rep.series, static_cast<int>(g));
    rep.invariants = invariants_from_lpoly(*rep.l_poly, split_prime_power(q).p);
  } catch (const OracleInconsistency& e) {
    rep.error = e.what();
  }
  return rep;
}

} // namespace asf
