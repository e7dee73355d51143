#pragma once

// Genus and p-rank of elementary abelian Artin-Schreier extensions of K(x).
//
// An extension y_i^q - y_i = f_i(x), i = 1..r, decomposes into (q^r - 1)/(p - 1) degree-p
// subextensions T^p - T = R_mu(x), one per coset of F_p^* in F_{q^r}^*. Genus and p-rank of the
// whole field are the sums of those of the subextensions; each of those is read off from the
// reduced pole orders of R_mu.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "asf/error.hpp"
#include "asf/gf.hpp"
#include "asf/ratfun.hpp"

namespace asf {

struct AbelianASSpec {
  FieldPtr field;
  std::uint32_t p = 0;
  std::uint32_t n = 0;
  std::uint64_t q = 0;
  std::vector<RatFun> f; // layer i: y_i^q - y_i = f[i]
  Elem eta{};            // generates F_{q^r} over F_q
  std::string family_tag;

  std::uint32_t r() const { return static_cast<std::uint32_t>(f.size()); }
  const Field& F() const { return *field; }

  /// Checks the structural invariants; throws UsageError on violation.
  void validate() const {
    if (!field)
      throw UsageError("spec has no field");
    if (field->characteristic() != p || gf::detail::ipow(p, n) != q)
      throw UsageError("inconsistent p, n, q");
    if (f.empty())
      throw UsageError("spec needs at least one layer");
    for (const auto& fi : f)
      if (fi.is_zero())
        throw UsageError("layer right-hand sides must be nonzero");
    if (!field->divides_degree(n * r()))
      throw UsageError("ambient field does not contain F_{q^r}");
    if (!field->in_subfield(eta, n * r()))
      throw UsageError("eta is not in F_{q^r}");
    for (std::uint32_t s = 1; s < r(); ++s)
      if (r() % s == 0 && field->in_subfield(eta, n * s))
        throw UsageError("eta does not generate F_{q^r} over F_q");
  }
};

struct ReduceResult {
  int m = 0;          // reduced pole order (0 if f - (h^p - h) is regular at P)
  RatFun shift;       // h, with poles only at P
  Elem residue{};     // constant term of the reduced function at P
};

/// Uniformizer power pi_P^{-k} as a rational function.
inline RatFun inverse_uniformizer_power(const Field& F, const Place& P, int k) {
  if (P.infinite)
    return RatFun(Poly::monomial(F, F.one(), static_cast<std::size_t>(k)));
  return RatFun(Poly::constant(F, F.one()), Poly::linear(F, P.at).pow(static_cast<std::uint64_t>(k)));
}

/// Removes p-th-power pole terms of f at P: f - (h^p - h) has pole order m with p not dividing m,
/// or is regular (m = 0).
inline ReduceResult as_reduce(const RatFun& f, const Place& P) {
  const Field& F = f.field();
  const int p = static_cast<int>(F.characteristic());
  ReduceResult out;
  out.shift = RatFun(F);
  const int v = f.valuation_at(P);
  if (v == kInfiniteValuation) {
    out.residue = F.zero();
    return out;
  }
  const int terms = v < 0 ? 1 - v : 1;
  LaurentSeries s = f.laurent_at(P, terms);
  if (v >= 0) {
    out.residue = s.at(0);
    return out;
  }
  // Polar part indexed by exponent e in [v, -1]; only exponents are touched, so one pass upward
  // from the most negative term is enough.
  std::vector<Elem> polar(static_cast<std::size_t>(-v), F.zero());
  for (int e = v; e < 0; ++e)
    polar[static_cast<std::size_t>(e - v)] = s.at(e);
  for (int e = v; e < 0; ++e) {
    Elem& c = polar[static_cast<std::size_t>(e - v)];
    if (!c.rep || (-e) % p != 0)
      continue;
    const int k = -e / p;
    const Elem root = F.pth_root(c);
    c = F.zero();
    Elem& low = polar[static_cast<std::size_t>(-k - v)];
    low = F.add(low, root);
    out.shift += inverse_uniformizer_power(F, P, k).scaled(root);
  }
  for (int e = v; e < 0; ++e)
    if (polar[static_cast<std::size_t>(e - v)].rep) {
      out.m = -e;
      break;
    }
  out.residue = s.at(0);
  return out;
}

struct DegreePReport {
  std::vector<std::pair<Place, int>> ramified; // places with m_P >= 1
  long long genus = 0;
  long long p_rank = 0;
  bool is_trivial = false;
};

/// T^p - T = f over K(x).
inline DegreePReport degree_p_report(const RatFun& f, std::uint32_t p) {
  if (f.field().characteristic() != p)
    throw UsageError("p is not the characteristic of the field");
  DegreePReport rep;
  if (f.is_zero()) {
    rep.is_trivial = true;
    return rep;
  }
  long long sum = 0;
  for (const Place& P : f.poles()) {
    const auto red = as_reduce(f, P);
    if (red.m > 0) {
      rep.ramified.emplace_back(P, red.m);
      sum += red.m + 1;
    }
  }
  if (rep.ramified.empty()) {
    rep.is_trivial = true;
    return rep;
  }
  rep.genus = static_cast<long long>(p - 1) * (sum - 2) / 2;
  rep.p_rank = static_cast<long long>(rep.ramified.size() - 1) * (p - 1);
  return rep;
}

/// Least representative of each coset of F_p^* in F_{q^r}^*, ascending.
inline std::vector<Elem> characters(const Field& F, std::uint32_t n, std::uint32_t r) {
  const auto elems = F.subfield_elements(n * r);
  const std::uint32_t p = F.characteristic();
  std::vector<char> seen(F.size(), 0);
  std::vector<Elem> out;
  for (Elem e : elems) {
    if (!e.rep || seen[e.rep])
      continue;
    out.push_back(e);
    for (std::uint32_t c = 1; c < p; ++c)
      seen[F.mul(e, F.from_int(c)).rep] = 1;
  }
  return out;
}

/// Coefficient vector of the subextension for mu: a_i = Tr_{F_{q^r}/F_q}(mu * eta^{i-1}).
inline std::vector<Elem> subfield_coefficients(const AbelianASSpec& spec, Elem mu) {
  const Field& F = spec.F();
  if (!mu.rep)
    throw UsageError("character representative must be nonzero");
  std::vector<Elem> a;
  Elem c = mu;
  for (std::uint32_t i = 0; i < spec.r(); ++i) {
    a.push_back(gf::rel_trace(F, c, spec.n * spec.r(), spec.n));
    c = F.mul(c, spec.eta);
  }
  return a;
}

/// Right-hand side R_mu = sum_i a_i f_i of the degree-p subextension attached to mu.
inline RatFun subfield_rhs(const AbelianASSpec& spec, Elem mu) {
  const auto a = subfield_coefficients(spec, mu);
  RatFun acc(spec.F());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].rep)
      acc += spec.f[i].scaled(a[i]);
  return acc;
}

struct CharacterReport {
  Elem mu{};
  long long genus = 0;
  long long p_rank = 0;
  bool trivial = false;
};

struct InvariantsReport {
  long long genus = 0;
  long long p_rank = 0;
  bool ordinary = false;
  bool irreducible = true;
  std::vector<CharacterReport> per_character;
};

inline InvariantsReport abelian_invariants(const AbelianASSpec& spec, unsigned workers = 1) {
  spec.validate();
  const auto mus = characters(spec.F(), spec.n, spec.r());
  std::vector<CharacterReport> parts(mus.size());
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < mus.size(); i += step) {
      const auto rep = degree_p_report(subfield_rhs(spec, mus[i]), spec.p);
      parts[i] = CharacterReport{mus[i], rep.genus, rep.p_rank, rep.is_trivial};
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(mus.size())));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back(work, w, workers);
    for (auto& t : pool)
      t.join();
  }
  InvariantsReport out;
  for (const auto& c : parts) {
    out.genus += c.genus;
    out.p_rank += c.p_rank;
    if (c.trivial)
      out.irreducible = false;
  }
  out.per_character = std::move(parts);
  out.ordinary = out.genus == out.p_rank;

  // All layers totally ramified over one common place and nowhere else: p-rank must vanish.
  std::optional<std::vector<Place>> common;
  bool single_common = true;
  for (const auto& fi : spec.f) {
    auto poles = fi.poles();
    if (poles.size() != 1 || (common && *common != poles)) {
      single_common = false;
      break;
    }
    common = poles;
  }
  if (single_common && out.p_rank != 0)
    throw ConsistencyError("all layers have their only pole at one place but the p-rank is nonzero");
  return out;
}

} // namespace asf
