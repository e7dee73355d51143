#pragma once

// Arithmetic in F = K(x, y_1, ..., y_r) with y_i^q - y_i = f_i(x).
//
// Every element has a unique normal form sum c_e(x) y^e with 0 <= e_i < q, so equality is
// coefficientwise. Automorphisms are given by the images of x and the y_i; the x-image must be a
// fractional-linear map.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "asf/asgenus.hpp"
#include "asf/error.hpp"
#include "asf/ratfun.hpp"

namespace asf {

inline constexpr std::size_t kMaxLayers = 3;
using Exps = std::array<std::uint16_t, kMaxLayers>;

class NFElem {
public:
  NFElem() = default;
  explicit NFElem(const AbelianASSpec& spec) : spec_(&spec) {
    if (spec.r() > kMaxLayers)
      throw UsageError("at most " + std::to_string(kMaxLayers) + " layers are supported");
  }

  static NFElem constant(const AbelianASSpec& spec, const RatFun& c) {
    NFElem a(spec);
    if (!c.is_zero())
      a.terms_.emplace(Exps{}, c);
    return a;
  }
  static NFElem constant(const AbelianASSpec& spec, Elem c) { return constant(spec, RatFun::constant(spec.F(), c)); }
  static NFElem one(const AbelianASSpec& spec) { return constant(spec, spec.F().one()); }
  static NFElem x(const AbelianASSpec& spec) { return constant(spec, RatFun::x(spec.F())); }
  /// The generator y_i (0-based).
  static NFElem y(const AbelianASSpec& spec, std::size_t i) {
    if (i >= spec.r())
      throw UsageError("layer index out of range");
    NFElem a(spec);
    Exps e{};
    e[i] = 1;
    if (spec.q == 1)
      throw UsageError("q must exceed 1");
    a.terms_.emplace(e, RatFun::constant(spec.F(), spec.F().one()));
    return a;
  }

  const AbelianASSpec& spec() const { return *spec_; }
  const std::map<Exps, RatFun>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// The coefficient of y^e (zero if absent).
  RatFun coeff(const Exps& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? RatFun(spec_->F()) : it->second;
  }
  /// True if this lies in K(x); then constant_part() is the element.
  bool is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exps{}); }
  RatFun constant_part() const { return coeff(Exps{}); }

  friend bool operator==(const NFElem& a, const NFElem& b) { return a.terms_ == b.terms_; }

  NFElem operator-() const {
    NFElem r = *this;
    for (auto& [_, c] : r.terms_)
      c = -c;
    return r;
  }
  NFElem& operator+=(const NFElem& b) {
    adopt(b);
    for (const auto& [e, c] : b.terms_)
      accumulate(e, c);
    return *this;
  }
  NFElem& operator-=(const NFElem& b) {
    adopt(b);
    for (const auto& [e, c] : b.terms_)
      accumulate(e, -c);
    return *this;
  }
  friend NFElem operator+(NFElem a, const NFElem& b) { return a += b; }
  friend NFElem operator-(NFElem a, const NFElem& b) { return a -= b; }

  NFElem scaled(const RatFun& c) const {
    NFElem r(*spec_);
    if (c.is_zero())
      return r;
    for (const auto& [e, a] : terms_)
      r.terms_.emplace(e, a * c);
    return r;
  }
  NFElem scaled(Elem c) const {
    NFElem r(*spec_);
    if (!c.rep)
      return r;
    for (const auto& [e, a] : terms_)
      r.terms_.emplace(e, a.scaled(c));
    return r;
  }

  friend NFElem operator*(const NFElem& a, const NFElem& b) {
    const AbelianASSpec& s = a.spec_ ? *a.spec_ : *b.spec_;
    NFElem r(s);
    const std::uint32_t q = static_cast<std::uint32_t>(s.q);
    const std::size_t nr = s.r();
    std::vector<std::pair<Exps, RatFun>> pending;
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        pending.clear();
        Exps e{};
        for (std::size_t i = 0; i < nr; ++i)
          e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
        pending.emplace_back(e, ca * cb);
        // y_i^e = y_i^{e-q+1} + f_i y_i^{e-q} for q <= e <= 2q - 2; one step suffices.
        for (std::size_t i = 0; i < nr; ++i) {
          const std::size_t count = pending.size();
          for (std::size_t t = 0; t < count; ++t) {
            if (pending[t].first[i] < q)
              continue;
            Exps lo = pending[t].first;
            lo[i] = static_cast<std::uint16_t>(lo[i] - q);
            RatFun c2 = pending[t].second * s.f[i];
            pending[t].first[i] = static_cast<std::uint16_t>(pending[t].first[i] - q + 1);
            pending.emplace_back(lo, std::move(c2));
          }
        }
        for (auto& [pe, pc] : pending)
          r.accumulate(pe, pc);
      }
    }
    return r;
  }
  NFElem& operator*=(const NFElem& b) { return *this = *this * b; }

  NFElem pow(std::uint64_t k) const {
    NFElem r = one(*spec_);
    NFElem b = *this;
    for (; k; k >>= 1) {
      if (k & 1)
        r *= b;
      if (k > 1)
        b *= b;
    }
    return r;
  }

  /// this^p: Frobenius on coefficients and exponents times p, then reduction.
  NFElem pth_power() const {
    const AbelianASSpec& s = *spec_;
    const std::uint32_t p = s.p;
    NFElem r(s);
    for (const auto& [e, c] : terms_) {
      NFElem term = constant(s, c.pth_power());
      for (std::size_t i = 0; i < s.r(); ++i)
        if (e[i])
          term *= y_power(i, static_cast<std::uint64_t>(e[i]) * p);
      r += term;
    }
    return r;
  }

  /// this^q via n Frobenius steps.
  NFElem qth_power() const {
    NFElem r = *this;
    for (std::uint32_t j = 0; j < spec_->n; ++j)
      r = r.pth_power();
    return r;
  }

  /// Canonical serialization (exponent vectors in map order, reduced coefficients).
  void serialize(std::string& out) const {
    out += '{';
    for (const auto& [e, c] : terms_) {
      for (std::size_t i = 0; i < spec_->r(); ++i) {
        out += std::to_string(e[i]);
        out += ':';
      }
      c.serialize(out);
      out += ';';
    }
    out += '}';
  }

  std::string to_string() const {
    if (terms_.empty())
      return "0";
    std::string s;
    for (const auto& [e, c] : terms_) {
      if (!s.empty())
        s += " + ";
      s += c.to_string();
      for (std::size_t i = 0; i < spec_->r(); ++i)
        if (e[i])
          s += "*y" + std::to_string(i + 1) + "^" + std::to_string(e[i]);
    }
    return s;
  }

private:
  void adopt(const NFElem& b) {
    if (!spec_)
      spec_ = b.spec_;
  }
  void accumulate(const Exps& e, const RatFun& c) {
    if (c.is_zero())
      return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero())
        terms_.erase(it);
    }
  }
  // y_i^k in normal form for arbitrary k, by repeated squaring.
  NFElem y_power(std::size_t i, std::uint64_t k) const {
    const std::uint32_t q = static_cast<std::uint32_t>(spec_->q);
    if (k < q) {
      NFElem a(*spec_);
      Exps e{};
      e[i] = static_cast<std::uint16_t>(k);
      a.terms_.emplace(e, RatFun::constant(spec_->F(), spec_->F().one()));
      return a;
    }
    return y(*spec_, i).pow(k);
  }

  const AbelianASSpec* spec_ = nullptr;
  std::map<Exps, RatFun> terms_;
};

/// A field map given by x -> x_image (fractional-linear) and y_i -> y_images[i].
struct AutoMap {
  RatFun x_image;
  std::vector<NFElem> y_images;
  std::string label;

  static AutoMap make(const AbelianASSpec& spec, RatFun x_image, std::vector<NFElem> y_images, std::string label = {}) {
    if (!x_image.as_mobius())
      throw DomainError("x-image of " + (label.empty() ? std::string("map") : label) + " is not fractional-linear");
    if (y_images.size() != spec.r())
      throw UsageError("wrong number of y-images");
    return AutoMap{std::move(x_image), std::move(y_images), std::move(label)};
  }

  static AutoMap identity(const AbelianASSpec& spec) {
    std::vector<NFElem> ys;
    for (std::size_t i = 0; i < spec.r(); ++i)
      ys.push_back(NFElem::y(spec, i));
    return AutoMap{RatFun::x(spec.F()), std::move(ys), "id"};
  }

  bool is_identity() const {
    if (!(x_image == RatFun::x(x_image.field())))
      return false;
    for (std::size_t i = 0; i < y_images.size(); ++i)
      if (!(y_images[i] == NFElem::y(y_images[i].spec(), i)))
        return false;
    return true;
  }

  std::string key() const {
    std::string out;
    x_image.serialize(out);
    for (const auto& y : y_images)
      y.serialize(out);
    return out;
  }
};

/// m applied to a: x -> m.x_image inside coefficients, y_i -> m.y_images[i].
inline NFElem substitute(const AutoMap& m, const NFElem& a) {
  const AbelianASSpec& s = a.spec();
  NFElem out(s);
  const std::size_t nr = s.r();
  // Powers of each y-image, filled lazily.
  std::vector<std::vector<NFElem>> powers(nr);
  auto image_power = [&](std::size_t i, std::size_t k) -> const NFElem& {
    auto& v = powers[i];
    if (v.empty())
      v.push_back(NFElem::one(s));
    while (v.size() <= k)
      v.push_back(v.back() * m.y_images[i]);
    return v[k];
  };
  for (const auto& [e, c] : a.terms()) {
    NFElem term = NFElem::constant(s, c.compose(m.x_image));
    for (std::size_t i = 0; i < nr; ++i)
      if (e[i])
        term *= image_power(i, e[i]);
    out += term;
  }
  return out;
}

/// Field-map composition: (outer o inner)(a) = outer(inner(a)).
inline AutoMap compose(const AutoMap& outer, const AutoMap& inner) {
  AutoMap r;
  r.x_image = inner.x_image.compose(outer.x_image);
  for (const auto& y : inner.y_images)
    r.y_images.push_back(substitute(outer, y));
  if (!outer.label.empty() || !inner.label.empty())
    r.label = outer.label + "*" + inner.label;
  return r;
}

struct AutomorphismCheck {
  bool ok = false;
  int failing_layer = -1; // -1: layers fine (failure, if any, is invertibility)
  std::string reason;
  std::size_t order = 0;  // order of the map when ok
};

/// Order of m (smallest k >= 1 with m^k = id), or nothing if not reached within bound.
inline std::optional<std::size_t> map_order(const AutoMap& m, std::size_t bound = 20000) {
  AutoMap cur = m;
  for (std::size_t k = 1; k <= bound; ++k) {
    if (cur.is_identity())
      return k;
    cur = compose(cur, m);
  }
  return std::nullopt;
}

inline AutoMap inverse(const AutoMap& m) {
  auto k = map_order(m);
  if (!k)
    throw DomainError("map has no finite order within the search bound");
  AutoMap r = AutoMap::identity(m.y_images.front().spec());
  for (std::size_t i = 1; i < *k; ++i)
    r = compose(r, m);
  r.label = m.label.empty() ? std::string() : m.label + "^-1";
  return r;
}

inline AutomorphismCheck verify_automorphism(const AbelianASSpec& spec, const AutoMap& m) {
  AutomorphismCheck res;
  if (!m.x_image.as_mobius()) {
    res.reason = "x-image is not fractional-linear";
    return res;
  }
  if (m.y_images.size() != spec.r()) {
    res.reason = "wrong number of y-images";
    return res;
  }
  for (std::size_t i = 0; i < spec.r(); ++i) {
    const NFElem& Y = m.y_images[i];
    NFElem lhs = Y.qth_power() - Y;
    NFElem rhs = NFElem::constant(spec, spec.f[i].compose(m.x_image));
    if (!(lhs == rhs)) {
      res.failing_layer = static_cast<int>(i);
      res.reason = "layer " + std::to_string(i + 1) + " relation not preserved";
      return res;
    }
  }
  // The map is an injective endomorphism of F; it is an automorphism iff it has an inverse, which
  // for these finite-order maps is a power of itself.
  auto k = map_order(m);
  if (!k) {
    res.reason = "no inverse found (map has no finite order within bound)";
    return res;
  }
  AutoMap inv = AutoMap::identity(spec);
  for (std::size_t i = 1; i < *k; ++i)
    inv = compose(inv, m);
  if (!compose(m, inv).is_identity() || !compose(inv, m).is_identity()) {
    res.reason = "inverse check failed";
    return res;
  }
  res.ok = true;
  res.order = *k;
  return res;
}

/// Normalized (a, b, c, d) with x -> (a x + b)/(c x + d): the denominator is monic.
inline std::optional<std::array<Elem, 4>> induced_base_action(const AutoMap& m) { return m.x_image.as_mobius(); }

/// True if m is a translation y_i -> y_i + c_i with c_i in F_q and x fixed.
inline bool is_translation(const AbelianASSpec& spec, const AutoMap& m) {
  if (!(m.x_image == RatFun::x(spec.F())))
    return false;
  for (std::size_t i = 0; i < spec.r(); ++i) {
    NFElem d = m.y_images[i] - NFElem::y(spec, i);
    if (!d.is_rational())
      return false;
    RatFun c = d.constant_part();
    if (!c.is_zero() && (!c.is_constant() || !spec.F().in_subfield(c.constant_value(), spec.n)))
      return false;
  }
  return true;
}

struct GroupReport {
  std::size_t order = 0;
  bool closure_complete = false;
  std::size_t translations = 0;         // |E| inside the closure
  std::size_t kernel_size = 0;          // elements fixing x
  bool E_normal = false;
  bool E_H_trivial_intersection = false;
  std::size_t induced_base_action_order = 0;
  bool base_action_over_Fq = false;     // all induced maps have F_q coefficients
  bool semidirect_consistent = false;   // order = |E| * induced order
  std::map<std::string, std::size_t> generator_orders;
};

/// Breadth-first closure of <gens> under composition, aborting past `bound` elements.
inline GroupReport group_closure(const AbelianASSpec& spec, const std::vector<AutoMap>& gens, std::size_t bound,
                                 std::vector<AutoMap>* elements_out = nullptr) {
  GroupReport rep;
  std::vector<AutoMap> elems;
  std::unordered_map<std::string, std::size_t> index;
  AutoMap id = AutoMap::identity(spec);
  index.emplace(id.key(), 0);
  elems.push_back(id);
  bool aborted = false;
  for (std::size_t head = 0; head < elems.size() && !aborted; ++head) {
    for (const auto& g : gens) {
      AutoMap h = compose(elems[head], g);
      std::string k = h.key();
      if (index.count(k))
        continue;
      if (elems.size() >= bound) {
        aborted = true;
        break;
      }
      index.emplace(std::move(k), elems.size());
      h.label.clear();
      elems.push_back(std::move(h));
    }
  }
  rep.order = elems.size();
  rep.closure_complete = !aborted;
  for (const auto& g : gens)
    if (auto k = map_order(g))
      rep.generator_orders[g.label] = *k;

  std::vector<std::size_t> trans;
  std::set<std::array<std::uint32_t, 4>> base_images;
  rep.base_action_over_Fq = true;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const auto& e = elems[i];
    if (e.x_image == RatFun::x(spec.F()))
      ++rep.kernel_size;
    if (is_translation(spec, e))
      trans.push_back(i);
    if (auto mob = induced_base_action(e)) {
      base_images.insert({(*mob)[0].rep, (*mob)[1].rep, (*mob)[2].rep, (*mob)[3].rep});
      for (auto c : *mob)
        if (!spec.F().in_subfield(c, spec.n))
          rep.base_action_over_Fq = false;
    }
  }
  rep.translations = trans.size();
  rep.induced_base_action_order = base_images.size();
  rep.E_H_trivial_intersection = rep.kernel_size == rep.translations;
  rep.semidirect_consistent = rep.order == rep.translations * rep.induced_base_action_order;

  // E is normal iff s e s^{-1} lies in E for every generator s and every e in E.
  rep.E_normal = rep.closure_complete;
  if (rep.E_normal) {
    for (const auto& s : gens) {
      const AutoMap s_inv = inverse(s);
      for (std::size_t t : trans) {
        AutoMap c = compose(compose(s, elems[t]), s_inv);
        if (!is_translation(spec, c)) {
          rep.E_normal = false;
          break;
        }
      }
      if (!rep.E_normal)
        break;
    }
  }
  if (elements_out)
    *elements_out = std::move(elems);
  return rep;
}

struct SignReport {
  bool plus_holds = false;  // t^{q^2} - t = f1^q + f1 + eta (f2^q + f2)
  bool minus_holds = false; // t^{q^2} - t = f1^q - f1 + eta (f2^q - f2)
  bool generates = false;   // t involves both y_1 and y_2 and eta is not in F_q
  std::string variant() const {
    if (plus_holds && minus_holds)
      return "both (characteristic 2)";
    if (plus_holds)
      return "plus";
    if (minus_holds)
      return "minus";
    return "none";
  }
};

/// The single-equation model t = y_1 + eta y_2 of a two-layer spec.
inline SignReport verify_single_equation(const AbelianASSpec& spec) {
  if (spec.r() != 2)
    throw UsageError("single-equation check needs exactly two layers");
  const Field& F = spec.F();
  SignReport rep;
  NFElem t = NFElem::y(spec, 0) + NFElem::y(spec, 1).scaled(spec.eta);
  NFElem lhs = t.qth_power().qth_power() - t;
  const RatFun& f1 = spec.f[0];
  const RatFun& f2 = spec.f[1];
  RatFun f1q = f1, f2q = f2;
  for (std::uint32_t j = 0; j < spec.n; ++j) {
    f1q = f1q.pth_power();
    f2q = f2q.pth_power();
  }
  rep.plus_holds = lhs == NFElem::constant(spec, f1q + f1 + (f2q + f2).scaled(spec.eta));
  rep.minus_holds = lhs == NFElem::constant(spec, f1q - f1 + (f2q - f2).scaled(spec.eta));
  Exps e1{}, e2{};
  e1[0] = 1;
  e2[1] = 1;
  rep.generates = !t.coeff(e1).is_zero() && !t.coeff(e2).is_zero() && !F.in_subfield(spec.eta, spec.n);
  return rep;
}

/// Builds the degree-p generator t~ for character mu and checks t~^p - t~ = subfield_rhs(spec, mu).
inline bool verify_subfield_identity(const AbelianASSpec& spec, Elem mu) {
  const Field& F = spec.F();
  const std::uint32_t n = spec.n, r = spec.r();
  NFElem t(spec);
  Elem eta_pow = F.one();
  for (std::uint32_t i = 0; i < r; ++i) {
    t += NFElem::y(spec, i).scaled(eta_pow);
    eta_pow = F.mul(eta_pow, spec.eta);
  }
  // t_mu = sum_{j < rn} (mu t)^{p^j}.
  NFElem term = t.scaled(mu);
  NFElem t_mu(spec);
  for (std::uint32_t j = 0; j < r * n; ++j) {
    t_mu += term;
    term = term.pth_power();
  }
  // Correction: sum over layers i and 1 <= j < r of sum_{s < jn} (c_i^{q^{-j}} f_i)^{p^s}.
  RatFun corr(F);
  Elem c = mu;
  for (std::uint32_t i = 0; i < r; ++i) {
    for (std::uint32_t j = 1; j < r; ++j) {
      RatFun h = spec.f[i].scaled(F.frobenius(c, -static_cast<long long>(j * n)));
      for (std::uint32_t s = 0; s < j * n; ++s) {
        corr += h;
        h = h.pth_power();
      }
    }
    c = F.mul(c, spec.eta);
  }
  NFElem tt = t_mu - NFElem::constant(spec, corr);
  NFElem lhs = tt.pth_power() - tt;
  return lhs == NFElem::constant(spec, subfield_rhs(spec, mu));
}

} // namespace asf
