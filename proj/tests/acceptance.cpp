// Acceptance gate: one [PASS]/[FAIL] line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "asf/families.hpp"
#include "asf/zeta.hpp"
#include "property_checks.hpp"

using namespace asf;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Criterion {
  bool ok = true;
  std::vector<std::string> notes;
  void fail(const std::string& why) {
    ok = false;
    notes.push_back(why);
  }
};

Invariants closed_form(const std::string& f, long long q) {
  if (f == "artin_mumford")
    return {(q - 1) * (q - 1), (q - 1) * (q - 1)};
  if (f == "singer" || f == "singer_even")
    return {q * q - 1, q * q - 1};
  if (f == "conic_mixed")
    return {q * q - q, q * q - q};
  if (f == "conic_parabola")
    return {q % 2 ? (q * q - q) / 2 : 0, 0};
  if (f == "conic_one_nonrational")
    return {(q * q - 1) / 2, 0};
  if (f == "zieve")
    return {q * q * q - q * q - q + 1, q * q * q - q * q - q + 1};
  if (f == "zieve_modified")
    return {(q - 1) * (q * q - q - 1), (q - 1) * (q * q - q - 1)};
  return {q * q * q * q - q * q * q - q * q + 1, q * q * q * q - q * q * q - q * q + 1};
}

bool allowed(const std::string& f, std::uint64_t q) {
  try {
    check_family_q(f, q);
    return true;
  } catch (const UsageError&) {
    return false;
  }
}

Criterion invariants_criterion() {
  Criterion c;
  const std::vector<std::pair<std::string, std::vector<std::uint64_t>>> cases{
      {"artin_mumford", {2, 3, 4, 5, 7, 8, 9}},
      {"singer", {3, 5, 7, 9}},
      {"singer_even", {2, 4, 8}},
      {"conic_mixed", {2, 3, 4, 5, 7, 8, 9}},
      {"conic_parabola", {2, 3, 4, 5, 7, 8, 9}},
      {"conic_one_nonrational", {3, 5, 7, 9}},
      {"zieve", {2, 3, 4, 5, 7, 8}},
      {"zieve_modified", {3, 5, 7}},
      {"zieve_extended", {3, 5, 7}}};
  int n = 0;
  for (const auto& [f, qs] : cases)
    for (std::uint64_t q : qs) {
      const auto t0 = Clock::now();
      const FamilySpec fs = build_family(f, q);
      const auto inv = abelian_invariants(*fs.spec);
      const Invariants want = closed_form(f, static_cast<long long>(q));
      ++n;
      if (inv.genus != want.genus || inv.p_rank != want.p_rank)
        c.fail(f + " q=" + std::to_string(q) + ": (" + std::to_string(inv.genus) + "," + std::to_string(inv.p_rank) +
               ") want (" + std::to_string(want.genus) + "," + std::to_string(want.p_rank) + ")");
      if (seconds_since(t0) > 10)
        c.fail(f + " q=" + std::to_string(q) + " took " + std::to_string(seconds_since(t0)) + " s");
    }
  c.notes.insert(c.notes.begin(), std::to_string(n) + " cases");
  return c;
}

Criterion identities_criterion() {
  Criterion c;
  std::set<std::string> seen;
  int n = 0;
  auto run = [&](const std::string& f, std::uint64_t q) {
    for (const auto& r : verify_family_identities(build_family(f, q))) {
      ++n;
      seen.insert(r.name + "@" + f + "/" + std::to_string(q));
      if (!r.passed)
        c.fail(f + " q=" + std::to_string(q) + " " + r.name + ": " + r.detail);
    }
  };
  for (const auto& f : family_names())
    for (std::uint64_t q : {2, 3, 4, 5})
      if (allowed(f, q))
        run(f, q);
  run("zieve", 8);
  run("singer_even", 8);
  const std::vector<std::string> required{
      "single_equation@zieve/3",          "single_equation@singer/3",
      "subfield_identities@zieve_extended/3", "subfield_identities@zieve/5",
      "singer_plane_equation@singer/3",   "singer_u_parametrization@singer/5",
      "singer_even_plane_equation@singer_even/4",
      "zieve_even_plane_model@zieve/2",   "zieve_even_plane_model@zieve/4",
      "zieve_even_plane_model@zieve/8",   "zieve_odd_factorization@zieve/3",
      "zieve_odd_factorization@zieve/5",  "zieve_splitting_witness@zieve/3",
      "zieve_splitting_witness@zieve/4",  "zieve_splitting_witness@zieve/5",
      "parabola_hermitian@conic_parabola/3", "one_nonrational_st_model@conic_one_nonrational/3",
      "modified_plane_relation@zieve_modified/3"};
  for (const auto& r : required)
    if (!seen.count(r))
      c.fail("missing check " + r);
  // 13 characters for the three-layer case at q = 3.
  const FamilySpec e3 = build_family("zieve_extended", 3);
  const auto mus = characters(e3.spec->F(), 1, 3);
  std::size_t good = 0;
  for (Elem mu : mus)
    good += verify_subfield_identity(*e3.spec, mu);
  if (mus.size() != 13 || good != 13)
    c.fail("r=3 subfield identities " + std::to_string(good) + "/" + std::to_string(mus.size()));
  const auto sr = verify_single_equation(*build_family("zieve", 3).spec);
  c.notes.insert(c.notes.begin(), std::to_string(n) + " checks; single equation variant " + sr.variant());
  return c;
}

Criterion automorphism_criterion() {
  Criterion c;
  int gens = 0, rels = 0;
  for (const auto& f : family_names())
    for (std::uint64_t q : {2, 3, 4, 5}) {
      if (!allowed(f, q))
        continue;
      const FamilySpec fs = build_family(f, q);
      const AutReport rep = automorphism_report(fs, 0);
      for (const auto& g : rep.generator_checks) {
        ++gens;
        if (!g.passed)
          c.fail(f + " q=" + std::to_string(q) + " generator " + g.name + ": " + g.detail);
      }
      for (const auto& r : rep.relations) {
        ++rels;
        if (!r.passed)
          c.fail(f + " q=" + std::to_string(q) + " relation " + r.name);
      }
    }
  struct Case {
    std::string f;
    std::uint64_t q, order, induced;
    bool at_least = false;
  };
  double slowest = 0;
  for (const Case& k : std::vector<Case>{{"singer", 3, 72, 8},
                                         {"singer_even", 4, 160, 10},
                                         {"singer", 5, 300, 12},
                                         {"zieve", 2, 24, 6},
                                         {"zieve", 4, 960, 60},
                                         {"zieve_extended", 3, 648, 24},
                                         {"zieve_modified", 3, 54, 6, true}}) {
    const auto t0 = Clock::now();
    const FamilySpec fs = build_family(k.f, k.q);
    const GroupReport g = group_closure(*fs.spec, fs.generators, 4 * fs.expected_group_order);
    const double dt = seconds_since(t0);
    slowest = std::max(slowest, dt);
    const std::string tag = k.f + " q=" + std::to_string(k.q);
    if (!g.closure_complete)
      c.fail(tag + " closure incomplete");
    if (k.at_least ? g.order < k.order : g.order != k.order)
      c.fail(tag + " order " + std::to_string(g.order));
    if (!g.E_normal)
      c.fail(tag + " E not normal");
    if (!k.at_least) {
      if (!g.E_H_trivial_intersection)
        c.fail(tag + " E and H intersect");
      if (g.induced_base_action_order != k.induced)
        c.fail(tag + " induced order " + std::to_string(g.induced_base_action_order));
    }
    if (dt > 60)
      c.fail(tag + " closure took " + std::to_string(dt) + " s");
  }
  std::ostringstream s;
  s << gens << " generators, " << rels << " relations; slowest closure " << slowest << " s";
  c.notes.insert(c.notes.begin(), s.str());
  return c;
}

std::vector<CountSeries> computed_series;

Criterion oracle_criterion() {
  Criterion c;
  struct Case {
    std::string f;
    std::uint64_t q;
    Invariants want;
    unsigned max_m;
  };
  double singer_time = 0;
  for (const Case& k : std::vector<Case>{{"zieve", 2, {3, 3}, 6},
                                         {"singer_even", 2, {3, 3}, 6},
                                         {"singer", 3, {8, 8}, 8},
                                         {"artin_mumford", 2, {1, 1}, 2},
                                         {"conic_parabola", 3, {3, 0}, 6}}) {
    const auto t0 = Clock::now();
    const FamilySpec fs = build_family(k.f, k.q);
    const auto inv = abelian_invariants(*fs.spec);
    const ZetaReport z = zeta_report(k.f, k.q, inv.genus, k.max_m);
    const double dt = seconds_since(t0);
    if (k.f == "singer")
      singer_time = dt;
    computed_series.push_back(z.series);
    const std::string tag = k.f + " q=" + std::to_string(k.q);
    if (!z.invariants) {
      c.fail(tag + ": " + z.error);
      continue;
    }
    if (z.l_poly->coeffs.front() != 1 || z.l_poly->degree() != 2 * inv.genus)
      c.fail(tag + " malformed L-polynomial");
    if (*z.invariants != k.want || z.invariants->genus != inv.genus || z.invariants->p_rank != inv.p_rank)
      c.fail(tag + " oracle (" + std::to_string(z.invariants->genus) + "," + std::to_string(z.invariants->p_rank) +
             ") engine (" + std::to_string(inv.genus) + "," + std::to_string(inv.p_rank) + ")");
    if (k.f == "singer" && (z.series.counts.size() < 8 || dt > 120))
      c.fail(tag + " counts to m=" + std::to_string(z.series.counts.size()) + " in " + std::to_string(dt) + " s");
  }
  std::ostringstream s;
  s << "singer q=3 to m=8 in " << singer_time << " s";
  c.notes.insert(c.notes.begin(), s.str());
  return c;
}

Criterion example_criterion() {
  Criterion c;
  const FamilySpec fs = build_family("conic_one_nonrational", 3, {6}, BuildOptions{.full = false});
  const long long N = place_count(fs, 6);
  if (N != 730)
    c.fail("N = " + std::to_string(N));
  c.notes.insert(c.notes.begin(), "places over F_{3^6}: " + std::to_string(N));
  return c;
}

Criterion property_criterion() {
  Criterion c;
  auto take = [&](const std::string& name, const props::PropResult& r, int min_cases) {
    c.notes.push_back(name + " " + std::to_string(r.cases));
    if (!r.ok(min_cases))
      c.fail(name + ": " + std::to_string(r.failures) + "/" + std::to_string(r.cases) + " failed; " + r.first_failure);
  };
  take("as_reduce", props::as_reduce_postcondition(500), 200);
  take("divisor/valuation", props::divisor_and_valuation(300), 200);
  take("laurent", props::laurent_truncation(200), 200);
  take("nf_ring", props::nf_ring_axioms(300), 200);
  take("substitute", props::substitute_homomorphism(200), 200);
  take("eta/representative invariance", props::invariants_choice_independence(220), 200);
  for (std::uint64_t q : {3, 4, 5}) {
    props::PropResult all;
    for (ConicClass k : {ConicClass::TwoRational, ConicClass::RationalNonrational, ConicClass::TwoNonrational}) {
      const auto r = props::conic_classes(q, k, 100);
      all.cases += r.cases;
      if (r.failures && !all.failures)
        all.first_failure = r.first_failure;
      all.failures += r.failures;
    }
    take("two-point conics q=" + std::to_string(q), all, 100);
  }
  take("weil", props::weil_bounds(), 15);
  props::PropResult extra;
  for (const auto& cs : computed_series)
    extra.record(weil_bound_holds(cs, expected_invariants(cs.family, cs.q).genus), cs.family);
  take("weil (oracle series)", extra, 5);
  take("closure", props::closure_properties(), 18);
  return c;
}

} // namespace

int main() {
  struct Entry {
    const char* title;
    Criterion (*fn)();
  };
  const Entry entries[] = {{"closed-form invariants", invariants_criterion},
                           {"identity suite", identities_criterion},
                           {"automorphisms and closures", automorphism_criterion},
                           {"zeta oracle cross-checks", oracle_criterion},
                           {"place count 730 over F_{3^6}", example_criterion},
                           {"property suites", property_criterion}};
  bool all = true;
  int i = 0;
  for (const auto& e : entries) {
    ++i;
    const auto t0 = Clock::now();
    Criterion c;
    try {
      c = e.fn();
    } catch (const std::exception& ex) {
      c.fail(std::string("exception: ") + ex.what());
    }
    all = all && c.ok;
    std::ostringstream notes;
    for (std::size_t k = 0; k < c.notes.size(); ++k)
      notes << (k ? "; " : "") << c.notes[k];
    std::printf("[%s] %d %s (%.1f s) %s\n", c.ok ? "PASS" : "FAIL", i, e.title, seconds_since(t0), notes.str().c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
