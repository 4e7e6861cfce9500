#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "nilsq/sqcalc.hpp"

using namespace nilsq;

namespace {

CanonicalGroup Zf() { return CanonicalGroup::free_group(1); }
CanonicalGroup cyc(long long n) { return CanonicalGroup::cyclic(Int(n)); }
CanonicalGroup Z2() { return cyc(2); }

CanonicalGroup grp(int r, std::vector<long long> tors) {
  return CanonicalGroup(r, std::vector<Int>(tors.begin(), tors.end()));
}

std::vector<Int> reduce(const CanonicalGroup& g, const std::vector<Int>& v) {
  return PresentedGroup::from_canonical(g).coords(v);
}

// im(delta) == ker(mu) by exhaustive enumeration (finite groups only).
void check_exact(const BypeValue& v, const CanonicalGroup& a) {
  CanonicalGroup ev = binary_functor(BinKind::ext, a, v.ext_arg);
  std::set<std::vector<Int>> image;
  for (const auto& x : enumerate_elements(ev))
    image.insert(reduce(v.group, v.delta.apply_canonical(x)));
  std::set<std::vector<Int>> kern;
  CanonicalGroup hv = binary_functor(BinKind::hom, a, v.hom_arg);
  for (const auto& x : enumerate_elements(v.group)) {
    std::vector<Int> y = reduce(hv, v.mu.apply_canonical(x));
    if (is_zero_vec(y)) kern.insert(reduce(v.group, x));
  }
  CHECK(image == kern);
}

Homomorphism hom_1x1(const CanonicalGroup& dom, const CanonicalGroup& cod, long long c) {
  return Homomorphism::between_canonical(dom, cod, IntMat::from_rows({{c}}));
}

}  // namespace

TEST_CASE("dispatch is total and mutually exclusive") {
  for (int m = 1; m <= 8; ++m)
    for (int k = -2; k <= m + 3; ++k) {
      int n = m + k;
      SqCase cs = sq_case(n, m);
      // Independent one-hot predicates for the eleven cases.
      std::map<std::string, bool> pred;
      pred["I"] = k == 0 && m == 1;
      pred["II"] = k == 0 && m > 1;
      pred["III"] = k == m + 1 && k % 2 == 0;
      pred["IV"] = k == m + 1 && k % 2 != 0;
      pred["V"] = k > 0 && k < m - 1 && k % 2 == 0;
      pred["VI"] = k > 0 && k < m - 1 && k % 2 != 0;
      pred["VII"] = k > 0 && k == m - 1 && k % 2 == 0;
      pred["VIII"] = k > 0 && k == m - 1 && k % 2 != 0;
      pred["IX"] = k > 0 && k == m && k % 2 == 0;
      pred["X"] = k > 0 && k == m && k % 2 != 0;
      pred["XI"] = k < 0 || k > m + 1;
      int hot = 0;
      for (const auto& [tag, on] : pred)
        if (on) ++hot;
      CHECK(hot == 1);
      CHECK(pred.at(cs.tag));
    }
  CHECK_THROWS_AS(sq_case(1, 0), std::invalid_argument);
}

TEST_CASE("bidegree operator on the reference inputs") {
  CHECK(sq_case(2, 1).tag == "X");
  CHECK(sq_nm(Zf(), cyc(2), 2, 1).group == cyc(4));

  CHECK(sq_case(3, 3).tag == "II");
  CHECK(sq_nm(cyc(2), cyc(2), 3, 3).group == cyc(2));

  CHECK(sq_case(9, 3).tag == "XI");
  CHECK(sq_nm(Zf(), cyc(6), 9, 3).group.is_zero());

  CHECK(sq_nij(Zf(), cyc(2), cyc(4), 6, 2, 3).group == cyc(2));   // Hom(Z, Z/2 * Z/4)
  CHECK(sq_nij(Zf(), cyc(2), cyc(4), 7, 2, 3).group.is_zero());   // out of band
  CHECK(sq_nij(cyc(2), cyc(2), cyc(3), 5, 2, 3).group.is_zero());  // Trp with coprime inputs

  GradedGroup b;
  b.set(1, Zf());
  b.set(2, Zf());
  SqValue v = sq_full(Zf(), b, 3);
  CHECK(v.group == grp(1, {2}));  // Z (+) Z/2

  GradedGroup c;
  c.set(2, grp(2, {}));
  CHECK(sq_full(Zf(), c, 4).group == Zf());  // Lambda^2(Z^2) = Z
}

TEST_CASE("triple torsion product values and exactness") {
  BypeValue t22 = trp(cyc(2), cyc(2), cyc(2));
  CHECK(t22.group.order() == 4);
  CHECK(t22.ext_arg == cyc(2));  // Z/2 * Z/2
  CHECK(t22.hom_arg == cyc(2));  // Z/2 (x) Z/2
  check_exact(t22, cyc(2));

  BypeValue t24 = trp(cyc(2), cyc(2), cyc(4));
  CHECK(t24.group.order() == 4);
  check_exact(t24, cyc(2));

  BypeValue tz = trp(Zf(), cyc(2), cyc(4));
  CHECK(tz.group == cyc(2));  // Hom(Z, Z/2 (x) Z/4)
  CHECK(tz.delta.is_zero());
}

TEST_CASE("bype functor values, ends and sequences") {
  for (auto d : {cyc(2), cyc(3), cyc(4), grp(1, {2})}) {
    BypeValue gt = bype_functor(BypeKind::gammaT, Zf(), d);
    CHECK(gt.group == classical(ClassicalKind::gamma, d));
    CHECK(gt.ext_arg == classical(ClassicalKind::r, d));
    CHECK(gt.hom_arg == classical(ClassicalKind::gamma, d));

    BypeValue ls = bype_functor(BypeKind::lsharp, Zf(), d);
    CHECK(ls.group == binary_functor(BinKind::tensor, d, Z2()));
    CHECK(ls.ext_arg == classical(ClassicalKind::lambda2, d));
    CHECK(ls.hom_arg == binary_functor(BinKind::tensor, d, Z2()));

    BypeValue lt = bype_functor(BypeKind::lambdaT, Zf(), d);
    CHECK(lt.group == classical(ClassicalKind::lambda2, d));
    CHECK(lt.ext_arg == classical(ClassicalKind::omega, d));
    CHECK(lt.hom_arg == classical(ClassicalKind::lambda2, d));
  }

  CHECK(bype_functor(BypeKind::lambdaT, cyc(2), cyc(4)).group.order() == 2);
  CHECK(bype_functor(BypeKind::gammaT, cyc(2), cyc(2)).group == grp(0, {2, 2}));
  CHECK(bype_functor(BypeKind::lsharp, cyc(2), cyc(2)).group == cyc(2));

  // mu o delta == 0 and exactness in the middle.
  for (auto kind : {BypeKind::lambdaT, BypeKind::gammaT, BypeKind::lsharp}) {
    BypeValue v = bype_functor(kind, cyc(2), cyc(2));
    CHECK(v.mu.compose(v.delta).is_zero());
    check_exact(v, cyc(2));
  }
  check_exact(bype_functor(BypeKind::lsharp, cyc(4), cyc(2)), cyc(4));
  check_exact(bype_functor(BypeKind::lsharp, grp(1, {2}), grp(0, {2, 4})), grp(1, {2}));
  check_exact(bype_functor(BypeKind::gammaT, cyc(4), cyc(2)), cyc(4));
  check_exact(bype_functor(BypeKind::lambdaT, cyc(2), cyc(4)), cyc(2));
}

TEST_CASE("coefficient forms at A = Z match the closed expressions") {
  for (auto d : {cyc(2), cyc(4), cyc(6), grp(1, {2})}) {
    CanonicalGroup dx = binary_functor(BinKind::tensor, d, Z2());
    CanonicalGroup ds = binary_functor(BinKind::tor, d, Z2());
    for (int m = 1; m <= 4; ++m)
      for (int k = 0; k <= m + 1; ++k) {
        int n = m + k;
        SqCase cs = sq_case(n, m);
        CanonicalGroup got = sq_nm(Zf(), d, n, m).group;
        CanonicalGroup want;
        if (cs.tag == "I" || cs.tag == "II" || cs.tag == "XI")
          want = CanonicalGroup();
        else if (cs.tag == "III")
          want = classical(ClassicalKind::r, d);
        else if (cs.tag == "IV")
          want = classical(ClassicalKind::omega, d);
        else if (cs.tag == "V" || cs.tag == "VII")
          want = ds;
        else if (cs.tag == "VI" || cs.tag == "VIII")
          want = dx;
        else if (cs.tag == "IX")
          want = CanonicalGroup::direct_sum(classical(ClassicalKind::lambda2, d), ds);
        else  // X
          want = classical(ClassicalKind::gamma, d);
        CHECK(got == want);
      }
  }
}

TEST_CASE("sequence ends align with the neighbouring coefficient forms") {
  for (auto a : {cyc(2), cyc(4)})
    for (auto d : {cyc(2), cyc(6)})
      for (int m = 1; m <= 3; ++m)
        for (int k = 0; k <= m + 1; ++k) {
          int n = m + k;
          SqValue s = sq_nm(a, d, n, m);
          CHECK(s.ext_end() == sq_nm(Zf(), d, n + 1, m).group);
          CHECK(s.hom_end() == sq_nm(Zf(), d, n, m).group);
        }
}

TEST_CASE("stable range agreement and stabilization report") {
  CanonicalGroup a = cyc(4), d = cyc(6);
  for (int k : {1, 2}) {  // k < m-1 for m = 4
    SqValue un = sq_nm(a, d, 4 + k, 4);
    SqValue st = stable_sq(a, d, k);
    REQUIRE(un.summands.size() == st.summands.size());
    for (size_t i = 0; i < un.summands.size(); ++i) {
      CHECK(un.summands[i].label == st.summands[i].label);
      CHECK(un.summands[i].group == st.summands[i].group);
      CHECK(un.summands[i].ext_arg == st.summands[i].ext_arg);
      CHECK(un.summands[i].hom_arg == st.summands[i].hom_arg);
    }
  }
  CHECK(stabilize(a, d, 5, 4).identity);
  StabilizeResult r = stabilize(a, d, 4, 2);
  CHECK(!r.identity);
  REQUIRE(r.unstable_labels.size() == 1);
  CHECK(r.unstable_labels[0] == "Lambda^2T#(A,D)");
  CHECK(stabilize(a, d, 2, 2).out_of_range);
}

TEST_CASE("stabilization maps between quadratic functor values") {
  // sigma: Gamma(Z/2) = Z/4 ->> Z/2 (x) Z2 = Z/2.
  Homomorphism sg = sigma_gamma(cyc(2));
  CHECK(sg.dom().canon() == cyc(4));
  CHECK(sg.cod().canon() == cyc(2));
  CHECK(!sg.is_zero());

  // nu_R: R(Z/4) = Z/2 -> Z/4 * Z2 = Z/2 is an isomorphism.
  Homomorphism nr = nu_r(cyc(4));
  CHECK(nr.dom().canon() == cyc(2));
  CHECK(nr.cod().canon() == cyc(2));
  CHECK(!nr.is_zero());
  CHECK(nu_r(cyc(3)).dom().canon().is_zero());

  // nu_Omega: Omega(Z/4) = Z/4 -> Z/4 (x) Z2 = Z/2 is the reduction.
  Homomorphism no = nu_omega(cyc(4));
  CHECK(no.dom().canon() == cyc(4));
  CHECK(no.cod().canon() == cyc(2));
  CHECK(!no.is_zero());

  // Naturality of sigma: sigma o Gamma(f) == (f (x) Z2) o sigma.
  for (auto [sd, td, c] : {std::tuple{cyc(2), cyc(4), 2LL}, {cyc(4), cyc(2), 1LL},
                           {cyc(2), cyc(2), 1LL}}) {
    Homomorphism f = hom_1x1(sd, td, c);
    Homomorphism lhs = sigma_gamma(td).compose(classical_induced(ClassicalKind::gamma, f));
    Homomorphism rhs =
        induced_map(BinKind::tensor, f, Slot::left, Z2()).compose(sigma_gamma(sd));
    CHECK(lhs.equal(rhs));
  }

  // The coefficient-form stabilization: Gamma(Z/2) = Z/4 -> Z/2 is onto...
  Homomorphism st21 = zform_stabilization(cyc(2), 2, 1);
  CHECK(st21.dom().canon() == cyc(4));
  CHECK(st21.cod().canon() == cyc(2));
  CHECK(!st21.is_zero());
  // ... and in the stable range it is the identity.
  Homomorphism st54 = zform_stabilization(cyc(6), 5, 4);
  CHECK(st54.equal(Homomorphism::between_canonical(
      st54.dom().canon(), st54.cod().canon(), IntMat::identity(st54.dom().canon().num_gens()))));
  CHECK_THROWS_AS(zform_stabilization(cyc(2), 2, 2), std::invalid_argument);
}

TEST_CASE("maps induced by an extension class between coefficient forms") {
  // Odd superscripts vanish, with the correct ends.
  {
    ExtGroup eg(cyc(2), cyc(2));
    ExtClass alpha = eg.to_class({Int(1)});
    Homomorphism h = ext_induced(3, 3, alpha);
    CHECK(h.dom().canon() == cyc(4));  // Gamma(Z/2)
    CHECK(h.cod().canon() == cyc(2));  // Z/2 * Z2
    CHECK(h.is_zero());

    // ^2[3] is the connecting map of the mod-2 six-term sequence: here an iso.
    Homomorphism d3 = ext_induced(2, 3, alpha);
    CHECK(d3.dom().canon() == cyc(2));
    CHECK(d3.cod().canon() == cyc(2));
    CHECK(!d3.is_zero());

    // ^2[2] kills the exterior part; on the zero class it is zero.
    CHECK(ext_induced(2, 2, ExtClass::zero(cyc(2), cyc(2))).is_zero());
    CHECK(!ext_induced(2, 2, alpha).is_zero());
  }

  // Additivity in the class.
  {
    ExtGroup eg(cyc(4), cyc(2));
    ExtClass alpha = eg.to_class({Int(1)});
    Homomorphism one = ext_induced(2, 3, alpha);
    CHECK(!one.is_zero());
    Homomorphism two = ext_induced(2, 3, alpha + alpha);
    CHECK(two.equal(one + one));
    CHECK(two.is_zero());

    // ^2[1] factors through R(A): nonzero on the generator of Ext(Z/4, Z/2).
    Homomorphism h1 = ext_induced(2, 1, alpha);
    CHECK(h1.dom().canon() == cyc(2));  // R(Z/4)
    CHECK(h1.cod().canon() == cyc(2));
    CHECK(!h1.is_zero());
  }

  // Naturality in B: pushing the class forward along g commutes with g (x) Z2.
  {
    ExtGroup eg(cyc(2), cyc(2));
    ExtClass alpha = eg.to_class({Int(1)});
    Homomorphism g = hom_1x1(cyc(2), cyc(4), 2);  // Z/2 >-> Z/4
    ExtClass pushed(cyc(2), cyc(4), g.canonical_matrix() * alpha.rep());
    Homomorphism lhs = ext_induced(2, 3, pushed);
    Homomorphism rhs =
        induced_map(BinKind::tensor, g, Slot::left, Z2()).compose(ext_induced(2, 3, alpha));
    CHECK(lhs.equal(rhs));
  }

  // Naturality in A: pulling the class back along f commutes with f * Z2.
  {
    ExtGroup eg(cyc(4), cyc(2));
    ExtClass alpha = eg.to_class({Int(1)});
    Homomorphism f = hom_1x1(cyc(2), cyc(4), 2);  // A' = Z/2 -> A = Z/4
    ResLift lift = lift_to_resolutions(f);
    ExtClass pulled(cyc(2), cyc(2), alpha.rep() * lift.f1);
    Homomorphism lhs = ext_induced(2, 3, pulled);
    Homomorphism rhs =
        ext_induced(2, 3, alpha).compose(induced_map(BinKind::tor, f, Slot::left, Z2()));
    CHECK(lhs.equal(rhs));
  }

  // Outside the defined range the construction is rejected.
  ExtClass alpha = ExtGroup(cyc(2), cyc(2)).to_class({Int(1)});
  CHECK_THROWS_AS(ext_induced(2, 4, alpha), std::invalid_argument);
  CHECK_THROWS_AS(ext_induced(4, 1, alpha), std::invalid_argument);
  CHECK_THROWS_AS(ext_induced(0, 2, alpha), std::invalid_argument);
}

TEST_CASE("shift map between neighbouring bidegrees") {
  // {3,1}: Hom column through ^2[1], nonzero for the generator of Ext(Z/4,Z/2).
  {
    ExtClass alpha = ExtGroup(cyc(4), cyc(2)).to_class({Int(1)});
    Homomorphism sh = shift_map(3, 1, alpha, Zf());
    CHECK(sh.dom().canon() == cyc(2));  // Hom(Z, R(Z/4))
    CHECK(sh.cod().canon() == cyc(2));  // L#(Z, Z/2) = Z/2 (x) Z2
    CHECK(!sh.is_zero());
    CHECK(shift_map(3, 1, ExtClass::zero(cyc(4), cyc(2)), Zf()).is_zero());
  }

  // {2,1} for A = D = D' = Z/2: both commuting squares of the assembly.
  {
    CanonicalGroup a = cyc(2);
    ExtClass alpha = ExtGroup(cyc(2), cyc(2)).to_class({Int(1)});
    Homomorphism sh = shift_map(2, 1, alpha, a);
    SqValue s = sq_nm(a, cyc(2), 2, 1);
    SqValue t = sq_nm(a, cyc(2), 2, 2);
    REQUIRE(s.summands.size() == 1);
    REQUIRE(t.summands.size() == 1);
    CHECK(sh.dom().canon() == s.group);
    CHECK(sh.cod().canon() == t.group);

    Homomorphism coeff = ext_induced(2, 1, alpha);  // R(D) -> D' (x) Z2
    Homomorphism ext_push = induced_map(BinKind::ext, coeff, Slot::right, a);
    Homomorphism lhs = sh.compose(s.summands[0].delta);
    Homomorphism rhs = t.summands[0].delta.compose(ext_push);
    CHECK(lhs.equal(rhs));
    CHECK(!lhs.is_zero());

    CHECK(t.summands[0].mu.compose(sh).is_zero());
  }
}

TEST_CASE("fixed symbolic tables") {
  auto parse = [](const std::string& text) {
    std::map<std::pair<int, int>, std::string> cells;
    nlohmann::json j = nlohmann::json::parse(text);
    for (const auto& c : j["cells"])
      cells[{int(c["m"]), int(c["n"])}] = c["value"].get<std::string>();
    return cells;
  };

  auto t1 = parse(printed_table(1, TableFormat::json));
  CHECK(t1.at({1, 1}) == "Ext(A,Gamma(D))");
  CHECK(t1.at({1, 2}) == "GammaT#(A,D)");
  CHECK(t1.at({1, 3}) == "Hom(A,R(D))");
  CHECK(t1.at({2, 1}) == "0");
  CHECK(t1.at({2, 2}) == "Ext(A,D(x)Z2)");
  CHECK(t1.at({2, 3}) == "L#(A,D) (+) Ext(A,D*Z2)");
  CHECK(t1.at({3, 1}) == "0");
  CHECK(t1.at({3, 2}) == "0");
  CHECK(t1.at({3, 3}) == "Ext(A,D(x)Z2)");
  CHECK(t1.at({4, 1}) == "0");
  CHECK(t1.at({4, 2}) == "0");
  CHECK(t1.at({4, 3}) == "0");

  auto t2 = parse(printed_table(2, TableFormat::json));
  CHECK(t2.at({2, 4}) == "Lambda^2T#(A,D) (+) Hom(A,D*Z2)");
  CHECK(t2.at({2, 5}) == "Hom(A,Omega(D))");
  CHECK(t2.at({3, 4}) == "Ext(A,D*Z2) (+) Hom(A,D(x)Z2)");
  CHECK(t2.at({3, 5}) == "Ext(A,Gamma(D)) (+) Hom(A,D*Z2)");
  CHECK(t2.at({4, 4}) == "Ext(A,D(x)Z2)");
  CHECK(t2.at({4, 5}) == "Ext(A,D*Z2) (+) Hom(A,D(x)Z2)");
  CHECK(t2.at({5, 4}) == "0");
  CHECK(t2.at({5, 5}) == "Ext(A,D(x)Z2)");

  auto t3 = parse(printed_table(3, TableFormat::json));
  CHECK(t3.at({2, 6}) == "0");
  CHECK(t3.at({2, 7}) == "0");
  CHECK(t3.at({3, 6}) == "GammaT#(A,D)");
  CHECK(t3.at({3, 7}) == "Hom(A,R(D))");
  CHECK(t3.at({4, 6}) == "Ext(A,D(x)Z2) (+) Hom(A,D*Z2)");
  CHECK(t3.at({4, 7}) == "L#(A,D) (+) Ext(A,D*Z2)");
  CHECK(t3.at({5, 6}) == "Ext(A,D*Z2) (+) Hom(A,D(x)Z2)");
  CHECK(t3.at({5, 7}) == "Ext(A,D(x)Z2) (+) Hom(A,D*Z2)");
  CHECK(t3.at({6, 6}) == "Ext(A,D(x)Z2)");
  CHECK(t3.at({6, 7}) == "Ext(A,D*Z2) (+) Hom(A,D(x)Z2)");

  // The other emitters produce the same cells.
  std::string md = printed_table(1, TableFormat::markdown);
  CHECK(md.find("| m \\ n |") != std::string::npos);
  CHECK(md.find("GammaT#(A,D)") != std::string::npos);
  std::string csv = printed_table(1, TableFormat::csv);
  CHECK(csv.find("Ext(A,Gamma(D))") != std::string::npos);
  CHECK(csv.find("\"L#(A,D) (+) Ext(A,D*Z2)\"") != std::string::npos);
}

TEST_CASE("evaluated table at fixed coefficients") {
  nlohmann::json j = nlohmann::json::parse(sq_table(cyc(2), 3, 2, TableFormat::json));
  CHECK(j["coefficients"] == "Z/2");
  bool found = false;
  for (const auto& c : j["cells"])
    if (int(c["m"]) == 1 && int(c["n"]) == 2) {
      CHECK(c["value"] == "Z/4");
      found = true;
    }
  CHECK(found);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(sq_nm(Zf(), cyc(2), 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(sq_nij(Zf(), cyc(2), cyc(2), 5, 2, 2), std::invalid_argument);
  GradedGroup bad;
  bad.set(0, cyc(2));
  CHECK_THROWS_AS(sq_full(Zf(), bad, 2), std::invalid_argument);
  CHECK_THROWS_AS(stable_sq(Zf(), cyc(2), 0), std::invalid_argument);
  CHECK_THROWS_AS(printed_table(4, TableFormat::json), std::invalid_argument);
  CHECK_THROWS_AS(sq_table(0, 0, TableFormat::csv), std::invalid_argument);
}
