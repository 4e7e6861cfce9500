#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "nilsq/quadratic.hpp"

using namespace nilsq;

namespace {

std::mt19937_64 rng(411900233);

IntMat random_mat(int rows, int cols, int lim) {
  std::uniform_int_distribution<int> d(-lim, lim);
  IntMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.at(i, j) = d(rng);
  return m;
}

std::vector<QuadraticZModule> free_constants() {
  return {QuadraticZModule::tensor_square(), QuadraticZModule::exterior_square(),
          QuadraticZModule::divided_square(), QuadraticZModule::symmetric_square()};
}

}  // namespace

TEST_CASE("quadratic module constants and validation") {
  QuadraticZModule t = QuadraticZModule::tensor_square();
  CHECK(t.e() == CanonicalGroup::free_group(1));
  CHECK(t.ee() == CanonicalGroup::free_group(2));
  QuadraticZModule l = QuadraticZModule::exterior_square();
  CHECK(l.e().is_zero());
  CHECK(l.ee() == CanonicalGroup::free_group(1));
  QuadraticZModule g = QuadraticZModule::divided_square();
  CHECK(g.h().at(0, 0) == 1);
  CHECK(g.p().at(0, 0) == 2);
  QuadraticZModule s = QuadraticZModule::symmetric_square();
  CHECK(s.h().at(0, 0) == 2);
  CHECK(s.p().at(0, 0) == 1);
  QuadraticZModule z2 = QuadraticZModule::mod_two();
  CHECK(z2.e() == CanonicalGroup::cyclic(2));
  CHECK(z2.ee().is_zero());
  CHECK_FALSE(z2.components_free());
  for (const auto& m : free_constants()) CHECK(m.components_free());

  // HPH = 2H fails for H = P = 1 on Z.
  CHECK_THROWS_AS(QuadraticZModule(CanonicalGroup::free_group(1), CanonicalGroup::free_group(1),
                                   IntMat::from_rows({{1}}), IntMat::from_rows({{1}})),
                  std::invalid_argument);
  // Wrong shapes are rejected.
  CHECK_THROWS_AS(QuadraticZModule(CanonicalGroup::free_group(1), CanonicalGroup::free_group(1),
                                   IntMat(2, 1), IntMat(1, 1)),
                  std::invalid_argument);
  // Torsion components: the laws hold modulo the orders. H = 1, P = 0 on
  // Z/2 -> Z/2 gives HPH = 0 = 2H mod 2.
  QuadraticZModule tor(CanonicalGroup::cyclic(2), CanonicalGroup::cyclic(2),
                       IntMat::from_rows({{1}}), IntMat::from_rows({{0}}));
  CHECK_FALSE(tor.components_free());
}

TEST_CASE("free quadratic tensor dimensions") {
  for (int r = 0; r <= 5; ++r) {
    CHECK(QuadBasis(r, QuadraticZModule::tensor_square()).rank() == r * r);
    CHECK(QuadBasis(r, QuadraticZModule::exterior_square()).rank() == r * (r - 1) / 2);
    CHECK(QuadBasis(r, QuadraticZModule::divided_square()).rank() == r * (r + 1) / 2);
    CHECK(QuadBasis(r, QuadraticZModule::symmetric_square()).rank() == r * (r + 1) / 2);
  }
  QuadBasis qb(4, QuadraticZModule::tensor_square());
  // pair order (0,1),(0,2),(0,3),(1,2),(1,3),(2,3)
  CHECK(qb.pair_index(0, 1) == 0);
  CHECK(qb.pair_index(0, 3) == 2);
  CHECK(qb.pair_index(1, 2) == 3);
  CHECK(qb.pair_index(2, 3) == 5);
}

TEST_CASE("induced maps: identity and functoriality") {
  for (const auto& m : free_constants()) {
    for (int r = 0; r <= 4; ++r)
      CHECK(quad_free_induced(m, IntMat::identity(r)) ==
            IntMat::identity(QuadBasis(r, m).rank()));
    for (int trial = 0; trial < 40; ++trial) {
      int a = 1 + trial % 3, b = 1 + (trial / 3) % 3, c = 1 + (trial / 9) % 3;
      IntMat f = random_mat(a, b, 3), g = random_mat(b, c, 3);
      CHECK(quad_free_induced(m, f * g) == quad_free_induced(m, f) * quad_free_induced(m, g));
    }
  }
}

TEST_CASE("induced map values on known quadratic expansions") {
  // Doubling acts as multiplication by 4 on all three rank-one squares.
  IntMat two = IntMat::from_rows({{2}});
  CHECK(quad_free_induced(QuadraticZModule::divided_square(), two).at(0, 0) == 4);
  CHECK(quad_free_induced(QuadraticZModule::symmetric_square(), two).at(0, 0) == 4);
  CHECK(quad_free_induced(QuadraticZModule::tensor_square(), two).at(0, 0) == 4);
  // Negation fixes the square.
  IntMat neg = IntMat::from_rows({{-1}});
  CHECK(quad_free_induced(QuadraticZModule::divided_square(), neg).at(0, 0) == 1);

  // The swap on Z^2 is -1 on the exterior square and +1 on the divided one.
  IntMat swap = IntMat::from_rows({{0, 1}, {1, 0}});
  QuadBasis lb(2, QuadraticZModule::exterior_square());
  IntMat ls = quad_free_induced(QuadraticZModule::exterior_square(), swap);
  CHECK(ls.at(lb.ee_index(0, 1, 0), lb.ee_index(0, 1, 0)) == -1);
  QuadBasis gb(2, QuadraticZModule::divided_square());
  IntMat gs = quad_free_induced(QuadraticZModule::divided_square(), swap);
  CHECK(gs.at(gb.ee_index(0, 1, 0), gb.ee_index(0, 1, 0)) == 1);

  // Diagonal Z -> Z^2 in the tensor square: x (x) x expands to all four
  // elementary tensors: e_1(x)m + e_2(x)m + [e_1,e_2](x)n_0 + [e_1,e_2](x)n_1.
  IntMat diag = IntMat::from_rows({{1}, {1}});
  QuadraticZModule ts = QuadraticZModule::tensor_square();
  IntMat td = quad_free_induced(ts, diag);
  QuadBasis tb(2, ts);
  CHECK(td.rows() == 4);
  CHECK(td.cols() == 1);
  CHECK(td.at(tb.e_index(0, 0), 0) == 1);
  CHECK(td.at(tb.e_index(1, 0), 0) == 1);
  CHECK(td.at(tb.ee_index(0, 1, 0), 0) == 1);
  CHECK(td.at(tb.ee_index(0, 1, 1), 0) == 1);
}

TEST_CASE("torsion relations of the free-argument tensor") {
  // (Z^3) (x) Z/2-coefficients: three generators of order 2.
  PresentedGroup p = quad_free_tensor(QuadraticZModule::mod_two(), 3);
  CHECK(p.canon() == CanonicalGroup(0, {2, 2, 2}));
  // A module with torsion only in the ee-component.
  QuadraticZModule tor(CanonicalGroup::zero(), CanonicalGroup::cyclic(4), IntMat(1, 0),
                       IntMat(0, 1));
  PresentedGroup q = quad_free_tensor(tor, 3);
  CHECK(q.canon() == CanonicalGroup(0, {4, 4, 4}));
  // Free module: no relations.
  CHECK(quad_free_relations(QuadraticZModule::divided_square(), 4).cols() == 0);
}

namespace {

CanonicalGroup cyclic_of(const Int& d) {
  if (d == 0) return CanonicalGroup::free_group(1);
  return CanonicalGroup::cyclic(d);  // rejects d == 1 upstream; universe avoids it
}

CanonicalGroup sum_all(const std::vector<CanonicalGroup>& v) {
  CanonicalGroup out = CanonicalGroup::zero();
  for (const auto& g : v) out = CanonicalGroup::direct_sum(out, g);
  return out;
}

// Closed forms of the classical functors from the cyclic decomposition,
// using the binary tensor/torsion functors as independent infrastructure.
CanonicalGroup closed_classical(ClassicalKind k, const CanonicalGroup& a) {
  const int n = a.num_gens();
  std::vector<Int> ord(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) ord[static_cast<size_t>(i)] = a.gen_order(i);
  auto ten = [](const Int& d1, const Int& d2) {
    return binary_functor(BinKind::tensor, cyclic_of(d1), cyclic_of(d2));
  };
  auto tor = [](const Int& d1, const Int& d2) {
    return binary_functor(BinKind::tor, cyclic_of(d1), cyclic_of(d2));
  };
  std::vector<CanonicalGroup> parts;
  switch (k) {
    case ClassicalKind::tensor_square:
      return binary_functor(BinKind::tensor, a, a);
    case ClassicalKind::tensor_z2:
      return binary_functor(BinKind::tensor, a, CanonicalGroup::cyclic(2));
    case ClassicalKind::lambda2:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) parts.push_back(ten(ord[i], ord[j]));
      break;
    case ClassicalKind::gamma:
      for (int i = 0; i < n; ++i) {
        const Int& d = ord[static_cast<size_t>(i)];
        if (d == 0)
          parts.push_back(CanonicalGroup::free_group(1));
        else
          parts.push_back(CanonicalGroup::cyclic(d % 2 == 0 ? d * 2 : d));
      }
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) parts.push_back(ten(ord[i], ord[j]));
      break;
    case ClassicalKind::sp2:
      for (int i = 0; i < n; ++i) parts.push_back(cyclic_of(ord[static_cast<size_t>(i)]));
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) parts.push_back(ten(ord[i], ord[j]));
      break;
    case ClassicalKind::omega:
      for (int i = 0; i < n; ++i) {
        const Int& d = ord[static_cast<size_t>(i)];
        if (d != 0) parts.push_back(CanonicalGroup::cyclic(d));
      }
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) parts.push_back(tor(ord[i], ord[j]));
      break;
    case ClassicalKind::r:
      for (int i = 0; i < n; ++i) {
        const Int& d = ord[static_cast<size_t>(i)];
        if (d != 0 && d % 2 == 0) parts.push_back(CanonicalGroup::cyclic(2));
      }
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) parts.push_back(tor(ord[i], ord[j]));
      break;
  }
  return sum_all(parts);
}

std::vector<CanonicalGroup> universe() {
  return {CanonicalGroup::zero(),          CanonicalGroup::free_group(1),
          CanonicalGroup(0, {2}),          CanonicalGroup(0, {3}),
          CanonicalGroup(0, {4}),          CanonicalGroup(0, {6}),
          CanonicalGroup(0, {8}),          CanonicalGroup(1, {2}),
          CanonicalGroup(0, {2, 4}),       CanonicalGroup::free_group(2)};
}

std::vector<Int> vadd(const std::vector<Int>& a, const std::vector<Int>& b) {
  std::vector<Int> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

std::vector<Int> vscale(const std::vector<Int>& a, const Int& c) {
  std::vector<Int> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] * c;
  return out;
}

IntMat random_unimodular_q(int n) {
  IntMat u = IntMat::identity(n);
  std::uniform_int_distribution<int> pick(0, n - 1), val(-2, 2);
  for (int step = 0; step < 3 * n; ++step) {
    int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    Int c = val(rng);
    for (int k = 0; k < n; ++k) u.at(i, k) += c * u.at(j, k);
  }
  return u;
}

// A different short free resolution of the same group: adjoin a generator
// equal to a word in the others (keeping the relation map injective), then
// mix generators and relation basis unimodularly.
IntMat messy_presentation(const CanonicalGroup& a) {
  IntMat d = minimal_resolution(a).d;
  const int n = d.rows(), t = d.cols();
  IntMat d2(n + 1, t + 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < t; ++j) d2.at(i, j) = d.at(i, j);
  std::uniform_int_distribution<int> c(-2, 2);
  for (int i = 0; i < n; ++i) d2.at(i, t) = c(rng);
  d2.at(n, t) = -1;
  return random_unimodular_q(n + 1) * d2 * random_unimodular_q(t + 1);
}

std::vector<QuadraticZModule> all_constants() {
  auto v = free_constants();
  v.push_back(QuadraticZModule::mod_two());
  return v;
}

}  // namespace

TEST_CASE("delta complex integrity and hand-checked values") {
  std::vector<CanonicalGroup> args = {CanonicalGroup(0, {2}), CanonicalGroup(0, {2, 4}),
                                      CanonicalGroup(1, {3})};
  std::vector<QuadraticZModule> mods = all_constants();
  mods.push_back(l_module(CanonicalGroup(0, {4})));
  for (const auto& a : args)
    for (const auto& m : mods) {
      QuadComplex cx = quad_complex(a, m);
      CHECK(cx.delta1.compose(cx.delta2).is_zero());
    }

  CanonicalGroup z2(0, {2});
  CHECK(classical(ClassicalKind::gamma, z2) == CanonicalGroup::cyclic(4));
  CHECK(classical(ClassicalKind::lambda2, z2).is_zero());
  CHECK(classical(ClassicalKind::sp2, z2) == z2);
  CHECK(classical(ClassicalKind::tensor_square, z2) == z2);
  CHECK(classical(ClassicalKind::r, z2) == z2);
  CHECK(classical(ClassicalKind::omega, z2) == z2);

  // Torsion pair of the plain tensor-square module on Z/2: Tor(Z/2, Z/2)
  // in the first slot, zero in the second.
  QuadTorsionPair tp = quad_torsion(z2, QuadraticZModule::tensor_square());
  CHECK(tp.prime == z2);
  CHECK(tp.double_prime.is_zero());
}

TEST_CASE("classical functors match closed forms over the universe") {
  std::vector<ClassicalKind> kinds = {ClassicalKind::lambda2,       ClassicalKind::gamma,
                                      ClassicalKind::sp2,           ClassicalKind::tensor_square,
                                      ClassicalKind::tensor_z2,     ClassicalKind::omega,
                                      ClassicalKind::r};
  for (const auto& a : universe())
    for (ClassicalKind k : kinds) {
      CanonicalGroup got = classical(k, a);
      CanonicalGroup want = closed_classical(k, a);
      CHECK_MESSAGE(got == want, "A=", a.to_string(), " got=", got.to_string(), " want=",
                    want.to_string());
    }

  // Free arguments kill both torsion functors for every constant module.
  for (const auto& a : {CanonicalGroup::free_group(1), CanonicalGroup::free_group(2)})
    for (const auto& m : all_constants()) {
      QuadTorsionPair tp = quad_torsion(a, m);
      CHECK(tp.prime.is_zero());
      CHECK(tp.double_prime.is_zero());
    }

  // Z (x) M recovers the e-component of the module.
  std::vector<QuadraticZModule> mods = all_constants();
  mods.push_back(l_module(CanonicalGroup(0, {2})));
  for (const auto& m : mods)
    CHECK(quad_tensor(CanonicalGroup::free_group(1), m) == m.e());

  // The first torsion functor of the tensor-square module computes Tor(A, A);
  // the mod-two module computes Tor(A, Z/2).
  CanonicalGroup a24(0, {2, 4});
  CHECK(quad_torsion(a24, QuadraticZModule::tensor_square()).prime ==
        binary_functor(BinKind::tor, a24, a24));
  CHECK(quad_torsion(CanonicalGroup(0, {4}), QuadraticZModule::mod_two()).prime ==
        CanonicalGroup::cyclic(2));
}

TEST_CASE("presentation independence of tensor and torsion values") {
  std::vector<CanonicalGroup> pool = {CanonicalGroup(0, {2}),    CanonicalGroup(0, {4}),
                                      CanonicalGroup(0, {2, 4}), CanonicalGroup(1, {2}),
                                      CanonicalGroup(0, {6}),    CanonicalGroup(1, {3})};
  std::vector<QuadraticZModule> mods = all_constants();
  std::uniform_int_distribution<size_t> pg(0, pool.size() - 1), pm(0, mods.size() - 1);
  for (int it = 0; it < 15; ++it) {
    const CanonicalGroup& a = pool[pg(rng)];
    const QuadraticZModule& m = mods[pm(rng)];
    IntMat rel = messy_presentation(a);
    CHECK(PresentedGroup(rel.rows(), rel).canon() == a);  // sanity on the scrambler
    CHECK(quad_tensor_presented(rel, m) == quad_tensor(a, m));
    QuadTorsionPair got = quad_torsion_presented(rel, m);
    QuadTorsionPair want = quad_torsion(a, m);
    CHECK(got.prime == want.prime);
    CHECK(got.double_prime == want.double_prime);
  }
}

TEST_CASE("divided and exterior square element identities") {
  CanonicalGroup a(0, {2, 4});
  QuadTensorData d = quad_tensor_data(a, QuadraticZModule::divided_square());
  CHECK(d.value() == CanonicalGroup(0, {2, 4, 8}));
  auto gam = [&](const std::vector<Int>& x) { return d.quotient.lift(d.element(x, 0)); };
  auto br = [&](const std::vector<Int>& x, const std::vector<Int>& y) {
    return d.quotient.lift(d.pair_element(x, y, 0));
  };
  auto eq = [&](const std::vector<Int>& x, const std::vector<Int>& y) {
    return d.quotient.elements_equal(x, y);
  };
  std::vector<std::vector<Int>> elems = enumerate_elements(a);
  for (const auto& x : elems) {
    CHECK(eq(gam(vscale(x, -1)), gam(x)));                  // gamma(-x) = gamma(x)
    CHECK(eq(gam(vscale(x, 2)), vscale(gam(x), 4)));        // gamma(2x) = 4 gamma(x)
    CHECK(eq(br(x, x), vscale(gam(x), 2)));                 // [x,x] = 2 gamma(x)
    for (const auto& y : elems) {
      CHECK(eq(gam(vadd(x, y)), vadd(vadd(gam(x), gam(y)), br(x, y))));
      CHECK(eq(br(x, y), br(y, x)));  // symmetric cross term
      for (const auto& z : elems)
        CHECK(eq(br(vadd(x, y), z), vadd(br(x, z), br(y, z))));
    }
  }

  // Exterior square over Z^2: alternating bilinear pairing.
  QuadTensorData e = quad_tensor_data(CanonicalGroup::free_group(2),
                                      QuadraticZModule::exterior_square());
  CHECK(e.value() == CanonicalGroup::free_group(1));
  auto wedge = [&](const std::vector<Int>& x, const std::vector<Int>& y) {
    return e.quotient.lift(e.pair_element(x, y, 0));
  };
  std::vector<Int> u = {3, -2}, v = {1, 4}, zero2 = {0, 0};
  CHECK(e.quotient.elements_equal(wedge(u, u), e.quotient.lift(e.pair_element(zero2, zero2, 0))));
  CHECK(e.quotient.elements_equal(wedge(u, v), vscale(wedge(v, u), -1)));
  // det(u, v) = 3*4 - (-2)*1 = 14 on the generator.
  CHECK(wedge(u, v)[0] == 14);
}

TEST_CASE("classical induced maps compose and respect identities") {
  CanonicalGroup z2(0, {2}), z4(0, {4});
  Homomorphism g = Homomorphism::between_canonical(z2, z4, IntMat::from_rows({{2}}));
  Homomorphism f = Homomorphism::between_canonical(z4, z2, IntMat::from_rows({{1}}));
  Homomorphism fg = f.compose(g);  // zero map Z/2 -> Z/2
  for (ClassicalKind k : {ClassicalKind::gamma, ClassicalKind::r, ClassicalKind::omega,
                          ClassicalKind::tensor_z2, ClassicalKind::sp2}) {
    Homomorphism tf = classical_induced(k, f);
    Homomorphism tg = classical_induced(k, g);
    CHECK(tf.compose(tg).equal(classical_induced(k, fg)));
  }

  CanonicalGroup a(0, {2, 4});
  Homomorphism ida = Homomorphism::between_canonical(a, a, IntMat::identity(2));
  for (ClassicalKind k : {ClassicalKind::gamma, ClassicalKind::r, ClassicalKind::tensor_square}) {
    Homomorphism ti = classical_induced(k, ida);
    CanonicalGroup val = classical(k, a);
    CHECK(ti.equal(Homomorphism::between_canonical(val, val, IntMat::identity(val.num_gens()))));
  }

  // The projection Z/4 -> Z/2 induces a surjection on divided squares.
  Homomorphism gf = classical_induced(ClassicalKind::gamma, f);
  CHECK(cokernel(gf).group.canon().is_zero());
}

TEST_CASE("cross effects of the quadratic tensor") {
  CanonicalGroup z(1, {}), z2(0, {2}), z3(0, {3}), z4(0, {4}), z6(0, {6});
  CHECK(cross_effect(QuadraticZModule::exterior_square(), z, z) == z);
  CHECK(cross_effect(QuadraticZModule::exterior_square(), z2, z4) == z2);
  CHECK(cross_effect(QuadraticZModule::divided_square(), z4, z6) == z2);
  CHECK(cross_effect(QuadraticZModule::divided_square(), z, z3) == z3);
  CHECK(cross_effect(QuadraticZModule::symmetric_square(), z2, z2) == z2);
  CHECK(cross_effect(QuadraticZModule::tensor_square(), z2, z4) == CanonicalGroup(0, {2, 2}));
  CHECK(cross_effect(QuadraticZModule::tensor_square(), z2, z3).is_zero());
  CHECK(cross_effect(QuadraticZModule::mod_two(), z4, z6).is_zero());
}

TEST_CASE("duality quadratic module") {
  QuadraticZModule l2 = l_module(CanonicalGroup(0, {2}));
  CHECK(l2.e() == CanonicalGroup::cyclic(2));
  CHECK(l2.ee() == CanonicalGroup::cyclic(2));
  CHECK(l2.h().at(0, 0) == 1);
  CHECK(l2.p().at(0, 0) == 0);

  QuadraticZModule lz = l_module(CanonicalGroup::free_group(1));
  CHECK(lz.e() == CanonicalGroup::cyclic(2));
  CHECK(lz.ee().is_zero());

  QuadraticZModule l3 = l_module(CanonicalGroup(0, {3}));
  CHECK(l3.e().is_zero());
  CHECK(l3.ee() == CanonicalGroup::cyclic(3));

  QuadraticZModule l4 = l_module(CanonicalGroup(0, {4}));
  CHECK(l4.h().at(0, 0) == 2);

  QuadraticZModule lmix = l_module(CanonicalGroup(1, {2}));
  CHECK(lmix.e() == CanonicalGroup(0, {2, 2}));
  CHECK(lmix.ee() == CanonicalGroup::cyclic(2));
  CHECK(lmix.h().at(0, 0) == 0);
  CHECK(lmix.h().at(0, 1) == 1);
}

TEST_CASE("graded square functors") {
  CanonicalGroup z2(0, {2});
  GradedGroup b;
  b.set(1, z2);
  b.set(3, z2);
  GradedGroup st = graded_square(SquareKind::tensor, b);
  GradedGroup ss = graded_square(SquareKind::torsion, b);
  CHECK(st.at(2) == CanonicalGroup::cyclic(4));   // diagonal at 2*1: divided square
  CHECK(st.at(4) == CanonicalGroup(0, {2, 2}));   // B_3 (x) (B_1 (+) Z/2)
  CHECK(st.at(6) == CanonicalGroup::cyclic(4));   // diagonal at 2*3
  CHECK(st.at(3).is_zero());
  CHECK(ss.at(2) == z2);                          // R(Z/2)
  CHECK(ss.at(4) == CanonicalGroup(0, {2, 2}));   // B_3 * (B_1 (+) Z/2)
  CHECK(ss.at(6) == z2);

  GradedGroup one;
  one.set(1, CanonicalGroup::free_group(1));
  CHECK(graded_square(SquareKind::tensor, one).at(2) == CanonicalGroup::free_group(1));
  CHECK(graded_square(SquareKind::torsion, one).parts().empty());

  GradedGroup two;
  two.set(2, z2);
  // The second factor carries Z/2 in every odd degree, so degree 3 picks up
  // B_2 (x) Z/2 even with B_1 = 0; the diagonal at 4 is the exterior square.
  GradedGroup tt = graded_square(SquareKind::tensor, two);
  CHECK(tt.at(3) == z2);
  CHECK(tt.at(4).is_zero());
  GradedGroup ts = graded_square(SquareKind::torsion, two);
  CHECK(ts.at(3) == z2);                                          // Tor(Z/2, Z/2)
  CHECK(ts.at(4) == z2);                                          // omega of Z/2

  GradedGroup zee;
  zee.set(2, CanonicalGroup::free_group(1));
  GradedGroup zt = graded_square(SquareKind::tensor, zee);
  CHECK(zt.at(3) == z2);                                          // Z (x) Z/2 augmentation
  CHECK(zt.at(4).is_zero());
  CHECK(graded_square(SquareKind::torsion, zee).parts().empty());

  GradedGroup mix;
  mix.set(1, z2);
  mix.set(2, CanonicalGroup::free_group(1));
  GradedGroup mt = graded_square(SquareKind::tensor, mix);
  CHECK(mt.at(2) == CanonicalGroup::cyclic(4));
  CHECK(mt.at(3) == CanonicalGroup(0, {2, 2}));  // Z (x) (Z/2 (+) Z/2)
  CHECK(mt.at(4).is_zero());
  GradedGroup ms = graded_square(SquareKind::torsion, mix);
  CHECK(ms.at(2) == z2);
  CHECK(ms.at(3).is_zero());

  GradedGroup bad;
  bad.set(0, z2);
  CHECK_THROWS_AS(graded_square(SquareKind::tensor, bad), std::invalid_argument);
}
