#pragma once

#include <string>
#include <vector>

#include "nilsq/chain.hpp"
#include "nilsq/group.hpp"
#include "nilsq/hom.hpp"
#include "nilsq/matrix.hpp"

namespace nilsq {

// A quadratic Z-module M = (M_e -H-> M_ee -P-> M_e) with HPH = 2H and
// PHP = 2P. H and P are stored as matrices on canonical generators and
// validated as homomorphisms on construction.
class QuadraticZModule {
 public:
  QuadraticZModule(CanonicalGroup e, CanonicalGroup ee, IntMat h, IntMat p);

  // Constant modules of the classical quadratic functors.
  static QuadraticZModule tensor_square();     // A (x) A
  static QuadraticZModule exterior_square();   // Lambda^2 A
  static QuadraticZModule divided_square();    // Gamma A
  static QuadraticZModule symmetric_square();  // SP^2 A
  static QuadraticZModule mod_two();           // A (x) Z/2

  const CanonicalGroup& e() const { return e_; }
  const CanonicalGroup& ee() const { return ee_; }
  const IntMat& h() const { return h_; }
  const IntMat& p() const { return p_; }
  Homomorphism h_hom() const;
  Homomorphism p_hom() const;

  bool components_free() const { return e_.torsion().empty() && ee_.torsion().empty(); }
  bool operator==(const QuadraticZModule& o) const {
    return e_ == o.e_ && ee_ == o.ee_ && h_ == o.h_ && p_ == o.p_;
  }
  std::string to_string() const;

 private:
  CanonicalGroup e_, ee_;
  IntMat h_;  // ee.num_gens x e.num_gens
  IntMat p_;  // e.num_gens x ee.num_gens
};

// Ordered generator basis of (Z^r) (x) M: first e_i (x) m_a (i ascending, a
// over generators of M_e), then [e_i, e_j] (x) n_b for i < j in lexicographic
// pair order over generators of M_ee.
struct QuadBasis {
  int r = 0, me = 0, mee = 0;
  QuadBasis(int rank, const QuadraticZModule& m)
      : r(rank), me(m.e().num_gens()), mee(m.ee().num_gens()) {}
  int pairs() const { return r * (r - 1) / 2; }
  int rank() const { return r * me + pairs() * mee; }
  int e_index(int i, int a) const { return i * me + a; }
  int pair_index(int i, int j) const { return i * r - i * (i + 1) / 2 + (j - i - 1); }
  int ee_index(int i, int j, int b) const { return r * me + pair_index(i, j) * mee + b; }
};

// Generator matrix of the induced map (Z^{f.cols}) (x) M -> (Z^{f.rows}) (x) M
// by the universal quadratic expansion
//   (sum c_i b_i) (x) m   = sum c_i (b_i(x)m) + C(c_i,2)(b_i(x)PHm)
//                           + sum_{i<l} c_i c_l [b_i,b_l](x)Hm,
//   [x, y] bilinear with [b,b](x)n = b(x)Pn and [b_j,b_i](x)n = [b_i,b_j](x)(HP-1)n.
IntMat quad_free_induced(const QuadraticZModule& m, const IntMat& f);

// Relation columns of (Z^r) (x) M induced by torsion in the components of M.
IntMat quad_free_relations(const QuadraticZModule& m, int r);
PresentedGroup quad_free_tensor(const QuadraticZModule& m, int r);

// The three-term complex M_#(d) of a free presentation d: Y1 -> Y0, as
// homomorphisms of presented groups:
//   Y1 (x) Y1 (x) M_ee --delta2--> (Y1 (x) M) (+) (Y1 (x) Y0 (x) M_ee) --delta1--> Y0 (x) M.
struct QuadComplex {
  QuadraticZModule m;
  IntMat rel;  // presentation matrix, one row per Y0 generator
  PresentedGroup c0, c1, c2;
  Homomorphism delta1, delta2;

  int y0() const { return rel.rows(); }
  int y1() const { return rel.cols(); }
};
QuadComplex quad_complex(const CanonicalGroup& a, const QuadraticZModule& m);
// Same complex over an explicit presentation; used for cross effects and the
// resolution-independence tests.
QuadComplex quad_complex_presented(const IntMat& rel, const QuadraticZModule& m);

// Quadratic tensor product A (x) M = coker(delta1), with element access.
struct QuadTensorData {
  QuadComplex cx;
  PresentedGroup quotient;  // c0 modulo im(delta1); same generators as c0

  const CanonicalGroup& value() const { return quotient.canon(); }
  // Class of a (x) m_a for a in canonical coordinates; quadratic in a.
  std::vector<Int> element(const std::vector<Int>& a_coords, int m_e_gen) const;
  // Class of [a, a'] (x) n_b; bilinear in the two arguments.
  std::vector<Int> pair_element(const std::vector<Int>& a_coords,
                                const std::vector<Int>& a2_coords, int m_ee_gen) const;
};
QuadTensorData quad_tensor_data(const CanonicalGroup& a, const QuadraticZModule& m);
CanonicalGroup quad_tensor(const CanonicalGroup& a, const QuadraticZModule& m);
CanonicalGroup quad_tensor_presented(const IntMat& rel, const QuadraticZModule& m);

// Torsion functors A *' M = ker(delta1)/im(delta2) and A *'' M = ker(delta2).
struct QuadTorsionPair {
  CanonicalGroup prime, double_prime;
};
struct QuadTorsionData {
  QuadComplex cx;
  Subquotient ker1;       // ker(delta1) with its inclusion into c1
  Homomorphism factored;  // delta2 factored through the inclusion
  Subquotient prime;      // cokernel(factored); generators shared with ker1.group
  CanonicalGroup double_prime;

  QuadTorsionPair pair() const { return {prime.group.canon(), double_prime}; }
};
QuadTorsionData quad_torsion_data(const CanonicalGroup& a, const QuadraticZModule& m);
QuadTorsionData quad_torsion_data_presented(const IntMat& rel, const QuadraticZModule& m);
QuadTorsionPair quad_torsion(const CanonicalGroup& a, const QuadraticZModule& m);
QuadTorsionPair quad_torsion_presented(const IntMat& rel, const QuadraticZModule& m);

// Induced maps on the tensor and (prime) torsion values of f: A -> B.
Homomorphism quad_tensor_induced(const Homomorphism& f, const QuadraticZModule& m);
Homomorphism quad_torsion_induced(const Homomorphism& f, const QuadraticZModule& m);

enum class ClassicalKind { lambda2, gamma, sp2, tensor_square, tensor_z2, omega, r };
CanonicalGroup classical(ClassicalKind kind, const CanonicalGroup& a);
// Induced map of f under the same classical functor.
Homomorphism classical_induced(ClassicalKind kind, const Homomorphism& f);

// Cross effect of the quadratic tensor:
// ker( (A+B) (x) M -> (A (x) M) (+) (B (x) M) ) under the two retractions.
CanonicalGroup cross_effect(const QuadraticZModule& m, const CanonicalGroup& a,
                            const CanonicalGroup& b);

// L(A) = (Hom(A,Z/2) -del-> Ext(A,Z) -0-> Hom(A,Z/2)) with del the connecting
// homomorphism of Z -2-> Z -> Z/2.
QuadraticZModule l_module(const CanonicalGroup& a);

// Graded square functors on a graded group supported in degrees >= 1:
//   tensor:  ordered products A_i (x) (A (+) (Z/2)_odd)_j over i > j at degree
//            i+j, plus the diagonal Gamma(A_m) (m odd) / Lambda^2(A_m) (m even)
//            at degree 2m;
//   torsion: ordered products A_i * (A (+) (Z/2)_odd)_j at degree i+j, plus the
//            diagonal R(A_m) (m odd) / Omega(A_m) (m even) at degree 2m.
enum class SquareKind { tensor, torsion };
GradedGroup graded_square(SquareKind kind, const GradedGroup& b);

}  // namespace nilsq
