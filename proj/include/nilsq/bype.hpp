#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nilsq/chain.hpp"
#include "nilsq/group.hpp"
#include "nilsq/hom.hpp"

namespace nilsq {

// ---------------------------------------------------------------------------
// A "bype" (boundary-in-the-square datum) is a graded abelian group B
// concentrated in degrees >= 1 together with, for each degree n >= 2,
//   b_n  : B_n -> Sq_{n-1}(B)            (a homomorphism), and
//   beta_n : a representative lifting b_n through the canonical surjections
//            mu of the summands of Sq_{n-1}(B; B_n) = sq_full(B_n, B, n-1).
// beta_n is stored as canonical coordinates in beta_total(B_n, B, n-1), the
// ordered direct sum over that decomposition's summands. Morphisms carry a
// degreewise map phi together with an extension witness alpha_n in
// Ext(B_n, B'_{n+1}); both enter the induced map on the square functor.
// ---------------------------------------------------------------------------

// Degree -> homomorphism; degrees absent from the map act as zero.
using GradedMaps = std::map<int, Homomorphism>;
// Degree n -> class in Ext(B_n, B'_{n+1}); absent degrees are zero classes.
using ExtWitness = std::map<int, ExtClass>;

struct Bype {
  GradedGroup groups;                    // B_n, degrees >= 1
  std::map<int, Homomorphism> b;         // n >= 2: B_n -> sq_graded(B, n-1).group
  std::map<int, std::vector<Int>> beta;  // n >= 2: coords in beta_total(B_n, B, n-1)
};

struct ValidationIssue {
  std::string where;    // e.g. "b[3]", "beta[4]", "groups"
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;
  std::string to_string() const;
};

// One summand of the decomposition carrying beta coordinates, in order.
struct SummandSpan {
  std::string origin;  // "m=<M>:<case>" or "(i,j)"
  std::string label;
  CanonicalGroup group;
};

// The ordered summand decomposition of Sq_d(B; A) and its total group. For
// d < 1 (or empty B) both are empty/zero.
std::vector<SummandSpan> beta_layout(const CanonicalGroup& a, const GradedGroup& b, int d);
CanonicalGroup beta_total(const CanonicalGroup& a, const GradedGroup& b, int d);

// Split total coordinates into per-summand coordinate blocks and reassemble.
// Blocks follow beta_layout order; assemble accepts blocks of exactly that
// shape and is a two-sided inverse of split on valid coordinates.
std::vector<std::vector<Int>> split_beta(const CanonicalGroup& a, const GradedGroup& b, int d,
                                         const std::vector<Int>& coords);
std::vector<Int> assemble_beta(const CanonicalGroup& a, const GradedGroup& b, int d,
                               const std::vector<std::vector<Int>>& blocks);

// Structural and equational validation: degree bounds, domains/codomains of
// every b_n, coordinate lengths, and mu(beta_n) == b_n summand by summand.
ValidationReport validate_bype(const Bype& x);

// Construct a bype from b alone by lifting through mu degreewise. Throws
// std::invalid_argument when some b_n does not lift.
Bype make_bype(const GradedGroup& groups, const std::map<int, Homomorphism>& b);

// The map Sq_d(B; A) -> Sq_d(B'; A) induced by (phi, alpha) with the test
// group A fixed. Use A = Z for the coefficient-level (H-level) map.
Homomorphism induced_square_map(const CanonicalGroup& a, const GradedGroup& b,
                                const GradedGroup& bp, int d, const GradedMaps& phi,
                                const ExtWitness& alpha);

// Contravariant change of the test group: Sq_d(B'; B'_n) -> Sq_d(B'; B_n)
// along phi_n : B_n -> B'_n.
Homomorphism square_pullback(const Homomorphism& phi_n, const GradedGroup& bp, int d);

// Does (phi, alpha) define a morphism x -> xp? Checks, for every degree n:
// the H-level square with b, and the representative condition on beta up to
// the image of Ext(B_n, b'_{n+1}) composed with the summand inclusions delta.
bool check_morphism(const Bype& x, const Bype& xp, const GradedMaps& phi,
                    const ExtWitness& alpha);

// Exhaustive search over all alpha for a witness making phi a morphism.
// Returns the first witness found (zero classes omitted from the map), or
// std::nullopt. Throws std::runtime_error("search truncated: ...") when the
// candidate space exceeds 2^16.
std::optional<ExtWitness> find_morphism_witness(const Bype& x, const Bype& xp,
                                                const GradedMaps& phi);

// ---------------------------------------------------------------------------
// Stable (mod 2) form. Matrices are F2-matrices (entries 0/1) between the
// t2/s2 coordinate frames below. Component (n, k) maps out of degree n and
// lands in degree n - k:
//   b[(n,k)],   k >= 2:  B_n (x) Z2 -> B_{n-k} (x) Z2 (k even) or * Z2 (k odd)
//   beta[(n,k)], k >= 1: B_n  *  Z2 -> B_{n-k} (x) Z2 (k odd)  or * Z2 (k even)
// The k = 1 component of b vanishes identically and is not stored.
// ---------------------------------------------------------------------------

// Mod-2 coordinate frames: generators of G with G (x) Z2 / G * Z2 content.
// t2: free generators then even-torsion generators; s2: even-torsion only.
std::vector<int> t2_gens(const CanonicalGroup& g);
std::vector<int> s2_gens(const CanonicalGroup& g);

struct StableBype {
  GradedGroup groups;
  std::map<std::pair<int, int>, IntMat> b;
  std::map<std::pair<int, int>, IntMat> beta;
};

ValidationReport validate_stable_bype(const StableBype& s);

// Pass to the stable form: b components via the stabilization of the
// coefficient forms, beta components via the mod-2 residue maps of the
// summands (Gamma -> (x)Z2, and the degree-diagonal torsion functors through
// their chain-level residues).
StableBype stabilize_bype(const Bype& x);

// beta' is equivalent to beta over the same (B, b) iff they differ by
// b^{k+1} o delta for a degree-raising F2-family delta. Throws when the
// graded groups differ; returns false when the b components differ.
bool stable_equiv(const StableBype& s, const StableBype& t);

// ---------------------------------------------------------------------------
// The mod-2 module form: H(2)_n = B_n (x) Z2 (+) B_{n-1} * Z2 with the exact
// sequence delta/mu and the Sq_k operators (k even >= 2) assembled from the
// stable components. theta is invertible on canonically split data.
// ---------------------------------------------------------------------------

struct FModule {
  GradedGroup h;                          // underlying graded group B
  std::map<int, int> h2_dim;              // dim H(2)_n over F2
  std::map<int, IntMat> delta;            // t2(B_n) -> H(2)_n
  std::map<int, IntMat> mu;               // H(2)_n -> s2(B_{n-1})
  std::map<std::pair<int, int>, IntMat> sq;  // (n, k), k even >= 2
};

ValidationReport validate_fmodule(const FModule& f);

FModule theta(const StableBype& s);
// Inverse of theta. Requires the canonical split (delta = [I;0], mu = [0 I]);
// throws std::invalid_argument otherwise, with instructions to re-split.
StableBype theta_inverse(const FModule& f);

// Existence of an F2-module morphism (psi_n) over the graded map phi,
// compatible with delta, mu and all Sq_k on both sides.
bool fmodule_check_morphism(const FModule& f, const FModule& fp, const GradedMaps& phi);

// ---------------------------------------------------------------------------
// JSON (schemas "bype/1", "stable-bype/1", "fmodule/1"). Matrix entries are
// decimal strings. The from_* functions are the single validation entry
// point: they run the corresponding validator and throw std::invalid_argument
// with the report text when it fails.
// ---------------------------------------------------------------------------

std::string bype_to_json(const Bype& x);
Bype bype_from_json(const std::string& text);
std::string stable_bype_to_json(const StableBype& s);
StableBype stable_bype_from_json(const std::string& text);
std::string fmodule_to_json(const FModule& f);
FModule fmodule_from_json(const std::string& text);

bool bype_equal(const Bype& x, const Bype& y);

}  // namespace nilsq
