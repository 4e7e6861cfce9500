#include "nilsq/tables.hpp"

#include <stdexcept>
#include <string>

#include "nilsq/hom.hpp"
#include "nilsq/quadratic.hpp"

namespace nilsq {

namespace {

CanonicalGroup zero_group() { return CanonicalGroup(0, {}); }
CanonicalGroup zee() { return CanonicalGroup::free_group(1); }
CanonicalGroup cyc(long long d) { return CanonicalGroup::cyclic(Int(d)); }

void require_dimension(int n) {
  if (n < 1) throw std::invalid_argument("sphere dimension parameter must be >= 1");
}

// Class 2: Z (k=0); Z (k=n odd); Z/2 (0<k<n, k odd); 0 otherwise.
CanonicalGroup nil2_sphere(int n, int k) {
  if (k == 0) return zee();
  if (k == n && n % 2 == 1) return zee();
  if (0 < k && k < n && k % 2 == 1) return cyc(2);
  return zero_group();
}

// Class 3: Z (k=0); Z/2 (0<k<n, k=1 mod 4); Z/6 (0<k<n, k=3 mod 4);
// Z/3 (n<k<2n, k=3 mod 4); Z(+)Z/3 (k=n, n=3 mod 4); Z (k=n, n=1 mod 4);
// 0 for every unlisted cell.
CanonicalGroup nil3_sphere(int n, int k) {
  if (k == 0) return zee();
  if (0 < k && k < n) {
    if (k % 4 == 1) return cyc(2);
    if (k % 4 == 3) return cyc(6);
    return zero_group();
  }
  if (k == n) {
    if (n % 4 == 1) return zee();
    if (n % 4 == 3) return CanonicalGroup(1, {Int(3)});
    return zero_group();
  }
  if (n < k && k < 2 * n && k % 4 == 3) return cyc(3);
  return zero_group();
}

// Classes 4 and 5 are tabulated only for S^2 (n=1) and S^3 (n=2).
CanonicalGroup nil45_sphere(NilCategory category, int n, int k) {
  if (n >= 3) {
    throw std::domain_error(
        "pi_sphere: class-" +
        std::string(category == NilCategory::nil4 ? "4" : "5") +
        " homotopy of S^" + std::to_string(n + 1) +
        " is open in source material; only S^2 and S^3 are tabulated");
  }
  if (n == 1) {
    // S^2, both classes: Z at absolute degree 2 and 3, Z/2 at 4, else 0.
    if (k == 0 || k == 1) return zee();
    if (k == 2) return cyc(2);
    return zero_group();
  }
  // S^3: Z (k=0); Z/2 (k=1,2,5); Z/6 (k=3); class 5 adds Z/5 at k=7.
  if (k == 0) return zee();
  if (k == 1 || k == 2 || k == 5) return cyc(2);
  if (k == 3) return cyc(6);
  if (category == NilCategory::nil5 && k == 7) return cyc(5);
  return zero_group();
}

}  // namespace

CanonicalGroup pi_sphere(const HomotopyQuery& q) {
  require_dimension(q.n);
  switch (q.category) {
    case NilCategory::nil2:
      return nil2_sphere(q.n, q.k);
    case NilCategory::nil3:
      return nil3_sphere(q.n, q.k);
    case NilCategory::nil4:
    case NilCategory::nil5:
      return nil45_sphere(q.category, q.n, q.k);
  }
  throw std::invalid_argument("pi_sphere: unknown category");
}

CanonicalGroup pi_sphere(NilCategory category, int n, int k) {
  return pi_sphere(HomotopyQuery{category, n, k});
}

CanonicalGroup pi_moore(const CanonicalGroup& a, int n, int k) {
  require_dimension(n);
  const CanonicalGroup z2 = cyc(2);
  if (k == 0) return a;
  if (0 < k && k < n) {
    return k % 2 == 1 ? binary_functor(BinKind::tensor, a, z2)
                      : binary_functor(BinKind::tor, a, z2);
  }
  if (k == n) {
    return n % 2 == 1
               ? classical(ClassicalKind::gamma, a)
               : CanonicalGroup::direct_sum(
                     classical(ClassicalKind::lambda2, a),
                     binary_functor(BinKind::tor, a, z2));
  }
  if (k == n + 1) {
    return k % 2 == 0 ? classical(ClassicalKind::r, a)
                      : classical(ClassicalKind::omega, a);
  }
  return zero_group();
}

CanonicalGroup pi_lambda2_sphere(int n, int q) {
  require_dimension(n);
  if (n % 2 == 1 && q == n) return zee();
  if (q >= 1 && q % 2 == 1 && q <= 2 * (n / 2) - 1) return cyc(2);
  return zero_group();
}

CanonicalGroup pi_lie_p(long long p, int n, int k) {
  if (p < 3 || p % 2 == 0)
    throw std::invalid_argument("pi_lie_p: p must be an odd prime");
  for (long long d = 3; d * d <= p; d += 2) {
    if (p % d == 0)
      throw std::invalid_argument("pi_lie_p: p must be an odd prime");
  }
  require_dimension(n);
  const long long period = 2 * (p - 1);
  if (k >= 0 && (k + 1) % period == 0) {
    const long long i = (k + 1) / period;
    if (1 <= i && i <= n / 2) return cyc(p);
  }
  return zero_group();
}

}  // namespace nilsq
