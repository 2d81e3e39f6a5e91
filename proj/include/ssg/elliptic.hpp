#pragma once

// Supersingular elliptic curves over F_{p^2} in 2-torsion form
// y^2 = (x - s1)(x - s2)(x - s3), their 2-isogenies and the graph Gamma_1(2;p).

#include <array>
#include <memory>
#include <vector>

#include "ssg/digraph.hpp"
#include "ssg/field.hpp"

namespace ssg {

using JInvariant = Gf;  // always an element of the base field F_{p^2}
using Perm3 = std::array<int, 3>;

struct EllipticModel {
  std::shared_ptr<const ExtField> field;
  /// Distinct 2-torsion abscissae in canonical order.
  std::array<Gf, 3> roots;

  JInvariant j() const;
};

/// j = 256 (sum s_i^2 - sum s_i s_j)^3 / prod (s_i - s_j)^2, descended to F_{p^2}.
JInvariant j_from_roots(const std::array<Gf, 3>& s);

/// Vanishing of the coefficient of x^{p-1} in f^{(p-1)/2} for a model of j.
bool is_supersingular(const JInvariant& j);

struct SupersingularSet {
  u32 p = 0;
  std::vector<JInvariant> j_list;  // canonical order
  int eps1 = 0, eps3 = 0;
  /// (p-1)/12 - eps1/2 - eps3/3: supersingular j other than 0 and 1728.
  int n_generic = 0;
};

/// Number of supersingular curves with trivial reduced automorphism group.
int supersingular_generic_count(u32 p);

SupersingularSet enumerate_supersingular(u32 p);

/// Deterministic split model for j: x^3 - 1, x^3 - x, or x^3 + 3c x + 2c with
/// c = j / (1728 - j), twisted or extended when the cubic does not split.
EllipticModel two_torsion_model(const JInvariant& j);

/// Number of times two_torsion_model had to leave F_{p^2} (process-wide).
long two_torsion_fallbacks();

struct VeluStep {
  EllipticModel codomain;
  /// Index (into codomain.roots) of the kernel generator of the dual isogeny.
  int dual_index = 0;
};

/// Quotient by <(s_i, 0)>, i in 0..2.
VeluStep velu_quotient(const EllipticModel& e, int kernel_index);
JInvariant velu_two_isogeny(const EllipticModel& e, int kernel_index);

/// Affine maps x -> u x + r preserving the root set, i.e. Aut(E)/{+-1}, as
/// permutations of root indices (perm[i] = image of root i).
std::vector<Perm3> reduced_automorphisms(const EllipticModel& e);

/// Affine map sending the roots of `a` onto the roots of `b`, if any, as a
/// permutation (a.roots[i] -> b.roots[perm[i]]).
std::vector<Perm3> affine_matches(const EllipticModel& a, const EllipticModel& b);

struct Gamma1 {
  u32 p = 0;
  std::vector<JInvariant> j_list;
  WeightedDigraph graph;
};

Gamma1 build_gamma1(u32 p);

}  // namespace ssg
