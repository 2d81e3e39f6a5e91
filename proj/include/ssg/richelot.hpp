#pragma once

// The fifteen (2,2)-isogenies out of a principally polarized surface:
// Richelot isogenies from quadratic splittings of a genus-2 sextic, and
// products of 2-isogenies or gluings along anti-isometries for E x E'.

#include <array>
#include <optional>
#include <vector>

#include "ssg/elliptic.hpp"
#include "ssg/genus2.hpp"

namespace ssg {

/// Three disjoint pairs of branch-point indices.
using Pairing = std::array<std::array<int, 2>, 3>;

/// The 15 perfect pairings of {0..5} in lexicographic order.
const std::vector<Pairing>& all_pairings();

struct QuadraticSplitting {
  Pairing pairing;
  /// F = F[0] F[1] F[2]; the leading constant of F is folded into F[0].
  std::array<Poly, 3> F;
};

QuadraticSplitting splitting_for(const SexticModel& c, const Pairing& pr);
std::vector<QuadraticSplitting> quadratic_splittings(const SexticModel& c);

/// det of the rows (F_i0, F_i1, F_i2).
Gf splitting_delta(const std::array<Poly, 3>& F);

/// G_i = delta^-1 (F_j' F_k - F_k' F_j) for (i, j, k) cyclic.
std::array<Poly, 3> richelot_dual_factors(const std::array<Poly, 3>& F);

/// F1(x1)G1(x2) + F2(x1)G2(x2) + F3(x1)G3(x2) + (x1 - x2)^2 == 0 as a
/// polynomial in x1, x2.
bool richelot_identity_holds(const std::array<Poly, 3>& F, const std::array<Poly, 3>& G);

struct ProductKernel {
  bool gluing = false;
  /// K_{i,j} (gluing == false), 0-based root indices.
  int i = 0, j = 0;
  /// K_pi (gluing == true): root i of E pairs with root pi[i] of E'.
  Perm3 pi{0, 1, 2};

  friend bool operator==(const ProductKernel&, const ProductKernel&) = default;
};

/// K_{i,j} in (i,j) grid order, then K_pi in lexicographic one-line order.
const std::vector<ProductKernel>& product_kernels();

/// Surface model: a genus-2 curve or a pair of elliptic curves.
struct SurfaceModel {
  bool product = false;
  SexticModel curve;
  EllipticModel e1, e2;

  static SurfaceModel jacobian(SexticModel c);
  static SurfaceModel elliptic_pair(EllipticModel a, EllipticModel b);
};

VertexKey surface_key(const SurfaceModel& m);

struct IsogenyStep {
  SurfaceModel codomain;
  VertexKey key;
  /// Kernel of the dual isogeny in the codomain's own labelling.
  Pairing dual_pairing{};
  ProductKernel dual_product;
  /// Jacobian source whose splitting has delta = 0.
  bool split = false;
  /// Gluing kernel induced by an isomorphism E -> E'.
  bool isomorphism_loop = false;
  /// Result of the two-variable identity check (non-split Richelot steps).
  std::optional<bool> identity_ok;
};

IsogenyStep richelot_codomain(const SexticModel& c, const Pairing& pr);
IsogenyStep product_isogeny_codomain(const EllipticModel& e1, const EllipticModel& e2, const ProductKernel& k);

/// The 15 steps out of a surface, in kernel order.
std::vector<IsogenyStep> expand_surface(const SurfaceModel& m);

/// Applies the stored dual kernel at the step's codomain.
IsogenyStep apply_dual(const IsogenyStep& s);

}  // namespace ssg

namespace ssg {

/// Number of gluing steps where exactly one of a2, b2 vanished (process-wide).
long gluing_degeneracy_disagreements();

}  // namespace ssg
