#pragma once

// Genus-2 curves y^2 = F(x): Clebsch and Mestre invariants, Bolza types,
// canonical isomorphism keys and the reduced automorphism group realized as
// the Moebius stabilizer of the six branch points.

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ssg/field.hpp"

namespace ssg {

/// Point (x : z) of P^1, normalized to z = 1 or (1 : 0).
struct ProjPoint {
  Gf x, z;

  static ProjPoint finite(const Gf& x);
  static ProjPoint infinity(const ExtField* f);
  bool is_infinity() const { return z.is_zero(); }
  ProjPoint normalized() const;
  ProjPoint embedded(const ExtField& target) const;
  friend bool operator==(const ProjPoint& a, const ProjPoint& b) { return a.x * b.z == b.x * a.z; }
};

/// Binary form of formal degree `deg`: coef[k] multiplies x^k z^(deg-k).
struct BinaryForm {
  int deg = 0;
  std::vector<Gf> coef;

  static BinaryForm from_poly(const Poly& f, int deg);
  BinaryForm derive(int dx, int dz) const;
  friend BinaryForm operator*(const BinaryForm& a, const BinaryForm& b);
  friend BinaryForm operator+(const BinaryForm& a, const BinaryForm& b);
  BinaryForm scaled(const Gf& s) const;
};

/// (f, g)_k with the (n-k)!(m-k)!/(n! m!) normalization.
BinaryForm transvectant(const BinaryForm& f, const BinaryForm& g, int k);

struct SexticModel {
  std::shared_ptr<const ExtField> field;
  /// Degree 5 or 6, coefficients in `field`.
  Poly f;
  /// Branch points: finite roots in canonical order, then infinity if deg f = 5.
  std::array<ProjPoint, 6> roots;

  /// Finds the branch points (extending the field if needed). Rejects
  /// non-squarefree input and degrees other than 5, 6.
  static SexticModel from_poly(const Poly& f);
};

struct Clebsch {
  Gf A, B, C, D;
};

Clebsch clebsch_invariants(const Poly& f);

struct MestreDerived {
  Gf A11, A12, A22, A23, A31, A33, R2;
};

MestreDerived mestre_derived(const Clebsch& c);

enum class RAType { A, I, II, III, IV, V, VI, Pi, Pi0, Pi1728, Pi0_1728, Sigma, Sigma0, Sigma1728 };

inline constexpr RAType kAllRATypes[] = {RAType::A,     RAType::I,      RAType::II,       RAType::III,   RAType::IV,
                                         RAType::V,     RAType::VI,     RAType::Pi,       RAType::Pi0,   RAType::Pi1728,
                                         RAType::Pi0_1728, RAType::Sigma, RAType::Sigma0, RAType::Sigma1728};

int ra_order(RAType t);
std::string ra_name(RAType t);
bool is_product_type(RAType t);

/// How to read the second Type-I condition of Bolza's table.
enum class TypeIReading {
  Literal,  // A11*A22 != A12
  Squared,  // A11*A22 != A12^2
  None,     // R = 0 alone
};

/// Reading adopted after cross-validation against the Moebius group.
inline constexpr TypeIReading kTypeIReading = TypeIReading::Squared;

/// Throws InvariantError if no row matches.
RAType bolza_type(const Clebsch& c, TypeIReading reading = kTypeIReading);

struct Moebius {
  /// x -> (a x + b) / (c x + d)
  Gf a, b, c, d;
  /// perm[i] = index of the image of root i
  std::array<int, 6> perm;
};

std::vector<Moebius> moebius_group(const std::array<ProjPoint, 6>& roots);

/// Moebius maps sending the branch set `from` onto `to`.
std::vector<Moebius> moebius_matches(const std::array<ProjPoint, 6>& from, const std::array<ProjPoint, 6>& to);

/// Isomorphism-class key. Tags 0..3 are Jacobian normal forms, tag 4 a
/// product (sorted j pair).
struct VertexKey {
  std::uint8_t tag = 0;
  std::vector<Fp2> vals;

  bool is_product() const { return tag == 4; }
  /// tag followed by the little-endian F_p coordinates of every value.
  std::vector<u32> encode() const;
  std::string to_string() const;
  friend bool operator==(const VertexKey&, const VertexKey&) = default;
  friend auto operator<=>(const VertexKey&, const VertexKey&) = default;
};

VertexKey canonical_jacobian_key(const Clebsch& c);
VertexKey product_key(const Gf& j1, const Gf& j2);

RAType product_type(const Gf& j1, const Gf& j2);

}  // namespace ssg
