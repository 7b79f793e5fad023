#pragma once

#include <array>
#include <numbers>

#include "hexcmc/vec3.hpp"

namespace hexcmc {

inline constexpr double kSqrt3 = std::numbers::sqrt3;
/// Side length of the unit-inradius hexagon, also its vertex radius.
inline constexpr double kHexSide = 2.0 / kSqrt3;

/// Number of lateral facets of the Wulff prism.
inline constexpr int kLateralFacets = 6;
inline constexpr int kFacetCount = 8;
inline constexpr int kTopFacet = 6;
inline constexpr int kBottomFacet = 7;

struct FacetDir {
  int index = 0;
  Vec3 normal;
};

/// Unit normal of facet `index`: 0..5 are horizontal at 60 degree steps
/// starting along +x, 6 is +z and 7 is -z.
Vec3 facet_normal(int index);

/// Lateral facet index reduced into 0..5.
constexpr int lateral(int k) { return ((k % kLateralFacets) + kLateralFacets) % kLateralFacets; }

/// The hexagonal norm on R^3.
///
/// Evaluated as the support function of the Wulff prism: a right prism of
/// height 2 over a regular hexagon of unit inradius whose flat sides face the
/// directions 60k degrees (vertices at 30 + 60k degrees).
class HexNorm {
public:
  HexNorm();

  /// Support function of the Wulff prism. Throws std::invalid_argument on
  /// non-finite input.
  double psi(const Vec3 &n) const;

  std::array<FacetDir, kFacetCount> facet_normals() const;

  const std::array<Vec3, 12> &wulff_vertices() const { return vertices_; }

  double half_height() const { return half_height_; }

private:
  std::array<Vec3, 12> vertices_;
  double half_height_ = 1.0;
};

/// Shared default instance.
const HexNorm &hex_norm();

} // namespace hexcmc
