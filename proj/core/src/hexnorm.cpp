#include "hexcmc/hexnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hexcmc {

namespace {

// Exact cos/sin of multiples of 60 degrees, so lateral normals are exactly
// symmetric rather than carrying libm rounding.
constexpr std::array<double, 6> kCos60 = {1.0, 0.5, -0.5, -1.0, -0.5, 0.5};
constexpr std::array<double, 6> kSin60 = {0.0,  kSqrt3 / 2.0,  kSqrt3 / 2.0,
                                          0.0, -kSqrt3 / 2.0, -kSqrt3 / 2.0};

} // namespace

Vec3 facet_normal(int index) {
  if (index == kTopFacet) {
    return {0.0, 0.0, 1.0};
  }
  if (index == kBottomFacet) {
    return {0.0, 0.0, -1.0};
  }
  if (index < 0 || index >= kLateralFacets) {
    throw std::out_of_range("facet index must be in 0..7");
  }
  return {kCos60[index], kSin60[index], 0.0};
}

HexNorm::HexNorm() {
  // Hexagon vertex k sits between lateral facets k and k+1, at 30 + 60k deg.
  for (int k = 0; k < kLateralFacets; ++k) {
    const Vec3 a = facet_normal(k);
    const Vec3 b = facet_normal(lateral(k + 1));
    // Intersection of x.a = 1 and x.b = 1 in the plane: (a + b) / (1 + a.b).
    const Vec3 corner = (a + b) / (1.0 + dot(a, b));
    vertices_[2 * k] = {corner.x, corner.y, half_height_};
    vertices_[2 * k + 1] = {corner.x, corner.y, -half_height_};
  }
}

double HexNorm::psi(const Vec3 &n) const {
  if (!is_finite(n)) {
    throw std::invalid_argument("psi: non-finite direction");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec3 &v : vertices_) {
    best = std::max(best, dot(v, n));
  }
  // The origin is interior to W, so the max is >= 0; clamp the -0.0 case.
  return std::max(best, 0.0);
}

std::array<FacetDir, kFacetCount> HexNorm::facet_normals() const {
  std::array<FacetDir, kFacetCount> out;
  for (int i = 0; i < kFacetCount; ++i) {
    out[i] = FacetDir{i, facet_normal(i)};
  }
  return out;
}

const HexNorm &hex_norm() {
  static const HexNorm instance;
  return instance;
}

} // namespace hexcmc
