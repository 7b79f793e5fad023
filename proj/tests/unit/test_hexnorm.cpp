#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hexcmc/hexnorm.hpp"

using namespace hexcmc;

namespace {

// Support function of the prism written out directly: the hexagon part is
// the radius times the largest cosine against the six vertex directions.
double psi_oracle(const Vec3 &n) {
  const double rho = std::hypot(n.x, n.y);
  double best = 0.0;
  if (rho > 0.0) {
    const double theta = std::atan2(n.y, n.x);
    for (int k = 0; k < 6; ++k) {
      const double phi = std::numbers::pi / 6.0 + k * std::numbers::pi / 3.0;
      best = std::max(best, std::cos(theta - phi));
    }
  }
  return 2.0 / std::sqrt(3.0) * rho * best + std::abs(n.z);
}

Vec3 random_unit(std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  return normalized(Vec3{g(rng), g(rng), g(rng)});
}

Vec3 rotate60(const Vec3 &v) {
  const double c = 0.5;
  const double s = std::sqrt(3.0) / 2.0;
  return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
}

} // namespace

TEST(HexNorm, VerticalAndVertexDirections) {
  const HexNorm &psi = hex_norm();
  EXPECT_DOUBLE_EQ(psi.psi({0, 0, 1}), 1.0);
  EXPECT_DOUBLE_EQ(psi.psi({0, 0, 2}), 2.0);
  const double c = std::cos(std::numbers::pi / 6.0);
  EXPECT_NEAR(psi.psi({c, 0.5, 0}), 2.0 / std::sqrt(3.0), 1e-15);
  EXPECT_EQ(psi.psi({0, 0, 0}), 0.0);
}

TEST(HexNorm, RejectsNonFinite) {
  EXPECT_THROW(hex_norm().psi({NAN, 0, 0}), std::invalid_argument);
  EXPECT_THROW(hex_norm().psi({0, INFINITY, 0}), std::invalid_argument);
}

TEST(HexNorm, FacetNormals) {
  const auto facets = hex_norm().facet_normals();
  ASSERT_EQ(facets.size(), 8u);
  EXPECT_NEAR(facets[0].normal.x, 1.0, 1e-15);
  EXPECT_NEAR(facets[0].normal.y, 0.0, 1e-15);
  for (int k = 0; k < 6; ++k) {
    const double a = k * std::numbers::pi / 3.0;
    EXPECT_EQ(facets[k].index, k);
    EXPECT_NEAR(facets[k].normal.x, std::cos(a), 1e-15);
    EXPECT_NEAR(facets[k].normal.y, std::sin(a), 1e-15);
    EXPECT_EQ(facets[k].normal.z, 0.0);
  }
  EXPECT_EQ(facets[6].normal.z, 1.0);
  EXPECT_EQ(facets[7].normal.z, -1.0);
  for (const auto &f : facets) {
    EXPECT_NEAR(norm(f.normal), 1.0, 1e-15);
    EXPECT_NEAR(hex_norm().psi(f.normal), 1.0, 1e-15);
  }
}

TEST(HexNorm, WulffVertices) {
  const auto &v = hex_norm().wulff_vertices();
  for (const Vec3 &p : v) {
    EXPECT_NEAR(std::hypot(p.x, p.y), 2.0 / std::sqrt(3.0), 1e-15);
    EXPECT_EQ(std::abs(p.z), 1.0);
  }
}

TEST(HexNormProperty, MatchesIndependentSupportFunction) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10000; ++i) {
    const Vec3 n = random_unit(rng) * 3.0;
    EXPECT_NEAR(hex_norm().psi(n), psi_oracle(n), 1e-12);
  }
}

TEST(HexNormProperty, UnitSphereBounds) {
  // psi >= 1 on the unit sphere, with equality only at facet normals; the
  // largest value is at a prism vertex direction.
  const auto facets = hex_norm().facet_normals();
  const double top = std::sqrt(4.0 / 3.0 + 1.0);
  std::mt19937_64 rng(12);
  for (int i = 0; i < 10000; ++i) {
    const Vec3 n = random_unit(rng);
    const double p = hex_norm().psi(n);
    EXPECT_GE(p, 1.0 - 1e-12);
    EXPECT_LE(p, top + 1e-12);
    if (p < 1.0 + 1e-12) {
      double nearest = 1e9;
      for (const auto &f : facets) {
        nearest = std::min(nearest, norm(n - f.normal));
      }
      EXPECT_LT(nearest, 1e-5);
    }
  }
}

TEST(HexNormProperty, HomogeneousConvexSymmetric) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> t(0.0, 10.0);
  const HexNorm &psi = hex_norm();
  for (int i = 0; i < 10000; ++i) {
    const Vec3 a = random_unit(rng) * t(rng);
    const Vec3 b = random_unit(rng) * t(rng);
    const double s = t(rng);
    EXPECT_NEAR(psi.psi(a * s), s * psi.psi(a), 1e-12 * (1.0 + s * psi.psi(a)));
    EXPECT_LE(psi.psi(0.5 * (a + b)), 0.5 * (psi.psi(a) + psi.psi(b)) + 1e-12);
    EXPECT_NEAR(psi.psi(rotate60(a)), psi.psi(a), 1e-12);
    EXPECT_NEAR(psi.psi({a.x, a.y, -a.z}), psi.psi(a), 1e-12);
  }
}
