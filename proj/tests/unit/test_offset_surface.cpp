#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hexcmc/delaunay.hpp"
#include "hexcmc/hexnorm.hpp"
#include "hexcmc/offset_surface.hpp"

using namespace hexcmc;

namespace {

const double kS3 = std::sqrt(3.0);

// Signed volume by coning every face polygon to the origin. Independent of
// the kernel's offset-times-area formula.
double cone_volume(const RealizedSurface &s) {
  double v = 0.0;
  const auto &t = s.topology;
  for (std::size_t f = 0; f < t.faces.size(); ++f) {
    if (t.faces[f].auxiliary) {
      continue;
    }
    for (const auto &loop : t.face_loops[f]) {
      const Vec3 &p0 = s.vertex_positions[loop[0]];
      for (std::size_t k = 1; k + 1 < loop.size(); ++k) {
        const Vec3 &a = s.vertex_positions[loop[k]];
        const Vec3 &b = s.vertex_positions[loop[k + 1]];
        v += dot(p0, cross(a, b)) / 6.0;
      }
    }
  }
  return v;
}

// (E, V) after moving every face of `cls` outward by `delta`.
std::pair<double, double> shifted(const SurfaceTopology &t, const std::string &cls, double delta) {
  SurfaceTopology u = t;
  for (int f : u.faces_in_class(cls)) {
    u.faces[f].offset += delta * u.faces[f].orientation;
  }
  const RealizedSurface r = realize(u);
  return {r.energy, r.signed_volume};
}

} // namespace

TEST(OffsetSurface, WulffPrismClosedForms) {
  const RealizedSurface w = realize(wulff_prism_topology());
  EXPECT_NEAR(w.signed_volume, 4.0 * kS3, 1e-12);
  EXPECT_NEAR(w.energy, 12.0 * kS3, 1e-12);
  EXPECT_NEAR(w.energy, 3.0 * w.signed_volume, 1e-12);
  EXPECT_EQ(w.vertex_positions.size(), 12u);
  EXPECT_LT(norm(w.closure_vector()), 1e-12);
  EXPECT_LT(w.plane_residual(), 1e-12);
  EXPECT_NEAR(cone_volume(w), w.signed_volume, 1e-12);
}

TEST(OffsetSurface, WulffTranslationDerivatives) {
  const RealizedSurface w = realize(wulff_prism_topology());
  const auto top = face_translation_derivative(w, "top");
  EXPECT_NEAR(top.dE, 4.0 * kS3, 1e-12);
  EXPECT_NEAR(top.dV, 2.0 * kS3, 1e-12);
  const auto side = face_translation_derivative(w, "side0");
  EXPECT_NEAR(side.dE, 8.0 / kS3, 1e-12);
  EXPECT_NEAR(side.dV, 4.0 / kS3, 1e-12);
  for (const auto &[cls, res] : mean_curvature_residual(w)) {
    EXPECT_NEAR(res, 0.0, 1e-12) << cls;
  }
}

TEST(OffsetSurface, UnknownClassThrows) {
  const RealizedSurface w = realize(wulff_prism_topology());
  EXPECT_THROW(face_translation_derivative(w, "nope"), std::invalid_argument);
}

TEST(OffsetSurface, DegenerateFaceRejected) {
  // Pushing a side past its neighbours' corner leaves a reversed edge.
  SurfaceTopology t = wulff_prism_topology();
  t.faces[0].offset = 3.0;
  EXPECT_THROW(realize(t), GeometryError);
}

TEST(OffsetSurfaceProperty, DerivativesMatchFiniteDifferences) {
  const SurfaceTopology base = wulff_prism_topology();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> jitter(-0.15, 0.15);
  const double h = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    SurfaceTopology t = base;
    for (auto &f : t.faces) {
      f.offset += jitter(rng);
    }
    const RealizedSurface s = realize(t);
    EXPECT_NEAR(cone_volume(s), s.signed_volume, 1e-10);
    EXPECT_LT(norm(s.closure_vector()), 1e-12);
    for (const auto &cls : t.symmetry_classes()) {
      const auto d = face_translation_derivative(s, cls);
      const auto [ep, vp] = shifted(t, cls, h);
      const auto [em, vm] = shifted(t, cls, -h);
      const double fd_e = (ep - em) / (2.0 * h);
      const double fd_v = (vp - vm) / (2.0 * h);
      EXPECT_LE(std::abs(d.dE - fd_e), 1e-8 * std::max(1.0, std::abs(fd_e))) << cls;
      EXPECT_LE(std::abs(d.dV - fd_v), 1e-8 * std::max(1.0, std::abs(fd_v))) << cls;
      // Unit-speed sweep: dV is the total area of the moving faces.
      double area = 0.0;
      for (int f : t.faces_in_class(cls)) {
        area += s.face_areas[f];
      }
      EXPECT_NEAR(d.dV, area, 1e-12) << cls;
    }
  }
}

TEST(OffsetSurface, PeriodicChainVolumeMatchesPrismStack) {
  // At the trivial point a period is one Wulff prism.
  const RealizedSurface s = build_period(trivial_params(DelaunayKind::Unduloid), true);
  EXPECT_NEAR(s.signed_volume, 4.0 * kS3, 1e-12);
  EXPECT_LT(norm(s.closure_vector()), 1e-12);
}
