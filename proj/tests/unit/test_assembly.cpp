#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "hexcmc/assembly.hpp"
#include "hexcmc/hexnorm.hpp"

using namespace hexcmc;

namespace {

const double kW = 2.0 / std::sqrt(3.0);

double inf_norm(const std::array<double, 4> &r) {
  double m = 0.0;
  for (double x : r) {
    m = std::max(m, std::abs(x));
  }
  return m;
}

const ClosureFit &fitted3() {
  static const ClosureFit fit = fit_closure(3);
  return fit;
}

const AssemblySurface &built3() {
  static const AssemblySurface s = build_assembly(fitted3().solution);
  return s;
}

} // namespace

TEST(Assembly, CrossSectionClosesForAnyWidths) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> w(0.5, 2.0);
  for (int i = 0; i < 1000; ++i) {
    AssemblyParams p;
    p.R1 = w(rng);
    p.R2 = w(rng);
    const std::array<double, 6> widths{p.R1, p.R2, p.R1, p.S(), p.S(), p.S()};
    std::complex<double> sum = 0.0;
    for (int k = 0; k < 6; ++k) {
      sum += widths[k] * std::polar(1.0, k * M_PI / 3.0);
    }
    EXPECT_LT(std::abs(sum), 1e-12);
  }
}

TEST(Assembly, TrivialRoot) {
  const AssemblyParams p = trivial_assembly();
  EXPECT_EQ(p.Q0, 2.0);
  EXPECT_EQ(p.R1, kW);
  EXPECT_EQ(p.R2, kW);
  EXPECT_EQ(p.r1, 0.0);
  EXPECT_EQ(p.r2, 0.0);
  EXPECT_EQ(p.m_n, 7);
  EXPECT_LE(inf_norm(residual4(p)), 1e-12);
  const AssemblySolution z = solve_assembly(0.0);
  EXPECT_EQ(z.params.Q0, 2.0);
  EXPECT_EQ(z.params.R1, kW);
  EXPECT_EQ(z.params.R2, kW);
  EXPECT_EQ(z.params.r2, 0.0);
}

TEST(Assembly, UnsolvedPointIsOutOfEquilibrium) {
  AssemblyParams p = trivial_assembly();
  p.r1 = 0.05;
  p.r2 = 0.05;
  EXPECT_GT(inf_norm(residual4(p)), 1e-3);
}

TEST(Assembly, SolveSignPattern) {
  const AssemblySolution s = solve_assembly(0.03);
  const AssemblyParams &p = s.params;
  EXPECT_LT(inf_norm(residual4(p, s.chains)), 1e-9);
  EXPECT_LT(p.Q0, 2.0);
  EXPECT_LT(p.R1, kW);
  EXPECT_GT(p.R2, kW);
  EXPECT_GT(p.S(), kW);
  EXPECT_GT(p.r2, 0.0);
  EXPECT_GE(p.r2 / p.r1, 0.1);
  EXPECT_LE(p.r2 / p.r1, 10.0);
  EXPECT_EQ(s.chains.unduloid.r, p.r1);
  EXPECT_EQ(s.chains.nodoid.r, p.r2);
}

TEST(Assembly, PerturbationsShrinkWithR1) {
  std::array<double, 4> last{1e9, 1e9, 1e9, 1e9};
  for (double r1 : {0.03, 0.02, 0.01, 0.005}) {
    const AssemblyParams p = solve_assembly(r1).params;
    const std::array<double, 4> dev{std::abs(p.Q0 - 2.0), std::abs(p.R1 - kW), std::abs(p.R2 - kW), p.r2};
    for (int k = 0; k < 4; ++k) {
      EXPECT_LT(dev[k], last[k]) << "r1=" << r1 << " k=" << k;
    }
    last = dev;
  }
}

TEST(Assembly, DegenerateSpansCountPrisms) {
  // With every tube collapsed each chain is a row of unit prisms two apart.
  for (int m_u : {1, 2, 3, 5}) {
    AssemblySolution s;
    s.params = trivial_assembly(m_u);
    const AssemblySpans spans = assembly_spans(s);
    EXPECT_NEAR(spans.side, 2.0 * m_u, 1e-14);
    EXPECT_NEAR(spans.diagonal, 2.0 * (2 * m_u + 1), 1e-14);
    EXPECT_NEAR(spans.mismatch, 2.0 * (2 * m_u - (2 * m_u + 1)), 1e-14);
  }
}

TEST(Assembly, FitClosure) {
  const ClosureFit &fit = fitted3();
  EXPECT_GT(fit.r1, 0.0);
  EXPECT_LE(fit.r1, 0.1);
  EXPECT_LT(std::abs(fit.mismatch), 1e-9);
  EXPECT_LT(std::abs(assembly_spans(fit.solution).mismatch), 1e-9);
  EXPECT_LT(fit.solution.residual_norm, 1e-9);
  // The unduloid lengthens and the nodoid shortens as r1 grows.
  EXPECT_GT(period_length(fit.solution.chains.unduloid), 2.0);
  EXPECT_LT(period_length(fit.solution.chains.nodoid), 2.0);
}

TEST(Assembly, FitSmallCountsReportsHonestly) {
  try {
    const ClosureFit fit = fit_closure(1);
    EXPECT_LT(std::abs(fit.mismatch), 1e-9);
    EXPECT_LT(std::abs(assembly_spans(fit.solution).mismatch), 1e-9);
  } catch (const std::runtime_error &e) {
    EXPECT_NE(std::string(e.what()).find("mismatch"), std::string::npos) << e.what();
  }
  EXPECT_THROW(fit_closure(0), std::invalid_argument);
}

TEST(Assembly, UnfittedBuildRejected) {
  EXPECT_THROW(build_assembly(solve_assembly(0.03)), std::invalid_argument);
}

TEST(Assembly, BuiltSurfaceIsClosedAndSymmetric) {
  const AssemblySurface &a = built3();
  const RealizedSurface &s = a.surface;
  EXPECT_LT(norm(s.closure_vector()), 1e-9);
  EXPECT_LT(s.plane_residual(), 1e-12);
  EXPECT_LT(dihedral_defect(s), 1e-10);
  ASSERT_EQ(a.components.size(), 15u);
  int vertex = 0;
  int und = 0;
  int nod = 0;
  for (const auto &c : a.components) {
    vertex += c.rfind("vertex_", 0) == 0;
    und += c.rfind("unduloid_", 0) == 0;
    nod += c.rfind("nodoid_", 0) == 0;
  }
  EXPECT_EQ(vertex, 6);
  EXPECT_EQ(und, 6);
  EXPECT_EQ(nod, 3);
  for (const auto &f : s.topology.faces) {
    EXPECT_NEAR(hex_norm().psi(f.normal()), 1.0, 1e-15);
  }
}

TEST(Assembly, EveryClassInEquilibrium) {
  for (const auto &[cls, v] : mean_curvature_residual(built3().surface)) {
    EXPECT_LT(std::abs(v), 1e-9) << cls;
  }
}

TEST(Assembly, TubesAreCongruent) {
  // A closure defect would have to be absorbed by some tube; all tube walls
  // of one kind must have the same area.
  const RealizedSurface &s = built3().surface;
  for (const std::string cls : {"unduloid_s", "nodoid_s", "unduloid_q", "nodoid_q"}) {
    const auto faces = s.topology.faces_in_class(cls);
    ASSERT_FALSE(faces.empty()) << cls;
    double lo = 1e9;
    double hi = -1e9;
    for (int f : faces) {
      lo = std::min(lo, s.face_areas[f]);
      hi = std::max(hi, s.face_areas[f]);
    }
    EXPECT_GT(lo, 0.0) << cls;
    EXPECT_LT(hi - lo, 1e-10) << cls;
  }
}

TEST(Assembly, DiagonalsCrossAtTheCentre) {
  const RealizedSurface &s = built3().surface;
  EXPECT_TRUE(components_intersect(s, "nodoid_0", "nodoid_1"));
  EXPECT_TRUE(components_intersect(s, "nodoid_1", "nodoid_2"));
  EXPECT_TRUE(components_intersect(s, "nodoid_0", "nodoid_2"));
  EXPECT_FALSE(components_intersect(s, "unduloid_0", "unduloid_3"));
}
