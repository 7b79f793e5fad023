#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hexcmc/delaunay.hpp"

namespace hexcmc {

/// The compact hexagonal surface: six vertex prisms at the corners of a
/// regular hexagon, unduloid chains on its sides and nodoid chains on its
/// three long diagonals.
///
/// A vertex prism has height Q0 and cross-section widths (R1, R2, R1, S, S, S)
/// with R2 facing the hexagon centre and the R1 faces toward the two sides.
struct AssemblyParams {
  double r1 = 0.0; ///< unduloid tube width
  double r2 = 0.0; ///< nodoid tube width
  double Q0 = 2.0;
  double R1 = kHexSide;
  double R2 = kHexSide;
  int m_u = 3; ///< unduloid tubes per side
  int m_n = 7; ///< nodoid tubes per diagonal

  /// Closes the equiangular cross-section.
  double S() const { return 0.5 * (R1 + R2); }
};

AssemblyParams trivial_assembly(int m_u = 3, std::optional<int> m_n = std::nullopt);

/// Solved unduloid (at r1) and nodoid (at r2) chains feeding the sides and
/// diagonals.
struct AssemblyChains {
  DelaunayParams unduloid = trivial_params(DelaunayKind::Unduloid);
  DelaunayParams nodoid = trivial_params(DelaunayKind::Nodoid);
};

/// Solves both chains; `hint` warm-starts Newton from nearby chains.
AssemblyChains solve_chains(double r1, double r2, const std::optional<AssemblyChains> &hint = std::nullopt);

inline constexpr std::array<const char *, 4> kVertexClasses = {"vertex_top", "vertex_R1", "vertex_R2",
                                                                "vertex_S"};

/// One vertex prism with its three tube stubs, each capped by an auxiliary
/// plane (the face of the first chain bead).
SurfaceTopology vertex_stub_topology(const AssemblyParams &p, const AssemblyChains &chains);

/// dE - 2 dV on the vertex stub for the top/bottom, R1, R2 and S classes.
std::array<double, 4> residual4(const AssemblyParams &p, const AssemblyChains &chains);
std::array<double, 4> residual4(const AssemblyParams &p);

struct AssemblyOptions {
  double r1_max = 0.1;
  double r1_step = 0.01;
  NewtonOptions newton{1e-12, 50, 1e-7, 30};
  double fit_tolerance = 1e-12;  ///< closure mismatch, length units
  double unfitted_limit = 1e-6;  ///< build_assembly rejects larger mismatch
  int max_bisections = 200;
};

struct AssemblySolution {
  AssemblyParams params;
  AssemblyChains chains;
  double residual_norm = 0.0;
  int iterations = 0;
};

/// Newton on residual4 in (Q0, R1, R2, r2) at fixed r1. Without a guess,
/// continues from the trivial root. Throws SolverError.
AssemblySolution solve_assembly(double r1, const AssemblyParams &counts = {}, const AssemblyOptions &options = {},
                                const std::optional<AssemblySolution> &guess = std::nullopt);

/// Lengths fixed by the chains and the vertex prisms.
struct AssemblySpans {
  double side = 0.0;     ///< centre-to-centre distance of adjacent vertex prisms
  double diagonal = 0.0; ///< centre-to-centre distance of opposite vertex prisms
  double mismatch = 0.0; ///< 2 side - diagonal
};

AssemblySpans assembly_spans(const AssemblySolution &s);

struct ClosureFit {
  double r1 = 0.0;
  AssemblySolution solution;
  double mismatch = 0.0;
  int evaluations = 0;
};

/// Bisection in r1 on (0, r1_max] for a vanishing closure mismatch. Throws
/// std::runtime_error naming the mismatch at both ends when there is no
/// sign change.
ClosureFit fit_closure(int m_u, std::optional<int> m_n = std::nullopt, const AssemblyOptions &options = {});

struct AssemblySurface {
  RealizedSurface surface;
  AssemblySolution solution;
  double hexagon_radius = 0.0;
  std::vector<std::string> components;
};

/// The closed immersed surface. Throws std::invalid_argument when the
/// closure mismatch exceeds options.unfitted_limit.
AssemblySurface build_assembly(const AssemblySolution &fitted, const AssemblyOptions &options = {});

/// Largest distance from a transformed vertex to the nearest vertex, over
/// the 60 degree rotation and the reflection y -> -y.
double dihedral_defect(const RealizedSurface &s);

/// Whether some edge of one component pierces a face of the other.
bool components_intersect(const RealizedSurface &s, const std::string &a, const std::string &b);

} // namespace hexcmc
