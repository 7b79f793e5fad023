#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hexcmc/newton.hpp"
#include "hexcmc/offset_surface.hpp"

namespace hexcmc {

enum class DelaunayKind { Unduloid, Nodoid };

std::string to_string(DelaunayKind kind);
DelaunayKind parse_delaunay_kind(const std::string &name);

/// One period of a hexagonal Delaunay chain along +x.
///
/// A prism of height Q whose cross-section has widths (R, S, S, R, S, S)
/// (R faces normal to the chain axis), joined to the next prism by a tube
/// of height q whose cross-section has widths (r, s, s, r, s, s). The tube
/// ends are the r x q holes in the R faces; its four walls have width s and
/// the tube is s*sqrt(3) long. Unduloid tubes bridge the gap between
/// consecutive prisms; nodoid prisms overlap and the tube runs backwards
/// through the overlap with reversed orientation.
struct DelaunayParams {
  DelaunayKind kind = DelaunayKind::Unduloid;
  double r = 0.0;
  double Q = 2.0;
  double R = kHexSide;
  double S = kHexSide;
  double q = 0.0;
  double s = 0.0;
};

/// The limit configuration r = 0: a chain of Wulff prisms.
DelaunayParams trivial_params(DelaunayKind kind);

/// Plane data implied by the widths.
struct ChainGeometry {
  double r_support = 0.0;   ///< support of the R faces from the prism centre
  double s_support = 0.0;   ///< support of the S faces
  double prism_half_height = 0.0;
  double tube_half_length = 0.0;
  double wall_support = 0.0; ///< support of the tube walls from the tube centre
  double tube_half_height = 0.0;
  double period = 0.0;
};

ChainGeometry chain_geometry(const DelaunayParams &p);

/// Chain period along the axis: sqrt(3) (S + s) for unduloids and
/// sqrt(3) (S - s) for nodoids.
double period_length(const DelaunayParams &p);

/// Throws std::invalid_argument naming the first violated inequality.
void check_params(const DelaunayParams &p);

/// Symmetry classes of a period, one per unknown.
inline constexpr std::array<const char *, 5> kDelaunayClasses = {"Q", "R", "S", "q", "s"};

SurfaceTopology period_topology(const DelaunayParams &p, bool degenerate_ok = false);

/// Realized period. Zero r, q or s needs degenerate_ok.
RealizedSurface build_period(const DelaunayParams &p, bool degenerate_ok = false);

/// dE - 2 dV for unit outward translation of each class, in the order
/// top/bottom (Q), pierced faces (R), plain sides (S), tube caps (q),
/// tube walls (s).
using ResidualVector = std::array<double, 5>;
ResidualVector residual(const DelaunayParams &p);

struct DelaunaySolveOptions {
  double r_max = 0.2;
  double r_min = 1e-3; ///< first continuation step from the trivial root
  double r_step = 0.01;
  NewtonOptions newton{};
};

struct DelaunaySolution {
  DelaunayParams params;
  double residual_norm = 0.0;
  int iterations = 0; ///< Newton iterations summed over continuation steps
};

/// Solves the five equilibrium equations for (Q, R, S, q, s) at fixed r.
/// Without a guess, continues from the trivial root at r_min upward.
/// r = 0 returns the trivial root. Throws SolverError.
DelaunaySolution solve(DelaunayKind kind, double r, const std::optional<DelaunayParams> &guess = std::nullopt,
                       const DelaunaySolveOptions &options = {});

struct SweepRow {
  double r = 0.0;
  bool ok = false;
  DelaunayParams params;
  double residual_norm = 0.0;
  double period_length = 0.0;
  std::string error;
};

/// One independent solve per r value; failures are recorded, not thrown.
std::vector<SweepRow> sweep(DelaunayKind kind, std::span<const double> r_values,
                            const DelaunaySolveOptions &options = {});

/// Whether consecutive prisms of the chain overlap (x-slab test).
bool prisms_overlap(const DelaunayParams &p);

} // namespace hexcmc
