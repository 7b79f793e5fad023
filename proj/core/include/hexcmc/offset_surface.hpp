#pragma once

#include <array>
#include <compare>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hexcmc/hexnorm.hpp"
#include "hexcmc/vec3.hpp"

namespace hexcmc {

class GeometryError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A face plane, possibly translated by an integer number of periods.
struct PlaneRef {
  int face = 0;
  int shift = 0;

  auto operator<=>(const PlaneRef &) const = default;
};

struct FaceSpec {
  int facet = 0;       ///< index into facet_normals()
  double offset = 0.0; ///< plane is facet_normal(facet) . x == offset
  int orientation = 1; ///< outward normal is orientation * facet normal
  std::string symmetry_class;
  std::string component;
  /// Plane only: carries no polygon and is never translated. Used to cap
  /// open stubs against fixed neighbouring geometry.
  bool auxiliary = false;

  Vec3 normal() const { return facet_normal(facet); }
};

struct VertexSpec {
  std::array<PlaneRef, 3> planes;
};

/// One half-edge of a face loop, paired with the neighbouring face.
struct EdgeSpec {
  int face = 0;
  int loop = 0;
  int index = 0; ///< edge runs from loop[index] to loop[index + 1]
  PlaneRef neighbor; ///< neighbouring plane, shift relative to `face`
  int v0 = 0;
  int v1 = 0;
  /// +1 / -1: sign of the edge vector along normal(face) x normal(neighbor)
  /// on a valid realization; 0 when unknown.
  int sense = 0;
};

/// Fixed combinatorics of a polyhedral surface whose faces lie on facet
/// planes. Vertices are triple-plane intersections. Face loops run
/// counterclockwise seen from the outward side; loop 0 is the outer
/// boundary and any further loops are holes (clockwise).
///
/// A nonzero `period` makes the surface one translational period of an
/// infinite chain: PlaneRef::shift k refers to the plane translated by k
/// periods. Periods must be horizontal.
struct SurfaceTopology {
  std::vector<FaceSpec> faces;
  std::vector<VertexSpec> vertices;
  std::vector<std::vector<std::vector<int>>> face_loops;
  std::vector<EdgeSpec> edges; ///< filled by validate()
  Vec3 period{};
  /// Permit zero-length edges and zero-area faces (limit configurations).
  bool degenerate_ok = false;
  /// Offsets of a nondegenerate configuration with the same combinatorics,
  /// used to orient edges. Empty means "use the offsets being realized".
  std::vector<double> reference_offsets;
  Vec3 reference_period{}; ///< period belonging to reference_offsets

  bool periodic() const { return period.x != 0.0 || period.y != 0.0 || period.z != 0.0; }

  std::vector<double> offsets() const;
  void set_offsets(std::span<const double> h);

  /// Distinct non-empty symmetry classes in order of first appearance.
  std::vector<std::string> symmetry_classes() const;
  std::vector<int> faces_in_class(const std::string &cls) const;

  /// Checks the combinatorial invariants and (re)builds `edges`. Throws
  /// GeometryError.
  void validate();
};

/// A realized surface plus the exact first derivatives of its energy and
/// volume with respect to every face offset.
struct RealizedSurface {
  SurfaceTopology topology;
  std::vector<Vec3> vertex_positions;
  std::vector<double> face_areas;
  double energy = 0.0;
  double signed_volume = 0.0;

  /// dE/dh_f and dV/dh_f for every face f (offset derivatives, not yet
  /// multiplied by orientation).
  std::vector<double> energy_gradient;
  std::vector<double> volume_gradient;
  /// d(vertex)/d(offset) for the three planes of each vertex.
  std::vector<std::array<Vec3, 3>> vertex_jacobian;

  /// Sum over faces of orientation * area * normal.
  Vec3 closure_vector() const;
  /// Largest |x.n - h| over all vertex/plane incidences.
  double plane_residual() const;
  /// Signed length of a half-edge along normal(face) x normal(neighbor).
  double edge_signed_length(const EdgeSpec &e) const;
};

/// Solves vertices, areas, energy and volume. Throws GeometryError on a
/// singular vertex triple, a reversed edge or a nonpositive face area
/// (the last two are skipped when degenerate_ok is set).
RealizedSurface realize(const SurfaceTopology &topology);

struct TranslationDerivative {
  double dE = 0.0;
  double dV = 0.0;
};

/// Derivatives of (E, V) under a unit-speed outward translation of every
/// face of `symmetry_class`, all other planes held fixed.
TranslationDerivative face_translation_derivative(const RealizedSurface &surface,
                                                  const std::string &symmetry_class);

/// Per class: dE - 2 dV. All zeros certifies equilibrium under face
/// translations.
std::map<std::string, double> mean_curvature_residual(const RealizedSurface &surface);

/// Equilibrium constant: first variation of E - kVolumeMultiplier * V.
inline constexpr double kVolumeMultiplier = 2.0;

/// The Wulff prism itself, one symmetry class per face ("side0".."side5",
/// "top", "bottom").
SurfaceTopology wulff_prism_topology(double inradius = 1.0, double half_height = 1.0);

} // namespace hexcmc
