#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "hexcmc/offset_surface.hpp"

namespace hexcmc {

/// Incremental construction of a SurfaceTopology with vertex deduplication.
class SurfaceBuilder {
public:
  int add_face(FaceSpec spec);
  /// Vertex at the intersection of three planes; repeated triples return
  /// the same id.
  int vertex(PlaneRef a, PlaneRef b, PlaneRef c);
  void add_loop(int face, std::vector<int> loop);
  void set_period(const Vec3 &period) { topology_.period = period; }

  const FaceSpec &face(int id) const { return topology_.faces.at(id); }
  int face_count() const { return static_cast<int>(topology_.faces.size()); }

  /// Validates and returns the topology.
  SurfaceTopology build(bool degenerate_ok) const;

private:
  SurfaceTopology topology_;
  std::map<std::array<PlaneRef, 3>, int> vertex_ids_;
};

/// A hexagonal block: six lateral planes in facet order plus top and bottom.
/// Prisms own all eight planes; tubes borrow the two planes at their ends.
struct HexBlock {
  std::array<PlaneRef, 6> sides;
  PlaneRef top;
  PlaneRef bottom;
  int orientation = 1;
};

/// Lateral side m of `block` as the outward-oriented loop, with optional
/// holes cut by tubes whose end side lies on this face.
struct TubeEnd {
  const HexBlock *tube = nullptr;
  int side = 0; ///< index of the tube side lying on the face
};

/// Offset of the plane with facet `facet` at support `support` from `center`.
double plane_offset(int facet, const Vec3 &center, double support);

/// Adds the eight faces of a prism (lateral supports relative to `center`).
HexBlock add_prism_faces(SurfaceBuilder &b, const Vec3 &center, const std::array<double, 6> &supports,
                         double half_height, int orientation, const std::array<std::string, 6> &side_classes,
                         const std::string &top_class, const std::string &component);

/// Adds the walls and caps of a tube along lateral facet `axis`. The tube's
/// side `axis` lies on `plus_end` and side `axis + 3` on `minus_end`;
/// the four walls have support `wall_support` from `center`.
HexBlock add_tube_faces(SurfaceBuilder &b, const Vec3 &center, int axis, PlaneRef plus_end, PlaneRef minus_end,
                        double wall_support, double half_height, int orientation, const std::string &cap_class,
                        const std::string &wall_class, const std::string &component);

/// Emits the top and bottom loops of a block.
void emit_caps(SurfaceBuilder &b, const HexBlock &block);

/// Emits lateral face `side` of a block that owns it, with tube holes.
void emit_side(SurfaceBuilder &b, const HexBlock &block, int side, const std::vector<TubeEnd> &holes = {});

/// Emits all owned lateral faces of a tube (the four walls).
void emit_tube_walls(SurfaceBuilder &b, const HexBlock &tube, int axis);

} // namespace hexcmc
