#include "hexcmc/surface_builder.hpp"

#include <algorithm>

namespace hexcmc {

namespace {

PlaneRef shifted(PlaneRef p, int by) { return {p.face, p.shift + by}; }

// Builds the vertex and shifts all three planes so that `anchor` is at
// shift 0 (vertex lists of a face always reference the face unshifted).
int vertex_on(SurfaceBuilder &b, PlaneRef anchor, PlaneRef p, PlaneRef q) {
  const int by = -anchor.shift;
  return b.vertex(shifted(anchor, by), shifted(p, by), shifted(q, by));
}

} // namespace

int SurfaceBuilder::add_face(FaceSpec spec) {
  topology_.faces.push_back(std::move(spec));
  topology_.face_loops.emplace_back();
  return static_cast<int>(topology_.faces.size()) - 1;
}

int SurfaceBuilder::vertex(PlaneRef a, PlaneRef b, PlaneRef c) {
  std::array<PlaneRef, 3> key{a, b, c};
  std::sort(key.begin(), key.end());
  if (auto it = vertex_ids_.find(key); it != vertex_ids_.end()) {
    return it->second;
  }
  const int id = static_cast<int>(topology_.vertices.size());
  topology_.vertices.push_back(VertexSpec{{a, b, c}});
  vertex_ids_.emplace(key, id);
  return id;
}

void SurfaceBuilder::add_loop(int face, std::vector<int> loop) {
  topology_.face_loops.at(face).push_back(std::move(loop));
}

SurfaceTopology SurfaceBuilder::build(bool degenerate_ok) const {
  SurfaceTopology t = topology_;
  t.degenerate_ok = degenerate_ok;
  t.validate();
  return t;
}

double plane_offset(int facet, const Vec3 &center, double support) {
  return dot(facet_normal(facet), center) + support;
}

HexBlock add_prism_faces(SurfaceBuilder &b, const Vec3 &center, const std::array<double, 6> &supports,
                         double half_height, int orientation, const std::array<std::string, 6> &side_classes,
                         const std::string &top_class, const std::string &component) {
  HexBlock block;
  block.orientation = orientation;
  for (int k = 0; k < kLateralFacets; ++k) {
    block.sides[k] = {b.add_face({k, plane_offset(k, center, supports[k]), orientation, side_classes[k], component}),
                      0};
  }
  block.top = {b.add_face({kTopFacet, center.z + half_height, orientation, top_class, component}), 0};
  block.bottom = {b.add_face({kBottomFacet, -center.z + half_height, orientation, top_class, component}), 0};
  return block;
}

HexBlock add_tube_faces(SurfaceBuilder &b, const Vec3 &center, int axis, PlaneRef plus_end, PlaneRef minus_end,
                        double wall_support, double half_height, int orientation, const std::string &cap_class,
                        const std::string &wall_class, const std::string &component) {
  HexBlock block;
  block.orientation = orientation;
  axis = lateral(axis);
  block.sides[axis] = plus_end;
  block.sides[lateral(axis + 3)] = minus_end;
  for (int d : {1, 2, 4, 5}) {
    const int k = lateral(axis + d);
    block.sides[k] = {b.add_face({k, plane_offset(k, center, wall_support), orientation, wall_class, component}), 0};
  }
  block.top = {b.add_face({kTopFacet, center.z + half_height, orientation, cap_class, component}), 0};
  block.bottom = {b.add_face({kBottomFacet, -center.z + half_height, orientation, cap_class, component}), 0};
  return block;
}

void emit_caps(SurfaceBuilder &b, const HexBlock &block) {
  std::vector<int> top;
  std::vector<int> bottom;
  for (int m = 0; m < kLateralFacets; ++m) {
    const PlaneRef s0 = block.sides[m];
    const PlaneRef s1 = block.sides[lateral(m + 1)];
    top.push_back(vertex_on(b, block.top, s0, s1));
    bottom.push_back(vertex_on(b, block.bottom, s0, s1));
  }
  // Counterclockwise seen from +z for the top; the bottom is seen from -z.
  std::reverse(bottom.begin(), bottom.end());
  if (block.orientation < 0) {
    std::reverse(top.begin(), top.end());
    std::reverse(bottom.begin(), bottom.end());
  }
  b.add_loop(block.top.face, std::move(top));
  b.add_loop(block.bottom.face, std::move(bottom));
}

void emit_side(SurfaceBuilder &b, const HexBlock &block, int side, const std::vector<TubeEnd> &holes) {
  const PlaneRef self = block.sides[side];
  const PlaneRef prev = block.sides[lateral(side - 1)];
  const PlaneRef next = block.sides[lateral(side + 1)];
  const int orient = b.face(self.face).orientation;

  // In the frame (u, z) with u = z x n, the neighbour side-1 lies at u- and
  // side+1 at u+; counterclockwise about n is (u-,bot) (u+,bot) (u+,top) (u-,top).
  std::vector<int> outer = {vertex_on(b, self, prev, block.bottom), vertex_on(b, self, next, block.bottom),
                            vertex_on(b, self, next, block.top), vertex_on(b, self, prev, block.top)};
  if (orient < 0) {
    std::reverse(outer.begin(), outer.end());
  }
  b.add_loop(self.face, std::move(outer));

  const Vec3 u = cross(facet_normal(kTopFacet), facet_normal(b.face(self.face).facet));
  for (const TubeEnd &end : holes) {
    const HexBlock &tube = *end.tube;
    const int by = -tube.sides[end.side].shift;
    PlaneRef wa = shifted(tube.sides[lateral(end.side - 1)], by);
    PlaneRef wb = shifted(tube.sides[lateral(end.side + 1)], by);
    if (dot(facet_normal(b.face(wa.face).facet), u) > 0.0) {
      std::swap(wa, wb);
    }
    // wa is now at u-, wb at u+; holes run clockwise.
    const PlaneRef top = shifted(tube.top, by);
    const PlaneRef bottom = shifted(tube.bottom, by);
    const PlaneRef face{self.face, 0};
    std::vector<int> hole = {b.vertex(face, wa, top), b.vertex(face, wb, top), b.vertex(face, wb, bottom),
                             b.vertex(face, wa, bottom)};
    if (orient < 0) {
      std::reverse(hole.begin(), hole.end());
    }
    b.add_loop(self.face, std::move(hole));
  }
}

void emit_tube_walls(SurfaceBuilder &b, const HexBlock &tube, int axis) {
  for (int d : {1, 2, 4, 5}) {
    emit_side(b, tube, lateral(axis + d));
  }
}

} // namespace hexcmc
