#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hexcmc/offset_surface.hpp"

namespace hexcmc {

/// Polygon soup grouped into named objects. Indices are 0-based into
/// `vertices`; each object owns its vertices.
struct ObjMesh {
  struct Object {
    std::string name;
    std::vector<std::vector<int>> faces;
  };
  std::vector<Vec3> vertices;
  std::vector<Object> objects;

  std::size_t face_count() const;
};

/// One object per component, in order of first appearance. Faces with a
/// hole become four quads around it. Throws GeometryError for any other
/// multiply connected face.
ObjMesh to_obj_mesh(const RealizedSurface &s);

/// 'o', 'v' and 'f' records only, 17 significant digits.
void write_obj(std::ostream &out, const ObjMesh &mesh);

/// Accepts 'o', 'v', 'f' (with optional /vt/vn suffixes and negative
/// indices); other records are skipped. Throws std::runtime_error.
ObjMesh read_obj(std::istream &in);

struct MeshMeasure {
  double energy = 0.0; ///< sum of psi(area vector)
  double volume = 0.0; ///< flux of (0, 0, z) through the faces
};

/// For closed meshes `volume` is the enclosed signed volume; for one period
/// of a horizontal chain it is the volume of the period.
MeshMeasure measure_mesh(const ObjMesh &mesh);

} // namespace hexcmc
