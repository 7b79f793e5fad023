#include "hexcmc/offset_surface.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "hexcmc/surface_builder.hpp"

namespace hexcmc {

namespace {

constexpr double kSingularDet = 1e-12;
constexpr double kEdgeTol = 1e-10;
constexpr double kAreaTol = 1e-14;

struct VertexSolve {
  Vec3 position;
  std::array<Vec3, 3> jacobian;
};

double plane_rhs(const SurfaceTopology &t, std::span<const double> h, const Vec3 &period, const PlaneRef &p) {
  const Vec3 n = t.faces[p.face].normal();
  return h[p.face] + p.shift * dot(n, period);
}

VertexSolve solve_vertex(const SurfaceTopology &t, std::span<const double> h, const Vec3 &period, int v) {
  const auto &planes = t.vertices[v].planes;
  const Vec3 n1 = t.faces[planes[0].face].normal();
  const Vec3 n2 = t.faces[planes[1].face].normal();
  const Vec3 n3 = t.faces[planes[2].face].normal();
  const Vec3 c23 = cross(n2, n3);
  const double det = dot(n1, c23);
  if (std::abs(det) < kSingularDet) {
    std::ostringstream msg;
    msg << "singular vertex " << v << ": faces " << planes[0].face << ", " << planes[1].face << ", "
        << planes[2].face << " have dependent normals";
    throw GeometryError(msg.str());
  }
  VertexSolve out;
  out.jacobian = {c23 / det, cross(n3, n1) / det, cross(n1, n2) / det};
  out.position = out.jacobian[0] * plane_rhs(t, h, period, planes[0]) +
                 out.jacobian[1] * plane_rhs(t, h, period, planes[1]) +
                 out.jacobian[2] * plane_rhs(t, h, period, planes[2]);
  return out;
}

std::string describe_edge(const SurfaceTopology &t, const EdgeSpec &e) {
  std::ostringstream s;
  s << "edge between face " << e.face << " (" << t.faces[e.face].component << "/" << t.faces[e.face].symmetry_class
    << ") and face " << e.neighbor.face << " (" << t.faces[e.neighbor.face].component << "/"
    << t.faces[e.neighbor.face].symmetry_class << ")";
  if (e.neighbor.shift != 0) {
    s << " shifted " << e.neighbor.shift << " period(s)";
  }
  return s.str();
}

Vec3 edge_direction(const SurfaceTopology &t, const EdgeSpec &e) {
  return normalized(cross(t.faces[e.face].normal(), t.faces[e.neighbor.face].normal()));
}

} // namespace

std::vector<double> SurfaceTopology::offsets() const {
  std::vector<double> h;
  h.reserve(faces.size());
  for (const auto &f : faces) {
    h.push_back(f.offset);
  }
  return h;
}

void SurfaceTopology::set_offsets(std::span<const double> h) {
  if (h.size() != faces.size()) {
    throw std::invalid_argument("set_offsets: size mismatch");
  }
  for (std::size_t i = 0; i < faces.size(); ++i) {
    faces[i].offset = h[i];
  }
}

std::vector<std::string> SurfaceTopology::symmetry_classes() const {
  std::vector<std::string> out;
  for (const auto &f : faces) {
    if (!f.auxiliary && !f.symmetry_class.empty() &&
        std::find(out.begin(), out.end(), f.symmetry_class) == out.end()) {
      out.push_back(f.symmetry_class);
    }
  }
  return out;
}

std::vector<int> SurfaceTopology::faces_in_class(const std::string &cls) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(faces.size()); ++i) {
    if (!faces[i].auxiliary && faces[i].symmetry_class == cls) {
      out.push_back(i);
    }
  }
  return out;
}

void SurfaceTopology::validate() {
  const int nf = static_cast<int>(faces.size());
  if (static_cast<int>(face_loops.size()) != nf) {
    throw GeometryError("face_loops must have one entry per face");
  }
  if (periodic() && period.z != 0.0) {
    throw GeometryError("period must be horizontal");
  }
  for (const auto &f : faces) {
    if (f.facet < 0 || f.facet >= kFacetCount) {
      throw GeometryError("facet index out of range");
    }
    if (f.orientation != 1 && f.orientation != -1) {
      throw GeometryError("orientation must be +1 or -1");
    }
  }
  for (int v = 0; v < static_cast<int>(vertices.size()); ++v) {
    const auto &p = vertices[v].planes;
    for (const auto &r : p) {
      if (r.face < 0 || r.face >= nf) {
        throw GeometryError("vertex references unknown face");
      }
    }
    const double det = dot(faces[p[0].face].normal(), cross(faces[p[1].face].normal(), faces[p[2].face].normal()));
    if (std::abs(det) < kSingularDet) {
      throw GeometryError("vertex " + std::to_string(v) + " has linearly dependent plane normals");
    }
  }

  edges.clear();
  // Canonical key: (lower face, upper face, shift of upper relative to lower).
  std::map<std::array<int, 3>, int> uses;
  for (int f = 0; f < nf; ++f) {
    const auto &loops = face_loops[f];
    if (faces[f].auxiliary) {
      if (!loops.empty()) {
        throw GeometryError("auxiliary face " + std::to_string(f) + " must not carry loops");
      }
      continue;
    }
    if (loops.empty()) {
      throw GeometryError("face " + std::to_string(f) + " has no boundary loop");
    }
    for (int l = 0; l < static_cast<int>(loops.size()); ++l) {
      const auto &loop = loops[l];
      if (loop.size() < 3) {
        throw GeometryError("face " + std::to_string(f) + " has a loop with fewer than 3 vertices");
      }
      for (int k = 0; k < static_cast<int>(loop.size()); ++k) {
        const int a = loop[k];
        const int b = loop[(k + 1) % loop.size()];
        if (a < 0 || b < 0 || a >= static_cast<int>(vertices.size()) || b >= static_cast<int>(vertices.size())) {
          throw GeometryError("face loop references unknown vertex");
        }
        const auto &pa = vertices[a].planes;
        const auto &pb = vertices[b].planes;
        const PlaneRef self{f, 0};
        if (std::find(pa.begin(), pa.end(), self) == pa.end() ||
            std::find(pb.begin(), pb.end(), self) == pb.end()) {
          throw GeometryError("vertex in loop of face " + std::to_string(f) + " does not lie on that face");
        }
        std::vector<PlaneRef> common;
        for (const auto &r : pa) {
          if (r != self && std::find(pb.begin(), pb.end(), r) != pb.end()) {
            common.push_back(r);
          }
        }
        if (common.size() != 1) {
          throw GeometryError("consecutive vertices " + std::to_string(a) + ", " + std::to_string(b) + " of face " +
                              std::to_string(f) + " do not share exactly one other plane");
        }
        EdgeSpec e;
        e.face = f;
        e.loop = l;
        e.index = k;
        e.neighbor = common.front();
        e.v0 = a;
        e.v1 = b;
        edges.push_back(e);
        const int g = e.neighbor.face;
        const std::array<int, 3> key =
            f < g ? std::array<int, 3>{f, g, e.neighbor.shift} : std::array<int, 3>{g, f, -e.neighbor.shift};
        ++uses[key];
      }
    }
  }
  for (const auto &e : edges) {
    const int g = e.neighbor.face;
    const int f = e.face;
    const std::array<int, 3> key =
        f < g ? std::array<int, 3>{f, g, e.neighbor.shift} : std::array<int, 3>{g, f, -e.neighbor.shift};
    const int expected = faces[g].auxiliary ? 1 : 2;
    if (uses[key] != expected) {
      throw GeometryError("non-manifold edge: " + describe_edge(*this, e) + " used " + std::to_string(uses[key]) +
                          " times");
    }
  }
}

Vec3 RealizedSurface::closure_vector() const {
  Vec3 c;
  for (std::size_t f = 0; f < topology.faces.size(); ++f) {
    const auto &face = topology.faces[f];
    if (!face.auxiliary) {
      c += face.normal() * (face.orientation * face_areas[f]);
    }
  }
  return c;
}

double RealizedSurface::plane_residual() const {
  double worst = 0.0;
  for (std::size_t v = 0; v < topology.vertices.size(); ++v) {
    for (const auto &p : topology.vertices[v].planes) {
      const auto &face = topology.faces[p.face];
      const double rhs = face.offset + p.shift * dot(face.normal(), topology.period);
      worst = std::max(worst, std::abs(dot(face.normal(), vertex_positions[v]) - rhs));
    }
  }
  return worst;
}

double RealizedSurface::edge_signed_length(const EdgeSpec &e) const {
  return dot(vertex_positions[e.v1] - vertex_positions[e.v0], edge_direction(topology, e));
}

RealizedSurface realize(const SurfaceTopology &topology) {
  RealizedSurface s;
  s.topology = topology;
  SurfaceTopology &t = s.topology;
  if (t.edges.empty()) {
    t.validate();
  }
  const std::vector<double> h = t.offsets();
  const int nv = static_cast<int>(t.vertices.size());
  const int nf = static_cast<int>(t.faces.size());

  s.vertex_positions.resize(nv);
  s.vertex_jacobian.resize(nv);
  for (int v = 0; v < nv; ++v) {
    const VertexSolve vs = solve_vertex(t, h, t.period, v);
    s.vertex_positions[v] = vs.position;
    s.vertex_jacobian[v] = vs.jacobian;
  }

  // Orient edges on a nondegenerate configuration.
  std::vector<Vec3> ref_positions;
  if (!t.reference_offsets.empty()) {
    if (t.reference_offsets.size() != h.size()) {
      throw GeometryError("reference offsets size mismatch");
    }
    ref_positions.resize(nv);
    for (int v = 0; v < nv; ++v) {
      ref_positions[v] = solve_vertex(t, t.reference_offsets, t.reference_period, v).position;
    }
  }
  const std::vector<Vec3> &orient_from = ref_positions.empty() ? s.vertex_positions : ref_positions;
  for (auto &e : t.edges) {
    const double len = dot(orient_from[e.v1] - orient_from[e.v0], edge_direction(t, e));
    e.sense = std::abs(len) > kEdgeTol ? (len > 0 ? 1 : -1) : 0;
  }

  const HexNorm &norm = hex_norm();
  // Volume weight: the divergence theorem with x/3 for closed surfaces, or
  // with (0, 0, z) for chains periodic in a horizontal direction (only
  // horizontal faces then carry flux).
  const bool periodic = t.periodic();
  std::vector<double> volume_weight(nf, 0.0);
  for (int f = 0; f < nf; ++f) {
    const auto &face = t.faces[f];
    if (face.auxiliary) {
      continue;
    }
    const double nz = face.normal().z;
    volume_weight[f] = face.orientation * (periodic ? nz * nz : 1.0 / 3.0);
  }

  s.face_areas.assign(nf, 0.0);
  s.energy_gradient.assign(nf, 0.0);
  s.volume_gradient.assign(nf, 0.0);
  s.energy = 0.0;
  s.signed_volume = 0.0;
  for (int f = 0; f < nf; ++f) {
    const auto &face = t.faces[f];
    if (face.auxiliary) {
      continue;
    }
    const Vec3 m = face.normal() * static_cast<double>(face.orientation);
    const double psi = norm.psi(face.normal());
    const double wv = volume_weight[f] * h[f];
    double area = 0.0;
    for (const auto &loop : t.face_loops[f]) {
      const int n = static_cast<int>(loop.size());
      const Vec3 origin = s.vertex_positions[loop[0]];
      Vec3 acc;
      for (int k = 0; k < n; ++k) {
        acc += cross(s.vertex_positions[loop[k]] - origin, s.vertex_positions[loop[(k + 1) % n]] - origin);
      }
      area += 0.5 * dot(m, acc);
      for (int k = 0; k < n; ++k) {
        const int v = loop[k];
        const Vec3 grad =
            0.5 * cross(s.vertex_positions[loop[(k + 1) % n]] - s.vertex_positions[loop[(k + n - 1) % n]], m);
        for (int j = 0; j < 3; ++j) {
          const double dA = dot(grad, s.vertex_jacobian[v][j]);
          const int g = t.vertices[v].planes[j].face;
          s.energy_gradient[g] += psi * dA;
          s.volume_gradient[g] += wv * dA;
        }
      }
    }
    s.face_areas[f] = area;
    s.energy += psi * area;
    s.signed_volume += wv * area;
    s.volume_gradient[f] += volume_weight[f] * area;
  }

  if (!t.degenerate_ok) {
    for (const auto &e : t.edges) {
      if (e.sense != 0 && e.sense * s.edge_signed_length(e) < -kEdgeTol) {
        throw GeometryError("self-intersecting face loop: reversed " + describe_edge(t, e));
      }
    }
    for (int f = 0; f < nf; ++f) {
      if (!t.faces[f].auxiliary && s.face_areas[f] <= kAreaTol) {
        throw GeometryError("face " + std::to_string(f) + " (" + t.faces[f].symmetry_class +
                            ") has nonpositive area " + std::to_string(s.face_areas[f]));
      }
    }
  }
  return s;
}

TranslationDerivative face_translation_derivative(const RealizedSurface &surface, const std::string &symmetry_class) {
  const SurfaceTopology &t = surface.topology;
  const std::vector<int> members = t.faces_in_class(symmetry_class);
  if (members.empty()) {
    throw std::invalid_argument("unknown symmetry class: " + symmetry_class);
  }
  std::vector<double> speed(t.faces.size(), 0.0);
  TranslationDerivative d;
  for (int f : members) {
    const double s = t.faces[f].orientation;
    speed[f] = s;
    d.dE += s * surface.energy_gradient[f];
    d.dV += s * surface.volume_gradient[f];
  }

  if (!t.degenerate_ok) {
    auto velocity = [&](int v) {
      Vec3 vel;
      for (int j = 0; j < 3; ++j) {
        vel += surface.vertex_jacobian[v][j] * speed[t.vertices[v].planes[j].face];
      }
      return vel;
    };
    for (const auto &e : t.edges) {
      if (e.sense == 0 || std::abs(surface.edge_signed_length(e)) > kEdgeTol) {
        continue;
      }
      const double rate = dot(velocity(e.v1) - velocity(e.v0), edge_direction(t, e));
      if (e.sense * rate < -kEdgeTol) {
        throw GeometryError("combinatorial collapse translating class '" + symmetry_class +
                            "': zero-length " + describe_edge(t, e) + " would become negative");
      }
    }
  }
  return d;
}

std::map<std::string, double> mean_curvature_residual(const RealizedSurface &surface) {
  std::map<std::string, double> out;
  for (const auto &cls : surface.topology.symmetry_classes()) {
    const auto d = face_translation_derivative(surface, cls);
    out[cls] = d.dE - kVolumeMultiplier * d.dV;
  }
  return out;
}

SurfaceTopology wulff_prism_topology(double inradius, double half_height) {
  SurfaceBuilder b;
  const HexBlock prism =
      add_prism_faces(b, {}, {inradius, inradius, inradius, inradius, inradius, inradius}, half_height, 1,
                      {"side0", "side1", "side2", "side3", "side4", "side5"}, "top", "wulff");
  emit_caps(b, prism);
  for (int k = 0; k < kLateralFacets; ++k) {
    emit_side(b, prism, k);
  }
  SurfaceTopology t = b.build(false);
  t.faces[prism.bottom.face].symmetry_class = "bottom";
  return t;
}

} // namespace hexcmc
