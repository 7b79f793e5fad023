#include "hexcmc/obj_io.hpp"

#include <array>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "hexcmc/hexnorm.hpp"

namespace hexcmc {

std::size_t ObjMesh::face_count() const {
  std::size_t n = 0;
  for (const auto &o : objects) {
    n += o.faces.size();
  }
  return n;
}

ObjMesh to_obj_mesh(const RealizedSurface &s) {
  const SurfaceTopology &t = s.topology;
  ObjMesh mesh;
  std::map<std::string, std::size_t> object_of;
  std::vector<std::map<int, int>> local; // per object: topology vertex -> mesh vertex

  for (std::size_t f = 0; f < t.faces.size(); ++f) {
    const FaceSpec &face = t.faces[f];
    const auto &loops = t.face_loops[f];
    if (face.auxiliary || loops.empty()) {
      continue;
    }
    auto [it, fresh] = object_of.emplace(face.component, mesh.objects.size());
    if (fresh) {
      mesh.objects.push_back({face.component, {}});
      local.emplace_back();
    }
    auto &ids = local[it->second];
    auto id = [&](int v) {
      auto [jt, added] = ids.emplace(v, static_cast<int>(mesh.vertices.size()));
      if (added) {
        mesh.vertices.push_back(s.vertex_positions[v]);
      }
      return jt->second;
    };
    auto &faces = mesh.objects[it->second].faces;

    if (loops.size() == 1) {
      std::vector<int> poly;
      for (int v : loops[0]) {
        poly.push_back(id(v));
      }
      faces.push_back(std::move(poly));
      continue;
    }
    if (loops.size() != 2 || loops[0].size() != 4 || loops[1].size() != 4) {
      throw GeometryError("OBJ export supports faces with at most one quadrilateral hole");
    }
    // Pair each outer corner with the nearest hole corner; the ring between
    // the loops splits into four quads.
    const auto &outer = loops[0];
    const auto &hole = loops[1];
    std::array<int, 4> near{};
    for (int k = 0; k < 4; ++k) {
      double best = std::numeric_limits<double>::infinity();
      for (int m = 0; m < 4; ++m) {
        const double d = norm(s.vertex_positions[outer[k]] - s.vertex_positions[hole[m]]);
        if (d < best) {
          best = d;
          near[k] = hole[m];
        }
      }
    }
    for (int k = 0; k < 4; ++k) {
      const int k1 = (k + 1) % 4;
      faces.push_back({id(outer[k]), id(outer[k1]), id(near[k1]), id(near[k])});
    }
  }
  return mesh;
}

void write_obj(std::ostream &out, const ObjMesh &mesh) {
  // Vertices are written per object so that each object is self-contained.
  std::vector<int> written(mesh.vertices.size(), -1);
  int next = 1;
  char buf[128];
  for (const auto &o : mesh.objects) {
    out << "o " << o.name << '\n';
    for (const auto &f : o.faces) {
      for (int v : f) {
        if (written[v] < 0) {
          written[v] = next++;
          const Vec3 &p = mesh.vertices[v];
          std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p.x, p.y, p.z);
          out << buf;
        }
      }
    }
    for (const auto &f : o.faces) {
      out << 'f';
      for (int v : f) {
        out << ' ' << written[v];
      }
      out << '\n';
    }
  }
}

ObjMesh read_obj(std::istream &in) {
  ObjMesh mesh;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') {
      continue;
    }
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x >> p.y >> p.z)) {
        throw std::runtime_error("malformed vertex on line " + std::to_string(line_no));
      }
      mesh.vertices.push_back(p);
    } else if (tag == "o") {
      std::string name;
      std::getline(ls >> std::ws, name);
      mesh.objects.push_back({name, {}});
    } else if (tag == "f") {
      if (mesh.objects.empty()) {
        mesh.objects.push_back({"default", {}});
      }
      std::vector<int> face;
      std::string tok;
      while (ls >> tok) {
        int idx = 0;
        try {
          idx = std::stoi(tok.substr(0, tok.find('/')));
        } catch (const std::exception &) {
          throw std::runtime_error("malformed face index on line " + std::to_string(line_no));
        }
        const int n = static_cast<int>(mesh.vertices.size());
        const int zero_based = idx > 0 ? idx - 1 : n + idx;
        if (idx == 0 || zero_based < 0 || zero_based >= n) {
          throw std::runtime_error("face index out of range on line " + std::to_string(line_no));
        }
        face.push_back(zero_based);
      }
      if (face.size() < 3) {
        throw std::runtime_error("face with fewer than 3 vertices on line " + std::to_string(line_no));
      }
      mesh.objects.back().faces.push_back(std::move(face));
    }
  }
  if (in.bad()) {
    throw std::runtime_error("read error");
  }
  return mesh;
}

MeshMeasure measure_mesh(const ObjMesh &mesh) {
  const HexNorm &psi = hex_norm();
  MeshMeasure m;
  for (const auto &o : mesh.objects) {
    for (const auto &f : o.faces) {
      const Vec3 &p0 = mesh.vertices[f[0]];
      Vec3 area;
      for (std::size_t k = 1; k + 1 < f.size(); ++k) {
        const Vec3 &a = mesh.vertices[f[k]];
        const Vec3 &b = mesh.vertices[f[k + 1]];
        const Vec3 tri = 0.5 * cross(a - p0, b - p0);
        area += tri;
        m.volume += tri.z * (p0.z + a.z + b.z) / 3.0;
      }
      m.energy += psi.psi(area);
    }
  }
  return m;
}

} // namespace hexcmc
