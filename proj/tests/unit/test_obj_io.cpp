#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hexcmc/assembly.hpp"
#include "hexcmc/delaunay.hpp"
#include "hexcmc/obj_io.hpp"

using namespace hexcmc;

namespace {

ObjMesh round_trip(const RealizedSurface &s, std::string *text = nullptr) {
  std::ostringstream out;
  write_obj(out, to_obj_mesh(s));
  if (text != nullptr) {
    *text = out.str();
  }
  std::istringstream in(out.str());
  return read_obj(in);
}

void expect_same_measure(const RealizedSurface &s) {
  const MeshMeasure m = measure_mesh(round_trip(s));
  EXPECT_NEAR(m.energy, s.energy, 1e-9);
  EXPECT_NEAR(m.volume, s.signed_volume, 1e-9);
}

// Polygons expected from a topology: one per simple face, four per holed face.
std::size_t template_faces(const SurfaceTopology &t) {
  std::size_t n = 0;
  for (std::size_t f = 0; f < t.faces.size(); ++f) {
    if (!t.faces[f].auxiliary && !t.face_loops[f].empty()) {
      n += t.face_loops[f].size() == 1 ? 1 : 4;
    }
  }
  return n;
}

} // namespace

TEST(ObjIo, WulffPrism) {
  const RealizedSurface w = realize(wulff_prism_topology());
  std::string text;
  const ObjMesh m = round_trip(w, &text);
  EXPECT_EQ(m.vertices.size(), 12u);
  EXPECT_EQ(m.face_count(), 8u);
  ASSERT_EQ(m.objects.size(), 1u);
  EXPECT_EQ(m.objects[0].name, "wulff");
  expect_same_measure(w);
  for (char c : text) {
    EXPECT_TRUE(c == '\n' || (c >= ' ' && c <= '~'));
  }
  // Only o, v and f records.
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    EXPECT_TRUE(line.rfind("o ", 0) == 0 || line.rfind("v ", 0) == 0 || line.rfind("f ", 0) == 0) << line;
  }
}

TEST(ObjIo, OutwardOrientation) {
  // Counterclockwise from outside: each polygon's area vector points away
  // from the prism centre.
  const ObjMesh m = round_trip(realize(wulff_prism_topology()));
  for (const auto &f : m.objects[0].faces) {
    Vec3 area;
    Vec3 centroid;
    for (std::size_t k = 0; k < f.size(); ++k) {
      area += cross(m.vertices[f[k]], m.vertices[f[(k + 1) % f.size()]]);
      centroid += m.vertices[f[k]];
    }
    EXPECT_GT(dot(area, centroid), 0.0);
  }
}

TEST(ObjIo, DelaunayPeriodsRoundTrip) {
  for (DelaunayKind kind : {DelaunayKind::Unduloid, DelaunayKind::Nodoid}) {
    const RealizedSurface s = build_period(solve(kind, 0.05).params);
    const ObjMesh m = round_trip(s);
    EXPECT_EQ(m.face_count(), template_faces(s.topology)) << to_string(kind);
    expect_same_measure(s);
  }
}

TEST(ObjIo, AssemblyRoundTrip) {
  const AssemblySurface a = build_assembly(fit_closure(3).solution);
  const ObjMesh m = round_trip(a.surface);
  EXPECT_EQ(m.objects.size(), 15u);
  EXPECT_EQ(m.face_count(), template_faces(a.surface.topology));
  expect_same_measure(a.surface);
}

TEST(ObjIo, ReaderAcceptsCommonVariants) {
  std::istringstream in("# comment\nv 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 1\nf 1//1 2//1 3//1\nf -3 -2 -1\n");
  const ObjMesh m = read_obj(in);
  EXPECT_EQ(m.vertices.size(), 3u);
  ASSERT_EQ(m.face_count(), 2u);
  EXPECT_EQ(m.objects[0].faces[1], (std::vector<int>{0, 1, 2}));
}

TEST(ObjIo, ReaderRejectsMalformedInput) {
  for (const char *bad : {"v 0 0\n", "v 0 0 0\nf 1 2 3\n", "v 0 0 0\nv 1 0 0\nf 1 2\n", "v 0 0 0\nf a b c\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(read_obj(in), std::runtime_error) << bad;
  }
}

TEST(ObjIo, DeterministicText) {
  const RealizedSurface s = build_period(solve(DelaunayKind::Nodoid, 0.05).params);
  std::string a;
  std::string b;
  round_trip(s, &a);
  round_trip(s, &b);
  EXPECT_EQ(a, b);
}
