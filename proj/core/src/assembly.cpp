#include "hexcmc/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <map>
#include <stdexcept>

#include "hexcmc/surface_builder.hpp"

namespace hexcmc {

namespace {

// Chain solves nested inside the assembly Newton must be much tighter than
// the assembly tolerance so that finite differences see a smooth residual.
DelaunaySolveOptions chain_options() {
  DelaunaySolveOptions o;
  o.newton.tolerance = 1e-13;
  return o;
}

DelaunayParams solve_chain(DelaunayKind kind, double r, const std::optional<DelaunayParams> &hint) {
  if (r == 0.0) {
    return trivial_params(kind);
  }
  const DelaunaySolveOptions o = chain_options();
  if (hint && hint->kind == kind && hint->r > 0.0) {
    if (hint->r == r) {
      return *hint;
    }
    try {
      return solve(kind, r, hint, o).params;
    } catch (const std::exception &) {
      // fall through to continuation from the trivial root
    }
  }
  return solve(kind, r, std::nullopt, o).params;
}

// Supports of a vertex prism: R2 face (relative facet 3) at a2, the other
// five at beta.
struct VertexGauge {
  double beta = 0.0;
  double a2 = 0.0;
};

VertexGauge vertex_gauge(const AssemblyParams &p) { return {0.5 * kSqrt3 * p.S(), 0.5 * kSqrt3 * p.R1}; }

double vertex_support(const VertexGauge &g, int rel) { return lateral(rel) == 3 ? g.a2 : g.beta; }

std::string vertex_class(int rel) {
  switch (lateral(rel)) {
  case 3:
    return "vertex_R2";
  case 2:
  case 4:
    return "vertex_R1";
  default:
    return "vertex_S";
  }
}

Vec3 horizontal(int facet) { return facet_normal(lateral(facet)); }
Vec3 tangent(int facet) { return cross(facet_normal(kTopFacet), horizontal(facet)); }

HexBlock add_vertex_prism(SurfaceBuilder &b, const AssemblyParams &p, const Vec3 &center, int j,
                          const std::string &component) {
  const VertexGauge g = vertex_gauge(p);
  std::array<double, 6> supports{};
  std::array<std::string, 6> classes;
  for (int f = 0; f < kLateralFacets; ++f) {
    supports[f] = vertex_support(g, f - j);
    classes[f] = vertex_class(f - j);
  }
  return add_prism_faces(b, center, supports, 0.5 * p.Q0, 1, classes, "vertex_top", component);
}

// A chain bead: a Delaunay prism whose R faces point along `k`.
HexBlock add_bead(SurfaceBuilder &b, const DelaunayParams &d, const Vec3 &center, int k,
                  const std::string &prefix, const std::string &component) {
  const ChainGeometry g = chain_geometry(d);
  std::array<double, 6> supports{};
  std::array<std::string, 6> classes;
  for (int f = 0; f < kLateralFacets; ++f) {
    const int rel = lateral(f - k);
    const bool r_face = rel == 0 || rel == 3;
    supports[f] = r_face ? g.r_support : g.s_support;
    classes[f] = prefix + (r_face ? "_R" : "_S");
  }
  return add_prism_faces(b, center, supports, g.prism_half_height, 1, classes, prefix + "_Q", component);
}

// Tube between the face `from` (facet k, behind) and the face `to`
// (facet k+3, ahead). Unduloid tubes are outward from the chain; nodoid
// tubes run backwards through the overlap of the two bodies.
HexBlock add_chain_tube(SurfaceBuilder &b, const DelaunayParams &d, const Vec3 &center, int k, PlaneRef from,
                        PlaneRef to, const std::string &prefix, const std::string &component) {
  const ChainGeometry g = chain_geometry(d);
  const bool nodoid = d.kind == DelaunayKind::Nodoid;
  return add_tube_faces(b, center, k, nodoid ? from : to, nodoid ? to : from, g.wall_support, g.tube_half_height,
                        nodoid ? -1 : 1, prefix + "_q", prefix + "_s", component);
}

// Side of the tube lying on `from` / `to` (see add_chain_tube).
int tube_side_on_from(const DelaunayParams &d, int k) { return lateral(d.kind == DelaunayKind::Nodoid ? k : k + 3); }
int tube_side_on_to(const DelaunayParams &d, int k) { return lateral(d.kind == DelaunayKind::Nodoid ? k + 3 : k); }

// Distance from the start face to the centre of tube i, and to the centre
// of bead i (i >= 1), along the chain axis. Unduloids start on the face;
// nodoids start with a tube reaching back inside the start body.
double tube_position(const DelaunayParams &d, int i) {
  const ChainGeometry g = chain_geometry(d);
  if (d.kind == DelaunayKind::Unduloid) {
    return i * g.period + g.tube_half_length;
  }
  return i * g.period - g.tube_half_length;
}

double bead_position(const DelaunayParams &d, int i) {
  const ChainGeometry g = chain_geometry(d);
  const double first = d.kind == DelaunayKind::Unduloid ? 2.0 * g.tube_half_length + g.r_support
                                                         : g.r_support - 2.0 * g.tube_half_length;
  return first + (i - 1) * g.period;
}

// A nondegenerate stub configuration with the same combinatorics as every
// admissible one, used to orient edges at the trivial root.
std::vector<double> reference_stub_offsets();

SurfaceTopology build_stub(const AssemblyParams &p, const AssemblyChains &chains) {
  SurfaceBuilder b;
  const VertexGauge g = vertex_gauge(p);
  const HexBlock prism = add_vertex_prism(b, p, {}, 0, "vertex");
  std::map<int, std::vector<TubeEnd>> holes;
  std::deque<HexBlock> tubes;
  std::vector<int> tube_axes;

  auto stub = [&](const DelaunayParams &d, int k, const std::string &prefix) {
    const double h = vertex_support(g, k);
    const double offset = (vertex_support(g, k + 1) - vertex_support(g, k - 1)) / kSqrt3;
    const Vec3 origin = horizontal(k) * h + tangent(k) * offset;
    const ChainGeometry cg = chain_geometry(d);
    const Vec3 bead = origin + horizontal(k) * bead_position(d, 1);
    const int aux = b.add_face({lateral(k + 3), plane_offset(lateral(k + 3), bead, cg.r_support), 1, "",
                                prefix + "_bead", true});
    tubes.push_back(add_chain_tube(b, d, origin + horizontal(k) * tube_position(d, 0), k, prism.sides[k],
                                   PlaneRef{aux, 0}, prefix, prefix));
    tube_axes.push_back(k);
    holes[prism.sides[k].face].push_back(TubeEnd{&tubes.back(), tube_side_on_from(d, k)});
  };
  stub(chains.unduloid, 2, "unduloid");
  stub(chains.unduloid, 4, "unduloid");
  stub(chains.nodoid, 3, "nodoid");

  emit_caps(b, prism);
  for (int k = 0; k < kLateralFacets; ++k) {
    emit_side(b, prism, k, holes[prism.sides[k].face]);
  }
  for (std::size_t i = 0; i < tubes.size(); ++i) {
    emit_caps(b, tubes[i]);
    emit_tube_walls(b, tubes[i], tube_axes[i]);
  }
  return b.build(true);
}

std::vector<double> reference_stub_offsets() {
  static const std::vector<double> ref = [] {
    AssemblyParams p;
    p.r1 = 0.05;
    p.r2 = 0.05;
    p.Q0 = 1.9;
    p.R1 = 1.05;
    p.R2 = 1.25;
    AssemblyChains c;
    c.unduloid = {DelaunayKind::Unduloid, 0.05, 1.9, 1.05, 1.2, 0.05, 0.03};
    c.nodoid = {DelaunayKind::Nodoid, 0.05, 2.1, 1.25, 1.1, 0.05, 0.03};
    return build_stub(p, c).offsets();
  }();
  return ref;
}

void check_assembly(const AssemblyParams &p) {
  for (double v : {p.r1, p.r2, p.Q0, p.R1, p.R2}) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("assembly parameters must be finite");
    }
  }
  if (p.r1 < 0.0 || p.r2 < 0.0) {
    throw std::invalid_argument("violated r1, r2 >= 0");
  }
  if (!(p.r1 < p.R1) || !(p.r2 < p.R2)) {
    throw std::invalid_argument("violated r1 < R1 and r2 < R2");
  }
  if (!(p.Q0 > 0.0) || !(p.R1 > 0.0) || !(p.R2 > 0.0)) {
    throw std::invalid_argument("violated Q0, R1, R2 > 0");
  }
  if (p.m_u < 1 || p.m_n < 1) {
    throw std::invalid_argument("period counts must be at least 1");
  }
}

bool admissible(const AssemblyParams &p, const AssemblyChains &c) {
  try {
    check_assembly(p);
    check_params(c.unduloid);
    check_params(c.nodoid);
  } catch (const std::invalid_argument &) {
    return false;
  }
  return c.unduloid.q < p.Q0 && c.nodoid.q < p.Q0;
}

} // namespace

AssemblyParams trivial_assembly(int m_u, std::optional<int> m_n) {
  AssemblyParams p;
  p.m_u = m_u;
  p.m_n = m_n.value_or(2 * m_u + 1);
  return p;
}

AssemblyChains solve_chains(double r1, double r2, const std::optional<AssemblyChains> &hint) {
  AssemblyChains c;
  c.unduloid = solve_chain(DelaunayKind::Unduloid, r1, hint ? std::optional(hint->unduloid) : std::nullopt);
  c.nodoid = solve_chain(DelaunayKind::Nodoid, r2, hint ? std::optional(hint->nodoid) : std::nullopt);
  return c;
}

SurfaceTopology vertex_stub_topology(const AssemblyParams &p, const AssemblyChains &chains) {
  check_assembly(p);
  SurfaceTopology t = build_stub(p, chains);
  t.reference_offsets = reference_stub_offsets();
  return t;
}

std::array<double, 4> residual4(const AssemblyParams &p, const AssemblyChains &chains) {
  const auto res = mean_curvature_residual(realize(vertex_stub_topology(p, chains)));
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < kVertexClasses.size(); ++i) {
    out[i] = res.at(kVertexClasses[i]);
  }
  return out;
}

std::array<double, 4> residual4(const AssemblyParams &p) { return residual4(p, solve_chains(p.r1, p.r2)); }

AssemblySolution solve_assembly(double r1, const AssemblyParams &counts, const AssemblyOptions &options,
                                const std::optional<AssemblySolution> &guess) {
  AssemblyParams base = trivial_assembly(counts.m_u, counts.m_n);
  if (r1 == 0.0) {
    return {base, AssemblyChains{}, 0.0, 0};
  }
  if (!std::isfinite(r1) || r1 < 0.0 || r1 > options.r1_max) {
    throw SolverError("r1 = " + std::to_string(r1) + " outside (0, " + std::to_string(options.r1_max) + "]",
                      NewtonResult{});
  }

  auto newton_at = [&](double rr, const AssemblyParams &start, const AssemblyChains &hint) {
    AssemblyChains cache = hint;
    cache.unduloid = solve_chain(DelaunayKind::Unduloid, rr, hint.unduloid);
    ResidualFunction f = [&](const std::vector<double> &x) -> std::optional<std::vector<double>> {
      AssemblyParams p = base;
      p.r1 = rr;
      p.Q0 = x[0];
      p.R1 = x[1];
      p.R2 = x[2];
      p.r2 = x[3];
      if (!(p.r2 > 0.0) || p.r2 > chain_options().r_max) {
        return std::nullopt;
      }
      AssemblyChains c = cache;
      try {
        c.nodoid = solve_chain(DelaunayKind::Nodoid, p.r2, cache.nodoid);
        cache.nodoid = c.nodoid;
      } catch (const std::exception &) {
        return std::nullopt;
      }
      if (!admissible(p, c)) {
        return std::nullopt;
      }
      const auto r = residual4(p, c);
      return std::vector<double>(r.begin(), r.end());
    };
    NewtonResult nr = newton_solve(f, {start.Q0, start.R1, start.R2, start.r2}, options.newton);
    AssemblySolution s;
    s.params = base;
    s.params.r1 = rr;
    s.params.Q0 = nr.x[0];
    s.params.R1 = nr.x[1];
    s.params.R2 = nr.x[2];
    s.params.r2 = nr.x[3];
    s.chains = solve_chains(rr, s.params.r2, cache);
    s.residual_norm = nr.residual_norm;
    s.iterations = nr.iterations;
    return s;
  };

  if (guess) {
    return newton_at(r1, guess->params, guess->chains);
  }

  std::vector<double> steps;
  for (double rr = options.r1_step; rr < r1 - 1e-12; rr += options.r1_step) {
    steps.push_back(rr);
  }
  steps.push_back(r1);

  AssemblySolution last{base, AssemblyChains{}, 0.0, 0};
  int total = 0;
  for (double rr : steps) {
    AssemblyParams start = last.params;
    if (start.r2 == 0.0) {
      start.r2 = rr; // r2 ~ r1 near the trivial root
    }
    last = newton_at(rr, start, last.chains);
    total += last.iterations;
  }
  last.iterations = total;
  return last;
}

AssemblySpans assembly_spans(const AssemblySolution &s) {
  const AssemblyParams &p = s.params;
  const VertexGauge g = vertex_gauge(p);
  const ChainGeometry u = chain_geometry(s.chains.unduloid);
  const ChainGeometry n = chain_geometry(s.chains.nodoid);
  AssemblySpans out;
  out.side = p.m_u * u.period + 2.0 * (g.beta - u.r_support);
  out.diagonal = p.m_n * n.period + 2.0 * (g.a2 - n.r_support);
  out.mismatch = 2.0 * out.side - out.diagonal;
  return out;
}

ClosureFit fit_closure(int m_u, std::optional<int> m_n, const AssemblyOptions &options) {
  if (m_u < 1) {
    throw std::invalid_argument("m_u must be at least 1");
  }
  const AssemblyParams counts = trivial_assembly(m_u, m_n);
  if (counts.m_n < 1) {
    throw std::invalid_argument("m_n must be at least 1");
  }
  ClosureFit fit;
  auto mismatch_at = [&](double r1, const std::optional<AssemblySolution> &near) {
    ++fit.evaluations;
    std::optional<AssemblySolution> s;
    if (near) {
      try {
        s = solve_assembly(r1, counts, options, near);
      } catch (const SolverError &) {
      }
    }
    if (!s) {
      s = solve_assembly(r1, counts, options);
    }
    return std::pair{*s, assembly_spans(*s).mismatch};
  };

  // Scan for the first sign change, then bisect.
  AssemblySolution lo_sol = solve_assembly(0.0, counts, options);
  double lo = 0.0;
  double lo_m = assembly_spans(lo_sol).mismatch;
  if (lo_m == 0.0) {
    throw std::runtime_error("closure mismatch vanishes at the trivial root; no perturbed fit to find");
  }
  std::optional<AssemblySolution> hi_sol;
  double hi = 0.0;
  double hi_m = 0.0;
  const int n = static_cast<int>(std::ceil(options.r1_max / options.r1_step - 1e-9));
  for (int i = 1; i <= n; ++i) {
    const double r = std::min(options.r1_max, i * options.r1_step);
    auto [s, m] = mismatch_at(r, lo == 0.0 ? std::nullopt : std::optional(lo_sol));
    if ((m > 0.0) != (lo_m > 0.0) || m == 0.0) {
      hi = r;
      hi_m = m;
      hi_sol = s;
      break;
    }
    lo = r;
    lo_m = m;
    lo_sol = s;
  }
  if (!hi_sol) {
    char msg[256];
    std::snprintf(msg, sizeof msg,
                  "no closure sign change for m_u=%d, m_n=%d on (0, %.17g]: mismatch %.17g at r1=0, %.17g at r1=%.17g",
                  counts.m_u, counts.m_n, options.r1_max, (2.0 * counts.m_u - counts.m_n) * 2.0, lo_m, lo);
    throw std::runtime_error(msg);
  }

  AssemblySolution best = std::abs(hi_m) < std::abs(lo_m) ? *hi_sol : lo_sol;
  double best_m = std::min(std::abs(hi_m), std::abs(lo_m));
  double best_r = std::abs(hi_m) < std::abs(lo_m) ? hi : lo;
  for (int it = 0; it < options.max_bisections && best_m >= options.fit_tolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    auto [s, m] = mismatch_at(mid, best);
    if (std::abs(m) < best_m) {
      best = s;
      best_m = std::abs(m);
      best_r = mid;
    }
    if ((m > 0.0) == (lo_m > 0.0)) {
      lo = mid;
      lo_m = m;
    } else {
      hi = mid;
      hi_m = m;
    }
  }
  if (best_m >= options.fit_tolerance) {
    char msg[200];
    std::snprintf(msg, sizeof msg, "closure bisection stalled at r1=%.17g with mismatch %.3g", best_r, best_m);
    throw std::runtime_error(msg);
  }
  fit.r1 = best_r;
  fit.solution = best;
  fit.mismatch = assembly_spans(best).mismatch;
  return fit;
}

AssemblySurface build_assembly(const AssemblySolution &fitted, const AssemblyOptions &options) {
  const AssemblyParams &p = fitted.params;
  check_assembly(p);
  if (!(p.r1 > 0.0) || !(p.r2 > 0.0)) {
    throw std::invalid_argument("assembly needs r1 > 0 and r2 > 0");
  }
  const AssemblySpans spans = assembly_spans(fitted);
  if (!(std::abs(spans.mismatch) <= options.unfitted_limit)) {
    throw std::invalid_argument("unfitted assembly: closure mismatch " + std::to_string(spans.mismatch));
  }
  const DelaunayParams &und = fitted.chains.unduloid;
  const DelaunayParams &nod = fitted.chains.nodoid;
  const VertexGauge g = vertex_gauge(p);

  AssemblySurface out;
  out.solution = fitted;
  out.hexagon_radius = spans.side;

  SurfaceBuilder b;
  std::deque<HexBlock> prisms; // vertex prisms first, then beads
  std::deque<HexBlock> tubes;
  std::vector<int> tube_axes;
  std::map<int, std::vector<TubeEnd>> holes;

  std::array<Vec3, 6> centers;
  for (int j = 0; j < 6; ++j) {
    centers[j] = horizontal(j) * spans.side;
    out.components.push_back("vertex_" + std::to_string(j));
    prisms.push_back(add_vertex_prism(b, p, centers[j], j, out.components.back()));
  }

  // Chain from vertex `from` leaving through facet k to vertex `to`.
  auto chain = [&](const DelaunayParams &d, int from, int to, int k, int count, const std::string &prefix,
                   const std::string &component) {
    const Vec3 n = horizontal(k);
    const double offset = (vertex_support(g, k + 1 - from) - vertex_support(g, k - 1 - from)) / kSqrt3;
    const Vec3 origin = centers[from] + n * vertex_support(g, k - from) + tangent(k) * offset;
    PlaneRef behind = prisms[from].sides[lateral(k)];
    for (int i = 0; i < count; ++i) {
      PlaneRef ahead;
      const HexBlock *bead = nullptr;
      if (i + 1 < count) {
        prisms.push_back(add_bead(b, d, origin + n * bead_position(d, i + 1), k, prefix, component));
        bead = &prisms.back();
        ahead = bead->sides[lateral(k + 3)];
      } else {
        ahead = prisms[to].sides[lateral(k + 3)];
      }
      tubes.push_back(add_chain_tube(b, d, origin + n * tube_position(d, i), k, behind, ahead, prefix, component));
      tube_axes.push_back(lateral(k));
      holes[behind.face].push_back(TubeEnd{&tubes.back(), tube_side_on_from(d, k)});
      holes[ahead.face].push_back(TubeEnd{&tubes.back(), tube_side_on_to(d, k)});
      if (bead != nullptr) {
        behind = bead->sides[lateral(k)];
      }
    }
  };

  for (int j = 0; j < 6; ++j) {
    out.components.push_back("unduloid_" + std::to_string(j));
    chain(und, j, (j + 1) % 6, j + 2, p.m_u, "unduloid", out.components.back());
  }
  for (int j = 0; j < 3; ++j) {
    out.components.push_back("nodoid_" + std::to_string(j));
    chain(nod, j, j + 3, j + 3, p.m_n, "nodoid", out.components.back());
  }

  for (const HexBlock &blk : prisms) {
    emit_caps(b, blk);
    for (int k = 0; k < kLateralFacets; ++k) {
      emit_side(b, blk, k, holes[blk.sides[k].face]);
    }
  }
  for (std::size_t i = 0; i < tubes.size(); ++i) {
    emit_caps(b, tubes[i]);
    emit_tube_walls(b, tubes[i], tube_axes[i]);
  }
  out.surface = realize(b.build(false));
  return out;
}

double dihedral_defect(const RealizedSurface &s) {
  const auto &v = s.vertex_positions;
  const double c = 0.5;
  const double sn = 0.5 * kSqrt3;
  auto nearest = [&](const Vec3 &x) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec3 &y : v) {
      best = std::min(best, norm(x - y));
    }
    return best;
  };
  double worst = 0.0;
  for (const Vec3 &x : v) {
    worst = std::max(worst, nearest({c * x.x - sn * x.y, sn * x.x + c * x.y, x.z}));
    worst = std::max(worst, nearest({x.x, -x.y, x.z}));
  }
  return worst;
}

namespace {

// Even-odd point-in-face test in the projection dropping the dominant axis
// of the face normal.
bool face_contains(const RealizedSurface &s, int f, const Vec3 &x) {
  const Vec3 n = s.topology.faces[f].normal();
  const double ax = std::abs(n.x);
  const double ay = std::abs(n.y);
  const double az = std::abs(n.z);
  auto project = [&](const Vec3 &p) -> std::pair<double, double> {
    if (az >= ax && az >= ay) {
      return {p.x, p.y};
    }
    if (ax >= ay) {
      return {p.y, p.z};
    }
    return {p.x, p.z};
  };
  const auto [px, py] = project(x);
  bool inside = false;
  for (const auto &loop : s.topology.face_loops[f]) {
    for (std::size_t k = 0; k < loop.size(); ++k) {
      const auto [x0, y0] = project(s.vertex_positions[loop[k]]);
      const auto [x1, y1] = project(s.vertex_positions[loop[(k + 1) % loop.size()]]);
      if ((y0 > py) != (y1 > py) && px < x0 + (py - y0) * (x1 - x0) / (y1 - y0)) {
        inside = !inside;
      }
    }
  }
  return inside;
}

} // namespace

bool components_intersect(const RealizedSurface &s, const std::string &a, const std::string &b) {
  const auto &t = s.topology;
  std::vector<int> fa;
  std::vector<int> fb;
  for (int f = 0; f < static_cast<int>(t.faces.size()); ++f) {
    if (t.faces[f].auxiliary) {
      continue;
    }
    if (t.faces[f].component == a) {
      fa.push_back(f);
    } else if (t.faces[f].component == b) {
      fb.push_back(f);
    }
  }
  for (int f : fa) {
    for (const auto &loop : t.face_loops[f]) {
      for (std::size_t k = 0; k < loop.size(); ++k) {
        const Vec3 p = s.vertex_positions[loop[k]];
        const Vec3 q = s.vertex_positions[loop[(k + 1) % loop.size()]];
        for (int g : fb) {
          const Vec3 n = t.faces[g].normal();
          const double h = t.faces[g].offset;
          const double dp = dot(n, p) - h;
          const double dq = dot(n, q) - h;
          if ((dp > 0.0) == (dq > 0.0) || dp == dq) {
            continue;
          }
          const Vec3 x = p + (q - p) * (dp / (dp - dq));
          if (face_contains(s, g, x)) {
            return true;
          }
        }
      }
    }
  }
  return false;
}

} // namespace hexcmc
