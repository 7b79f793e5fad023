#include "hexcmc/delaunay.hpp"

#include <cmath>
#include <stdexcept>

#include "hexcmc/surface_builder.hpp"

namespace hexcmc {

namespace {

// A nondegenerate configuration with the same combinatorics, used to orient
// edges when the actual parameters sit at a degenerate limit.
DelaunayParams reference_params(DelaunayKind kind) {
  if (kind == DelaunayKind::Unduloid) {
    return {kind, 0.2, 1.8, 1.0, 1.3, 0.2, 0.15};
  }
  return {kind, 0.2, 2.2, 1.3, 1.0, 0.2, 0.1};
}

std::vector<double> to_unknowns(const DelaunayParams &p) { return {p.Q, p.R, p.S, p.q, p.s}; }

DelaunayParams from_unknowns(DelaunayKind kind, double r, const std::vector<double> &x) {
  return {kind, r, x[0], x[1], x[2], x[3], x[4]};
}

bool admissible(const DelaunayParams &p) {
  try {
    check_params(p);
    return true;
  } catch (const std::invalid_argument &) {
    return false;
  }
}

SurfaceTopology build_topology(const DelaunayParams &p, bool degenerate_ok) {
  const ChainGeometry g = chain_geometry(p);
  const bool nodoid = p.kind == DelaunayKind::Nodoid;

  SurfaceBuilder b;
  b.set_period({g.period, 0.0, 0.0});
  const double ra = g.r_support;
  const double sb = g.s_support;
  const HexBlock prism = add_prism_faces(b, {}, {ra, sb, sb, ra, sb, sb}, g.prism_half_height, 1,
                                         {"R", "S", "S", "R", "S", "S"}, "Q", "prism");
  const PlaneRef right = prism.sides[0];
  const PlaneRef next_left{prism.sides[3].face, 1};
  // Unduloid tubes run from this prism's right face to the next prism's
  // left face; nodoid tubes run backwards through the overlap.
  const PlaneRef plus_end = nodoid ? right : next_left;
  const PlaneRef minus_end = nodoid ? next_left : right;
  const HexBlock tube = add_tube_faces(b, {0.5 * g.period, 0.0, 0.0}, 0, plus_end, minus_end, g.wall_support,
                                       g.tube_half_height, nodoid ? -1 : 1, "q", "s", "tube");

  emit_caps(b, prism);
  for (int k : {1, 2, 4, 5}) {
    emit_side(b, prism, k);
  }
  emit_side(b, prism, 0, {TubeEnd{&tube, nodoid ? 0 : 3}});
  emit_side(b, prism, 3, {TubeEnd{&tube, nodoid ? 3 : 0}});
  emit_caps(b, tube);
  emit_tube_walls(b, tube, 0);
  return b.build(degenerate_ok);
}

} // namespace

std::string to_string(DelaunayKind kind) { return kind == DelaunayKind::Unduloid ? "unduloid" : "nodoid"; }

DelaunayKind parse_delaunay_kind(const std::string &name) {
  if (name == "unduloid") {
    return DelaunayKind::Unduloid;
  }
  if (name == "nodoid") {
    return DelaunayKind::Nodoid;
  }
  throw std::invalid_argument("unknown Delaunay kind: " + name);
}

DelaunayParams trivial_params(DelaunayKind kind) { return {kind, 0.0, 2.0, kHexSide, kHexSide, 0.0, 0.0}; }

ChainGeometry chain_geometry(const DelaunayParams &p) {
  // Equiangular hexagon with supports h_k has side k of length
  // (2/sqrt3)(h_{k-1} + h_{k+1} - h_k); invert for widths (R,S,S,R,S,S).
  ChainGeometry g;
  g.r_support = 0.5 * kSqrt3 * p.S;
  g.s_support = 0.25 * kSqrt3 * (p.R + p.S);
  g.prism_half_height = 0.5 * p.Q;
  g.tube_half_length = 0.5 * kSqrt3 * p.s;
  g.wall_support = 0.25 * kSqrt3 * (p.r + p.s);
  g.tube_half_height = 0.5 * p.q;
  g.period = period_length(p);
  return g;
}

double period_length(const DelaunayParams &p) {
  return p.kind == DelaunayKind::Unduloid ? kSqrt3 * (p.S + p.s) : kSqrt3 * (p.S - p.s);
}

void check_params(const DelaunayParams &p) {
  for (double v : {p.r, p.Q, p.R, p.S, p.q, p.s}) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("parameters must be finite");
    }
  }
  if (p.r < 0.0) {
    throw std::invalid_argument("violated r >= 0");
  }
  if (p.q < 0.0) {
    throw std::invalid_argument("violated q >= 0");
  }
  if (p.s < 0.0) {
    throw std::invalid_argument("violated s >= 0");
  }
  if (p.S <= 0.0) {
    throw std::invalid_argument("violated S > 0");
  }
  if (!(p.r < p.R)) {
    throw std::invalid_argument("violated r < R (hole wider than its face)");
  }
  if (!(p.q < p.Q)) {
    throw std::invalid_argument("violated q < Q (hole taller than its face)");
  }
  if (p.kind == DelaunayKind::Nodoid && !(p.s < p.S)) {
    throw std::invalid_argument("violated s < S (nodoid period must stay positive)");
  }
}

SurfaceTopology period_topology(const DelaunayParams &p, bool degenerate_ok) {
  check_params(p);
  if (!degenerate_ok && (p.r == 0.0 || p.q == 0.0 || p.s == 0.0)) {
    throw std::invalid_argument("r, q or s is zero: degenerate period needs degenerate_ok");
  }
  SurfaceTopology t = build_topology(p, degenerate_ok);
  const SurfaceTopology ref = build_topology(reference_params(p.kind), false);
  t.reference_offsets = ref.offsets();
  t.reference_period = ref.period;
  return t;
}

RealizedSurface build_period(const DelaunayParams &p, bool degenerate_ok) {
  return realize(period_topology(p, degenerate_ok));
}

ResidualVector residual(const DelaunayParams &p) {
  const auto res = mean_curvature_residual(build_period(p, true));
  ResidualVector out;
  for (std::size_t i = 0; i < kDelaunayClasses.size(); ++i) {
    out[i] = res.at(kDelaunayClasses[i]);
  }
  return out;
}

DelaunaySolution solve(DelaunayKind kind, double r, const std::optional<DelaunayParams> &guess,
                       const DelaunaySolveOptions &options) {
  if (r == 0.0) {
    return {trivial_params(kind), max_norm(std::vector<double>{0.0}), 0};
  }
  if (!std::isfinite(r) || r < 0.0 || r > options.r_max) {
    throw SolverError("r = " + std::to_string(r) + " outside (0, " + std::to_string(options.r_max) + "]",
                      NewtonResult{});
  }

  auto newton_at = [&](double rr, const DelaunayParams &start) {
    ResidualFunction f = [kind, rr](const std::vector<double> &x) -> std::optional<std::vector<double>> {
      const DelaunayParams p = from_unknowns(kind, rr, x);
      if (!admissible(p)) {
        return std::nullopt;
      }
      const ResidualVector res = residual(p);
      return std::vector<double>(res.begin(), res.end());
    };
    return newton_solve(f, to_unknowns(start), options.newton);
  };

  DelaunaySolution out;
  if (guess) {
    const NewtonResult nr = newton_at(r, *guess);
    out.params = from_unknowns(kind, r, nr.x);
    out.residual_norm = nr.residual_norm;
    out.iterations = nr.iterations;
    return out;
  }

  std::vector<double> steps;
  if (r <= options.r_min) {
    steps.push_back(r);
  } else {
    const int n = static_cast<int>(std::ceil((r - options.r_min) / options.r_step - 1e-12));
    for (int i = 0; i < n; ++i) {
      steps.push_back(options.r_min + i * options.r_step);
    }
    steps.push_back(r);
  }

  std::vector<double> prev_x;
  std::vector<double> last_x = to_unknowns(trivial_params(kind));
  double prev_r = 0.0;
  double last_r = 0.0;
  for (double rr : steps) {
    // Secant predictor along the branch.
    std::vector<double> start = last_x;
    if (!prev_x.empty()) {
      const double t = (rr - last_r) / (last_r - prev_r);
      for (std::size_t i = 0; i < start.size(); ++i) {
        start[i] = last_x[i] + t * (last_x[i] - prev_x[i]);
      }
      if (!admissible(from_unknowns(kind, rr, start))) {
        start = last_x;
      }
    }
    const NewtonResult nr = newton_at(rr, from_unknowns(kind, rr, start));
    out.iterations += nr.iterations;
    out.residual_norm = nr.residual_norm;
    prev_x = std::move(last_x);
    prev_r = last_r;
    last_x = nr.x;
    last_r = rr;
    if (prev_r == 0.0) {
      prev_x.clear();
    }
  }
  out.params = from_unknowns(kind, r, last_x);
  return out;
}

std::vector<SweepRow> sweep(DelaunayKind kind, std::span<const double> r_values, const DelaunaySolveOptions &options) {
  std::vector<SweepRow> rows;
  rows.reserve(r_values.size());
  for (double r : r_values) {
    SweepRow row;
    row.r = r;
    try {
      const DelaunaySolution sol = solve(kind, r, std::nullopt, options);
      row.ok = true;
      row.params = sol.params;
      row.residual_norm = sol.residual_norm;
      row.period_length = period_length(sol.params);
    } catch (const std::exception &e) {
      row.ok = false;
      row.params.kind = kind;
      row.params.r = r;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

bool prisms_overlap(const DelaunayParams &p) {
  const ChainGeometry g = chain_geometry(p);
  // Prism k occupies |x - kL| <= a along the axis.
  return g.period < 2.0 * g.r_support - 1e-12;
}

} // namespace hexcmc
