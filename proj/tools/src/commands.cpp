#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "hexcmc/assembly.hpp"
#include "hexcmc/delaunay.hpp"
#include "hexcmc/isoperimetry.hpp"
#include "hexcmc/obj_io.hpp"
#include "json_writer.hpp"

namespace hexcmc::cli {

namespace {

using nlohmann::json;

// Writes to `path`, or stdout when empty. False on I/O failure.
bool emit(const std::string &path, const std::string &text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return static_cast<bool>(std::cout);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "hexcmc: cannot open " << path << " for writing\n";
    return false;
  }
  f << text;
  f.close();
  if (!f) {
    std::cerr << "hexcmc: write to " << path << " failed\n";
    return false;
  }
  return true;
}

int emit_json(const std::string &path, const JsonValue &v, int code) { return emit(path, v.dump()) ? code : kIoFail; }

// Verification reports always go to stdout; a non-empty path adds a file copy.
int emit_report(const std::string &path, const JsonValue &v, int code) {
  const std::string text = v.dump();
  if (!emit("", text) || (!path.empty() && !emit(path, text))) {
    return kIoFail;
  }
  return code;
}

std::optional<json> load_json(const std::string &path) {
  std::ifstream f(path);
  if (!f) {
    std::cerr << "hexcmc: cannot open " << path << '\n';
    return std::nullopt;
  }
  try {
    return json::parse(f);
  } catch (const json::exception &e) {
    std::cerr << "hexcmc: " << path << ": " << e.what() << '\n';
    return std::nullopt;
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

JsonValue numbers(const std::vector<double> &v) {
  JsonValue a = JsonValue::array();
  for (double x : v) {
    a.push(x);
  }
  return a;
}

JsonValue delaunay_record(const DelaunayParams &p) {
  JsonValue o = JsonValue::object();
  o.set("kind", to_string(p.kind));
  o.set("r", p.r).set("Q", p.Q).set("R", p.R).set("S", p.S).set("q", p.q).set("s", p.s);
  return o;
}

DelaunayParams delaunay_from_json(const json &j) {
  DelaunayParams p;
  p.kind = parse_delaunay_kind(j.at("kind").get<std::string>());
  p.r = j.at("r").get<double>();
  p.Q = j.at("Q").get<double>();
  p.R = j.at("R").get<double>();
  p.S = j.at("S").get<double>();
  p.q = j.at("q").get<double>();
  p.s = j.at("s").get<double>();
  return p;
}

JsonValue assembly_record(const AssemblySolution &s) {
  const AssemblyParams &p = s.params;
  const AssemblySpans spans = assembly_spans(s);
  JsonValue o = JsonValue::object();
  o.set("kind", "assembly");
  o.set("r1", p.r1).set("r2", p.r2).set("Q0", p.Q0).set("R1", p.R1).set("R2", p.R2).set("S", p.S());
  o.set("m_u", p.m_u).set("m_n", p.m_n);
  o.set("residual_norm", s.residual_norm);
  o.set("side_span", spans.side).set("diagonal_span", spans.diagonal).set("mismatch", spans.mismatch);
  o.set("unduloid", delaunay_record(s.chains.unduloid));
  o.set("nodoid", delaunay_record(s.chains.nodoid));
  return o;
}

AssemblySolution assembly_from_json(const json &j) {
  AssemblySolution s;
  s.params.r1 = j.at("r1").get<double>();
  s.params.r2 = j.at("r2").get<double>();
  s.params.Q0 = j.at("Q0").get<double>();
  s.params.R1 = j.at("R1").get<double>();
  s.params.R2 = j.at("R2").get<double>();
  s.params.m_u = j.at("m_u").get<int>();
  s.params.m_n = j.at("m_n").get<int>();
  s.residual_norm = j.value("residual_norm", 0.0);
  s.chains.unduloid = delaunay_from_json(j.at("unduloid"));
  s.chains.nodoid = delaunay_from_json(j.at("nodoid"));
  return s;
}

AnnulusSpec annulus_of(const AnnulusArgs &a) {
  AnnulusSpec s{a.x0.value_or(a.hole), a.y0.value_or(a.hole), a.x1, a.y1};
  try {
    s.validate();
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  return s;
}

JsonValue annulus_record(const AnnulusSpec &a) {
  JsonValue o = JsonValue::object();
  o.set("x0", a.x0).set("y0", a.y0).set("x1", a.x1).set("y1", a.y1);
  return o;
}

DelaunayKind chain_kind(const std::string &kind) {
  try {
    return parse_delaunay_kind(kind);
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
}

double max_abs(const std::map<std::string, double> &m) {
  double w = 0.0;
  for (const auto &[k, v] : m) {
    w = std::max(w, std::abs(v));
  }
  return w;
}

std::vector<double> parse_r_values(const std::string &spec) {
  std::vector<double> out;
  auto number = [](const std::string &s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception &) {
      throw UsageError("bad number in --r: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) {
      throw UsageError("bad number in --r: '" + s + "'");
    }
    return v;
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) {
      parts.push_back(p);
    }
    if (parts.size() != 3) {
      throw UsageError("--r range must be start:stop:step");
    }
    const double a = number(parts[0]);
    const double b = number(parts[1]);
    const double step = number(parts[2]);
    if (!(step > 0.0)) {
      throw UsageError("--r range step must be positive");
    }
    if (b < a) {
      return out;
    }
    const long n = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= n; ++i) {
      out.push_back(a + static_cast<double>(i) * step);
    }
    return out;
  }
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ',');) {
    if (!p.empty()) {
      out.push_back(number(p));
    }
  }
  return out;
}

} // namespace

int cmd_solve(const SolveArgs &a) {
  const DelaunayKind kind = chain_kind(a.kind);
  DelaunaySolveOptions opts;
  opts.r_max = a.r_max;
  opts.newton.tolerance = a.tolerance;
  JsonValue o = JsonValue::object();
  o.set("kind", to_string(kind)).set("r", a.r);
  try {
    const DelaunaySolution sol = solve(kind, a.r, std::nullopt, opts);
    const DelaunayParams &p = sol.params;
    const ResidualVector res = residual(p);
    double norm = 0.0;
    for (double x : res) {
      norm = std::max(norm, std::abs(x));
    }
    o.set("Q", p.Q).set("R", p.R).set("S", p.S).set("q", p.q).set("s", p.s);
    o.set("residual_norm", norm).set("iterations", sol.iterations);
    o.set("period_length", period_length(p));
    const bool ok = norm < a.tolerance;
    o.set("status", ok ? "ok" : "failed");
    return emit_json(a.out, o, ok ? kPass : kSolverFail);
  } catch (const SolverError &e) {
    o.set("status", "failed").set("error", e.what());
    o.set("residual_norm", e.last_iterate().residual_norm).set("iterations", e.last_iterate().iterations);
    o.set("last_iterate", numbers(e.last_iterate().x));
    std::cerr << "hexcmc: " << e.what() << '\n';
    return emit_json(a.out, o, kSolverFail);
  } catch (const std::exception &e) {
    o.set("status", "failed").set("error", e.what());
    std::cerr << "hexcmc: " << e.what() << '\n';
    return emit_json(a.out, o, kSolverFail);
  }
}

int cmd_mesh(const MeshArgs &a) {
  if (a.out.empty()) {
    throw UsageError("mesh needs --out");
  }
  RealizedSurface surface;
  try {
    if (a.kind == "wulff") {
      surface = realize(wulff_prism_topology());
    } else if (a.kind == "assembly") {
      if (a.params.empty()) {
        std::cerr << "hexcmc: assembly mesh needs a fit file (--params from 'hexcmc fit')\n";
        return kSolverFail;
      }
      const auto j = load_json(a.params);
      if (!j) {
        return kIoFail;
      }
      surface = build_assembly(assembly_from_json(*j)).surface;
    } else {
      const DelaunayKind kind = chain_kind(a.kind);
      DelaunayParams p;
      if (!a.params.empty()) {
        const auto j = load_json(a.params);
        if (!j) {
          return kIoFail;
        }
        p = delaunay_from_json(*j);
        if (p.kind != kind) {
          throw UsageError("--params holds a " + to_string(p.kind) + ", not a " + a.kind);
        }
      } else if (a.r) {
        p = solve(kind, *a.r).params;
      } else {
        throw UsageError("mesh --kind " + a.kind + " needs --r or --params");
      }
      surface = build_period(p, p.r == 0.0);
    }
  } catch (const UsageError &) {
    throw;
  } catch (const std::exception &e) {
    std::cerr << "hexcmc: " << e.what() << '\n';
    return kSolverFail;
  }

  const ObjMesh mesh = to_obj_mesh(surface);
  std::ostringstream obj;
  write_obj(obj, mesh);
  if (!emit(a.out, obj.str())) {
    return kIoFail;
  }
  JsonValue side = JsonValue::object();
  side.set("kind", a.kind);
  side.set("objects", static_cast<long>(mesh.objects.size()));
  side.set("faces", static_cast<long>(mesh.face_count()));
  side.set("vertices", static_cast<long>(mesh.vertices.size()));
  side.set("E", surface.energy).set("V", surface.signed_volume).set("closure", norm(surface.closure_vector()));
  // Appended rather than replacing the extension so a params file next to
  // the mesh is never overwritten.
  const std::string sidecar = a.out + ".json";
  return emit_json(sidecar, side, kPass);
}

int cmd_verify_lemma(const LemmaArgs &a) {
  const AnnulusSpec spec = annulus_of(a.annulus);
  LemmaOptions opts;
  opts.trials = a.trials;
  opts.resolution = a.resolution;
  opts.exhaustive_resolution = a.exhaustive;
  opts.seed = a.seed;
  opts.epsilon = a.epsilon;
  const LemmaReport r = verify_lemma(spec, opts);
  JsonValue w = JsonValue::object();
  w.set("source", r.witness.source).set("ratio", r.witness.ratio).set("area", r.witness.area);
  w.set("perimeter", r.witness.perimeter).set("margin", r.witness.margin);
  JsonValue rects = JsonValue::array();
  for (const Rect &q : r.witness.rectangles) {
    rects.push(numbers({q.xa, q.xb, q.ya, q.yb}));
  }
  w.set("rectangles", std::move(rects));
  JsonValue o = JsonValue::object();
  o.set("target", "lemma").set("annulus", annulus_record(spec)).set("in_regime", r.in_regime);
  o.set("trials", r.trials).set("resolution", r.resolution).set("seed", static_cast<long long>(a.seed));
  o.set("annulus_ratio", r.annulus_ratio).set("min_margin", r.min_margin).set("witness", std::move(w));
  o.set("tight_margin", r.tight_margin).set("regions_checked", r.regions_checked).set("pass", r.pass);
  return emit_report(a.out, o, r.pass ? kPass : kVerifyFail);
}

int cmd_verify_variation(const VariationArgs &a) {
  const AnnulusSpec spec = annulus_of(a.annulus);
  if (a.grid < 1 || a.samples < 0) {
    throw UsageError("--grid must be positive and --samples non-negative");
  }
  const double at_one = first_variation_functional(FaceTestFunction::constant(spec, a.grid, 1.0));
  double min_i = std::numeric_limits<double>::infinity();
  double coarea_gap = 0.0;
  std::mt19937_64 seeds(a.seed);
  for (int k = 0; k < a.samples; ++k) {
    const FaceTestFunction v = FaceTestFunction::random(spec, a.grid, seeds());
    min_i = std::min(min_i, first_variation_functional(v));
    coarea_gap = std::max(coarea_gap, std::abs(total_variation(v) - level_set_perimeter_integral(v)));
  }
  const bool pass = at_one == 0.0 && (a.samples == 0 || min_i >= -1e-12);
  JsonValue o = JsonValue::object();
  o.set("target", "variation").set("annulus", annulus_record(spec)).set("grid", a.grid);
  o.set("samples", a.samples).set("seed", static_cast<long long>(a.seed));
  o.set("I_constant", at_one).set("min_I", min_i).set("coarea_max_gap", coarea_gap).set("pass", pass);
  return emit_report(a.out, o, pass ? kPass : kVerifyFail);
}

int cmd_verify_curvature(const CurvatureArgs &a) {
  RealizedSurface surface;
  std::string kind = a.kind;
  try {
    if (!a.surface.empty()) {
      const auto j = load_json(a.surface);
      if (!j) {
        return kIoFail;
      }
      kind = j->value("kind", std::string());
      if (kind == "assembly") {
        surface = build_assembly(assembly_from_json(*j)).surface;
      } else {
        const DelaunayParams p = delaunay_from_json(*j);
        surface = build_period(p, p.r == 0.0);
      }
    } else if (kind == "wulff") {
      surface = realize(wulff_prism_topology());
    } else {
      throw UsageError("verify curvature needs --surface or --kind wulff");
    }
  } catch (const UsageError &) {
    throw;
  } catch (const std::exception &e) {
    std::cerr << "hexcmc: " << e.what() << '\n';
    return kSolverFail;
  }
  const auto res = mean_curvature_residual(surface);
  JsonValue classes = JsonValue::object();
  for (const auto &[k, v] : res) {
    classes.set(k, v);
  }
  const double worst = max_abs(res);
  const bool pass = worst < a.tolerance;
  JsonValue o = JsonValue::object();
  o.set("target", "curvature").set("kind", kind).set("residuals", std::move(classes));
  o.set("max_abs", worst).set("tolerance", a.tolerance).set("closure", norm(surface.closure_vector()));
  o.set("pass", pass);
  return emit_report(a.out, o, pass ? kPass : kVerifyFail);
}

int cmd_sweep(const SweepArgs &a) {
  const DelaunayKind kind = chain_kind(a.kind);
  const std::vector<double> rs = parse_r_values(a.r);
  if (rs.empty()) {
    std::cerr << "hexcmc: empty r range\n";
    return kVerifyFail;
  }
  DelaunaySolveOptions opts;
  opts.r_max = a.r_max;
  const auto rows = sweep(kind, rs, opts);
  std::string csv = "r,Q,R,S,q,s,residual,period_length\n";
  bool all_ok = true;
  for (const SweepRow &row : rows) {
    csv += fmt(row.r);
    if (row.ok) {
      for (double v : {row.params.Q, row.params.R, row.params.S, row.params.q, row.params.s, row.residual_norm,
                       row.period_length}) {
        csv += ',' + fmt(v);
      }
    } else {
      all_ok = false;
      csv += ",nan,nan,nan,nan,nan,nan,nan";
      std::cerr << "hexcmc: r = " << fmt(row.r) << ": " << row.error << '\n';
    }
    csv += '\n';
  }
  if (!emit(a.out, csv)) {
    return kIoFail;
  }
  return all_ok ? kPass : kSolverFail;
}

int cmd_fit(const FitArgs &a) {
  if (a.m_u < 1 || (a.m_n && *a.m_n < 1)) {
    throw UsageError("period counts must be at least 1");
  }
  AssemblyOptions opts;
  opts.r1_max = a.r1_max;
  try {
    const ClosureFit fit = fit_closure(a.m_u, a.m_n, opts);
    JsonValue o = assembly_record(fit.solution);
    o.set("evaluations", fit.evaluations).set("status", "ok");
    return emit_json(a.out, o, kPass);
  } catch (const std::exception &e) {
    JsonValue o = JsonValue::object();
    o.set("kind", "assembly").set("m_u", a.m_u).set("m_n", a.m_n.value_or(2 * a.m_u + 1));
    o.set("status", "failed").set("error", e.what());
    std::cerr << "hexcmc: " << e.what() << '\n';
    return emit_json(a.out, o, kSolverFail);
  }
}

} // namespace hexcmc::cli
