#include "hexcmc/isoperimetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace hexcmc {

namespace {

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<double> uniform_lines(double lo, double hi, int n) {
  std::vector<double> out(n + 1);
  for (int i = 0; i <= n; ++i) {
    out[i] = lo + (hi - lo) * i / n;
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

bool in_annulus(const AnnulusSpec &a, double x, double y) {
  if (std::abs(x) > a.x1 || std::abs(y) > a.y1) {
    return false;
  }
  return !(a.has_hole() && std::abs(x) < a.x0 && std::abs(y) < a.y0);
}

std::vector<double> annulus_lines(double lo_hole, double hi) {
  std::vector<double> v = {-hi, hi};
  if (lo_hole > 0.0) {
    v.push_back(-lo_hole);
    v.push_back(lo_hole);
  }
  return v;
}

double clamp_to(double v, double lim) { return std::clamp(v, -lim, lim); }

} // namespace

double AnnulusSpec::area() const {
  const double hole = has_hole() ? 4.0 * x0 * y0 : 0.0;
  return 4.0 * x1 * y1 - hole;
}

void AnnulusSpec::validate() const {
  for (double v : {x0, y0, x1, y1}) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("annulus dimensions must be finite");
    }
  }
  if (!(0.0 <= x0 && x0 < x1)) {
    throw std::invalid_argument("violated 0 <= x0 < x1");
  }
  if (!(0.0 <= y0 && y0 < y1)) {
    throw std::invalid_argument("violated 0 <= y0 < y1");
  }
}

bool AnnulusSpec::lemma_regime(double epsilon) const {
  return 1.0 <= x1 && x1 <= 100.0 && 1.0 <= y1 && y1 <= 100.0 && x0 <= epsilon && y0 <= epsilon;
}

GridRegion::GridRegion(std::vector<double> xs, std::vector<double> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
  auto increasing = [](const std::vector<double> &v) {
    return v.size() >= 2 && std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
  };
  if (!increasing(xs_) || !increasing(ys_)) {
    throw std::invalid_argument("grid lines must be strictly increasing");
  }
  cells_.assign(static_cast<std::size_t>(nx()) * ny(), 0);
}

GridRegion GridRegion::from_rectangles(const AnnulusSpec &a, std::span<const Rect> rects) {
  std::vector<double> xs = annulus_lines(a.has_hole() ? a.x0 : 0.0, a.x1);
  std::vector<double> ys = annulus_lines(a.has_hole() ? a.y0 : 0.0, a.y1);
  for (const Rect &r : rects) {
    xs.push_back(clamp_to(r.xa, a.x1));
    xs.push_back(clamp_to(r.xb, a.x1));
    ys.push_back(clamp_to(r.ya, a.y1));
    ys.push_back(clamp_to(r.yb, a.y1));
  }
  GridRegion g(sorted_unique(std::move(xs)), sorted_unique(std::move(ys)));
  for (int j = 0; j < g.ny(); ++j) {
    const double cy = 0.5 * (g.ys_[j] + g.ys_[j + 1]);
    for (int i = 0; i < g.nx(); ++i) {
      const double cx = 0.5 * (g.xs_[i] + g.xs_[i + 1]);
      if (!in_annulus(a, cx, cy)) {
        continue;
      }
      for (const Rect &r : rects) {
        if (r.xa < cx && cx < r.xb && r.ya < cy && cy < r.yb) {
          g.set(i, j, true);
          break;
        }
      }
    }
  }
  return g;
}

GridRegion GridRegion::annulus(const AnnulusSpec &a, int n) {
  a.validate();
  if (n < 1) {
    throw std::invalid_argument("grid resolution must be positive");
  }
  std::vector<double> xs = uniform_lines(-a.x1, a.x1, n);
  std::vector<double> ys = uniform_lines(-a.y1, a.y1, n);
  if (a.has_hole()) {
    xs.insert(xs.end(), {-a.x0, a.x0});
    ys.insert(ys.end(), {-a.y0, a.y0});
  }
  GridRegion g(sorted_unique(std::move(xs)), sorted_unique(std::move(ys)));
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      g.set(i, j, in_annulus(a, 0.5 * (g.xs_[i] + g.xs_[i + 1]), 0.5 * (g.ys_[j] + g.ys_[j + 1])));
    }
  }
  return g;
}

bool GridRegion::occupied(int i, int j) const {
  if (i < 0 || j < 0 || i >= nx() || j >= ny()) {
    return false;
  }
  return cells_[static_cast<std::size_t>(j) * nx() + i] != 0;
}

void GridRegion::set(int i, int j, bool on) { cells_.at(static_cast<std::size_t>(j) * nx() + i) = on ? 1 : 0; }

double GridRegion::area() const {
  double a = 0.0;
  for (int j = 0; j < ny(); ++j) {
    for (int i = 0; i < nx(); ++i) {
      if (occupied(i, j)) {
        a += (xs_[i + 1] - xs_[i]) * (ys_[j + 1] - ys_[j]);
      }
    }
  }
  return a;
}

double GridRegion::perimeter() const {
  double p = 0.0;
  for (int j = 0; j < ny(); ++j) {
    const double dy = ys_[j + 1] - ys_[j];
    for (int i = 0; i < nx(); ++i) {
      if (!occupied(i, j)) {
        continue;
      }
      const double dx = xs_[i + 1] - xs_[i];
      p += occupied(i - 1, j) ? 0.0 : dy;
      p += occupied(i + 1, j) ? 0.0 : dy;
      p += occupied(i, j - 1) ? 0.0 : dx;
      p += occupied(i, j + 1) ? 0.0 : dx;
    }
  }
  return p;
}

bool GridRegion::empty() const {
  return std::none_of(cells_.begin(), cells_.end(), [](std::uint8_t c) { return c != 0; });
}

double psi1_perimeter(const GridRegion &region) { return region.perimeter(); }

double psi1_perimeter(std::span<const PolygonLoop> loops) {
  double p = 0.0;
  for (const auto &loop : loops) {
    for (std::size_t k = 0; k < loop.size(); ++k) {
      const auto &a = loop[k];
      const auto &b = loop[(k + 1) % loop.size()];
      const double dx = b[0] - a[0];
      const double dy = b[1] - a[1];
      if (dx != 0.0 && dy != 0.0) {
        throw std::invalid_argument("polygon edge is not axis-aligned");
      }
      // Unit normal of an axis-aligned edge has l1 norm 1.
      p += std::abs(dx) + std::abs(dy);
    }
  }
  return p;
}

double annulus_ratio(const AnnulusSpec &a) {
  a.validate();
  const double area = 4.0 * a.x1 * a.y1 - (a.has_hole() ? 4.0 * a.x0 * a.y0 : 0.0);
  if (!(area > 0.0)) {
    throw std::invalid_argument("annulus has zero area");
  }
  const double hole = a.has_hole() ? 4.0 * (a.x0 + a.y0) : 0.0;
  return (4.0 * (a.x1 + a.y1) + hole) / area;
}

std::array<ShapeMeasure, 4> extremal_shapes(const AnnulusSpec &a) {
  a.validate();
  const double w = a.x1 - a.x0;
  const double h = a.y1 - a.y0;
  std::array<ShapeMeasure, 4> s;
  s[0] = {4.0 * w, w * w};
  s[1] = {2.0 * (w + 2.0 * a.y1), 2.0 * w * a.y1};
  s[2] = {4.0 * (a.x1 + a.y1), 2.0 * a.x1 * h + 2.0 * a.y1 * w - w * h};
  s[3] = {4.0 * (a.x1 + a.y1) + 2.0 * (2.0 * a.y1 - a.y0), 4.0 * a.x1 * a.y1 - 2.0 * a.x0 * (2.0 * a.y1 - a.y0)};
  return s;
}

std::array<double, 4> extremal_ratios(const AnnulusSpec &a) {
  const auto shapes = extremal_shapes(a);
  std::array<double, 4> out{};
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    if (!(shapes[k].area > 0.0)) {
      throw std::invalid_argument("extremal shape has zero area");
    }
    out[k] = shapes[k].ratio();
  }
  return out;
}

std::vector<Rect> extremal_family(int which, const AnnulusSpec &a, double t) {
  a.validate();
  if (!(t > 0.0 && t <= 1.0)) {
    throw std::invalid_argument("family parameter must lie in (0, 1]");
  }
  const double w = a.x1 - a.x0;
  const double h = a.y1 - a.y0;
  switch (which) {
  case 0: {
    const double side = t * std::min(w, 2.0 * a.y1);
    return {{a.x0, a.x0 + side, -a.y1, -a.y1 + side}};
  }
  case 1:
    return {{a.x0, a.x1, -a.y1, -a.y1 + t * 2.0 * a.y1}};
  case 2:
    return {{-a.x1, a.x1, -a.y1, -a.y1 + t * h}, {a.x1 - t * w, a.x1, -a.y1, a.y1}};
  case 3: {
    // U of height 2 y1 t whose base below the notch is y0 thick.
    const double top = -a.y1 + 2.0 * a.y1 * t;
    const double base = std::min(top, -a.y1 + a.y0);
    return {{-a.x1, -a.x0, -a.y1, top}, {a.x0, a.x1, -a.y1, top}, {-a.x0, a.x0, -a.y1, base}};
  }
  default:
    throw std::invalid_argument("extremal family index must be 0..3");
  }
}

namespace {

struct Tracker {
  const AnnulusSpec &annulus;
  double rho;
  double omega_area;
  LemmaReport &report;

  void consider(const char *source, std::vector<Rect> rects) {
    const GridRegion g = GridRegion::from_rectangles(annulus, rects);
    if (g.empty()) {
      return;
    }
    ++report.regions_checked;
    const double area = g.area();
    const double perim = g.perimeter();
    // A subregion with the full area is the annulus itself.
    if (std::abs(area - omega_area) <= 1e-12 * omega_area) {
      report.tight_margin = 0.0;
      return;
    }
    const double margin = perim / area - rho;
    if (margin < report.min_margin) {
      report.min_margin = margin;
      report.witness = {source, std::move(rects), area, perim, perim / area, margin};
    }
  }
};

} // namespace

LemmaReport verify_lemma(const AnnulusSpec &a, const LemmaOptions &options) {
  a.validate();
  if (options.trials < 0 || options.resolution < 1 || options.exhaustive_resolution < 1 ||
      options.family_samples < 1) {
    throw std::invalid_argument("verify_lemma options must be positive");
  }
  LemmaReport report;
  report.annulus = a;
  report.in_regime = a.lemma_regime(options.epsilon);
  report.trials = options.trials;
  report.resolution = options.resolution;
  report.annulus_ratio = annulus_ratio(a);
  report.min_margin = std::numeric_limits<double>::infinity();
  Tracker tr{a, report.annulus_ratio, a.area(), report};

  static constexpr std::array<const char *, 4> kFamilies = {"family i", "family ii", "family iii", "family iv"};
  for (int f = 0; f < 4; ++f) {
    for (int k = 1; k <= options.family_samples; ++k) {
      tr.consider(kFamilies[f], extremal_family(f, a, static_cast<double>(k) / options.family_samples));
    }
  }

  std::mt19937_64 rng(options.seed);
  const std::vector<double> gx = uniform_lines(-a.x1, a.x1, options.resolution);
  const std::vector<double> gy = uniform_lines(-a.y1, a.y1, options.resolution);
  std::uniform_int_distribution<int> count(1, 5);
  std::uniform_int_distribution<int> line(0, options.resolution);
  for (int trial = 0; trial < options.trials;) {
    std::vector<Rect> rects;
    const int n = count(rng);
    for (int r = 0; r < n; ++r) {
      int i0 = line(rng);
      int i1 = line(rng);
      int j0 = line(rng);
      int j1 = line(rng);
      if (i0 == i1 || j0 == j1) {
        continue;
      }
      rects.push_back({gx[std::min(i0, i1)], gx[std::max(i0, i1)], gy[std::min(j0, j1)], gy[std::max(j0, j1)]});
    }
    if (rects.empty() || GridRegion::from_rectangles(a, rects).empty()) {
      continue;
    }
    tr.consider("random", std::move(rects));
    ++trial;
  }

  std::vector<double> ex = uniform_lines(-a.x1, a.x1, options.exhaustive_resolution);
  std::vector<double> ey = uniform_lines(-a.y1, a.y1, options.exhaustive_resolution);
  if (a.has_hole()) {
    ex.insert(ex.end(), {-a.x0, a.x0});
    ey.insert(ey.end(), {-a.y0, a.y0});
  }
  ex = sorted_unique(std::move(ex));
  ey = sorted_unique(std::move(ey));
  for (std::size_t i0 = 0; i0 < ex.size(); ++i0) {
    for (std::size_t i1 = i0 + 1; i1 < ex.size(); ++i1) {
      for (std::size_t j0 = 0; j0 < ey.size(); ++j0) {
        for (std::size_t j1 = j0 + 1; j1 < ey.size(); ++j1) {
          tr.consider("rectangle", {{ex[i0], ex[i1], ey[j0], ey[j1]}});
        }
      }
    }
  }

  report.pass = report.min_margin >= options.pass_margin;
  return report;
}

FaceTestFunction FaceTestFunction::constant(const AnnulusSpec &a, int n, double c) {
  const GridRegion g = GridRegion::annulus(a, n);
  FaceTestFunction v{a, g.xs(), g.ys(), std::vector<double>(static_cast<std::size_t>(g.nx()) * g.ny(), c)};
  v.validate();
  return v;
}

FaceTestFunction FaceTestFunction::random(const AnnulusSpec &a, int n, std::uint64_t seed) {
  FaceTestFunction v = constant(a, n, 1.0);
  std::mt19937_64 rng(seed);
  // (0, 1]: reflect [0, 1).
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double &x : v.values) {
    x = 1.0 - u(rng);
  }
  return v;
}

void FaceTestFunction::validate() const {
  annulus.validate();
  const GridRegion g(xs, ys);
  if (values.size() != static_cast<std::size_t>(g.nx()) * g.ny()) {
    throw std::invalid_argument("test function size does not match its grid");
  }
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (!in_annulus(annulus, 0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]))) {
        continue;
      }
      const double x = values[static_cast<std::size_t>(j) * g.nx() + i];
      if (!(x > 0.0 && x <= 1.0)) {
        throw std::invalid_argument("test function values must lie in (0, 1]");
      }
    }
  }
}

namespace {

// Area and perimeter of {v >= level} for each distinct level, built by
// adding cells in decreasing order of v.
struct LevelStat {
  double level = 0.0;
  double area = 0.0;
  double perimeter = 0.0;
  bool full = false; ///< the level set is the whole annulus
};

GridRegion annulus_domain(const FaceTestFunction &v) {
  GridRegion dom(v.xs, v.ys);
  for (int j = 0; j < dom.ny(); ++j) {
    for (int i = 0; i < dom.nx(); ++i) {
      dom.set(i, j, in_annulus(v.annulus, 0.5 * (v.xs[i] + v.xs[i + 1]), 0.5 * (v.ys[j] + v.ys[j + 1])));
    }
  }
  return dom;
}

std::vector<LevelStat> level_stats(const FaceTestFunction &v) {
  v.validate();
  const GridRegion dom = annulus_domain(v);
  const int nx = dom.nx();
  std::vector<int> cells;
  for (int j = 0; j < dom.ny(); ++j) {
    for (int i = 0; i < nx; ++i) {
      if (dom.occupied(i, j)) {
        cells.push_back(j * nx + i);
      }
    }
  }
  std::stable_sort(cells.begin(), cells.end(), [&](int a, int b) { return v.values[a] > v.values[b]; });

  GridRegion set(v.xs, v.ys);
  std::vector<LevelStat> out;
  double area = 0.0;
  double perim = 0.0;
  std::size_t k = 0;
  while (k < cells.size()) {
    const double level = v.values[cells[k]];
    for (; k < cells.size() && v.values[cells[k]] == level; ++k) {
      const int i = cells[k] % nx;
      const int j = cells[k] / nx;
      const double dx = v.xs[i + 1] - v.xs[i];
      const double dy = v.ys[j + 1] - v.ys[j];
      area += dx * dy;
      // Each side flips between boundary and interior.
      perim += set.occupied(i - 1, j) ? -dy : dy;
      perim += set.occupied(i + 1, j) ? -dy : dy;
      perim += set.occupied(i, j - 1) ? -dx : dx;
      perim += set.occupied(i, j + 1) ? -dx : dx;
      set.set(i, j, true);
    }
    out.push_back({level, area, perim, k == cells.size()});
  }
  std::reverse(out.begin(), out.end());
  return out;
}

} // namespace

double first_variation_functional(const FaceTestFunction &v) {
  const double rho = annulus_ratio(v.annulus);
  double total = 0.0;
  double prev = 0.0;
  for (const LevelStat &ls : level_stats(v)) {
    const double dt = ls.level - prev;
    prev = ls.level;
    if (ls.full) {
      continue; // the annulus is in equilibrium by construction
    }
    total += dt * ls.area * (ls.perimeter / ls.area - rho);
  }
  return total;
}

double total_variation(const FaceTestFunction &v) {
  v.validate();
  const GridRegion dom = annulus_domain(v);
  auto value = [&](int i, int j) {
    return dom.occupied(i, j) ? v.values[static_cast<std::size_t>(j) * dom.nx() + i] : 0.0;
  };
  double tv = 0.0;
  // Vertical grid line I separates cells I-1 and I; off-grid cells are 0.
  for (int j = 0; j < dom.ny(); ++j) {
    for (int I = 0; I <= dom.nx(); ++I) {
      tv += std::abs(value(I - 1, j) - value(I, j)) * (v.ys[j + 1] - v.ys[j]);
    }
  }
  for (int i = 0; i < dom.nx(); ++i) {
    for (int J = 0; J <= dom.ny(); ++J) {
      tv += std::abs(value(i, J - 1) - value(i, J)) * (v.xs[i + 1] - v.xs[i]);
    }
  }
  return tv;
}

double level_set_perimeter_integral(const FaceTestFunction &v) {
  double total = 0.0;
  double prev = 0.0;
  for (const LevelStat &ls : level_stats(v)) {
    total += (ls.level - prev) * ls.perimeter;
    prev = ls.level;
  }
  return total;
}

} // namespace hexcmc
