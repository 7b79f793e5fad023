#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hexcmc {

/// The rectangular annulus {|x| <= x1, |y| <= y1} minus {|x| < x0, |y| < y0}.
/// x0 = y0 = 0 means no hole.
struct AnnulusSpec {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;

  bool has_hole() const { return x0 > 0.0 && y0 > 0.0; }
  double area() const;
  /// Throws std::invalid_argument unless 0 <= x0 < x1 and 0 <= y0 < y1.
  void validate() const;
  /// 1 <= x1, y1 <= 100 and x0, y0 <= epsilon.
  bool lemma_regime(double epsilon = 0.05) const;
};

struct Rect {
  double xa = 0.0;
  double xb = 0.0;
  double ya = 0.0;
  double yb = 0.0;
};

/// A union of grid cells on a rectilinear (not necessarily uniform) grid.
class GridRegion {
public:
  /// Lines must be strictly increasing.
  GridRegion(std::vector<double> xs, std::vector<double> ys);

  /// Union of `rects` intersected with the annulus, on the coarsest grid
  /// carrying every edge exactly.
  static GridRegion from_rectangles(const AnnulusSpec &a, std::span<const Rect> rects);
  /// The annulus itself on `n` uniform cells per axis plus the hole lines.
  static GridRegion annulus(const AnnulusSpec &a, int n = 1);

  int nx() const { return static_cast<int>(xs_.size()) - 1; }
  int ny() const { return static_cast<int>(ys_.size()) - 1; }
  const std::vector<double> &xs() const { return xs_; }
  const std::vector<double> &ys() const { return ys_; }
  bool occupied(int i, int j) const;
  void set(int i, int j, bool on);

  double area() const;
  /// Boundary length weighted by the l1 norm of the unit normal, holes
  /// included. Rectilinear edges have weight 1.
  double perimeter() const;
  bool empty() const;

private:
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<std::uint8_t> cells_; ///< row-major, j * nx + i
};

double psi1_perimeter(const GridRegion &region);

/// Closed polygonal loops (outer boundaries and holes). Throws
/// std::invalid_argument on an edge that is not axis-aligned.
using PolygonLoop = std::vector<std::array<double, 2>>;
double psi1_perimeter(std::span<const PolygonLoop> loops);

/// Boundary-to-area ratio of the annulus. Throws on zero area.
double annulus_ratio(const AnnulusSpec &a);

struct ShapeMeasure {
  double perimeter = 0.0;
  double area = 0.0;
  double ratio() const { return perimeter / area; }
};

/// Closed forms for the four extremal competitors: (i) a square of side
/// x1 - x0, (ii) an (x1 - x0) by 2 y1 rectangle, (iii) an L with arms
/// 2 x1 by (y1 - y0) and 2 y1 by (x1 - x0), (iv) a 2 x1 by 2 y1 U with a
/// 2 x0 by (2 y1 - y0) notch.
std::array<ShapeMeasure, 4> extremal_shapes(const AnnulusSpec &a);

/// Ratios of extremal_shapes. Throws on a zero-area shape.
std::array<double, 4> extremal_ratios(const AnnulusSpec &a);

/// Member t in (0, 1] of extremal family `which` (0..3), as rectangles
/// inside the annulus. t = 1 is the closed-form shape.
std::vector<Rect> extremal_family(int which, const AnnulusSpec &a, double t);

struct LemmaOptions {
  int trials = 10000;
  int resolution = 64;            ///< snapping grid for random unions
  int exhaustive_resolution = 12; ///< grid for all-rectangles enumeration
  int family_samples = 200;
  std::uint64_t seed = 1;
  double epsilon = 0.05;
  double pass_margin = -1e-12;
};

struct LemmaWitness {
  std::string source; ///< "family i".."family iv", "random", "rectangle"
  std::vector<Rect> rectangles;
  double area = 0.0;
  double perimeter = 0.0;
  double ratio = 0.0;
  double margin = 0.0;
};

struct LemmaReport {
  AnnulusSpec annulus;
  bool in_regime = false;
  int trials = 0;
  int resolution = 0;
  double annulus_ratio = 0.0;
  /// Smallest ratio - annulus_ratio over subregions other than the annulus.
  double min_margin = 0.0;
  LemmaWitness witness;
  double tight_margin = 0.0; ///< margin of the annulus itself
  long regions_checked = 0;
  bool pass = false;
};

/// Brute-force check of ratio(sub) >= ratio(annulus) over the extremal
/// families, seeded random rectangle unions, and every rectangle of a
/// coarse grid. Failures are report content.
LemmaReport verify_lemma(const AnnulusSpec &a, const LemmaOptions &options = {});

/// Piecewise-constant test function on the cells of GridRegion::annulus(a, n).
struct FaceTestFunction {
  AnnulusSpec annulus;
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> values; ///< row-major; cells in the hole are ignored

  static FaceTestFunction constant(const AnnulusSpec &a, int n, double c);
  /// Values uniform in (0, 1], seeded.
  static FaceTestFunction random(const AnnulusSpec &a, int n, std::uint64_t seed);
  /// Throws std::invalid_argument on a value outside (0, 1].
  void validate() const;
};

/// Integral over t in (0, 1] of perimeter(U_t) - rho area(U_t) with
/// U_t = {v >= t} and rho the annulus ratio, summed exactly over the
/// distinct values of v. A level set equal to the annulus contributes 0.
double first_variation_functional(const FaceTestFunction &v);

/// Sum over cell interfaces of |jump| times length, with v = 0 outside.
double total_variation(const FaceTestFunction &v);
/// Integral over t in (0, 1] of perimeter({v >= t}).
double level_set_perimeter_integral(const FaceTestFunction &v);

} // namespace hexcmc
