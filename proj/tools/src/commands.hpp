#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace hexcmc::cli {

enum ExitCode : int { kPass = 0, kVerifyFail = 1, kSolverFail = 2, kIoFail = 3, kUsage = 64 };

/// Bad flag combination detected after parsing.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SolveArgs {
  std::string kind;
  double r = 0.0;
  double tolerance = 1e-9;
  double r_max = 0.2;
  std::string out;
};

struct MeshArgs {
  std::string kind;
  std::optional<double> r;
  std::string params;
  std::string out;
};

struct AnnulusArgs {
  double x1 = 1.0;
  double y1 = 1.0;
  double hole = 0.05;
  std::optional<double> x0;
  std::optional<double> y0;
};

struct LemmaArgs {
  AnnulusArgs annulus;
  int trials = 10000;
  int resolution = 64;
  int exhaustive = 12;
  std::uint64_t seed = 1;
  double epsilon = 0.05;
  std::string out;
};

struct VariationArgs {
  AnnulusArgs annulus;
  int grid = 64;
  int samples = 1000;
  std::uint64_t seed = 1;
  std::string out;
};

struct CurvatureArgs {
  std::string surface;
  std::string kind;
  double tolerance = 1e-9;
  std::string out;
};

struct SweepArgs {
  std::string kind;
  std::string r;
  double r_max = 0.2;
  std::string out;
};

struct FitArgs {
  int m_u = 3;
  std::optional<int> m_n;
  double r1_max = 0.1;
  std::string out;
};

int cmd_solve(const SolveArgs &a);
int cmd_mesh(const MeshArgs &a);
int cmd_verify_lemma(const LemmaArgs &a);
int cmd_verify_variation(const VariationArgs &a);
int cmd_verify_curvature(const CurvatureArgs &a);
int cmd_sweep(const SweepArgs &a);
int cmd_fit(const FitArgs &a);

} // namespace hexcmc::cli
