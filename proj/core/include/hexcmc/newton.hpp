#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hexcmc {

struct NewtonOptions {
  double tolerance = 1e-9; ///< on the max-norm of the residual
  int max_iterations = 50;
  double fd_step = 1e-7; ///< central-difference Jacobian step
  int max_halvings = 30;
};

struct NewtonResult {
  std::vector<double> x;
  std::vector<double> residual;
  double residual_norm = 0.0; ///< max-norm
  int iterations = 0;
  /// Max-norm of the residual after each iteration, starting with the guess.
  std::vector<double> history;
};

/// Residual of a square system. Returns nullopt when x lies outside the
/// domain where the residual is defined; the line search treats that as a
/// rejected step.
using ResidualFunction = std::function<std::optional<std::vector<double>>(const std::vector<double> &)>;

class SolverError : public std::runtime_error {
public:
  SolverError(const std::string &what, NewtonResult last) : std::runtime_error(what), last_(std::move(last)) {}
  const NewtonResult &last_iterate() const { return last_; }

private:
  NewtonResult last_;
};

double max_norm(const std::vector<double> &v);

/// Damped Newton with a finite-difference Jacobian and step halving on the
/// Euclidean residual norm. Throws SolverError on divergence, step
/// underflow, a singular Jacobian or an undefined starting point.
NewtonResult newton_solve(const ResidualFunction &f, std::vector<double> x0, const NewtonOptions &options = {});

} // namespace hexcmc
