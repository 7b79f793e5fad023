#include "hexcmc/newton.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

namespace hexcmc {

namespace {

double l2(const std::vector<double> &v) {
  double s = 0.0;
  for (double x : v) {
    s += x * x;
  }
  return std::sqrt(s);
}

std::string format_iterate(const std::string &why, const NewtonResult &r) {
  std::ostringstream msg;
  msg.precision(17);
  msg << why << " after " << r.iterations << " iteration(s); residual " << r.residual_norm << "; x = [";
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    msg << (i ? ", " : "") << r.x[i];
  }
  msg << "]";
  return msg.str();
}

} // namespace

double max_norm(const std::vector<double> &v) {
  double m = 0.0;
  for (double x : v) {
    m = std::max(m, std::abs(x));
  }
  return m;
}

NewtonResult newton_solve(const ResidualFunction &f, std::vector<double> x0, const NewtonOptions &options) {
  NewtonResult state;
  state.x = std::move(x0);
  const auto n = static_cast<Eigen::Index>(state.x.size());
  auto first = f(state.x);
  if (!first) {
    throw SolverError(format_iterate("residual undefined at initial guess", state), state);
  }
  if (static_cast<Eigen::Index>(first->size()) != n) {
    throw std::invalid_argument("newton_solve: system must be square");
  }
  state.residual = std::move(*first);
  state.residual_norm = max_norm(state.residual);
  state.history.push_back(state.residual_norm);

  while (state.residual_norm >= options.tolerance) {
    if (state.iterations >= options.max_iterations) {
      throw SolverError(format_iterate("Newton did not converge", state), state);
    }

    Eigen::MatrixXd jac(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      std::vector<double> xp = state.x;
      std::vector<double> xm = state.x;
      xp[j] += options.fd_step;
      xm[j] -= options.fd_step;
      auto fp = f(xp);
      auto fm = f(xm);
      double width = 2.0 * options.fd_step;
      if (!fp) {
        fp = state.residual;
        width = options.fd_step;
      } else if (!fm) {
        fm = state.residual;
        width = options.fd_step;
      }
      if (!fp || !fm) {
        throw SolverError(format_iterate("Jacobian stencil leaves the domain", state), state);
      }
      for (Eigen::Index i = 0; i < n; ++i) {
        jac(i, j) = ((*fp)[i] - (*fm)[i]) / width;
      }
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    if (lu.rank() < n || lu.rcond() < 1e-14) {
      throw SolverError(format_iterate("singular Jacobian", state), state);
    }
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      rhs(i) = -state.residual[i];
    }
    const Eigen::VectorXd step = lu.solve(rhs);

    const double current = l2(state.residual);
    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h <= options.max_halvings; ++h, lambda *= 0.5) {
      std::vector<double> trial = state.x;
      for (Eigen::Index i = 0; i < n; ++i) {
        trial[i] += lambda * step(i);
      }
      auto r = f(trial);
      if (r && l2(*r) < current) {
        state.x = std::move(trial);
        state.residual = std::move(*r);
        accepted = true;
        break;
      }
    }
    ++state.iterations;
    if (!accepted) {
      throw SolverError(format_iterate("line search step underflow", state), state);
    }
    state.residual_norm = max_norm(state.residual);
    state.history.push_back(state.residual_norm);
  }
  return state;
}

} // namespace hexcmc
