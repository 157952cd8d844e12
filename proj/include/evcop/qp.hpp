#pragma once

#include <Eigen/Dense>

#include "evcop/error.hpp"

namespace evcop {

// minimize 1/2 h'Dh - d'h  subject to  Ceq h = ceq,  h >= 0
struct QuadraticProgram {
  Eigen::MatrixXd D;
  Eigen::VectorXd d;
  Eigen::MatrixXd Ceq;
  Eigen::VectorXd ceq;

  Eigen::Index size() const noexcept { return d.size(); }
  double objective(const Eigen::VectorXd& h) const;
  void check() const;
};

struct KktResiduals {
  double stationarity = 0.0;    // |grad L| on positive coordinates, negative bound multipliers elsewhere
  double primal = 0.0;          // |Ceq h - ceq| and negativity of h
  double complementarity = 0.0; // max |h_i z_i|
  double max() const;
};

struct QpSolution {
  Eigen::VectorXd h;
  Eigen::VectorXd equality_multipliers;
  Eigen::VectorXd bound_multipliers;
  double objective = 0.0;
  KktResiduals kkt;
  int iterations = 0;
};

struct QpOptions {
  int max_iterations = 20000;
  // Ridge eps * I with eps = ridge_scale * trace(D) / K is added before solving.
  double ridge_scale = 1e-10;
};

class QpInfeasible : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Iteration cap hit; carries the last iterate.
class QpMaxIterations : public NumericalError {
 public:
  explicit QpMaxIterations(QpSolution best)
      : NumericalError("QP solver hit the iteration limit"), best_(std::move(best)) {}
  const QpSolution& best() const noexcept { return best_; }

 private:
  QpSolution best_;
};

// Primal active-set method. The working set holds nonnegativity bounds only;
// the equality constraints are eliminated through a null-space basis of the
// free columns of Ceq at every iteration.
//
// The start point puts mass ceq_j / s on a column equal to s * e_j (s > 0)
// for each row j. For spectral-measure programs these are the simplex
// vertices, which every atom grid contains, so a start always exists; for
// other programs without such columns QpInfeasible is thrown.
QpSolution solve_qp(const QuadraticProgram& qp, const QpOptions& options = {});

KktResiduals kkt_residuals(const QuadraticProgram& qp, const Eigen::VectorXd& h,
                           Eigen::VectorXd* equality_multipliers = nullptr,
                           Eigen::VectorXd* bound_multipliers = nullptr);

}  // namespace evcop
