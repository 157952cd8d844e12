#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "evcop/kernels.hpp"
#include "evcop/qp.hpp"
#include "evcop/simplex.hpp"
#include "evcop/spectral.hpp"

namespace evcop {

// Masses below this are set to zero after solving.
inline constexpr double kMassClampThreshold = 1e-10;

// Smallest N >= 4m whose midpoint rule has at least 4 nodes per atom of the
// resolution-m grid.
int default_subdivisions(int p, int m);

struct ProjectionOptions {
  // Minimum quadrature nodes per atom; 0 disables the check.
  double min_nodes_per_atom = 4.0;
  QpOptions qp;
  ExecMode mode = ExecMode::parallel;
};

struct ProjectionResult {
  SpectralMeasure measure;
  std::vector<double> masses;  // one per grid atom, canonical order
  DependenceSurface surface;
  // Squared L2 distance between the projected surface and the pilot.
  double objective = 0.0;
  // 1/2 h'Dh - d'h at the solution.
  double qp_objective = 0.0;
  KktResiduals kkt;
  int iterations = 0;
  int m = 0;
  int subdivisions = 0;
};

// Atom grid, quadrature rule, basis and Gram matrix for one (p, m, N). The
// Gram matrix does not depend on the pilot, so one context serves any number
// of projections; it is immutable and safe to share between threads.
class ProjectionContext {
 public:
  ProjectionContext(int m, std::shared_ptr<const QuadratureRule> rule, ProjectionOptions options = {});

  const AtomGrid& grid() const noexcept { return grid_; }
  const std::shared_ptr<const QuadratureRule>& rule() const noexcept { return rule_; }
  const kernels::BasisMatrix& basis() const noexcept { return basis_; }
  const Eigen::MatrixXd& gram() const noexcept { return gram_; }
  const ProjectionOptions& options() const noexcept { return options_; }

  QuadraticProgram assemble(const DependenceSurface& pilot, ExecMode mode) const;
  QuadraticProgram assemble(const DependenceSurface& pilot) const { return assemble(pilot, options_.mode); }
  // `mode` applies to the pilot inner products only.
  ProjectionResult project(const DependenceSurface& pilot, ExecMode mode) const;
  ProjectionResult project(const DependenceSurface& pilot) const { return project(pilot, options_.mode); }
  // Surface sum_v h_v g_v on the rule nodes.
  std::vector<double> surface_values(const Eigen::VectorXd& h) const;

 private:
  AtomGrid grid_;
  std::shared_ptr<const QuadratureRule> rule_;
  ProjectionOptions options_;
  kernels::BasisMatrix basis_;
  Eigen::MatrixXd gram_;
  Eigen::MatrixXd ceq_;
};

// Gram matrix and pilot inner products of the atom basis, both computed by
// the midpoint rule of `rule`, plus the moment equality system.
QuadraticProgram assemble(const DependenceSurface& pilot, const AtomGrid& grid,
                          const QuadratureRule& rule, ExecMode mode = ExecMode::parallel);

// Best L2 approximation of the pilot among Pickands functions whose spectral
// measure lives on the resolution-m atom grid.
ProjectionResult project(const DependenceSurface& pilot, int m, std::shared_ptr<const QuadratureRule> rule,
                         const ProjectionOptions& options = {});

}  // namespace evcop
