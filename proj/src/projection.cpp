#include "evcop/projection.hpp"

#include <cmath>
#include <string>

#include "evcop/error.hpp"

namespace evcop {

namespace {

Eigen::MatrixXd moment_matrix(const AtomGrid& grid) {
  Eigen::MatrixXd c(grid.p(), static_cast<Eigen::Index>(grid.size()));
  for (std::size_t a = 0; a < grid.size(); ++a)
    for (int j = 0; j < grid.p(); ++j) c(j, static_cast<Eigen::Index>(a)) = grid[a][static_cast<std::size_t>(j)];
  return c;
}

void check_pilot(const DependenceSurface& pilot, const QuadratureRule& rule) {
  if (!pilot.rule->same_layout(rule))
    throw InvalidArgument("pilot surface is not tabulated on the projection quadrature rule");
}

}  // namespace

int default_subdivisions(int p, int m) {
  const std::size_t atoms = binomial(m + p - 1, p - 1);
  int n = 4 * m;
  // Midpoint-rule node count for N subdivisions is binomial(N + p - 2, p - 1).
  while (binomial(n + p - 2, p - 1) < 4 * atoms) ++n;
  return n;
}

ProjectionContext::ProjectionContext(int m, std::shared_ptr<const QuadratureRule> rule, ProjectionOptions options)
    : grid_(rule ? rule->p : 0, m), rule_(std::move(rule)), options_(options) {
  const double per_atom = static_cast<double>(rule_->size()) / static_cast<double>(grid_.size());
  if (options_.min_nodes_per_atom > 0.0 && per_atom < options_.min_nodes_per_atom)
    throw InvalidArgument("quadrature rule has " + std::to_string(rule_->size()) + " nodes for " +
                          std::to_string(grid_.size()) + " atoms; increase N");
  basis_ = kernels::basis_matrix(grid_, *rule_, options_.mode);
  gram_ = kernels::gram_matrix(basis_, rule_->weights, options_.mode);
  ceq_ = moment_matrix(grid_);
}

QuadraticProgram ProjectionContext::assemble(const DependenceSurface& pilot, ExecMode mode) const {
  check_pilot(pilot, *rule_);
  QuadraticProgram qp;
  qp.D = gram_;
  qp.d = kernels::basis_inner(basis_, rule_->weights, pilot.values, mode);
  qp.Ceq = ceq_;
  qp.ceq = Eigen::VectorXd::Ones(grid_.p());
  return qp;
}

std::vector<double> ProjectionContext::surface_values(const Eigen::VectorXd& h) const {
  const Eigen::VectorXd s = basis_ * h;
  return {s.data(), s.data() + s.size()};
}

ProjectionResult ProjectionContext::project(const DependenceSurface& pilot, ExecMode mode) const {
  const QuadraticProgram qp = assemble(pilot, mode);
  QpSolution sol = solve_qp(qp, options_.qp);
  for (Eigen::Index i = 0; i < sol.h.size(); ++i)
    if (sol.h(i) < kMassClampThreshold) sol.h(i) = 0.0;

  std::vector<double> masses(sol.h.data(), sol.h.data() + sol.h.size());
  auto values = surface_values(sol.h);
  double distance = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double e = values[k] - pilot.values[k];
    distance += rule_->weights[k] * (e * e);
  }
  return ProjectionResult{SpectralMeasure::on_grid(grid_, masses),
                          std::move(masses),
                          DependenceSurface(rule_, std::move(values)),
                          distance,
                          sol.objective,
                          sol.kkt,
                          sol.iterations,
                          grid_.m(),
                          rule_->subdivisions};
}

QuadraticProgram assemble(const DependenceSurface& pilot, const AtomGrid& grid, const QuadratureRule& rule,
                          ExecMode mode) {
  check_pilot(pilot, rule);
  const auto basis = kernels::basis_matrix(grid, rule, mode);
  QuadraticProgram qp;
  qp.D = kernels::gram_matrix(basis, rule.weights, mode);
  qp.d = kernels::basis_inner(basis, rule.weights, pilot.values, mode);
  qp.Ceq = moment_matrix(grid);
  qp.ceq = Eigen::VectorXd::Ones(grid.p());
  return qp;
}

ProjectionResult project(const DependenceSurface& pilot, int m, std::shared_ptr<const QuadratureRule> rule,
                         const ProjectionOptions& options) {
  if (!rule) throw InvalidArgument("project: missing quadrature rule");
  return ProjectionContext(m, std::move(rule), options).project(pilot);
}

}  // namespace evcop
