#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "evcop/empirical.hpp"
#include "evcop/simplex.hpp"

namespace evcop {

// Every hot loop exists twice: an OpenMP version and a plain serial
// reference. Both visit the same elements in the same per-element order, so
// their results agree bitwise.
enum class ExecMode { serial, parallel };

namespace kernels {

// Per-node rank statistics of a pseudo-sample.
//   mean_xi[k]     = (1/n) sum_i xi_i(node_k)
//   mean_log_xi[k] = (1/n) sum_i log xi_i(node_k)
struct NodeStatistics {
  std::vector<double> mean_xi;
  std::vector<double> mean_log_xi;
};

// Basis functions g_v(w) = max_j w_j v_j on the rule nodes; column a holds
// atom a of the grid.
using BasisMatrix = Eigen::MatrixXd;

namespace serial {
NodeStatistics node_statistics(const PseudoSample& sample, const QuadratureRule& rule,
                               bool want_mean, bool want_log);
BasisMatrix basis_matrix(const AtomGrid& grid, const QuadratureRule& rule);
// D[a,b] = sum_k weight_k G[k,a] G[k,b]
Eigen::MatrixXd gram_matrix(const BasisMatrix& basis, std::span<const double> weights);
// d[a] = sum_k weight_k G[k,a] f_k
Eigen::VectorXd basis_inner(const BasisMatrix& basis, std::span<const double> weights,
                            std::span<const double> f);
}  // namespace serial

namespace parallel {
NodeStatistics node_statistics(const PseudoSample& sample, const QuadratureRule& rule,
                               bool want_mean, bool want_log);
BasisMatrix basis_matrix(const AtomGrid& grid, const QuadratureRule& rule);
Eigen::MatrixXd gram_matrix(const BasisMatrix& basis, std::span<const double> weights);
Eigen::VectorXd basis_inner(const BasisMatrix& basis, std::span<const double> weights,
                            std::span<const double> f);
}  // namespace parallel

NodeStatistics node_statistics(const PseudoSample& sample, const QuadratureRule& rule,
                               bool want_mean, bool want_log, ExecMode mode);
BasisMatrix basis_matrix(const AtomGrid& grid, const QuadratureRule& rule, ExecMode mode);
Eigen::MatrixXd gram_matrix(const BasisMatrix& basis, std::span<const double> weights, ExecMode mode);
Eigen::VectorXd basis_inner(const BasisMatrix& basis, std::span<const double> weights,
                            std::span<const double> f, ExecMode mode);

// Worker count for the parallel kernels (wraps omp_set_num_threads).
void set_worker_count(int workers);
int worker_count();

}  // namespace kernels
}  // namespace evcop
