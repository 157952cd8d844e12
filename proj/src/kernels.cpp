#include "evcop/kernels.hpp"

#include <cmath>
#include <limits>

#include <omp.h>

#include "evcop/error.hpp"

namespace evcop::kernels {

namespace {

struct ActiveWeights {
  std::vector<std::size_t> index;
  std::vector<double> inverse;
  std::vector<double> log;
};

ActiveWeights active_weights(const SimplexPoint& w) {
  ActiveWeights a;
  for (std::size_t j = 0; j < w.dim(); ++j) {
    if (w[j] > 0.0) {
      a.index.push_back(j);
      a.inverse.push_back(1.0 / w[j]);
      a.log.push_back(std::log(w[j]));
    }
  }
  return a;
}

// Both statistics for one node; shared by the serial and parallel loops.
void node_kernel(const PseudoSample& sample, const SimplexPoint& w, bool want_mean, bool want_log,
                 double& mean_xi, double& mean_log_xi) {
  const auto act = active_weights(w);
  const double inf = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  double sum_log = 0.0;
  for (std::size_t i = 0; i < sample.rows(); ++i) {
    if (want_mean) {
      const auto nl = sample.neg_log_row(i);
      double best = inf;
      for (std::size_t a = 0; a < act.index.size(); ++a)
        best = std::min(best, nl[act.index[a]] * act.inverse[a]);
      sum += best;
    }
    if (want_log) {
      const auto lnl = sample.log_neg_log_row(i);
      double best = inf;
      for (std::size_t a = 0; a < act.index.size(); ++a)
        best = std::min(best, lnl[act.index[a]] - act.log[a]);
      sum_log += best;
    }
  }
  const double n = static_cast<double>(sample.rows());
  mean_xi = sum / n;
  mean_log_xi = sum_log / n;
}

void check_sample(const PseudoSample& sample, const QuadratureRule& rule) {
  if (sample.cols() != static_cast<std::size_t>(rule.p))
    throw InvalidArgument("sample dimension does not match quadrature rule");
}

double basis_value(const SimplexPoint& node, const SimplexPoint& atom) {
  double best = 0.0;
  for (std::size_t j = 0; j < node.dim(); ++j) best = std::max(best, node[j] * atom[j]);
  return best;
}

double gram_entry(const BasisMatrix& g, std::span<const double> w, Eigen::Index a, Eigen::Index b) {
  const double* ca = g.col(a).data();
  const double* cb = g.col(b).data();
  double s = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * (ca[k] * cb[k]);
  return s;
}

void check_basis(const BasisMatrix& basis, std::span<const double> weights) {
  if (static_cast<std::size_t>(basis.rows()) != weights.size())
    throw InvalidArgument("basis rows do not match quadrature weights");
}

}  // namespace

namespace serial {

NodeStatistics node_statistics(const PseudoSample& sample, const QuadratureRule& rule,
                               bool want_mean, bool want_log) {
  check_sample(sample, rule);
  NodeStatistics st{std::vector<double>(rule.size()), std::vector<double>(rule.size())};
  for (std::size_t k = 0; k < rule.size(); ++k)
    node_kernel(sample, rule.nodes[k], want_mean, want_log, st.mean_xi[k], st.mean_log_xi[k]);
  return st;
}

BasisMatrix basis_matrix(const AtomGrid& grid, const QuadratureRule& rule) {
  if (grid.p() != rule.p) throw InvalidArgument("grid and rule dimensions differ");
  BasisMatrix g(static_cast<Eigen::Index>(rule.size()), static_cast<Eigen::Index>(grid.size()));
  for (std::size_t a = 0; a < grid.size(); ++a)
    for (std::size_t k = 0; k < rule.size(); ++k)
      g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(a)) = basis_value(rule.nodes[k], grid[a]);
  return g;
}

Eigen::MatrixXd gram_matrix(const BasisMatrix& basis, std::span<const double> weights) {
  check_basis(basis, weights);
  const Eigen::Index K = basis.cols();
  Eigen::MatrixXd d(K, K);
  for (Eigen::Index a = 0; a < K; ++a)
    for (Eigen::Index b = a; b < K; ++b) d(a, b) = d(b, a) = gram_entry(basis, weights, a, b);
  return d;
}

Eigen::VectorXd basis_inner(const BasisMatrix& basis, std::span<const double> weights,
                            std::span<const double> f) {
  check_basis(basis, weights);
  if (f.size() != weights.size()) throw InvalidArgument("function values do not match quadrature nodes");
  Eigen::VectorXd out(basis.cols());
  for (Eigen::Index a = 0; a < basis.cols(); ++a) {
    const double* c = basis.col(a).data();
    double s = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) s += weights[k] * (c[k] * f[k]);
    out(a) = s;
  }
  return out;
}

}  // namespace serial

namespace parallel {

NodeStatistics node_statistics(const PseudoSample& sample, const QuadratureRule& rule,
                               bool want_mean, bool want_log) {
  check_sample(sample, rule);
  NodeStatistics st{std::vector<double>(rule.size()), std::vector<double>(rule.size())};
  const auto nodes = static_cast<std::ptrdiff_t>(rule.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < nodes; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    node_kernel(sample, rule.nodes[uk], want_mean, want_log, st.mean_xi[uk], st.mean_log_xi[uk]);
  }
  return st;
}

BasisMatrix basis_matrix(const AtomGrid& grid, const QuadratureRule& rule) {
  if (grid.p() != rule.p) throw InvalidArgument("grid and rule dimensions differ");
  BasisMatrix g(static_cast<Eigen::Index>(rule.size()), static_cast<Eigen::Index>(grid.size()));
  const auto atoms = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t a = 0; a < atoms; ++a)
    for (std::size_t k = 0; k < rule.size(); ++k)
      g(static_cast<Eigen::Index>(k), a) = basis_value(rule.nodes[k], grid[static_cast<std::size_t>(a)]);
  return g;
}

Eigen::MatrixXd gram_matrix(const BasisMatrix& basis, std::span<const double> weights) {
  check_basis(basis, weights);
  const Eigen::Index K = basis.cols();
  Eigen::MatrixXd d(K, K);
#pragma omp parallel for schedule(dynamic, 4)
  for (Eigen::Index a = 0; a < K; ++a)
    for (Eigen::Index b = a; b < K; ++b) d(a, b) = gram_entry(basis, weights, a, b);
  for (Eigen::Index a = 0; a < K; ++a)
    for (Eigen::Index b = a + 1; b < K; ++b) d(b, a) = d(a, b);
  return d;
}

Eigen::VectorXd basis_inner(const BasisMatrix& basis, std::span<const double> weights,
                            std::span<const double> f) {
  check_basis(basis, weights);
  if (f.size() != weights.size()) throw InvalidArgument("function values do not match quadrature nodes");
  Eigen::VectorXd out(basis.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index a = 0; a < basis.cols(); ++a) {
    const double* c = basis.col(a).data();
    double s = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) s += weights[k] * (c[k] * f[k]);
    out(a) = s;
  }
  return out;
}

}  // namespace parallel

NodeStatistics node_statistics(const PseudoSample& sample, const QuadratureRule& rule,
                               bool want_mean, bool want_log, ExecMode mode) {
  return mode == ExecMode::parallel ? parallel::node_statistics(sample, rule, want_mean, want_log)
                                    : serial::node_statistics(sample, rule, want_mean, want_log);
}

BasisMatrix basis_matrix(const AtomGrid& grid, const QuadratureRule& rule, ExecMode mode) {
  return mode == ExecMode::parallel ? parallel::basis_matrix(grid, rule) : serial::basis_matrix(grid, rule);
}

Eigen::MatrixXd gram_matrix(const BasisMatrix& basis, std::span<const double> weights, ExecMode mode) {
  return mode == ExecMode::parallel ? parallel::gram_matrix(basis, weights)
                                    : serial::gram_matrix(basis, weights);
}

Eigen::VectorXd basis_inner(const BasisMatrix& basis, std::span<const double> weights,
                            std::span<const double> f, ExecMode mode) {
  return mode == ExecMode::parallel ? parallel::basis_inner(basis, weights, f)
                                    : serial::basis_inner(basis, weights, f);
}

void set_worker_count(int workers) {
  if (workers < 1) throw InvalidArgument("worker count must be >= 1");
  omp_set_num_threads(workers);
}

int worker_count() { return omp_get_max_threads(); }

}  // namespace evcop::kernels
