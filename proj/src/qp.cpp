#include "evcop/qp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace evcop {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd columns(const MatrixXd& m, const std::vector<Index>& idx) {
  MatrixXd out(m.rows(), static_cast<Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) out.col(static_cast<Index>(c)) = m.col(idx[c]);
  return out;
}

MatrixXd principal(const MatrixXd& m, const std::vector<Index>& idx) {
  const auto n = static_cast<Index>(idx.size());
  MatrixXd out(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) out(a, b) = m(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
  return out;
}

VectorXd gather(const VectorXd& v, const std::vector<Index>& idx) {
  VectorXd out(static_cast<Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) out(static_cast<Index>(c)) = v(idx[c]);
  return out;
}

// Equality multipliers from stationarity on the free set: Cf' nu = -g_f.
VectorXd equality_multipliers(const MatrixXd& ceq, const VectorXd& grad, const std::vector<Index>& free) {
  if (free.empty()) return VectorXd::Zero(ceq.rows());
  const MatrixXd cft = columns(ceq, free).transpose();
  return cft.completeOrthogonalDecomposition().solve(-gather(grad, free));
}

KktResiduals residuals_with(const QuadraticProgram& qp, const VectorXd& h, const VectorXd& nu,
                            VectorXd* bound) {
  const VectorXd z = qp.D * h - qp.d + qp.Ceq.transpose() * nu;
  KktResiduals r;
  for (Index i = 0; i < h.size(); ++i) {
    if (h(i) > 0.0)
      r.stationarity = std::max(r.stationarity, std::abs(z(i)));
    else
      r.stationarity = std::max(r.stationarity, std::max(0.0, -z(i)));
    r.complementarity = std::max(r.complementarity, std::abs(h(i) * z(i)));
    r.primal = std::max(r.primal, std::max(0.0, -h(i)));
  }
  r.primal = std::max(r.primal, (qp.Ceq * h - qp.ceq).lpNorm<Eigen::Infinity>());
  if (bound) *bound = z;
  return r;
}

// Feasible start from columns proportional to unit vectors.
VectorXd start_point(const QuadraticProgram& qp, std::vector<Index>& free) {
  const Index rows = qp.Ceq.rows();
  const Index k = qp.size();
  VectorXd h = VectorXd::Zero(k);
  for (Index j = 0; j < rows; ++j) {
    if (qp.ceq(j) < 0.0) throw QpInfeasible("QP start: negative right-hand side with h >= 0");
    Index pick = -1;
    for (Index i = 0; i < k && pick < 0; ++i) {
      if (!(qp.Ceq(j, i) > 0.0)) continue;
      bool unit = true;
      for (Index r = 0; r < rows && unit; ++r)
        if (r != j && qp.Ceq(r, i) != 0.0) unit = false;
      if (unit) pick = i;
    }
    if (pick < 0) throw QpInfeasible("QP start: no unit column for equality row " + std::to_string(j));
    h(pick) = qp.ceq(j) / qp.Ceq(j, pick);
    free.push_back(pick);
  }
  std::sort(free.begin(), free.end());
  free.erase(std::unique(free.begin(), free.end()), free.end());
  if ((qp.Ceq * h - qp.ceq).lpNorm<Eigen::Infinity>() > 1e-12)
    throw QpInfeasible("QP start: unit columns do not reproduce the equality right-hand side");
  return h;
}

}  // namespace

double QuadraticProgram::objective(const VectorXd& h) const { return 0.5 * h.dot(D * h) - d.dot(h); }

void QuadraticProgram::check() const {
  const Index k = d.size();
  if (k == 0) throw InvalidArgument("QP has no variables");
  if (D.rows() != k || D.cols() != k) throw InvalidArgument("QP: D must be K x K");
  if (Ceq.cols() != k || Ceq.rows() != ceq.size()) throw InvalidArgument("QP: Ceq must be p x K with p = |ceq|");
  if (!D.allFinite() || !d.allFinite() || !Ceq.allFinite() || !ceq.allFinite())
    throw InvalidArgument("QP data must be finite");
  const double asym = (D - D.transpose()).lpNorm<Eigen::Infinity>();
  if (asym > 1e-12 * std::max(1.0, D.lpNorm<Eigen::Infinity>())) throw InvalidArgument("QP: D is not symmetric");
}

double KktResiduals::max() const { return std::max({stationarity, primal, complementarity}); }

KktResiduals kkt_residuals(const QuadraticProgram& qp, const VectorXd& h, VectorXd* eq, VectorXd* bound) {
  std::vector<Index> positive;
  for (Index i = 0; i < h.size(); ++i)
    if (h(i) > 0.0) positive.push_back(i);
  const VectorXd nu = equality_multipliers(qp.Ceq, qp.D * h - qp.d, positive);
  if (eq) *eq = nu;
  return residuals_with(qp, h, nu, bound);
}

QpSolution solve_qp(const QuadraticProgram& qp, const QpOptions& options) {
  qp.check();
  const Index k = qp.size();
  const double ridge = options.ridge_scale * qp.D.trace() / static_cast<double>(k);
  MatrixXd dr = qp.D;
  dr.diagonal().array() += std::max(ridge, 0.0);

  const double scale = std::max({qp.D.lpNorm<Eigen::Infinity>(), qp.d.lpNorm<Eigen::Infinity>(), 1e-300});
  const double dual_tol = 1e-11 * scale;

  std::vector<Index> free;
  VectorXd h = start_point(qp, free);
  std::vector<char> is_free(static_cast<std::size_t>(k), 0);
  for (Index i : free) is_free[static_cast<std::size_t>(i)] = 1;

  VectorXd nu = VectorXd::Zero(qp.Ceq.rows());
  // After an unblocked full step the iterate minimizes over the current free
  // set; recomputing the step there only returns rounding noise, which on an
  // ill-conditioned Gram matrix can exceed any fixed step tolerance.
  bool at_subspace_min = false;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    VectorXd grad = -qp.d;
    for (Index i : free) grad.noalias() += dr.col(i) * h(i);

    const MatrixXd cf = columns(qp.Ceq, free);
    const VectorXd gf = gather(grad, free);
    const auto nf = static_cast<Index>(free.size());

    Eigen::ColPivHouseholderQR<MatrixXd> qr(cf.transpose());
    qr.setThreshold(1e-12);
    const Index rank = qr.rank();
    VectorXd step = VectorXd::Zero(nf);
    if (nf > rank && !at_subspace_min) {
      const MatrixXd q = qr.householderQ() * MatrixXd::Identity(nf, nf);
      const MatrixXd z = q.rightCols(nf - rank);
      const MatrixXd reduced = z.transpose() * principal(dr, free) * z;
      const VectorXd u = reduced.ldlt().solve(-(z.transpose() * gf));
      step = z * u;
    }

    const double step_tol = 1e-13 * std::max(1.0, h.lpNorm<Eigen::Infinity>());
    if (step.lpNorm<Eigen::Infinity>() <= step_tol) {
      nu = cf.transpose().completeOrthogonalDecomposition().solve(-gf);
      const VectorXd zb = grad + qp.Ceq.transpose() * nu;
      Index enter = -1;
      double most_negative = -dual_tol;
      for (Index i = 0; i < k; ++i) {
        if (is_free[static_cast<std::size_t>(i)]) continue;
        if (zb(i) < most_negative) {
          most_negative = zb(i);
          enter = i;
        }
      }
      if (enter < 0) break;
      free.insert(std::upper_bound(free.begin(), free.end(), enter), enter);
      is_free[static_cast<std::size_t>(enter)] = 1;
      at_subspace_min = false;
      continue;
    }

    // Ratio test; ties go to the smallest index.
    double alpha = 1.0;
    Index blocking = -1;
    for (Index c = 0; c < nf; ++c) {
      if (step(c) >= 0.0) continue;
      const double a = -h(free[static_cast<std::size_t>(c)]) / step(c);
      if (a < alpha) {
        alpha = a;
        blocking = c;
      }
    }
    for (Index c = 0; c < nf; ++c) {
      const Index i = free[static_cast<std::size_t>(c)];
      h(i) = std::max(0.0, h(i) + alpha * step(c));
    }
    if (blocking >= 0) {
      const Index i = free[static_cast<std::size_t>(blocking)];
      h(i) = 0.0;
      is_free[static_cast<std::size_t>(i)] = 0;
      free.erase(free.begin() + blocking);
    } else {
      at_subspace_min = true;
    }
  }

  QpSolution sol;
  sol.iterations = it;
  sol.h = h;
  sol.objective = qp.objective(h);
  // Residuals against the unridged problem, multipliers refit on the free set.
  const VectorXd grad = qp.D * h - qp.d;
  sol.equality_multipliers = equality_multipliers(qp.Ceq, grad, free);
  sol.kkt = residuals_with(qp, h, sol.equality_multipliers, &sol.bound_multipliers);
  if (it >= options.max_iterations) throw QpMaxIterations(std::move(sol));
  return sol;
}

}  // namespace evcop
