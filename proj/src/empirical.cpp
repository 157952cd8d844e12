#include "evcop/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "evcop/error.hpp"

namespace evcop {

namespace {

std::vector<std::size_t> column_order(const DataMatrix& data, std::size_t j) {
  std::vector<std::size_t> order(data.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return data(a, j) < data(b, j); });
  return order;
}

bool has_adjacent_tie(const DataMatrix& data, std::size_t j, const std::vector<std::size_t>& order) {
  for (std::size_t r = 1; r < order.size(); ++r)
    if (data(order[r], j) == data(order[r - 1], j)) return true;
  return false;
}

}  // namespace

DataMatrix::DataMatrix(std::size_t n, std::size_t p, std::vector<double> values)
    : n_(n), p_(p), x_(std::move(values)) {
  if (n < 1) throw InvalidArgument("data matrix needs at least one row");
  if (p < 2) throw InvalidArgument("data matrix needs at least two columns");
  if (x_.size() != n * p) throw InvalidArgument("data matrix value count is not n * p");
  for (double x : x_)
    if (std::isnan(x)) throw InvalidArgument("data matrix contains NaN");
}

std::optional<std::size_t> find_tied_column(const DataMatrix& data) {
  for (std::size_t j = 0; j < data.cols(); ++j)
    if (has_adjacent_tie(data, j, column_order(data, j))) return j;
  return std::nullopt;
}

PseudoSample::PseudoSample(std::size_t n, std::size_t p, std::vector<double> u)
    : n_(n), p_(p), u_(std::move(u)), neg_log_(u_.size()), log_neg_log_(u_.size()) {
  if (u_.size() != n * p) throw InvalidArgument("pseudo-sample value count is not n * p");
  for (std::size_t k = 0; k < u_.size(); ++k) {
    if (!(u_[k] > 0.0 && u_[k] < 1.0)) throw InvalidArgument("pseudo-observations must lie in (0,1)");
    neg_log_[k] = -std::log(u_[k]);
    log_neg_log_[k] = std::log(neg_log_[k]);
  }
}

PseudoSample pseudo_observations(const DataMatrix& data) {
  const std::size_t n = data.rows();
  const std::size_t p = data.cols();
  std::vector<double> u(n * p);
  const double scale = 1.0 / static_cast<double>(n + 1);
  for (std::size_t j = 0; j < p; ++j) {
    const auto order = column_order(data, j);
    if (has_adjacent_tie(data, j, order)) throw TiesPresent(j);
    for (std::size_t r = 0; r < n; ++r) u[order[r] * p + j] = static_cast<double>(r + 1) * scale;
  }
  return PseudoSample(n, p, std::move(u));
}

double empirical_copula(const PseudoSample& sample, std::span<const double> u) {
  if (u.size() != sample.cols()) throw InvalidArgument("empirical_copula: dimension mismatch");
  std::size_t count = 0;
  for (std::size_t i = 0; i < sample.rows(); ++i) {
    const auto row = sample.row(i);
    bool inside = true;
    for (std::size_t j = 0; j < u.size() && inside; ++j) inside = row[j] <= u[j];
    count += inside ? 1 : 0;
  }
  return static_cast<double>(count) / static_cast<double>(sample.rows());
}

double empirical_copula_df_variant(const DataMatrix& data, std::span<const double> u) {
  if (u.size() != data.cols()) throw InvalidArgument("empirical_copula_df_variant: dimension mismatch");
  if (auto tied = find_tied_column(data)) throw TiesPresent(*tied);
  const std::size_t n = data.rows();
  const double inf = std::numeric_limits<double>::infinity();
  // F_{n,j}(x) = #{X_lj <= x} / (n + 1) reaches u at the ceil((n+1)u)-th order
  // statistic; beyond n/(n+1) the infimum is over an empty set.
  std::vector<double> thresholds(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (u[j] <= 0.0) {
      thresholds[j] = -inf;
      continue;
    }
    const double scaled = u[j] * static_cast<double>(n + 1);
    // Rounding guard so that u = k/(n+1) hits rank k exactly.
    auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(scaled - 1e-9)));
    if (k > n) {
      thresholds[j] = inf;
      continue;
    }
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = data(i, j);
    std::nth_element(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(k - 1), col.end());
    thresholds[j] = col[k - 1];
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool inside = true;
    for (std::size_t j = 0; j < u.size() && inside; ++j) inside = data(i, j) <= thresholds[j];
    count += inside ? 1 : 0;
  }
  return static_cast<double>(count) / static_cast<double>(n);
}

}  // namespace evcop
