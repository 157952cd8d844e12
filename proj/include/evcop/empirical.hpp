#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace evcop {

// n x p raw observations, row-major.
class DataMatrix {
 public:
  DataMatrix(std::size_t n, std::size_t p, std::vector<double> values);

  std::size_t rows() const noexcept { return n_; }
  std::size_t cols() const noexcept { return p_; }
  double operator()(std::size_t i, std::size_t j) const { return x_[i * p_ + j]; }
  std::span<const double> row(std::size_t i) const { return std::span<const double>(x_).subspan(i * p_, p_); }
  const std::vector<double>& values() const noexcept { return x_; }

 private:
  std::size_t n_;
  std::size_t p_;
  std::vector<double> x_;
};

// First column holding a repeated value, if any.
std::optional<std::size_t> find_tied_column(const DataMatrix& data);

// Rank-based pseudo-observations U_ij = rank_ij / (n + 1), together with
// -log U_ij, which every rank estimator consumes.
class PseudoSample {
 public:
  PseudoSample(std::size_t n, std::size_t p, std::vector<double> u);

  std::size_t rows() const noexcept { return n_; }
  std::size_t cols() const noexcept { return p_; }
  double operator()(std::size_t i, std::size_t j) const { return u_[i * p_ + j]; }
  std::span<const double> row(std::size_t i) const { return std::span<const double>(u_).subspan(i * p_, p_); }
  std::span<const double> neg_log_row(std::size_t i) const {
    return std::span<const double>(neg_log_).subspan(i * p_, p_);
  }
  // log(-log U_ij); log xi_i(w) is a minimum of these shifted by -log w_j.
  std::span<const double> log_neg_log_row(std::size_t i) const {
    return std::span<const double>(log_neg_log_).subspan(i * p_, p_);
  }
  const std::vector<double>& values() const noexcept { return u_; }

 private:
  std::size_t n_;
  std::size_t p_;
  std::vector<double> u_;
  std::vector<double> neg_log_;
  std::vector<double> log_neg_log_;
};

// Throws TiesPresent naming the first tied column.
PseudoSample pseudo_observations(const DataMatrix& data);

// (1/n) #{i : U_i <= u componentwise}
double empirical_copula(const PseudoSample& sample, std::span<const double> u);

// F_n(F_{n,1}^{-1}(u_1), ..., F_{n,p}^{-1}(u_p)) with F_n the joint empirical
// cdf (divisor n), F_{n,j} the marginal one (divisor n + 1) and ^{-1} the
// generalized inverse inf{x : F_{n,j}(x) >= u}.
double empirical_copula_df_variant(const DataMatrix& data, std::span<const double> u);

}  // namespace evcop
