#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "evcop/empirical.hpp"
#include "evcop/simplex.hpp"
#include "evcop/spectral.hpp"

namespace evcop {

// A reproducible random stream identified by (seed, stream id). Distinct ids
// seed independent Mersenne twisters through std::seed_seq.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  double exponential() { return -std::log(uniform()); }
  // 1 / Exp(1)
  double unit_frechet() { return 1.0 / exponential(); }
  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

// Trivariate asymmetric logistic model. Pair subsets {1,2}, {2,3}, {3,1}
// carry weights (theta, phi) on their first and second member, the full
// triple carries psi on every member and singletons 1 - theta - phi - psi.
struct AsymmetricLogisticParams {
  double alpha = 1.0;
  double theta = 0.0;
  double phi = 0.0;
  double psi = 1.0;

  static AsymmetricLogisticParams symmetric(double alpha) { return {alpha, 0.0, 0.0, 1.0}; }
  void check() const;
};

// One max-mixture component: a symmetric logistic vector over `members`,
// component j scaled by weights[j].
struct LogisticComponent {
  std::vector<int> members;
  std::vector<double> weights;
};

struct SubsetLogisticModel {
  int p = 0;
  double alpha = 1.0;
  std::vector<LogisticComponent> components;
};

// Subset form of the trivariate model; zero-weight subsets are dropped.
SubsetLogisticModel expand(const AsymmetricLogisticParams& params);

// A(w) of the trivariate model, evaluated term by term.
double asy_logistic_pickands(const AsymmetricLogisticParams& params, const SimplexPoint& w);
// A(w) = sum_B (sum_{j in B} (weight_jB w_j)^(1/alpha))^alpha
double subset_logistic_pickands(const SubsetLogisticModel& model, const SimplexPoint& w);

// Positive stable variable with Laplace transform exp(-t^alpha), by Kanter's
// representation sin(aU) / sin(U)^(1/a) * (sin((1-a)U) / E)^((1-a)/a) with
// U uniform on (0, pi) and E unit exponential. Exactly 1 for alpha = 1.
double sample_positive_stable(double alpha, RngStream& rng);

// Z_j = (S / E_j)^alpha: unit Frechet margins, symmetric logistic dependence.
std::vector<double> sample_symmetric_logistic_frechet(double alpha, int k, RngStream& rng);

// n draws with unit Frechet margins.
DataMatrix sample_subset_logistic(const SubsetLogisticModel& model, std::size_t n, RngStream& rng);
DataMatrix sample_asy_logistic(const AsymmetricLogisticParams& params, std::size_t n, RngStream& rng);

// X_j = max_v h_v v_j F_v with F_v iid unit Frechet, one per atom. The
// result has exactly the tail dependence function of `h`.
DataMatrix sample_max_linear(const SpectralMeasure& h, std::size_t n, RngStream& rng);

}  // namespace evcop
