#include "evcop/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "evcop/error.hpp"

namespace evcop {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("logistic alpha must lie in (0, 1]");
}

// (sum_j x_j^(1/alpha))^alpha without overflow for small alpha.
double logistic_norm(const std::vector<double>& x, double alpha) {
  const double top = *std::max_element(x.begin(), x.end());
  if (top <= 0.0) return 0.0;
  double s = 0.0;
  for (double v : x) s += std::pow(v / top, 1.0 / alpha);
  return top * std::pow(s, alpha);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x9e3779b9u};
  engine_.seed(seq);
}

double RngStream::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

void AsymmetricLogisticParams::check() const {
  check_alpha(alpha);
  for (double w : {theta, phi, psi})
    if (!(w >= 0.0 && w <= 1.0)) throw InvalidArgument("asymmetry weights must lie in [0, 1]");
  if (theta + phi + psi > 1.0 + 1e-12)
    throw InvalidArgument("asymmetry weights must satisfy theta + phi + psi <= 1");
}

SubsetLogisticModel expand(const AsymmetricLogisticParams& params) {
  params.check();
  SubsetLogisticModel model;
  model.p = 3;
  model.alpha = params.alpha;
  const auto add = [&](std::vector<int> members, std::vector<double> weights) {
    if (std::any_of(weights.begin(), weights.end(), [](double w) { return w > 0.0; }))
      model.components.push_back({std::move(members), std::move(weights)});
  };
  add({0, 1}, {params.theta, params.phi});
  add({1, 2}, {params.theta, params.phi});
  add({2, 0}, {params.theta, params.phi});
  add({0, 1, 2}, {params.psi, params.psi, params.psi});
  const double single = std::max(0.0, 1.0 - params.theta - params.phi - params.psi);
  for (int j = 0; j < 3; ++j) add({j}, {single});
  return model;
}

double asy_logistic_pickands(const AsymmetricLogisticParams& params, const SimplexPoint& w) {
  params.check();
  if (w.dim() != 3) throw InvalidArgument("asymmetric logistic model is trivariate");
  const double a = params.alpha;
  const double t = params.theta;
  const double f = params.phi;
  const auto pair = [&](double x, double y) { return logistic_norm({t * x, f * y}, a); };
  return pair(w[0], w[1]) + pair(w[1], w[2]) + pair(w[2], w[0]) +
         params.psi * logistic_norm({w[0], w[1], w[2]}, a) + 1.0 - t - f - params.psi;
}

double subset_logistic_pickands(const SubsetLogisticModel& model, const SimplexPoint& w) {
  if (w.dim() != static_cast<std::size_t>(model.p)) throw InvalidArgument("dimension mismatch");
  double s = 0.0;
  for (const auto& c : model.components) {
    std::vector<double> x;
    for (std::size_t k = 0; k < c.members.size(); ++k)
      x.push_back(c.weights[k] * w[static_cast<std::size_t>(c.members[k])]);
    s += logistic_norm(x, model.alpha);
  }
  return s;
}

double sample_positive_stable(double alpha, RngStream& rng) {
  check_alpha(alpha);
  if (alpha == 1.0) return 1.0;
  const double u = std::numbers::pi * rng.uniform();
  const double e = rng.exponential();
  return std::sin(alpha * u) / std::pow(std::sin(u), 1.0 / alpha) *
         std::pow(std::sin((1.0 - alpha) * u) / e, (1.0 - alpha) / alpha);
}

std::vector<double> sample_symmetric_logistic_frechet(double alpha, int k, RngStream& rng) {
  check_alpha(alpha);
  if (k < 1) throw InvalidArgument("component count must be >= 1");
  std::vector<double> z(static_cast<std::size_t>(k));
  if (alpha == 1.0) {
    for (double& v : z) v = rng.unit_frechet();
    return z;
  }
  const double s = sample_positive_stable(alpha, rng);
  for (double& v : z) v = std::pow(s / rng.exponential(), alpha);
  return z;
}

DataMatrix sample_subset_logistic(const SubsetLogisticModel& model, std::size_t n, RngStream& rng) {
  check_alpha(model.alpha);
  const auto p = static_cast<std::size_t>(model.p);
  std::vector<double> x(n * p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double* row = x.data() + i * p;
    for (const auto& c : model.components) {
      const auto z = c.members.size() == 1
                         ? std::vector<double>{rng.unit_frechet()}
                         : sample_symmetric_logistic_frechet(model.alpha, static_cast<int>(c.members.size()), rng);
      for (std::size_t k = 0; k < c.members.size(); ++k) {
        double& target = row[c.members[k]];
        target = std::max(target, c.weights[k] * z[k]);
      }
    }
  }
  return DataMatrix(n, p, std::move(x));
}

DataMatrix sample_asy_logistic(const AsymmetricLogisticParams& params, std::size_t n, RngStream& rng) {
  return sample_subset_logistic(expand(params), n, rng);
}

DataMatrix sample_max_linear(const SpectralMeasure& h, std::size_t n, RngStream& rng) {
  if (!validate(h).pass) throw InvalidArgument("sample_max_linear: invalid spectral measure");
  const auto p = static_cast<std::size_t>(h.p());
  std::vector<double> x(n * p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double* row = x.data() + i * p;
    for (const auto& a : h.atoms()) {
      const double f = rng.unit_frechet();
      for (std::size_t j = 0; j < p; ++j) row[j] = std::max(row[j], a.mass * a.v[j] * f);
    }
  }
  return DataMatrix(n, p, std::move(x));
}

}  // namespace evcop
