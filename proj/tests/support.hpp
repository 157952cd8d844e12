#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "evcop/empirical.hpp"
#include "evcop/qp.hpp"
#include "evcop/simplex.hpp"
#include "evcop/spectral.hpp"

namespace evcop::testing {

inline std::shared_ptr<const QuadratureRule> shared_rule(int p, int n) {
  return std::make_shared<const QuadratureRule>(midpoint_rule(p, n));
}

// Uniform on the simplex (flat Dirichlet).
inline SimplexPoint random_point(int p, std::mt19937_64& gen) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> x(static_cast<std::size_t>(p));
  double s = 0.0;
  for (auto& v : x) s += (v = e(gen));
  for (auto& v : x) v /= s;
  return SimplexPoint(std::move(x));
}

// A random measure with the moment constraints: atoms q_k with masses r_k,
// reweighted coordinatewise by the first moments M_j and renormalized.
inline SpectralMeasure random_measure(int p, int atoms, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  std::vector<SimplexPoint> q;
  std::vector<double> r;
  std::vector<double> moment(static_cast<std::size_t>(p), 0.0);
  for (int k = 0; k < atoms; ++k) {
    q.push_back(random_point(p, gen));
    r.push_back(unif(gen));
    for (int j = 0; j < p; ++j) moment[static_cast<std::size_t>(j)] += r.back() * q.back()[static_cast<std::size_t>(j)];
  }
  std::vector<Atom> out;
  for (int k = 0; k < atoms; ++k) {
    std::vector<double> v(static_cast<std::size_t>(p));
    double s = 0.0;
    for (int j = 0; j < p; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      v[jj] = q[static_cast<std::size_t>(k)][jj] / moment[jj];
      s += v[jj];
    }
    for (auto& x : v) x /= s;
    out.push_back({SimplexPoint(std::move(v)), r[static_cast<std::size_t>(k)] * s});
  }
  return SpectralMeasure(p, std::move(out));
}

// Random measure supported on the resolution-m grid.
inline SpectralMeasure random_grid_measure(int p, int m, std::mt19937_64& gen) {
  return discretize(random_measure(p, 6, gen), m);
}

// The two-point comonotone pseudo-sample {(1/3,1/3), (2/3,2/3)}.
inline PseudoSample comonotone_pair() { return PseudoSample(2, 2, {1.0 / 3, 1.0 / 3, 2.0 / 3, 2.0 / 3}); }

// Continuous data without ties.
inline DataMatrix random_data(std::size_t n, std::size_t p, std::mt19937_64& gen) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> x(n * p);
  for (auto& v : x) v = z(gen);
  return DataMatrix(n, p, std::move(x));
}

// Integral of C_n(u^w1, ..., u^wp) / u over (0, 1], computed from the
// empirical copula alone. With u = exp(-s) it becomes the integral over
// s > 0 of C_n(exp(-s w)); the integrand is 1 for s <= 1/(n+1) and 0 for
// s >= p log(n+1), and a composite midpoint rule covers the rest.
inline double pickands_integral(const PseudoSample& sample, const SimplexPoint& w, int panels) {
  const double n = static_cast<double>(sample.rows());
  const double lo = 1.0 / (n + 1.0);
  const double hi = static_cast<double>(sample.cols()) * std::log(n + 1.0);
  const double h = (hi - lo) / panels;
  std::vector<double> u(sample.cols());
  double s = lo;
  for (int k = 0; k < panels; ++k) {
    const double mid = lo + (k + 0.5) * h;
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = std::exp(-mid * w[j]);
    s += h * empirical_copula(sample, u);
  }
  return s;
}


// Exhaustive search of min 1/2 h'Dh - d'h over the spectral-measure
// polytope for p = 2, m <= 3. The interior masses are gridded with `step`;
// the vertex masses then follow from the two moment rows. Every edge of
// the polytope is also walked with the same step so optima on faces are
// not missed by more than a quadratic term.
inline double brute_force_qp(const QuadraticProgram& qp, int m, double step) {
  const auto k = static_cast<Eigen::Index>(m + 1);
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd h(k);
  // Atom a sits at ((m - a)/m, a/m); ends are a = 0 and a = m.
  auto try_interior = [&](const std::vector<double>& inner) {
    double r0 = 1.0, r1 = 1.0;
    for (int a = 1; a < m; ++a) {
      const double x = inner[static_cast<std::size_t>(a - 1)];
      r0 -= x * (m - a) / double(m);
      r1 -= x * a / double(m);
      h(a) = x;
    }
    if (r0 < -1e-12 || r1 < -1e-12) return;
    h(0) = std::max(0.0, r0);
    h(m) = std::max(0.0, r1);
    best = std::min(best, qp.objective(h));
  };
  if (m == 1) {
    try_interior({});
  } else if (m == 2) {
    // h_1 in [0, 2]
    for (double x = 0.0; x <= 2.0 + 1e-12; x += step) try_interior({x});
    try_interior({2.0});
  } else if (m == 3) {
    const double cap = 1.5;
    for (double x = 0.0; x <= cap + 1e-12; x += step)
      for (double y = 0.0; y <= cap + 1e-12; y += step) try_interior({x, y});
    // Edges of the (h1, h2) polygon with vertices (0,0), (1.5,0), (1,1), (0,1.5).
    const double vx[] = {0.0, 1.5, 1.0, 0.0};
    const double vy[] = {0.0, 0.0, 1.0, 1.5};
    for (int e = 0; e < 4; ++e) {
      const double ax = vx[e], ay = vy[e], bx = vx[(e + 1) % 4], by = vy[(e + 1) % 4];
      const double len = std::hypot(bx - ax, by - ay);
      const int steps = static_cast<int>(std::ceil(len / step));
      for (int t = 0; t <= steps; ++t) {
        const double s = double(t) / steps;
        try_interior({ax + s * (bx - ax), ay + s * (by - ay)});
      }
    }
  }
  return best;
}

// Two-sample Kolmogorov-Smirnov statistic; sorts its arguments.
inline double ks_two_sample(std::vector<double>& a, std::vector<double>& b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

// Asymptotic critical value of the two-sample statistic at `level`.
inline double ks_critical(double level, std::size_t n, std::size_t m) {
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  return std::sqrt(-0.5 * std::log(level / 2.0)) * std::sqrt((nn + mm) / (nn * mm));
}

// One-sample statistic against a continuous cdf; sorts `x`.
template <class Cdf>
double ks_one_sample(std::vector<double>& x, Cdf cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace evcop::testing
