#include "evcop/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "evcop/error.hpp"

namespace evcop {

namespace {

double max_product(std::span<const double> a, std::span<const double> b) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) best = std::max(best, a[j] * b[j]);
  return best;
}

}  // namespace

SpectralMeasure::SpectralMeasure(int p, std::vector<Atom> atoms) : p_(p) {
  if (p < 2) throw InvalidArgument("spectral measure dimension must be >= 2");
  atoms_.reserve(atoms.size());
  for (auto& a : atoms) {
    if (a.v.dim() != static_cast<std::size_t>(p))
      throw InvalidArgument("atom dimension does not match measure dimension");
    if (!(a.mass >= 0.0) || !std::isfinite(a.mass))
      throw InvalidArgument("spectral masses must be finite and nonnegative");
    if (a.mass >= kMassPruneThreshold) atoms_.push_back(std::move(a));
  }
}

SpectralMeasure SpectralMeasure::independence(int p) {
  std::vector<Atom> atoms;
  for (int j = 0; j < p; ++j)
    atoms.push_back({SimplexPoint::vertex(static_cast<std::size_t>(p), static_cast<std::size_t>(j)), 1.0});
  return SpectralMeasure(p, std::move(atoms));
}

SpectralMeasure SpectralMeasure::comonotone(int p) {
  return SpectralMeasure(p, {{SimplexPoint::barycenter(static_cast<std::size_t>(p)), static_cast<double>(p)}});
}

SpectralMeasure SpectralMeasure::on_grid(const AtomGrid& grid, std::span<const double> h) {
  if (h.size() != grid.size()) throw InvalidArgument("mass vector length does not match grid size");
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < h.size(); ++i)
    if (h[i] != 0.0) atoms.push_back({grid[i], h[i]});
  return SpectralMeasure(grid.p(), std::move(atoms));
}

double SpectralMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.mass;
  return s;
}

double ValidationReport::max_abs_residual() const {
  double r = 0.0;
  for (double x : residuals) r = std::max(r, std::abs(x));
  return r;
}

ValidationReport validate(const SpectralMeasure& h) {
  ValidationReport rep;
  const auto p = static_cast<std::size_t>(h.p());
  rep.residuals.assign(p, 0.0);
  rep.min_mass = h.atoms().empty() ? 0.0 : std::numeric_limits<double>::infinity();
  for (const auto& a : h.atoms()) {
    double coord_sum = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      rep.residuals[j] += a.mass * a.v[j];
      coord_sum += a.v[j];
    }
    rep.total_mass += a.mass * coord_sum;
    rep.min_mass = std::min(rep.min_mass, a.mass);
  }
  for (double& r : rep.residuals) r -= 1.0;
  rep.pass = !h.atoms().empty() && rep.max_abs_residual() <= kMomentTolerance && rep.min_mass >= 0.0;
  return rep;
}

double eval_pickands(const SpectralMeasure& h, const SimplexPoint& w) {
  if (w.dim() != static_cast<std::size_t>(h.p()))
    throw InvalidArgument("eval_pickands: dimension mismatch");
  double s = 0.0;
  for (const auto& a : h.atoms()) s += a.mass * max_product(a.v.coords(), w.coords());
  return s;
}

double eval_tail_dependence(const SpectralMeasure& h, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(h.p()))
    throw InvalidArgument("eval_tail_dependence: dimension mismatch");
  for (double xj : x)
    if (!(xj >= 0.0)) throw InvalidArgument("eval_tail_dependence: negative component");
  double s = 0.0;
  for (const auto& a : h.atoms()) s += a.mass * max_product(a.v.coords(), x);
  return s;
}

double eval_copula(const SpectralMeasure& h, std::span<const double> u) {
  if (u.size() != static_cast<std::size_t>(h.p()))
    throw InvalidArgument("eval_copula: dimension mismatch");
  std::vector<double> x(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (!(u[j] > 0.0 && u[j] <= 1.0)) throw InvalidArgument("eval_copula: u must lie in (0,1]");
    x[j] = -std::log(u[j]);
  }
  return std::exp(-eval_tail_dependence(h, x));
}

Discretization discretize_detailed(const SpectralMeasure& h, int m) {
  if (!validate(h).pass) throw InvalidArgument("discretize: input is not a valid spectral measure");
  const AtomGrid grid(h.p(), m);
  const auto p = static_cast<std::size_t>(h.p());

  // (a) relocate mass to cell corners
  std::vector<double> g(grid.size(), 0.0);
  for (const auto& a : h.atoms()) {
    const auto k = cell_composition(a.v, m);
    g[grid.index_of(k)] += a.mass;
  }

  // (b) restore the moment constraints by topping up e_1..e_{p-1}
  std::vector<double> c(p - 1, 0.0);
  double c_sum = 0.0;
  for (std::size_t j = 0; j + 1 < p; ++j) {
    double moment = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) moment += g[i] * grid[i][j];
    c[j] = m * (1.0 - moment);
    // Rounding residue of a measure already on the grid.
    if (c[j] < 1e-12) c[j] = 0.0;
    c_sum += c[j];
  }
  const double denom = m + c_sum;
  const double a0 = c_sum / denom;
  std::vector<double> a(p - 1);
  for (std::size_t j = 0; j + 1 < p; ++j) a[j] = (c[j] + c_sum) / denom;

  if (a0 != 0.0)
    for (double& x : g) x *= (1.0 - a0);
  for (std::size_t j = 0; j + 1 < p; ++j) g[grid.vertex_index(j)] += a[j];

  return {SpectralMeasure::on_grid(grid, g), a0, std::move(a), std::move(c)};
}

SpectralMeasure discretize(const SpectralMeasure& h, int m) {
  return discretize_detailed(h, m).measure;
}

DependenceSurface::DependenceSurface(std::shared_ptr<const QuadratureRule> r, std::vector<double> v)
    : rule(std::move(r)), values(std::move(v)) {
  if (!rule) throw InvalidArgument("surface needs a quadrature rule");
  if (values.size() != rule->size())
    throw InvalidArgument("surface value count does not match quadrature nodes");
}

DependenceSurface DependenceSurface::constant(std::shared_ptr<const QuadratureRule> r, double value) {
  const auto n = r ? r->size() : 0;
  return DependenceSurface(std::move(r), std::vector<double>(n, value));
}

DependenceSurface surface_of(const SpectralMeasure& h, std::shared_ptr<const QuadratureRule> rule) {
  if (!rule || rule->p != h.p()) throw InvalidArgument("surface_of: rule dimension mismatch");
  std::vector<double> values(rule->size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = eval_pickands(h, rule->nodes[i]);
  return DependenceSurface(std::move(rule), std::move(values));
}

bool ShapeReport::pass(double tol) const {
  return max_lower_violation <= tol && max_upper_violation <= tol && max_convexity_violation <= tol;
}

ShapeReport check_shape(const DependenceSurface& surface, int p) {
  const auto& rule = *surface.rule;
  if (rule.p != p) throw InvalidArgument("check_shape: dimension mismatch");
  ShapeReport rep;
  double worst = 0.0;
  for (std::size_t i = 0; i < surface.size(); ++i) {
    const double a = surface.values[i];
    const double lower = rule.nodes[i].max() - a;
    const double upper = a - 1.0;
    rep.max_lower_violation = std::max(rep.max_lower_violation, lower);
    rep.max_upper_violation = std::max(rep.max_upper_violation, upper);
    if (std::max(lower, upper) > worst) {
      worst = std::max(lower, upper);
      rep.worst_bound_node = i;
    }
  }

  const auto d = static_cast<std::size_t>(p - 1);
  std::map<std::vector<int>, std::size_t> full;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    if (!rule.full_cell[i]) continue;
    full.emplace(std::vector<int>(rule.corners.begin() + static_cast<std::ptrdiff_t>(i * d),
                                  rule.corners.begin() + static_cast<std::ptrdiff_t>((i + 1) * d)),
                 i);
  }
  std::vector<std::vector<int>> steps;
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<int> e(d, 0);
    e[i] = 1;
    steps.push_back(e);
    for (std::size_t j = i + 1; j < d; ++j) {
      std::vector<int> s(d, 0);
      s[i] = 1;
      s[j] = -1;
      steps.push_back(s);
    }
  }
  std::vector<int> mid(d), far(d);
  for (const auto& [corner, ia] : full) {
    for (const auto& s : steps) {
      for (std::size_t j = 0; j < d; ++j) {
        mid[j] = corner[j] + s[j];
        far[j] = corner[j] + 2 * s[j];
      }
      const auto ib = full.find(far);
      if (ib == full.end()) continue;
      const auto im = full.find(mid);
      if (im == full.end()) continue;
      const double gap = surface.values[im->second] -
                         0.5 * (surface.values[ia] + surface.values[ib->second]);
      rep.max_convexity_violation = std::max(rep.max_convexity_violation, gap);
      ++rep.convexity_pairs;
    }
  }
  return rep;
}

}  // namespace evcop
