#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "evcop/simplex.hpp"

namespace evcop {

// Tolerance on the moment constraints sum_v h_v v_j = 1.
inline constexpr double kMomentTolerance = 1e-8;
// Atoms lighter than this are dropped on construction.
inline constexpr double kMassPruneThreshold = 1e-12;

struct Atom {
  SimplexPoint v;
  double mass;
};

// A discrete measure on the simplex. Masses are nonnegative; atoms below
// kMassPruneThreshold are pruned. The moment constraints are not enforced
// here, see validate().
class SpectralMeasure {
 public:
  SpectralMeasure(int p, std::vector<Atom> atoms);

  // Unit mass at each vertex: the independence copula.
  static SpectralMeasure independence(int p);
  // Mass p at the barycenter: the comonotone (min) copula.
  static SpectralMeasure comonotone(int p);
  // Masses h laid on the atoms of `grid` (h.size() == grid.size()).
  static SpectralMeasure on_grid(const AtomGrid& grid, std::span<const double> h);

  int p() const noexcept { return p_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  double total_mass() const;

 private:
  int p_;
  std::vector<Atom> atoms_;
};

struct ValidationReport {
  std::vector<double> residuals;  // sum_v h_v v_j - 1
  double min_mass = 0.0;
  double total_mass = 0.0;  // sum_v h_v (sum_j v_j)
  bool pass = false;
  double max_abs_residual() const;
};

ValidationReport validate(const SpectralMeasure& h);

// A(w) = sum_v h_v max_j w_j v_j
double eval_pickands(const SpectralMeasure& h, const SimplexPoint& w);
// l(x) = sum_v h_v max_j v_j x_j, x >= 0
double eval_tail_dependence(const SpectralMeasure& h, std::span<const double> x);
// C(u) = exp(-l(-log u)), u in (0,1]^p
double eval_copula(const SpectralMeasure& h, std::span<const double> u);

// Relocates each atom to the corner of its resolution-m cell and tops up the
// masses at e_1..e_{p-1} so the moment constraints hold again. The result is
// supported on the atom grid, passes validate(), and its Pickands function is
// within p^2/m of the input's in sup norm.
struct Discretization {
  SpectralMeasure measure;
  double a0 = 0.0;
  std::vector<double> a;  // a_1..a_{p-1}
  std::vector<double> c;  // moment deficits c_1..c_{p-1}
};

Discretization discretize_detailed(const SpectralMeasure& h, int m);
SpectralMeasure discretize(const SpectralMeasure& h, int m);

// A Pickands function tabulated on the nodes of a quadrature rule.
struct DependenceSurface {
  std::shared_ptr<const QuadratureRule> rule;
  std::vector<double> values;

  DependenceSurface(std::shared_ptr<const QuadratureRule> r, std::vector<double> v);
  static DependenceSurface constant(std::shared_ptr<const QuadratureRule> r, double value);

  std::size_t size() const noexcept { return values.size(); }
  int p() const noexcept { return rule->p; }
};

DependenceSurface surface_of(const SpectralMeasure& h, std::shared_ptr<const QuadratureRule> rule);

struct ShapeReport {
  double max_lower_violation = 0.0;   // max over nodes of max(w) - A(w), floored at 0
  double max_upper_violation = 0.0;   // max over nodes of A(w) - 1, floored at 0
  double max_convexity_violation = 0.0;
  std::size_t worst_bound_node = 0;
  std::size_t convexity_pairs = 0;
  bool pass(double tol = 1e-9) const;
};

// Bounds max(w) <= A(w) <= 1 at every node, plus midpoint convexity
// A(mid) <= (A(a) + A(b)) / 2 over node pairs a, b = a + 2d of full cells,
// where d runs over the unit steps e_i and e_i - e_j of the cell lattice; the
// midpoint a + d is then itself a full-cell node.
ShapeReport check_shape(const DependenceSurface& surface, int p);

}  // namespace evcop
