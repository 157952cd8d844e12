#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace evcop {

// Absolute tolerance on the coordinate sum of a simplex point.
inline constexpr double kSimplexTolerance = 1e-12;

// A point of the unit simplex: p nonnegative barycentric weights summing to 1.
class SimplexPoint {
 public:
  // Validates and, when the sum is within kSimplexTolerance of 1,
  // renormalizes. Throws InvalidArgument otherwise.
  explicit SimplexPoint(std::vector<double> coords);

  // The j-th standard basis vector of R^p.
  static SimplexPoint vertex(std::size_t p, std::size_t j);
  static SimplexPoint barycenter(std::size_t p);

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t j) const { return coords_[j]; }
  std::span<const double> coords() const noexcept { return coords_; }
  double max() const noexcept;

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

 private:
  struct Unchecked {};
  SimplexPoint(std::vector<double> coords, Unchecked) : coords_(std::move(coords)) {}
  friend class AtomGrid;
  friend SimplexPoint cell_of(const SimplexPoint&, int);
  friend struct QuadratureRule midpoint_rule(int, int);

  std::vector<double> coords_;
};

// The atom grid: all points (k_1/m, ..., k_p/m) with nonnegative integers k
// summing to m. Canonical order is lexicographic on (k_1, ..., k_{p-1}),
// descending, so the first atom is e_1 and the last is e_p.
class AtomGrid {
 public:
  AtomGrid(int p, int m);

  int p() const noexcept { return p_; }
  int m() const noexcept { return m_; }
  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<SimplexPoint>& points() const noexcept { return points_; }
  const SimplexPoint& operator[](std::size_t i) const { return points_[i]; }
  // Integer composition k of atom i (sums to m).
  std::span<const int> composition(std::size_t i) const;

  // Position of the atom with composition k, or size() when k is not a
  // valid composition of m into p parts.
  std::size_t index_of(std::span<const int> k) const;
  std::size_t vertex_index(std::size_t j) const;

 private:
  int p_;
  int m_;
  std::vector<SimplexPoint> points_;
  std::vector<int> comps_;  // size() * p, row-major
};

AtomGrid enumerate_grid(int p, int m);

// binomial(n, k) as size_t; small arguments only.
std::size_t binomial(int n, int k);

// Integer corner of the partition cell containing t: k_j = floor(m t_j) for
// j < p and k_p = m - sum. Grid points map to themselves up to rounding of
// m * t_j within 1e-9 of an integer.
std::vector<int> cell_composition(const SimplexPoint& t, int m);

// The grid point v with t in the half-open cell v_j <= t_j < v_j + 1/m, j < p.
SimplexPoint cell_of(const SimplexPoint& t, int m);

// Midpoint rule on the partition of the simplex into cells of side 1/N.
// Cells with empty interior are dropped; each remaining node is the
// barycenter of its cell and carries the exact cell volume in the
// (w_1, ..., w_{p-1}) parametrization, so weights sum to 1/(p-1)!.
struct QuadratureRule {
  int p = 0;
  int subdivisions = 0;
  std::vector<SimplexPoint> nodes;
  std::vector<double> weights;
  // Composition of the cell corner of each node, size() * (p - 1).
  std::vector<int> corners;
  // True when the cell is a full cube (not cut by the simplex face).
  std::vector<bool> full_cell;

  std::size_t size() const noexcept { return nodes.size(); }
  double total_weight() const;
  bool same_layout(const QuadratureRule& other) const;
};

QuadratureRule midpoint_rule(int p, int subdivisions);

// sum_i weight_i f_i g_i
double l2_inner(std::span<const double> f, std::span<const double> g,
                const QuadratureRule& rule);

}  // namespace evcop
