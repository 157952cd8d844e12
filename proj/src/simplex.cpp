#include "evcop/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "evcop/error.hpp"

namespace evcop {

namespace {

constexpr int kMaxDimension = 8;

void check_dimension(int p) {
  if (p < 2) throw InvalidArgument("simplex dimension p must be >= 2, got " + std::to_string(p));
  if (p > kMaxDimension)
    throw InvalidArgument("simplex dimension p must be <= " + std::to_string(kMaxDimension));
}

double factorial(int d) {
  double f = 1.0;
  for (int i = 2; i <= d; ++i) f *= i;
  return f;
}

// Visits every vector k of `parts` nonnegative integers with sum <= total,
// lexicographically; `descending` flips the order of every slot.
void for_each_bounded(int parts, int total, bool descending,
                      const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> k(static_cast<std::size_t>(parts), 0);
  std::function<void(int, int)> rec = [&](int slot, int remaining) {
    if (slot == parts) {
      fn(k);
      return;
    }
    if (descending) {
      for (int v = remaining; v >= 0; --v) {
        k[static_cast<std::size_t>(slot)] = v;
        rec(slot + 1, remaining - v);
      }
    } else {
      for (int v = 0; v <= remaining; ++v) {
        k[static_cast<std::size_t>(slot)] = v;
        rec(slot + 1, remaining - v);
      }
    }
  };
  rec(0, total);
}

// Volume of {y in [0,1]^d : sum y <= r} for integer r (Irwin-Hall cdf).
double cut_cube_volume(int d, int r) {
  if (r >= d) return 1.0;
  double s = 0.0;
  for (int i = 0; i <= r; ++i) {
    const double term = static_cast<double>(binomial(d, i)) * std::pow(r - i, d);
    s += (i % 2 == 0) ? term : -term;
  }
  return s / factorial(d);
}

// Common centroid coordinate of {y in [0,1]^d : sum y <= r}; by symmetry it
// is E[S | S <= r] / d with S the Irwin-Hall sum.
double cut_cube_centroid(int d, int r) {
  if (r >= d) return 0.5;
  double first_moment = 0.0;
  for (int i = 0; i <= r; ++i) {
    const double rem = r - i;
    const double term = static_cast<double>(binomial(d, i)) *
                        (std::pow(rem, d + 1) / (d + 1) + i * std::pow(rem, d) / d);
    first_moment += (i % 2 == 0) ? term : -term;
  }
  first_moment /= factorial(d - 1);
  return first_moment / cut_cube_volume(d, r) / d;
}

}  // namespace

SimplexPoint::SimplexPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw InvalidArgument("simplex point needs at least 2 coordinates");
  double sum = 0.0;
  for (double c : coords_) {
    if (!(c >= 0.0) || !std::isfinite(c))
      throw InvalidArgument("simplex coordinates must be finite and nonnegative");
    sum += c;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance)
    throw InvalidArgument("simplex coordinates must sum to 1 (got " + std::to_string(sum) + ")");
  if (sum != 1.0)
    for (double& c : coords_) c /= sum;
}

SimplexPoint SimplexPoint::vertex(std::size_t p, std::size_t j) {
  if (j >= p) throw InvalidArgument("vertex index out of range");
  std::vector<double> c(p, 0.0);
  c[j] = 1.0;
  return SimplexPoint(std::move(c), Unchecked{});
}

SimplexPoint SimplexPoint::barycenter(std::size_t p) {
  return SimplexPoint(std::vector<double>(p, 1.0 / static_cast<double>(p)), Unchecked{});
}

double SimplexPoint::max() const noexcept {
  return *std::max_element(coords_.begin(), coords_.end());
}

std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

AtomGrid::AtomGrid(int p, int m) : p_(p), m_(m) {
  check_dimension(p);
  if (m < 1) throw InvalidArgument("grid resolution m must be >= 1, got " + std::to_string(m));
  const std::size_t count = binomial(m + p - 1, p - 1);
  points_.reserve(count);
  comps_.reserve(count * static_cast<std::size_t>(p));
  for_each_bounded(p - 1, m, /*descending=*/true, [&](const std::vector<int>& head) {
    const int last = m - std::accumulate(head.begin(), head.end(), 0);
    std::vector<double> c(static_cast<std::size_t>(p));
    for (int j = 0; j < p - 1; ++j) {
      c[static_cast<std::size_t>(j)] = static_cast<double>(head[static_cast<std::size_t>(j)]) / m;
      comps_.push_back(head[static_cast<std::size_t>(j)]);
    }
    c[static_cast<std::size_t>(p - 1)] = static_cast<double>(last) / m;
    comps_.push_back(last);
    points_.push_back(SimplexPoint(std::move(c), SimplexPoint::Unchecked{}));
  });
}

std::span<const int> AtomGrid::composition(std::size_t i) const {
  return std::span<const int>(comps_).subspan(i * static_cast<std::size_t>(p_),
                                              static_cast<std::size_t>(p_));
}

std::size_t AtomGrid::index_of(std::span<const int> k) const {
  if (k.size() != static_cast<std::size_t>(p_)) return size();
  int total = 0;
  for (int v : k) {
    if (v < 0) return size();
    total += v;
  }
  if (total != m_) return size();
  // Count compositions preceding k in descending lexicographic order.
  std::size_t rank = 0;
  int remaining = m_;
  for (int j = 0; j < p_ - 1; ++j) {
    const int parts_left = p_ - j - 1;
    for (int t = k[static_cast<std::size_t>(j)] + 1; t <= remaining; ++t)
      rank += binomial(remaining - t + parts_left - 1, parts_left - 1);
    remaining -= k[static_cast<std::size_t>(j)];
  }
  return rank;
}

std::size_t AtomGrid::vertex_index(std::size_t j) const {
  std::vector<int> k(static_cast<std::size_t>(p_), 0);
  k.at(j) = m_;
  return index_of(k);
}

AtomGrid enumerate_grid(int p, int m) { return AtomGrid(p, m); }

std::vector<int> cell_composition(const SimplexPoint& t, int m) {
  if (m < 1) throw InvalidArgument("grid resolution m must be >= 1");
  const std::size_t p = t.dim();
  std::vector<int> k(p, 0);
  std::vector<bool> snapped(p, false);
  int head = 0;
  for (std::size_t j = 0; j + 1 < p; ++j) {
    const double x = m * t[j];
    int kj = static_cast<int>(std::floor(x));
    if (x - kj > 1.0 - 1e-9) {
      ++kj;
      snapped[j] = true;
    }
    k[j] = kj;
    head += kj;
  }
  // Snapping can push the head sum past m only when t_p is numerically zero.
  for (std::size_t j = 0; head > m && j + 1 < p; ++j) {
    if (snapped[j]) {
      --k[j];
      --head;
    }
  }
  k[p - 1] = m - head;
  return k;
}

SimplexPoint cell_of(const SimplexPoint& t, int m) {
  const auto k = cell_composition(t, m);
  std::vector<double> c(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) c[j] = static_cast<double>(k[j]) / m;
  return SimplexPoint(std::move(c), SimplexPoint::Unchecked{});
}

double QuadratureRule::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

bool QuadratureRule::same_layout(const QuadratureRule& other) const {
  return this == &other ||
         (p == other.p && subdivisions == other.subdivisions && size() == other.size());
}

QuadratureRule midpoint_rule(int p, int subdivisions) {
  check_dimension(p);
  if (subdivisions < 1)
    throw InvalidArgument("quadrature subdivisions N must be >= 1, got " + std::to_string(subdivisions));
  const int d = p - 1;
  const double h = 1.0 / subdivisions;
  const double cube = std::pow(h, d);

  QuadratureRule rule;
  rule.p = p;
  rule.subdivisions = subdivisions;
  // Cell corners with sum N are single points of the face; skip them.
  for_each_bounded(d, subdivisions - 1, /*descending=*/false, [&](const std::vector<int>& k) {
    const int r = subdivisions - std::accumulate(k.begin(), k.end(), 0);
    const double offset = cut_cube_centroid(d, r);
    std::vector<double> c(static_cast<std::size_t>(p));
    double head = 0.0;
    for (int j = 0; j < d; ++j) {
      c[static_cast<std::size_t>(j)] = (k[static_cast<std::size_t>(j)] + offset) * h;
      head += c[static_cast<std::size_t>(j)];
    }
    c[static_cast<std::size_t>(d)] = std::max(0.0, 1.0 - head);
    rule.nodes.push_back(SimplexPoint(std::move(c), SimplexPoint::Unchecked{}));
    rule.weights.push_back(cube * cut_cube_volume(d, r));
    rule.corners.insert(rule.corners.end(), k.begin(), k.end());
    rule.full_cell.push_back(r >= d);
  });
  return rule;
}

double l2_inner(std::span<const double> f, std::span<const double> g, const QuadratureRule& rule) {
  if (f.size() != rule.size() || g.size() != rule.size())
    throw InvalidArgument("l2_inner: value count does not match quadrature nodes");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += rule.weights[i] * (f[i] * g[i]);
  return s;
}

}  // namespace evcop
