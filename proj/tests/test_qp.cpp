#include <doctest.h>

#include <random>

#include "evcop/projection.hpp"
#include "evcop/qp.hpp"
#include "support.hpp"

using namespace evcop;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

QuadraticProgram segment_qp() {
  QuadraticProgram qp;
  qp.D = MatrixXd::Identity(2, 2);
  qp.d = VectorXd(2);
  qp.d << 1.0, -1.0;
  qp.Ceq = MatrixXd::Ones(1, 2);
  qp.ceq = VectorXd::Ones(1);
  return qp;
}

// A random pilot on `rule`: a valid surface, perturbed.
DependenceSurface noisy_pilot(const std::shared_ptr<const QuadratureRule>& rule, std::mt19937_64& gen, double noise) {
  std::normal_distribution<double> z(0.0, noise);
  auto s = surface_of(testing::random_measure(rule->p, 4, gen), rule);
  const double tilt = z(gen);
  for (std::size_t k = 0; k < s.size(); ++k) s.values[k] += z(gen) + tilt * rule->nodes[k][0];
  return s;
}

}  // namespace

TEST_SUITE("qp") {

TEST_CASE("segment example") {
  const auto sol = solve_qp(segment_qp());
  CHECK(sol.h(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.h(1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sol.kkt.max() <= 1e-7);
  // One-dimensional scan of h = (t, 1 - t).
  double best = 1e300;
  for (int i = 0; i <= 1000; ++i) {
    VectorXd h(2);
    h << i / 1000.0, 1.0 - i / 1000.0;
    best = std::min(best, segment_qp().objective(h));
  }
  CHECK(sol.objective == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("single feasible point") {
  auto rule = testing::shared_rule(2, 16);
  std::mt19937_64 gen(1);
  for (int t = 0; t < 5; ++t) {
    const auto pilot = noisy_pilot(rule, gen, 0.2);
    const auto r = project(pilot, 1, rule);
    CHECK(r.masses[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.masses[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("comonotone pilot on the m = 2 grid") {
  auto rule = testing::shared_rule(2, 40);
  const auto pilot = surface_of(SpectralMeasure::comonotone(2), rule);
  const auto r = project(pilot, 2, rule);
  CHECK(r.masses[0] <= 1e-8);
  CHECK(r.masses[1] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(r.masses[2] <= 1e-8);
  CHECK(r.objective <= 1e-12);
}

TEST_CASE("infeasible start and iteration cap") {
  QuadraticProgram qp = segment_qp();
  qp.Ceq(0, 0) = 0.5;
  qp.Ceq(0, 1) = 0.5;
  CHECK_NOTHROW(solve_qp(qp));
  qp.Ceq = MatrixXd::Ones(2, 2);
  qp.ceq = VectorXd::Ones(2);
  CHECK_THROWS_AS(solve_qp(qp), QpInfeasible);

  auto rule = testing::shared_rule(3, 24);
  std::mt19937_64 gen(5);
  const auto pilot = noisy_pilot(rule, gen, 0.05);
  const ProjectionContext ctx(4, rule);
  QpOptions opts;
  opts.max_iterations = 1;
  try {
    solve_qp(ctx.assemble(pilot), opts);
    FAIL("expected QpMaxIterations");
  } catch (const QpMaxIterations& e) {
    CHECK(e.best().h.size() == static_cast<Eigen::Index>(ctx.grid().size()));
    CHECK(e.best().iterations == 1);
  }
}

TEST_CASE("malformed programs are rejected") {
  QuadraticProgram qp = segment_qp();
  qp.D(0, 1) = 0.5;
  CHECK_THROWS_AS(solve_qp(qp), InvalidArgument);
  qp = segment_qp();
  qp.d = VectorXd::Ones(3);
  CHECK_THROWS_AS(solve_qp(qp), InvalidArgument);
}

TEST_CASE("matches exhaustive search for p = 2, m <= 3") {
  std::mt19937_64 gen(77);
  auto rule = testing::shared_rule(2, 60);
  for (int m = 1; m <= 3; ++m) {
    const ProjectionContext ctx(m, rule);
    for (int t = 0; t < 8; ++t) {
      const auto qp = ctx.assemble(noisy_pilot(rule, gen, 0.1));
      const auto sol = solve_qp(qp);
      CHECK(sol.kkt.max() <= 1e-7);
      const double brute = testing::brute_force_qp(qp, m, 1e-3);
      CHECK(std::abs(sol.objective - brute) <= 1e-5);
      CHECK(sol.objective <= brute + 1e-12);
    }
  }
}

TEST_CASE("kkt residuals flag non-optimal points") {
  auto rule = testing::shared_rule(3, 24);
  std::mt19937_64 gen(3);
  const ProjectionContext ctx(4, rule);
  const auto qp = ctx.assemble(noisy_pilot(rule, gen, 0.05));
  const auto sol = solve_qp(qp);
  CHECK(kkt_residuals(qp, sol.h).max() <= 1e-7);
  VectorXd start = VectorXd::Zero(qp.size());
  for (std::size_t j = 0; j < 3; ++j) start(static_cast<Eigen::Index>(ctx.grid().vertex_index(j))) = 1.0;
  if (qp.objective(start) > sol.objective + 1e-6) CHECK(kkt_residuals(qp, start).max() > 1e-7);
}

}  // TEST_SUITE
