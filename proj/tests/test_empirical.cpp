#include <doctest.h>

#include <cmath>
#include <random>

#include "evcop/empirical.hpp"
#include "evcop/error.hpp"
#include "support.hpp"

using namespace evcop;

TEST_SUITE("empirical") {

TEST_CASE("pseudo-observation examples") {
  const DataMatrix d(3, 2, {3.2, 10.0, 1.1, 30.0, 5.0, 20.0});
  const auto s = pseudo_observations(d);
  CHECK(s(0, 0) == 0.5);
  CHECK(s(1, 0) == 0.25);
  CHECK(s(2, 0) == 0.75);
  CHECK(s(0, 1) == 0.25);
  CHECK(s.neg_log_row(1)[0] == doctest::Approx(std::log(4.0)));
  CHECK(s.log_neg_log_row(1)[0] == doctest::Approx(std::log(std::log(4.0))));

  const auto one = pseudo_observations(DataMatrix(1, 3, {7.0, -1.0, 2.0}));
  for (std::size_t j = 0; j < 3; ++j) CHECK(one(0, j) == 0.5);
}

TEST_CASE("ties are rejected with the column") {
  const DataMatrix d(3, 2, {0.1, 1.0, 0.2, 2.0, 0.3, 2.0});
  CHECK(find_tied_column(d) == std::optional<std::size_t>(1));
  try {
    pseudo_observations(d);
    FAIL("expected TiesPresent");
  } catch (const TiesPresent& e) {
    CHECK(e.column() == 1);
  }
  CHECK_THROWS_AS(DataMatrix(2, 1, {1.0, 2.0}), InvalidArgument);
  CHECK_THROWS_AS(DataMatrix(1, 2, {NAN, 2.0}), InvalidArgument);
}

TEST_CASE("columns of pseudo-observations are rank permutations") {
  std::mt19937_64 gen(1);
  const auto d = testing::random_data(37, 4, gen);
  const auto s = pseudo_observations(d);
  for (std::size_t j = 0; j < 4; ++j) {
    std::vector<int> seen(38, 0);
    for (std::size_t i = 0; i < 37; ++i) {
      const double r = s(i, j) * 38.0;
      CHECK(std::abs(r - std::round(r)) < 1e-9);
      ++seen[static_cast<std::size_t>(std::lround(r))];
    }
    for (int r = 1; r <= 37; ++r) CHECK(seen[static_cast<std::size_t>(r)] == 1);
  }
}

TEST_CASE("rank invariance") {
  std::mt19937_64 gen(2);
  const auto d = testing::random_data(25, 3, gen);
  std::vector<double> x = d.values();
  for (std::size_t i = 0; i < 25; ++i) x[i * 3 + 1] = std::exp(x[i * 3 + 1]);
  for (std::size_t i = 0; i < 25; ++i) x[i * 3 + 2] = 5.0 * x[i * 3 + 2] * x[i * 3 + 2] * x[i * 3 + 2] - 1.0;
  CHECK(pseudo_observations(d).values() == pseudo_observations(DataMatrix(25, 3, x)).values());
}

TEST_CASE("empirical copula examples") {
  const auto s = testing::comonotone_pair();
  CHECK(empirical_copula(s, std::vector<double>{2.0 / 3, 2.0 / 3}) == 1.0);
  CHECK(empirical_copula(s, std::vector<double>{0.5, 0.5}) == 0.5);
  CHECK(empirical_copula(s, std::vector<double>{0.0, 0.9}) == 0.0);
  CHECK(empirical_copula(s, std::vector<double>{1.0, 1.0}) == 1.0);
  CHECK(empirical_copula(s, std::vector<double>{0.3, 1.0}) == 0.0);
  CHECK_THROWS_AS(empirical_copula(s, std::vector<double>{0.5}), InvalidArgument);
}

TEST_CASE("df variant examples") {
  const DataMatrix d(2, 2, {1.0, 10.0, 2.0, 20.0});
  const auto s = pseudo_observations(d);
  CHECK(empirical_copula_df_variant(d, std::vector<double>{1.0, 1.0}) == 1.0);
  CHECK(empirical_copula_df_variant(d, std::vector<double>{0.0, 0.0}) == 0.0);
  const std::vector<double> u{0.5, 0.5};
  CHECK(std::abs(empirical_copula_df_variant(d, u) - empirical_copula(s, u)) <= 2.0 * 2 / 2);
  CHECK_THROWS_AS(empirical_copula_df_variant(DataMatrix(2, 2, {1.0, 1.0, 1.0, 2.0}), u), TiesPresent);
}

TEST_CASE("monotone in each coordinate; margins on the rank grid") {
  std::mt19937_64 gen(3);
  const std::size_t n = 30;
  const auto s = pseudo_observations(testing::random_data(n, 3, gen));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> u{u01(gen), u01(gen), u01(gen)};
    const double base = empirical_copula(s, u);
    for (std::size_t j = 0; j < 3; ++j) {
      auto v = u;
      v[j] = std::min(1.0, v[j] + 0.1 * u01(gen));
      CHECK(empirical_copula(s, v) >= base);
    }
  }
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t r = 0; r <= n + 1; ++r) {
      std::vector<double> u(3, 1.0);
      u[j] = static_cast<double>(r) / static_cast<double>(n + 1);
      const double expect = std::min(1.0, std::floor((n + 1) * u[j] + 1e-9) / static_cast<double>(n));
      CHECK(empirical_copula(s, u) == doctest::Approx(expect));
    }
  }
}

TEST_CASE("df variant stays within 2p/n of the rank copula") {
  std::mt19937_64 gen(4);
  for (std::size_t n : {5u, 20u, 60u}) {
    const auto d = testing::random_data(n, 2, gen);
    const auto s = pseudo_observations(d);
    double worst = 0.0;
    for (int a = 0; a <= 20; ++a) {
      for (int b = 0; b <= 20; ++b) {
        const std::vector<double> u{a / 20.0, b / 20.0};
        worst = std::max(worst, std::abs(empirical_copula(s, u) - empirical_copula_df_variant(d, u)));
      }
    }
    CHECK(worst <= 4.0 / static_cast<double>(n));
  }
}

}  // TEST_SUITE
