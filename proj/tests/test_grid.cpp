#include <doctest.h>

#include <stdexcept>

#include "voidplace/grid.hpp"
#include "voidplace/rng.hpp"

using voidplace::Grid1D;
using voidplace::Rng;

TEST_CASE("cell centers are origin + (i + 0.5) * spacing") {
  const Grid1D grid(0.0, 50.0, 10);
  CHECK(grid.cell_center(0) == 25.0);
  CHECK(grid.cell_center(9) == 475.0);
  CHECK(grid.length_m() == 500.0);

  const Grid1D shifted(100.0, 50.0, 10);
  CHECK(shifted.cell_center(0) == 125.0);

  CHECK_THROWS_AS(grid.cell_center(-1), std::out_of_range);
  CHECK_THROWS_AS(grid.cell_center(10), std::out_of_range);
}

TEST_CASE("construction rejects bad spacing and cell counts") {
  CHECK_THROWS_AS(Grid1D(0.0, 0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(Grid1D(0.0, -1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(Grid1D(0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("integrate applies the midpoint rule") {
  const Grid1D grid(0.0, 50.0, 10);
  CHECK(grid.integrate(Eigen::VectorXd::Ones(10)) == 500.0);
  CHECK(grid.integrate(Eigen::VectorXd::Zero(10)) == 0.0);

  const Grid1D small(0.0, 0.5, 3);
  Eigen::VectorXd values(3);
  values << 1.0, 2.0, 3.0;
  CHECK(small.integrate(values) == 3.0);

  CHECK_THROWS_AS(grid.integrate(Eigen::VectorXd::Ones(9)),
                  std::invalid_argument);
}

TEST_CASE("integrate is linear and preserves non-negativity") {
  const int n = 64;
  const Grid1D grid(0.0, 12.5, n);
  Rng rng(20260809);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd u(n), v(n);
    for (int i = 0; i < n; ++i) {
      u[i] = 2.0 * rng.next_uniform() - 1.0;
      v[i] = 2.0 * rng.next_uniform() - 1.0;
    }
    const double a = 4.0 * rng.next_uniform() - 2.0;
    const double b = 4.0 * rng.next_uniform() - 2.0;
    const double lhs = grid.integrate(a * u + b * v);
    const double rhs = a * grid.integrate(u) + b * grid.integrate(v);
    const double scale =
        std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
    CHECK(std::fabs(lhs - rhs) <= 1e-12 * scale);

    CHECK(grid.integrate(u.cwiseAbs()) >= 0.0);
  }
}

TEST_CASE("pairwise_sum matches plain accumulation closely") {
  Rng rng(7);
  for (int n : {1, 2, 3, 5, 17, 100, 1024}) {
    std::vector<double> x(static_cast<std::size_t>(n));
    double plain = 0.0;
    for (auto& value : x) {
      value = rng.next_uniform() - 0.25;
      plain += value;
    }
    CHECK(voidplace::pairwise_sum(x.data(), x.size()) ==
          doctest::Approx(plain).epsilon(1e-13));
  }
}
