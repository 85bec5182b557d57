#include <doctest.h>

#include <random>
#include <sstream>

#include "modalfit/cholesky.hpp"
#include "modalfit/errors.hpp"
#include "modalfit/matrix_market.hpp"
#include "oracles.hpp"

using namespace modalfit;

TEST_CASE("matvec small cases") {
  const Vector v = (Vector(3) << 1, 2, 3).finished();
  CHECK((SparseSymMatrix::identity(3).multiply(v) - v).norm() == 0.0);

  std::vector<Triplet> t{{0, 0, 2}, {1, 0, 1}, {1, 1, 3}};
  const auto a = SparseSymMatrix::from_triplets(2, t);
  const Vector r = a.multiply(Vector::Ones(2));
  CHECK(r[0] == 3.0);
  CHECK(r[1] == 4.0);
  CHECK_THROWS_AS(a.multiply(v), DimensionError);
}

TEST_CASE("matvec matches dense oracle") {
  const auto a = oracle::random_spd(100, 7);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Vector v(100);
  for (auto& x : v) x = g(rng);
  const Vector dense = a.to_dense() * v;
  CHECK(oracle::relative_error(a.multiply(v), dense) <= 1e-13);
  CHECK(a.to_dense() == a.to_dense().transpose());
  CHECK(a.quadratic_form(v) == doctest::Approx(v.dot(dense)).epsilon(1e-13));
}

TEST_CASE("matvec is exactly linear on integer data") {
  std::vector<Triplet> t{{0, 0, 4}, {2, 0, -1}, {1, 1, 5}, {2, 1, 2}, {2, 2, 7}};
  const auto a = SparseSymMatrix::from_triplets(3, t);
  const Vector u = (Vector(3) << 1, -2, 3).finished();
  const Vector w = (Vector(3) << 4, 0, -5).finished();
  CHECK(a.multiply(3.0 * u + 2.0 * w) == 3.0 * a.multiply(u) + 2.0 * a.multiply(w));
}

TEST_CASE("triplets: duplicates summed, upper triangle mirrored") {
  std::vector<Triplet> t{{0, 1, 1.5}, {1, 0, 0.5}, {0, 0, 1}, {0, 0, 1}, {1, 1, 4}};
  const auto a = SparseSymMatrix::from_triplets(2, t);
  CHECK(a.coeff(0, 1) == 2.0);
  CHECK(a.coeff(1, 0) == 2.0);
  CHECK(a.coeff(0, 0) == 2.0);
  CHECK(a.pattern().find(1, 0) >= 0);
  std::vector<Triplet> bad{{2, 0, 1}};
  CHECK_THROWS_AS(SparseSymMatrix::from_triplets(2, bad), IndexError);
}

TEST_CASE("plus_scaled requires a shared pattern") {
  const auto a = oracle::random_spd(20, 1);
  const auto b = SparseSymMatrix::zeros_like(a);
  CHECK(a.plus_scaled(2.0, b).to_dense() == a.to_dense());
  CHECK_THROWS(a.plus_scaled(1.0, oracle::random_spd(20, 2)));
}

TEST_CASE("cholesky closed-form cases") {
  const auto f = cholesky_factorize(SparseSymMatrix::identity(4));
  CHECK(f.lower_dense() == Matrix::Identity(4, 4));
  const Vector b = (Vector(4) << 1, -2, 3, 0.5).finished();
  CHECK(f.solve(b) == b);

  std::vector<Triplet> t{{0, 0, 4}, {1, 0, 2}, {1, 1, 3}};
  const auto a = SparseSymMatrix::from_triplets(2, t);
  const auto f2 = cholesky_factorize(a, Ordering::Natural);
  const Matrix l = f2.lower_dense();
  CHECK(l(0, 0) == doctest::Approx(2.0));
  CHECK(l(0, 1) == 0.0);
  CHECK(l(1, 0) == doctest::Approx(1.0));
  CHECK(l(1, 1) == doctest::Approx(std::sqrt(2.0)));
  const Vector x = f2.solve((Vector(2) << 6, 5).finished());
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(1.0));
  CHECK_THROWS_AS(f2.solve(Vector::Ones(3)), DimensionError);
}

TEST_CASE("cholesky n = 200 against dense oracle") {
  const auto a = oracle::random_spd(200, 11);
  const Matrix ad = a.to_dense();
  const auto f = cholesky_factorize(a);
  const Matrix p = f.permutation_dense();
  const Matrix l = f.lower_dense();
  CHECK((p * ad * p.transpose() - l * l.transpose()).norm() / ad.norm() <= 1e-12);
  CHECK(l.diagonal().minCoeff() > 0.0);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  Vector b(200);
  for (auto& v : b) v = g(rng);
  const Vector x = f.solve(b);
  CHECK((ad * x - b).norm() / b.norm() <= 1e-10);
  const Vector dense = Eigen::LLT<Matrix>(ad).solve(b);
  CHECK(oracle::relative_error(x, dense) <= 1e-10);

  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Vector v(200);
    for (auto& e : v) e = g(rng);
    worst = std::max(worst, oracle::relative_error(f.solve(a.multiply(v)), v));
  }
  CHECK(worst <= 1e-10);

  Matrix rhs(200, 3);
  for (Index j = 0; j < 3; ++j) {
    for (Index i = 0; i < 200; ++i) rhs(i, j) = g(rng);
  }
  const Matrix xs = f.solve_block(rhs);
  CHECK((ad * xs - rhs).norm() / rhs.norm() <= 1e-10);
}

TEST_CASE("ordering reduces fill on a grid Laplacian") {
  const Index side = 20, n = side * side;
  std::vector<Triplet> t;
  for (Index i = 0; i < side; ++i) {
    for (Index j = 0; j < side; ++j) {
      const Index k = i * side + j;
      t.push_back({k, k, 4.1});
      if (j + 1 < side) t.push_back({k + 1, k, -1});
      if (i + 1 < side) t.push_back({k + side, k, -1});
    }
  }
  const auto a = SparseSymMatrix::from_triplets(n, t);
  const auto natural = cholesky_factorize(a, Ordering::Natural);
  const auto amd = cholesky_factorize(a, Ordering::ApproximateMinimumDegree);
  CHECK(amd.factor_nonzeros() < natural.factor_nonzeros());
  CHECK(cholesky_factorize(a).order() == amd.order());
}

TEST_CASE("non-positive pivot names its index") {
  std::vector<Triplet> t{{0, 0, 1}, {1, 1, 1}, {2, 2, -1}};
  const auto a = SparseSymMatrix::from_triplets(3, t);
  try {
    (void)cholesky_factorize(a, Ordering::Natural);
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& e) {
    CHECK(e.pivot() == 2);
  }
  std::vector<Triplet> t2{{0, 0, 1}, {1, 0, 2}, {1, 1, 1}};
  CHECK_THROWS_AS(cholesky_factorize(SparseSymMatrix::from_triplets(2, t2)), NotPositiveDefinite);
}

TEST_CASE("matrix market round trip") {
  const auto a = oracle::random_spd(30, 4);
  std::stringstream ss;
  write_matrix_market(ss, a);
  const auto b = read_matrix_market(ss);
  CHECK(b.to_dense() == a.to_dense());

  std::stringstream upper(
      "%%MatrixMarket matrix coordinate real symmetric\n% comment\n2 2 2\n1 1 2.0\n1 2 -1.0\n");
  const auto c = read_matrix_market(upper);
  CHECK(c.coeff(1, 0) == -1.0);

  std::stringstream general(
      "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 2 5\n2 1 5\n2 2 1\n");
  CHECK(read_matrix_market(general).coeff(0, 1) == 5.0);
  std::stringstream skew(
      "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 5\n2 1 4\n");
  CHECK_THROWS(read_matrix_market(skew));
  std::stringstream garbage("not a matrix\n");
  CHECK_THROWS(read_matrix_market(garbage));
}
