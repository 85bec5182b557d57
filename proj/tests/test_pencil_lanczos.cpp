#include <doctest.h>

#include <numbers>

#include "modalfit/errors.hpp"
#include "modalfit/fe.hpp"
#include "modalfit/lanczos.hpp"
#include "modalfit/pencil.hpp"
#include "oracles.hpp"

using namespace modalfit;

namespace {

// Pencil over the pattern of `pattern_source` from dense blocks (lower triangle scattered).
SparseSymMatrix on_pattern(const SparseSymMatrix& pattern_source, const Matrix& dense) {
  std::vector<Triplet> t;
  for (Index j = 0; j < dense.cols(); ++j) {
    for (Index i = j; i < dense.rows(); ++i) {
      if (dense(i, j) != 0.0) t.push_back({i, j, dense(i, j)});
    }
  }
  return SparseSymMatrix::from_triplets(pattern_source.pattern_ptr(), t);
}

ParametricPencil integer_pencil() {
  const Matrix full = Matrix::Ones(3, 3);
  const auto pat = SparseSymMatrix::from_dense(full);
  Matrix k0(3, 3), m0 = Matrix::Identity(3, 3), dk(3, 3), dm = Matrix::Zero(3, 3);
  k0 << 4, -1, 0, -1, 4, -1, 0, -1, 4;
  dk << 2, 1, 0, 1, 2, 0, 0, 0, 0;
  dm(2, 2) = 3;
  return ParametricPencil(on_pattern(pat, k0), on_pattern(pat, m0), {on_pattern(pat, dk), on_pattern(pat, Matrix::Zero(3, 3))},
                          {on_pattern(pat, Matrix::Zero(3, 3)), on_pattern(pat, dm)},
                          {{"E1", "MPa"}, {"rho1", "kg/m^3"}});
}

}  // namespace

TEST_CASE("pencil evaluation is affine") {
  const auto p = integer_pencil();
  const auto [k0, m0] = p.evaluate(Vector::Zero(2));
  CHECK(k0.to_dense() == p.base_stiffness().to_dense());
  CHECK(m0.to_dense() == p.base_mass().to_dense());

  const Vector x = (Vector(2) << 1, 3).finished(), y = (Vector(2) << 5, -1).finished();
  const Matrix avg = 0.5 * (p.evaluate(x).first.to_dense() + p.evaluate(y).first.to_dense());
  CHECK(p.evaluate(0.5 * (x + y)).first.to_dense() == avg);

  const Matrix diff = p.evaluate((Vector(2) << 2, 0).finished()).first.to_dense() -
                      p.evaluate((Vector(2) << 1, 0).finished()).first.to_dense();
  CHECK(diff == p.derivative(0).first.to_dense());
  CHECK(p.derivative(0).second.is_zero());
  CHECK(p.derivative(1).first.is_zero());
  CHECK_THROWS_AS(p.derivative(2), IndexError);
  CHECK_THROWS_AS(p.evaluate(Vector::Zero(3)), DimensionError);
}

TEST_CASE("arch pencil derivative matches finite differences") {
  const auto [mesh, mats] = fe::generate_arch_on_piers({2, 20, 3});
  const Vector truth = (Vector(3) << 5000, 2200, 4800).finished();
  const auto p = fe::assemble_parametric(mesh, mats).rescaled(ParameterScaling(truth));
  const Vector x = Vector::Ones(3);
  const double h = 1e-4;
  for (Index j = 0; j < 3; ++j) {
    Vector xh = x;
    xh[j] += h;
    const auto [k1, m1] = p.evaluate(xh);
    const auto [k0, m0] = p.evaluate(x);
    const Matrix fdk = (k1.to_dense() - k0.to_dense()) / h;
    const Matrix fdm = (m1.to_dense() - m0.to_dense()) / h;
    const auto [dk, dm] = p.derivative(j);
    CHECK((fdk - dk.to_dense()).norm() <= 1e-9 * std::max(1.0, dk.to_dense().norm()));
    CHECK((fdm - dm.to_dense()).norm() <= 1e-9 * std::max(1.0, dm.to_dense().norm()));
  }
}

TEST_CASE("default start and scaling") {
  CHECK(default_start(FeasibleBox(Vector::Constant(1, 0.0), Vector::Constant(1, 2.0)))[0] == 1.0);
  CHECK(default_start(FeasibleBox(Vector::Constant(1, 1000.0), Vector::Constant(1, 9000.0)))[0] == 5000.0);
  CHECK(default_start(FeasibleBox(Vector::Constant(1, -3.0), Vector::Constant(1, 3.0)))[0] == 0.0);
  CHECK_THROWS_AS(FeasibleBox(Vector::Constant(1, 2.0), Vector::Constant(1, 2.0)).validate(), InvalidArgument);

  const ParameterScaling s((Vector(2) << 2000, 1100).finished());
  const Vector x = (Vector(2) << 5000, 2200).finished();
  CHECK(s.to_scaled(s.reference()) == Vector::Ones(2));
  CHECK((s.to_physical(s.to_scaled(x)) - x).norm() <= 1e-12 * x.norm());

  const auto p = integer_pencil();
  const ParameterScaling s2((Vector(2) << 2, 4).finished());
  const auto q = p.rescaled(s2);
  const Vector z = (Vector(2) << 0.5, 0.25).finished();
  CHECK((q.evaluate(z).first.to_dense() - p.evaluate(s2.to_physical(z)).first.to_dense()).norm() <= 1e-14);
  CHECK((q.evaluate(z).second.to_dense() - p.evaluate(s2.to_physical(z)).second.to_dense()).norm() <= 1e-14);

  CHECK_NOTHROW(p.check_definite_on(FeasibleBox(Vector::Zero(2), Vector::Ones(2))));
  CHECK_THROWS_AS(p.check_definite_on(FeasibleBox(Vector::Constant(2, -10.0), Vector::Ones(2))), InvalidArgument);
}

TEST_CASE("lanczos on a diagonal pencil") {
  std::vector<Triplet> t{{0, 0, 1}, {1, 1, 2}, {2, 2, 3}};
  const auto k = SparseSymMatrix::from_triplets(3, t);
  LanczosOptions o;
  o.count = 1;
  const auto r = lanczos_smallest(k, SparseSymMatrix::identity(3), o);
  CHECK(r.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(r.eigenvectors(0, 0)) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(r.eigenvectors(1, 0)) <= 1e-6);

  o.count = 4;
  try {
    (void)lanczos_smallest(k, SparseSymMatrix::identity(3), o);
    FAIL("expected LanczosError");
  } catch (const LanczosError& e) {
    CHECK(e.kind() == LanczosError::Kind::SubspaceExhausted);
  }
}

TEST_CASE("lanczos on K = M") {
  const auto m = oracle::random_spd(40, 2);
  LanczosOptions o;
  o.count = 2;
  const auto r = lanczos_smallest(m, m, o);
  CHECK(r.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("lanczos on a random pencil, n = 300") {
  const auto [k, m] = oracle::random_pencil(300, 17);
  LanczosOptions o;
  o.count = 5;
  o.tolerance = 1e-5;
  o.seed = 42;
  const auto r = lanczos_smallest(k, m, o);
  const Vector ref = oracle::generalized_eigenvalues(k.to_dense(), m.to_dense()).head(5);
  for (Index i = 0; i < 5; ++i) {
    CHECK(std::abs(r.eigenvalues[i] - ref[i]) <= 1e-5 * ref[i]);
    const Vector v = r.eigenvectors.col(i);
    const Vector mv = m.multiply(v);
    CHECK((k.multiply(v) - r.eigenvalues[i] * mv).norm() <= 10 * o.tolerance * r.eigenvalues[i] * mv.norm());
  }
  const Matrix gram = r.basis.transpose() * m.multiply_block(r.basis);
  CHECK((gram - Matrix::Identity(r.steps, r.steps)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((r.mass_basis - m.multiply_block(r.basis)).norm() <= 1e-12 * r.mass_basis.norm());

  // T_m is the projection of M K^{-1} M, and its top Ritz values reciprocate to lambda.
  const Matrix tm = r.tridiagonal();
  const Matrix proj = r.mass_basis.transpose() * Eigen::LLT<Matrix>(k.to_dense()).solve(r.mass_basis);
  CHECK((tm - proj).norm() <= 1e-8 * tm.norm());
  Eigen::SelfAdjointEigenSolver<Matrix> es(tm);
  for (Index i = 0; i < 5; ++i) {
    CHECK(1.0 / es.eigenvalues()[r.steps - 1 - i] == doctest::Approx(r.eigenvalues[i]).epsilon(1e-12));
  }

  // Largest Ritz value of the leading sections is nondecreasing in m.
  double prev = 0.0;
  for (Index j = 1; j <= r.steps; ++j) {
    Eigen::SelfAdjointEigenSolver<Matrix> ej(tm.topLeftCorner(j, j), Eigen::EigenvaluesOnly);
    CHECK(ej.eigenvalues()[j - 1] >= prev * (1 - 1e-14));
    prev = ej.eigenvalues()[j - 1];
  }

  const auto r2 = lanczos_smallest(k, m, o);
  CHECK(r2.tridiagonal() == tm);
  CHECK(r2.eigenvalues == r.eigenvalues);
}

TEST_CASE("lanczos basis cap") {
  const auto [k, m] = oracle::random_pencil(200, 3);
  LanczosOptions o;
  o.count = 5;
  o.tolerance = 1e-14;
  o.max_basis = 6;
  try {
    (void)lanczos_smallest(k, m, o);
    FAIL("expected LanczosError");
  } catch (const LanczosError& e) {
    CHECK(e.kind() == LanczosError::Kind::MaxIterations);
    CHECK(e.best_estimates().size() == 5);
  }
}

TEST_CASE("frequencies from eigenvalues") {
  const double two_pi = 2.0 * std::numbers::pi;
  const Vector f = frequencies_from_eigenvalues((Vector(2) << two_pi * two_pi, 0.0).finished());
  CHECK(f[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f[1] == 0.0);
  CHECK_THROWS_AS(frequencies_from_eigenvalues(Vector::Constant(1, -1.0)), InvalidArgument);
}

TEST_CASE("arch frequencies at low resolution match the dense oracle") {
  const auto [mesh, mats] = fe::generate_arch_on_piers({2, 20, 3});
  const auto p = fe::assemble_parametric(mesh, mats);
  const Vector x = (Vector(3) << 5000, 2200, 4800).finished();
  const auto [k, m] = p.evaluate(x);
  LanczosOptions o;
  o.count = 5;
  o.tolerance = 1e-10;
  const auto r = lanczos_smallest(k, m, o);
  const auto [kd, md] = oracle::dense_assembly(mesh, oracle::with_parameters(mats, x));
  const Vector ref = oracle::generalized_eigenvalues(kd, md).head(5);
  CHECK(oracle::relative_error(r.eigenvalues, ref) <= 1e-9);
  const Vector f = frequencies_from_eigenvalues(r.eigenvalues);
  CHECK(f[0] > 1.0);
  CHECK(f[4] < 200.0);
}
