#include <doctest.h>

#include <random>

#include "arch_fixture.hpp"
#include "modalfit/errors.hpp"
#include "oracles.hpp"

using namespace modalfit;

namespace {

// K = diag(x1, 2), M = I.
ParametricPencil diagonal_pencil() {
  const auto pat = SparseSymMatrix::identity(2).pattern_ptr();
  std::vector<Triplet> k0{{1, 1, 2}}, dk{{0, 0, 1}}, m0{{0, 0, 1}, {1, 1, 1}}, z;
  return ParametricPencil(SparseSymMatrix::from_triplets(pat, k0), SparseSymMatrix::from_triplets(pat, m0),
                          {SparseSymMatrix::from_triplets(pat, dk), SparseSymMatrix::from_triplets(pat, z)},
                          {SparseSymMatrix::from_triplets(pat, z), SparseSymMatrix::from_triplets(pat, z)},
                          {{"E1", "MPa"}, {"E2", "MPa"}});
}

}  // namespace

TEST_CASE("weight modes") {
  const Vector w = make_weights(WeightMode::Uniform, Vector::Ones(4));
  for (Index i = 0; i < 4; ++i) CHECK(w[i] == doctest::Approx(0.5).epsilon(1e-15));

  const Vector r = make_weights(WeightMode::Relative, (Vector(2) << 1, 2).finished());
  CHECK(r[0] == doctest::Approx(2 / std::sqrt(5.0)).epsilon(1e-15));
  CHECK(r[1] == doctest::Approx(1 / std::sqrt(5.0)).epsilon(1e-15));

  const Vector tower = (Vector(4) << 1.05, 1.3, 4.19, 4.50).finished();
  const Vector rt = make_weights(WeightMode::Relative, tower);
  const Vector ut = make_weights(WeightMode::Uniform, tower);
  CHECK(rt.head(2).squaredNorm() > ut.head(2).squaredNorm());
  CHECK(rt.norm() == doctest::Approx(1.0).epsilon(1e-15));

  const Vector c = make_weights(WeightMode::Custom, tower, (Vector(4) << 3, 0, 4, 0).finished());
  CHECK(c[0] == doctest::Approx(0.6));
  CHECK(c[2] == doctest::Approx(0.8));

  CHECK_THROWS_AS(make_weights(WeightMode::Relative, (Vector(2) << 0, 2).finished()), InvalidArgument);
  CHECK_THROWS_AS(make_weights(WeightMode::Custom, tower, Vector::Zero(4)), InvalidArgument);
  CHECK_THROWS_AS(make_weights(WeightMode::Custom, tower, -Vector::Ones(4)), InvalidArgument);
  CHECK_THROWS_AS(make_weights(WeightMode::Custom, tower, Vector::Ones(3)), DimensionError);
}

TEST_CASE("mismatch arithmetic") {
  FrequencyTarget t{Vector::Constant(1, 1.0), Vector::Constant(1, 1.0)};
  CHECK(t.mismatch(Vector::Constant(1, 2.0)) == 1.0);
  CHECK(t.mismatch(Vector::Constant(1, 1.0)) == 0.0);
  CHECK_THROWS_AS(t.mismatch(Vector::Ones(2)), DimensionError);
}

TEST_CASE("diagonal pencil eigenvalue derivative") {
  const auto p = diagonal_pencil();
  const Vector x = (Vector(2) << 1.0, 7.0).finished();
  const auto [k, m] = p.evaluate(x);
  LanczosOptions o;
  o.count = 1;
  o.tolerance = 1e-12;
  const auto r = lanczos_smallest(k, m, o);
  const Matrix j = eigenvalue_jacobian(p, x, r);
  CHECK(j(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(j(0, 1) == 0.0);

  auto prob = UpdatingProblem::create(p, FeasibleBox(Vector::Constant(2, 0.5), Vector::Constant(2, 10.0)),
                                      Vector::Constant(1, 0.1), WeightMode::Uniform);
  const Vector g = full_gradient(prob, x, r);
  CHECK(g[1] == 0.0);
  CHECK(g[0] > 0.0);
}

TEST_CASE("problem validation") {
  const auto p = diagonal_pencil();
  const FeasibleBox box(Vector::Constant(2, 0.5), Vector::Constant(2, 10.0));
  CHECK_THROWS_AS(UpdatingProblem::create(p, box, (Vector(2) << 2, 1).finished(), WeightMode::Uniform),
                  InvalidArgument);
  CHECK_THROWS_AS(UpdatingProblem::create(p, box, (Vector(2) << -1, 1).finished(), WeightMode::Uniform),
                  InvalidArgument);
  CHECK_THROWS_AS(UpdatingProblem::create(p, box, Vector::Ones(3), WeightMode::Uniform), InvalidArgument);
  CHECK_THROWS_AS(UpdatingProblem::create(p, FeasibleBox(Vector::Ones(1), Vector::Constant(1, 2.0)),
                                          Vector::Ones(1), WeightMode::Uniform),
                  DimensionError);
  const ParametricPencil fixed(p.base_stiffness(), p.base_mass(), {}, {}, {});
  CHECK_THROWS_AS(UpdatingProblem::create(fixed, FeasibleBox(Vector(), Vector()), Vector::Ones(1),
                                          WeightMode::Uniform),
                  InvalidArgument);
  auto ok = UpdatingProblem::create(p, box, Vector::Ones(1), WeightMode::Uniform);
  ok.lanczos_tolerance = 0.0;
  CHECK_THROWS_AS(ok.validate(), InvalidArgument);
}

TEST_CASE("clustered eigenvalues are rejected") {
  CHECK_NOTHROW(check_separated((Vector(3) << 1, 2, 3).finished(), 1e-8));
  try {
    check_separated((Vector(3) << 1, 2, 2 + 1e-12).finished(), 1e-8);
    FAIL("expected ClusteredEigenvalues");
  } catch (const ClusteredEigenvalues& e) {
    CHECK(e.index() == 1);
  }
}

TEST_CASE("arch objective: self-consistency and gradient") {
  const auto a = fixture::arch(1e-12);
  const Vector truth_scaled = a.scaling.to_scaled(a.truth);
  const auto at_truth = evaluate_full(a.scaled, truth_scaled);
  CHECK(at_truth.value <= 1e-10);

  auto matched = a.scaled;
  const Vector x = (Vector(3) << 0.8, 1.1, 0.9).finished();
  const auto ev = evaluate_full(a.scaled, x);
  matched.target.measured = ev.frequencies;
  CHECK(evaluate_full(matched, x).value == 0.0);

  const Vector g = full_gradient(a.scaled, x, ev.lanczos);
  const Vector fd =
      oracle::central_difference([&](const Vector& z) { return evaluate_full(a.scaled, z).value; }, x, 1e-5);
  CHECK(oracle::relative_error(g, fd) <= 1e-6);
  CHECK(ev.value >= 0.0);
}

TEST_CASE("gradient direction is invariant under weight scaling") {
  const auto a = fixture::arch(1e-12);
  const Vector x = (Vector(3) << 0.8, 1.1, 0.9).finished();
  const auto ev = evaluate_full(a.scaled, x);
  auto doubled = a.scaled;
  doubled.target.weights *= 3.0;
  const auto ev2 = evaluate_full(doubled, x);
  CHECK(ev2.value == doctest::Approx(9.0 * ev.value).epsilon(1e-12));
  const Vector g1 = full_gradient(a.scaled, x, ev.lanczos), g2 = full_gradient(doubled, x, ev2.lanczos);
  CHECK((g2 - 9.0 * g1).norm() <= 1e-10 * g2.norm());
}
