#include <catch2/catch_amalgamated.hpp>

#include "densecode/qmat.hpp"

using namespace densecode;
using Catch::Approx;

namespace {

Matrix random_complex(Sampler& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.cgaussian();
  return m;
}

Matrix random_hermitian(Sampler& rng, Eigen::Index d) {
  const Matrix m = random_complex(rng, d, d);
  return (m + m.adjoint()) / 2.0;
}

}  // namespace

TEST_CASE("partial trace matches the elementwise definition") {
  Sampler rng(1);
  const BipartiteLayout layout(3, 2);
  const Matrix m = random_complex(rng, 6, 6);
  Matrix oa = Matrix::Zero(3, 3), of = Matrix::Zero(2, 2);
  for (Eigen::Index a = 0; a < 3; ++a)
    for (Eigen::Index a2 = 0; a2 < 3; ++a2)
      for (Eigen::Index f = 0; f < 2; ++f) oa(a, a2) += m(layout.index(a, f), layout.index(a2, f));
  for (Eigen::Index f = 0; f < 2; ++f)
    for (Eigen::Index f2 = 0; f2 < 2; ++f2)
      for (Eigen::Index a = 0; a < 3; ++a) of(f, f2) += m(layout.index(a, f), layout.index(a, f2));
  REQUIRE(max_abs(Matrix(partial_trace(m, layout, Subsystem::A) - oa)) <= 1e-12);
  REQUIRE(max_abs(Matrix(partial_trace(m, layout, Subsystem::F) - of)) <= 1e-12);
}

TEST_CASE("partial trace of a product factorizes") {
  Sampler rng(2);
  const Matrix a = random_complex(rng, 3, 3), b = random_complex(rng, 4, 4);
  const BipartiteLayout layout(3, 4);
  const Matrix prod = tensor(a, b);
  REQUIRE(max_abs(Matrix(partial_trace(prod, layout, Subsystem::A) - a * b.trace())) <= 1e-12);
  REQUIRE(max_abs(Matrix(partial_trace(prod, layout, Subsystem::F) - b * a.trace())) <= 1e-12);
}

TEST_CASE("partial transpose composes to the full transpose") {
  Sampler rng(3);
  const BipartiteLayout layout(2, 3);
  const Matrix m = random_complex(rng, 6, 6);
  const Matrix ta = partial_transpose(m, layout, Subsystem::A);
  REQUIRE(max_abs(Matrix(partial_transpose(ta, layout, Subsystem::A) - m)) <= 1e-14);
  const Matrix both = partial_transpose(ta, layout, Subsystem::F);
  REQUIRE(max_abs(Matrix(both - m.transpose())) <= 1e-14);
  REQUIRE(std::abs(ta.trace() - m.trace()) <= 1e-14);
}

TEST_CASE("operator abs carries the absolute spectrum") {
  Sampler rng(4);
  const Matrix h = random_hermitian(rng, 5);
  const Matrix a = operator_abs(h);
  RealVector eh = hermitian_eig(h).values.cwiseAbs(), ea = hermitian_eig(a).values;
  std::sort(eh.data(), eh.data() + 5);
  std::sort(ea.data(), ea.data() + 5);
  REQUIRE((eh - ea).cwiseAbs().maxCoeff() <= 1e-10);
  REQUIRE(hermitian_eig(a).values.minCoeff() >= -1e-12);
  REQUIRE(std::real(a.trace()) >= std::abs(std::real(h.trace())) - 1e-10);
}

TEST_CASE("matrix power treats tiny eigenvalues as exact zeros") {
  Sampler rng(5);
  const DensityOp rho = rng.random_density(4, 2);  // rank 2 on dimension 4
  const Matrix root = matrix_power(rho.mat(), 0.5);
  REQUIRE(max_abs(Matrix(root * root - rho.mat())) <= 1e-10);
  // The square root must live on the support: P root P == root.
  const Matrix p = support_projector(rho.mat());
  REQUIRE(max_abs(Matrix(p * root * p - root)) <= 1e-10);

  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -0.5;
  REQUIRE_THROWS_AS(matrix_power(neg, 0.5), std::exception);
  REQUIRE_THROWS_AS(matrix_power(Matrix(Matrix::Zero(2, 2)), -0.5), std::exception);
}

TEST_CASE("support projector is idempotent and acts as identity on the operator") {
  Sampler rng(6);
  const DensityOp rho = rng.random_density(5, 3);
  const Matrix p = support_projector(rho.mat());
  REQUIRE(max_abs(Matrix(p * p - p)) <= 1e-10);
  REQUIRE(max_abs(Matrix(p * rho.mat() * p - rho.mat())) <= 1e-10);
  REQUIRE(std::abs(std::real(p.trace()) - 3.0) <= 1e-9);
}

TEST_CASE("purifications return the marginal in both modes") {
  Sampler rng(7);
  const DensityOp rho = rng.random_density(3, 2);
  for (const PurifyMode mode : {PurifyMode::Spectral, PurifyMode::Uniform}) {
    const PureState psi = purify(rho, 5, mode);
    REQUIRE(max_abs(Matrix(partial_trace(psi.projector(), psi.layout(), Subsystem::A) -
                           rho.mat())) <= 1e-10);
  }
  const PureState u = purify(rho, 5, PurifyMode::Uniform);
  for (Eigen::Index n = 0; n < 5; ++n) {
    double w = 0.0;
    for (Eigen::Index a = 0; a < 3; ++a) w += std::norm(u.vec()(u.layout().index(a, n)));
    REQUIRE(w == Approx(0.2).margin(1e-10));
  }
  REQUIRE_THROWS_AS(purify(rho, 1, PurifyMode::Spectral), std::invalid_argument);
}

TEST_CASE("haar unitaries are unitary with fair first moments") {
  Sampler rng(42);
  double mean = 0.0;
  const int draws = 1000;
  for (int i = 0; i < draws; ++i) {
    const Matrix u = rng.haar_unitary(2);
    REQUIRE(max_abs(Matrix(u.adjoint() * u - Matrix::Identity(2, 2))) <= 1e-12);
    mean += std::norm(u(0, 0));
  }
  mean /= draws;
  REQUIRE(mean == Approx(0.5).margin(0.02));
}

TEST_CASE("sampler substreams depend only on label and index") {
  Sampler root(99);
  Sampler a1 = root.derive("codewords", 3);
  root.uniform();
  root.gaussian();
  Sampler a2 = root.derive("codewords", 3);
  REQUIRE(a1.uniform() == a2.uniform());
  Sampler b = root.derive("hash", 3);
  Sampler c = root.derive("codewords", 4);
  Sampler a3 = root.derive("codewords", 3);
  const double va = a3.uniform();
  REQUIRE(va != b.uniform());
  REQUIRE(va != c.uniform());
}

TEST_CASE("bell state equals the qubit maximally entangled state") {
  const PureState bell = bell_state();
  const PureState me = max_entangled(2);
  REQUIRE(max_abs(Matrix(bell.projector() - me.projector())) <= 1e-14);
  const Matrix marg = partial_trace(bell.projector(), bell.layout(), Subsystem::A);
  REQUIRE(max_abs(Matrix(marg - Matrix::Identity(2, 2) / 2.0)) <= 1e-14);
  REQUIRE(bell.layout().dim_a == 2);
  REQUIRE(bell.layout().dim_f == 2);
}

TEST_CASE("density operators validate their input") {
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = 0.5;  // not Hermitian
  REQUIRE_THROWS_AS(DensityOp(bad), std::exception);
  Matrix off_trace = Matrix::Identity(2, 2);
  REQUIRE_THROWS_AS(DensityOp(off_trace), std::exception);  // trace 2
  Matrix neg = Matrix::Identity(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  REQUIRE_THROWS_AS(DensityOp(neg), std::exception);
}
