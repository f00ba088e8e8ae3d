#include <catch2/catch_amalgamated.hpp>

#include "densecode/entropy.hpp"

using namespace densecode;
using Catch::Approx;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

// Classical Renyi divergence of two diagonal distributions, independent route.
double classical_renyi(const std::vector<double>& p, const std::vector<double>& q, double alpha) {
  double s = 0.0;
  for (size_t i = 0; i < p.size(); ++i) s += std::pow(p[i], alpha) * std::pow(q[i], 1.0 - alpha);
  return std::log2(s) / (alpha - 1.0);
}

}  // namespace

TEST_CASE("binary and shannon entropies at known points") {
  REQUIRE(binary_entropy(0.5) == Approx(1.0).margin(1e-12));
  REQUIRE(binary_entropy(0.25) == Approx(0.8112781244591328).margin(1e-12));
  REQUIRE(binary_entropy(0.0) == Approx(0.0).margin(1e-12));
  REQUIRE(shannon_entropy({0.5, 0.25, 0.25}) == Approx(1.5).margin(1e-12));
}

TEST_CASE("von Neumann entropy at the extremes") {
  Sampler rng(1);
  const PureState psi = rng.random_pure(4);
  REQUIRE(von_neumann(psi.projector()) == Approx(0.0).margin(1e-9));
  REQUIRE(von_neumann(Matrix(Matrix::Identity(4, 4) / 4.0)) == Approx(2.0).margin(1e-12));
}

TEST_CASE("relative entropy handles support and degenerate cases") {
  const DensityOp zero(diag2(1.0, 0.0)), one(diag2(0.0, 1.0));
  REQUIRE(std::isinf(relative_entropy(zero, one)));
  Sampler rng(2);
  const DensityOp rho = rng.random_density(3, 3);
  REQUIRE(relative_entropy(rho, rho) == Approx(0.0).margin(1e-10));
  const DensityOp sigma = rng.random_density(3, 3);
  REQUIRE(relative_entropy(rho, sigma) >= -1e-10);
}

TEST_CASE("Petz and sandwiched divergences agree with the classical table when commuting") {
  const DensityOp rho(diag2(0.7, 0.3)), sigma(diag2(0.5, 0.5));
  for (const double alpha : {0.5, 1.5, 2.0}) {
    const double want = classical_renyi({0.7, 0.3}, {0.5, 0.5}, alpha);
    REQUIRE(petz_renyi(rho, sigma, alpha) == Approx(want).margin(1e-10));
    if (alpha >= 0.5) REQUIRE(sandwiched_renyi(rho, sigma, alpha) == Approx(want).margin(1e-10));
  }
}

TEST_CASE("sandwiched divergence is below Petz and both approach the relative entropy") {
  Sampler rng(3);
  const DensityOp rho = rng.random_density(3, 3), sigma = rng.random_density(3, 3);
  const double d = relative_entropy(rho, sigma);
  REQUIRE(sandwiched_renyi(rho, sigma, 1.5) <= petz_renyi(rho, sigma, 1.5) + 1e-10);
  REQUIRE(petz_renyi(rho, sigma, 1.0 + 2e-4) == Approx(d).margin(0.01));
  REQUIRE(sandwiched_renyi(rho, sigma, 1.0 + 2e-4) == Approx(d).margin(0.01));

  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const DensityOp pure((plus * plus.adjoint()).eval());
  const DensityOp mixed(Matrix(Matrix::Identity(2, 2) / 2.0));
  REQUIRE(sandwiched_renyi(pure, mixed, 2.0) == Approx(1.0).margin(1e-10));
}

TEST_CASE("Renyi entropy reroutes near order one and decreases in the order") {
  Sampler rng(4);
  const DensityOp rho = rng.random_density(4, 4);
  const double vn = von_neumann(rho);
  REQUIRE(renyi_entropy(rho, 1.0 + 5e-5) == vn);
  REQUIRE(renyi_entropy(rho, 1.0 - 5e-5) == vn);
  double prev = 1e9;
  for (const double a : {0.3, 0.7, 1.0 + 1e-9, 1.6, 2.5}) {
    const double h = renyi_entropy(rho, a);
    REQUIRE(h <= prev + 1e-10);
    prev = h;
  }
  // Flat spectrum: all orders coincide.
  REQUIRE(renyi_entropy(Matrix(Matrix::Identity(3, 3) / 3.0), 0.5) ==
          Approx(std::log2(3.0)).margin(1e-12));
  REQUIRE_THROWS_AS(renyi_entropy(rho, -0.5), std::invalid_argument);
}

TEST_CASE("block closed forms match the assembled matrix routes") {
  Sampler rng(5);
  const Twirler tw = casimir_su2_blocks(2);
  const BipartiteLayout layout(4, 3);
  Vector v(12);
  for (Eigen::Index i = 0; i < 12; ++i) v(i) = rng.cgaussian();
  v /= v.norm();
  const XiState xi = symmetric_decomposition(PureState(v, layout), *tw.blocks);
  const Matrix assembled = xi.assemble();
  for (const double alpha : {0.6, 1.3, 1.8}) {
    REQUIRE(xi_renyi_a(xi, alpha) ==
            Approx(renyi_entropy(xi.marginal_a(), alpha)).margin(1e-9));
    REQUIRE(xi_renyi_joint(xi, alpha) == Approx(renyi_entropy(assembled, alpha)).margin(1e-9));
    REQUIRE(xi_renyi_f_given_a(xi, alpha) ==
            Approx(conditional_renyi(DensityOp(assembled, layout), alpha, Subsystem::F))
                .margin(1e-9));
  }
  REQUIRE(xi_entropy_joint(xi) == Approx(von_neumann(assembled)).margin(1e-9));
  REQUIRE(xi_entropy_joint(xi) ==
          Approx(xi_entropy_a(xi) + xi_entropy_f_given_k(xi)).margin(1e-9));
  REQUIRE(xi_entropy_k(xi) == Approx(shannon_entropy(xi.pk)).margin(1e-12));
}

TEST_CASE("asymmetry equals the entropy gap under dephasing") {
  Sampler rng(6);
  const Twirler tw = diagonal_phases(4, 4);
  for (int i = 0; i < 5; ++i) {
    const DensityOp rho = rng.random_density(4, 4);
    Matrix diag = Matrix::Zero(4, 4);
    for (Eigen::Index k = 0; k < 4; ++k) diag(k, k) = rho.mat()(k, k);
    const double want = von_neumann(diag) - von_neumann(rho);
    REQUIRE(relative_entropy_of_asymmetry(rho, tw) == Approx(want).margin(1e-7));
  }
  const DensityOp fixed(Matrix(Matrix::Identity(4, 4) / 4.0));
  REQUIRE(relative_entropy_of_asymmetry(fixed, tw) == Approx(0.0).margin(1e-10));
}

TEST_CASE("assistance bounds bracket and saturate for the depolarizer") {
  Sampler rng(7);
  const Twirler wh = weyl_heisenberg(2);
  const DensityOp rho = rng.random_density(2, 2);
  const AssistanceBounds b = assistance_bounds(rho, wh, 50, Sampler(9));
  REQUIRE(b.upper == Approx(1.0).margin(1e-10));  // twirl lands on I/2
  REQUIRE(b.lower == Approx(b.upper).margin(1e-6));  // every decomposition saturates

  const Twirler phases = diagonal_phases(3, 3);
  const DensityOp rho3 = rng.random_density(3, 3);
  const AssistanceBounds b3 = assistance_bounds(rho3, phases, 50, Sampler(9));
  REQUIRE(b3.lower >= -1e-9);
  REQUIRE(b3.lower <= b3.upper + 1e-9);
  REQUIRE(b3.upper == Approx(von_neumann(phases.twirl(rho3))).margin(1e-10));
}
