#include <catch2/catch_amalgamated.hpp>

#include "densecode/oneshot.hpp"

using namespace densecode;
using Catch::Approx;

namespace {

XiState bell_xi() {
  return symmetric_decomposition(bell_state(), *weyl_heisenberg(2).blocks);
}

XiState pair_xi(double p) {
  Matrix q = Matrix::Zero(2, 2);
  q(0, 0) = 1.0 - p;
  q(1, 1) = p;
  const PureState psi = purify(DensityOp(tensor(q, q)), 4, PurifyMode::Uniform);
  return symmetric_decomposition(psi, *casimir_su2_blocks(2).blocks);
}

XiState random_xi(Sampler& rng, Eigen::Index dim_f) {
  Vector v(4 * dim_f);
  for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = rng.cgaussian();
  v /= v.norm();
  return symmetric_decomposition(PureState(v, BipartiteLayout(4, dim_f)),
                                 *casimir_su2_blocks(2).blocks);
}

}  // namespace

TEST_CASE("profile anchors: both exponent functions vanish at s = 0") {
  const LegendreProfile bell = LegendreProfile::from_xi(bell_xi());
  REQUIRE(bell.f1(0.0) == 0.0);
  REQUIRE(bell.f2(0.0) == 0.0);
  REQUIRE(bell.h_a_nats == Approx(std::log(2.0)).margin(1e-14));

  Sampler rng(21);
  for (int i = 0; i < 4; ++i) {
    const LegendreProfile pr = LegendreProfile::from_xi(random_xi(rng, 5));
    REQUIRE(std::abs(pr.f1(0.0)) <= 1e-13);
    REQUIRE(std::abs(pr.f2(0.0)) <= 1e-13);
  }
}

TEST_CASE("maximally entangled profile gives the straight transform line") {
  const XiState xi = bell_xi();
  for (const double r : {-3.0, -1.0, -0.5, 0.0, 0.7, 2.0}) {
    REQUIRE(legendre(xi, r) == Approx(std::max(0.0, r + 1.0)).margin(1e-6));
  }
  REQUIRE(legendre(xi, -2.0) <= 1e-12);
  REQUIRE_THROWS_AS(legendre(xi, 0.0, 5), std::invalid_argument);
}

TEST_CASE("grid refinement has converged at the default resolution") {
  Sampler rng(22);
  const XiState xi = random_xi(rng, 5);
  for (const double r : {-1.5, -0.3, 0.4}) {
    REQUIRE(legendre(xi, r, 1000) == Approx(legendre(xi, r, 10000)).margin(1e-6));
  }
}

TEST_CASE("transform is monotone and convex in the rate argument") {
  Sampler rng(23);
  const XiState xi = random_xi(rng, 4);
  std::vector<double> rs, ls;
  for (int i = 0; i <= 12; ++i) rs.push_back(-2.5 + 0.35 * i);
  for (double r : rs) ls.push_back(legendre(xi, r));
  for (size_t i = 1; i < ls.size(); ++i) REQUIRE(ls[i] >= ls[i - 1] - 1e-10);
  for (size_t i = 1; i + 1 < ls.size(); ++i) {
    REQUIRE(ls[i] <= 0.5 * (ls[i - 1] + ls[i + 1]) + 1e-8);
  }
}

TEST_CASE("inverse transform round-trips and flags the zero-target floor") {
  Sampler rng(24);
  const XiState xi = random_xi(rng, 5);
  const LegendreProfile pr = LegendreProfile::from_xi(xi);
  for (const double target : {0.3, 1.0, 2.5}) {
    const LegendreInverse inv = legendre_inverse(pr, target);
    REQUIRE_FALSE(inv.floored);
    REQUIRE(legendre(pr, inv.r_bits) >= target - 1e-9);
    REQUIRE(legendre(pr, inv.r_bits - 2e-6) < target);
  }
  const LegendreInverse zero = legendre_inverse(pr, 0.0);
  REQUIRE(zero.floored);
  REQUIRE(zero.r_bits == zero.floor_bits);
  REQUIRE_THROWS_AS(legendre_inverse(pr, -0.1), std::invalid_argument);
}

TEST_CASE("two independent copies double the transform at double the rate") {
  Sampler rng(25);
  std::vector<XiState> cases = {bell_xi(), pair_xi(0.25), random_xi(rng, 5),
                                random_xi(rng, 4)};
  for (const XiState& xi : cases) {
    const XiState sq = xi_tensor_square(xi);
    const LegendreProfile doubled = LegendreProfile::from_xi(xi).powered(2);
    for (const double r : {-1.2, -0.4, 0.5}) {
      const double one = legendre(xi, r);
      REQUIRE(legendre(sq, 2.0 * r) == Approx(2.0 * one).margin(1e-7));
      REQUIRE(legendre(doubled, 2.0 * r) == Approx(2.0 * one).margin(1e-7));
    }
  }
}

TEST_CASE("curvature bookkeeping matches a finite-difference probe") {
  Sampler rng(26);
  for (const XiState& xi : {pair_xi(0.25), random_xi(rng, 5)}) {
    const LegendreProfile pr = LegendreProfile::from_xi(xi);
    const double v_used =
        std::max(pr.var_joint + pr.var_cond, pr.var_marginal);
    const auto probe = [&](double h) {
      const double g = std::min(pr.f1(h), pr.f2(h));
      return 2.0 * (h * pr.h_a_nats - g) / (h * h);
    };
    const double h = 1e-2;
    const double richardson = 2.0 * probe(h / 2.0) - probe(h);
    REQUIRE(richardson ==
            Approx(v_used).margin(std::max(1e-4, 1e-3 * v_used)));
  }
}

TEST_CASE("one-shot rates: statement and proof budgets") {
  const XiState xi = pair_xi(0.25);
  const LegendreProfile pr = LegendreProfile::from_xi(xi);
  for (const double eps : {0.05, 0.1, 0.25}) {
    const OneShotRate st = oneshot_achievable_rate(pr, eps, RateVariant::Statement);
    const OneShotRate prf = oneshot_achievable_rate(pr, eps, RateVariant::Proof);
    REQUIRE(st.target_bits == Approx(-std::log2(eps)).margin(1e-12));
    REQUIRE(prf.target_bits == Approx(-2.0 * std::log2(eps / 36.0)).margin(1e-12));
    REQUIRE(prf.rate_bits <= st.rate_bits + 1e-9);
    REQUIRE(st.rate_bits <= pr.h_a_nats / kLn2 + 1e-9);
  }
  // Larger budgets never cost rate.
  REQUIRE(oneshot_achievable_rate(pr, 0.25, RateVariant::Statement).rate_bits >=
          oneshot_achievable_rate(pr, 0.05, RateVariant::Statement).rate_bits - 1e-9);
  REQUIRE_THROWS_AS(oneshot_achievable_rate(pr, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(oneshot_achievable_rate(pr, 1.0), std::invalid_argument);

  // Maximally entangled pair at budget 1/2: the statement rate is zero.
  const OneShotRate half =
      oneshot_achievable_rate(bell_xi(), 0.5, RateVariant::Statement);
  REQUIRE(std::abs(half.rate_bits) <= 2e-6);
}

TEST_CASE("one-way success bound: frozen point, domain, and monotonicity") {
  REQUIRE(strong_converse_success(1.0, 2.0, 1.5) ==
          Approx(std::exp2(-1.0 / 3.0)).margin(1e-12));
  REQUIRE_THROWS_AS(strong_converse_success(1.0, 2.0, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(strong_converse_success(1.0, 2.0, 2.0), std::invalid_argument);
  // More messages can only hurt.
  double prev = 2.0;
  for (const double m : {0.5, 1.0, 2.0, 3.0}) {
    const double b = strong_converse_success(1.0, m, 1.7);
    REQUIRE(b <= prev + 1e-15);
    prev = b;
  }
  // Matrix overload agrees with the entropy route.
  const DensityOp mixed(Matrix(Matrix::Identity(2, 2) / 2.0));
  REQUIRE(strong_converse_success(mixed, 2.0, 1.5) ==
          Approx(std::exp2(-1.0 / 3.0)).margin(1e-12));
  // The grid optimum is at least as tight as any single point.
  const ConverseBest best = strong_converse_best(mixed, 2.0, 1);
  REQUIRE(best.bound <= strong_converse_success(mixed, 2.0, 1.5) + 1e-12);
  REQUIRE(best.bound < 1.0);
  REQUIRE(best.alpha > 1.0);
  REQUIRE(best.alpha < 2.0);
}

TEST_CASE("fully local success bound on a coherent marginal") {
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const DensityOp rho((plus * plus.adjoint()).eval());
  const Twirler wh = weyl_heisenberg(2);
  // Pure state against the flat twirl: divergence is one bit at every order.
  for (const double alpha : {1.5, 2.0, 4.0}) {
    const LocalConverse c = local_strong_converse_success(rho, wh, 1.2, alpha);
    REQUIRE_FALSE(c.support_violation);
    REQUIRE(c.divergence_bits == Approx(1.0).margin(1e-9));
    REQUIRE(c.bound ==
            Approx(std::exp2((alpha - 1.0) / alpha * -0.2)).margin(1e-9));
  }
  REQUIRE_THROWS_AS(local_strong_converse_success(rho, wh, 1.2, 1.0),
                    std::invalid_argument);
  const LocalConverse best = local_strong_converse_best(rho, wh, 1.2, 20);
  REQUIRE(best.bound == Approx(std::exp2(-3.75)).margin(1e-9));
  REQUIRE(best.alpha == Approx(16.0).margin(1e-12));
  // Disjoint supports report the violation instead of a vacuous bound.
  Matrix zero = Matrix::Zero(2, 2), one = Matrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  one(1, 1) = 1.0;
  REQUIRE(std::isinf(sandwiched_renyi(DensityOp(zero), DensityOp(one), 2.0)));
}

TEST_CASE("square-root expansion: flat profiles skip, biased profiles converge") {
  const SecondOrderResult flat = second_order_check(bell_xi(), {10, 100}, 0.1);
  REQUIRE(flat.skipped);
  REQUIRE_FALSE(flat.note.empty());
  REQUIRE(flat.rows.empty());

  const SecondOrderResult got = second_order_check(pair_xi(0.25), {100, 1000}, 0.1);
  REQUIRE_FALSE(got.skipped);
  REQUIRE(got.v_used ==
          Approx(std::max(got.v_joint + got.v_cond, got.v_marginal)).margin(1e-15));
  REQUIRE(got.rows.size() == 2);
  for (const SecondOrderRow& row : got.rows) {
    REQUIRE(std::isfinite(row.residual_sqrt_n));
    REQUIRE(row.rate_bits <= got.h_a_bits + 1e-6);
    REQUIRE(row.residual_sqrt_n <= 5.0);
  }
  REQUIRE(got.rows.back().residual <= got.rows.front().residual + 1e-12);

  REQUIRE_THROWS_AS(second_order_check(pair_xi(0.25), {1001}, 0.1),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(second_order_check(pair_xi(0.25), {0}, 0.1),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(second_order_check(pair_xi(0.25), {10}, 1.5),
                    std::invalid_argument);
}
