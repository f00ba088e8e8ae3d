#include <catch2/catch_amalgamated.hpp>

#include "densecode/symmetry.hpp"

using namespace densecode;
using Catch::Approx;

TEST_CASE("discrete Weyl twirl is the full depolarizer") {
  Sampler rng(1);
  for (const Eigen::Index d : {2, 3}) {
    const Twirler tw = weyl_heisenberg(d);
    REQUIRE(static_cast<Eigen::Index>(tw.rep->elements.size()) == d * d);
    const DensityOp rho = rng.random_density(d, d);
    const Matrix g = tw.twirl(rho.mat());
    REQUIRE(max_abs(Matrix(g - Matrix::Identity(d, d) / double(d))) <= 1e-10);
    REQUIRE(max_abs(Matrix(tw.twirl_average(rho.mat()) - tw.twirl_blocks(rho.mat()))) <= 1e-10);
  }
}

TEST_CASE("rotation-permutation twirl flattens within blocks and fixes block states") {
  Sampler rng(2);
  const Twirler tw = casimir_su2_blocks(2);
  REQUIRE(tw.blocks->blocks.size() == 2);
  const DensityOp rho = rng.random_density(4, 4);
  const Matrix g = tw.twirl(rho.mat());
  // Closed form: sum_k tr(P_k rho) P_k / d_k.
  Matrix want = Matrix::Zero(4, 4);
  for (const auto& b : tw.blocks->blocks)
    want += (b.projector * rho.mat()).trace().real() * b.projector / double(b.dim);
  REQUIRE(max_abs(Matrix(g - want)) <= 1e-10);
  // Invariance under the stored generators (collective rotations and SWAP).
  for (const auto& u : tw.rep->elements)
    REQUIRE(max_abs(Matrix(u * g * u.adjoint() - g)) <= 1e-9);
  // Block states are fixed points.
  for (const auto& b : tw.blocks->blocks) {
    const Matrix pi = b.projector / double(b.dim);
    REQUIRE(max_abs(Matrix(tw.twirl(pi) - pi)) <= 1e-10);
  }
}

TEST_CASE("isotypic decompositions validate and reject tampering") {
  Twirler tw = casimir_su2_blocks(3);
  REQUIRE_NOTHROW(tw.blocks->validate());
  tw.blocks->blocks[0].projector(0, 1) += 1e-3;
  REQUIRE_THROWS_AS(tw.blocks->validate(), std::exception);
}

TEST_CASE("multiplicity-free certificates match the commutant structure") {
  const MultFreeReport wh = multiplicity_free_check(weyl_heisenberg(2), Sampler(3), 20);
  REQUIRE(wh.certificate);
  REQUIRE(wh.commutant_dim == 1);
  REQUIRE(wh.randomized_witness);

  const MultFreeReport phases = multiplicity_free_check(diagonal_phases(3, 3), Sampler(3), 20);
  REQUIRE(phases.certificate);
  REQUIRE(phases.commutant_dim == 3);
  REQUIRE(phases.randomized_witness);

  const MultFreeReport cas = multiplicity_free_check(casimir_su2_blocks(2), Sampler(3), 20);
  REQUIRE(cas.certificate);
  REQUIRE(cas.commutant_dim == 2);
  REQUIRE(cas.randomized_witness);

  const MultFreeReport rot = multiplicity_free_check(collective_rotation(2), Sampler(3), 20);
  REQUIRE_FALSE(rot.certificate);
  REQUIRE(rot.commutant_dim == 6);  // charge sectors of sizes 1, 2, 1
  REQUIRE_FALSE(rot.randomized_witness);
}

TEST_CASE("symmetric decomposition carries the one-sided twirl") {
  Sampler rng(5);
  const Twirler tw = casimir_su2_blocks(2);
  const BipartiteLayout layout(4, 3);
  Vector v(12);
  for (Eigen::Index i = 0; i < 12; ++i) v(i) = rng.cgaussian();
  v /= v.norm();
  const PureState psi(v, layout);
  const XiState xi = symmetric_decomposition(psi, *tw.blocks);

  double total = 0.0;
  for (const double p : xi.pk) total += p;
  REQUIRE(total == Approx(1.0).margin(1e-10));
  const Matrix psi_a = partial_trace(psi.projector(), layout, Subsystem::A);
  REQUIRE(max_abs(Matrix(xi.marginal_a() - tw.twirl(psi_a))) <= 1e-9);
  REQUIRE(max_abs(Matrix(xi.marginal_f() -
                         partial_trace(psi.projector(), layout, Subsystem::F))) <= 1e-9);
  for (const auto& rf : xi.rho_f) {
    REQUIRE(std::abs(std::real(rf.trace()) - 1.0) <= 1e-10);
    REQUIRE(hermitian_eig(rf).values.minCoeff() >= -1e-9);
  }
  REQUIRE_THROWS_AS(symmetric_decomposition(bell_state(), *tw.blocks), std::invalid_argument);
}

TEST_CASE("superoperator forms act like the maps they encode") {
  Sampler rng(6);
  const Matrix u = rng.haar_unitary(3);
  const Matrix s = superop_of_unitary(u);
  const DensityOp rho = rng.random_density(3, 3);
  REQUIRE(max_abs(Matrix(apply_superop(s, rho.mat()) - u * rho.mat() * u.adjoint())) <= 1e-12);
  const Twirler tw = diagonal_phases(3, 3);
  REQUIRE(max_abs(Matrix(apply_superop(tw.superop(), rho.mat()) - tw.twirl(rho.mat()))) <= 1e-10);
  REQUIRE(max_abs(Matrix(unvec(vec_of(rho.mat()), 3) - rho.mat())) <= 1e-14);
}

TEST_CASE("channel representations carry honest flags") {
  const ChannelRep dep = depolarizing_channel(3);
  REQUIRE(dep.is_cp);
  REQUIRE(dep.is_tp);
  REQUIRE(dep.is_unital);

  const ChannelRep tr = transpose_channel(2);
  REQUIRE_FALSE(tr.is_cp);
  REQUIRE(tr.is_tp);
  REQUIRE(tr.is_unital);
  REQUIRE(hermitian_eig(tr.choi).values.minCoeff() == Approx(-0.5).margin(1e-10));

  Sampler rng(7);
  const ChannelRep deph = dephasing_channel(3);
  const DensityOp rho = rng.random_density(3, 3);
  Matrix diag = Matrix::Zero(3, 3);
  for (Eigen::Index i = 0; i < 3; ++i) diag(i, i) = rho.mat()(i, i);
  REQUIRE(max_abs(Matrix(apply_superop(deph.superop, rho.mat()) - diag)) <= 1e-12);

  const ChannelRep rep = replacer_channel(rng.random_density(2, 2));
  REQUIRE(rep.is_cp);
  REQUIRE(rep.is_tp);
}

TEST_CASE("covariance check separates commuting and noncommuting encoders") {
  const Twirler wh = weyl_heisenberg(2);
  REQUIRE(check_co1(transpose_channel(2), wh).holds);
  REQUIRE(check_co1(unitary_channel(pauli(1)), wh).holds);

  const Twirler phases = diagonal_phases(2, 2);
  Matrix hadamard(2, 2);
  hadamard << 1, 1, 1, -1;
  hadamard /= std::sqrt(2.0);
  REQUIRE_FALSE(check_co1(unitary_channel(hadamard), phases).holds);

  Sampler rng(8);
  const EncoderClass ec = classify_encoder(transpose_channel(2), wh, rng, 100);
  REQUIRE(ec.co1.holds);
  REQUIRE_FALSE(ec.in_ecp);  // not completely positive
  REQUIRE(ec.min_output_eig >= -tol::psd);  // but positive on states
}

TEST_CASE("twirlers reject dimension mismatches") {
  const Twirler tw = weyl_heisenberg(2);
  REQUIRE_THROWS_AS(tw.twirl(Matrix(Matrix::Identity(3, 3))), std::invalid_argument);
  REQUIRE_THROWS_AS(weyl_heisenberg(1), std::invalid_argument);
  REQUIRE_THROWS_AS(casimir_su2_blocks(11), std::invalid_argument);
}
