#include <catch2/catch_amalgamated.hpp>

#include "densecode/capacity.hpp"

using namespace densecode;
using Catch::Approx;

namespace {

// Two p-biased qubits, purified with uniform slice weights.
PureState biased_pair(double p) {
  Matrix q = Matrix::Zero(2, 2);
  q(0, 0) = 1.0 - p;
  q(1, 1) = p;
  const Matrix rho = tensor(q, q);
  return purify(DensityOp(rho), 4, PurifyMode::Uniform);
}

constexpr double kH14 = 0.8112781244591328;  // binary entropy of 1/4

}  // namespace

TEST_CASE("maximally entangled pair under the full qubit basis twirl") {
  const CapacityReport r = capacity_report(bell_state(), weyl_heisenberg(2), "bell");
  r.validate();
  REQUIRE(r.c_local == Approx(0.0).margin(1e-7));
  REQUIRE(r.c_oneway == Approx(1.0).margin(1e-7));
  REQUIRE(r.c_global == Approx(2.0).margin(1e-7));
  REQUIRE(r.h_f == Approx(1.0).margin(1e-9));
  REQUIRE(r.h_k == Approx(0.0).margin(1e-9));
}

TEST_CASE("partially entangled pair trades local against global capacity") {
  Vector v = Vector::Zero(4);
  v(0) = std::sqrt(0.75);
  v(3) = std::sqrt(0.25);
  const PureState psi(v, BipartiteLayout(2, 2));
  const CapacityReport r = capacity_report(psi, weyl_heisenberg(2), "partial");
  REQUIRE(r.c_local == Approx(1.0 - kH14).margin(1e-9));
  REQUIRE(r.c_oneway == Approx(1.0).margin(1e-9));
  REQUIRE(r.c_global == Approx(1.0 + kH14).margin(1e-9));
  REQUIRE(r.c_oneway == Approx(r.c_local + r.h_f).margin(1e-9));
}

TEST_CASE("full dephasing collapses one-way and global decoding") {
  Sampler rng(11);
  const Twirler tw = diagonal_phases(4, 4);
  for (int i = 0; i < 6; ++i) {
    Vector v(16);
    for (Eigen::Index j = 0; j < 16; ++j) v(j) = rng.cgaussian();
    v /= v.norm();
    const PureState psi(v, BipartiteLayout(4, 4));
    const CapacityReport r = capacity_report(psi, tw, "dephase");
    // Rank-one sectors make the conditional helper states pure.
    REQUIRE(r.h_f_given_k == Approx(0.0).margin(1e-9));
    REQUIRE(r.c_global == Approx(r.c_oneway).margin(1e-7));
    const Matrix psi_a = partial_trace(psi.projector(), psi.layout(), Subsystem::A);
    REQUIRE(r.c_local ==
            Approx(von_neumann(tw.twirl(psi_a)) - von_neumann(psi_a)).margin(1e-7));
  }
}

TEST_CASE("two biased qubits under the angular momentum twirl: frozen point") {
  const PureState psi = biased_pair(0.25);
  const CapacityReport r = capacity_report(psi, casimir_su2_blocks(2), "pair");
  REQUIRE(r.c_local == Approx(0.3614380430).margin(1e-6));
  REQUIRE(r.c_oneway == Approx(1.9839942920).margin(1e-6));
  REQUIRE(r.c_global == Approx(2.9103382808).margin(1e-6));
  REQUIRE(r.h_f == Approx(1.6225562489).margin(1e-6));
  REQUIRE(r.h_k == Approx(0.6962122601).margin(1e-6));
  REQUIRE(r.h_f_given_k == Approx(0.9263439888).margin(1e-6));

  // The antisymmetric sector of a diagonal pair carries weight p(1-p) exactly.
  const XiState xi = symmetric_decomposition(psi, *casimir_su2_blocks(2).blocks);
  REQUIRE(xi.pk.size() == 2);
  const double anti = *std::min_element(xi.pk.begin(), xi.pk.end());
  REQUIRE(anti == Approx(3.0 / 16.0).margin(1e-12));

  const SchurRow row = schur_example(2, 0.25, SchurMode::Oracle);
  REQUIRE(row.c_local == Approx(r.c_local).margin(1e-7));
  REQUIRE(row.c_oneway == Approx(r.c_oneway).margin(1e-7));
  REQUIRE(row.c_global == Approx(r.c_global).margin(1e-7));
}

TEST_CASE("printed dimension factor overshoots the one-way capacity for N = 2") {
  const SchurRow oracle = schur_example(2, 0.25, SchurMode::Oracle);
  const SchurRow paper = schur_example(2, 0.25, SchurMode::Paper);
  REQUIRE(paper.c_oneway == Approx(2.1714942920).margin(1e-6));
  // The overshoot is exactly q_1 * log2(2): only the k = 1 sector dimension differs.
  REQUIRE(paper.c_oneway - oracle.c_oneway == Approx(3.0 / 16.0).margin(1e-12));
  REQUIRE(paper.c_local - oracle.c_local == Approx(3.0 / 16.0).margin(1e-12));
  // Single qubit: both dimension conventions coincide.
  const SchurRow o1 = schur_example(1, 0.3, SchurMode::Oracle);
  const SchurRow p1 = schur_example(1, 0.3, SchurMode::Paper);
  REQUIRE(o1.c_oneway == Approx(p1.c_oneway).margin(1e-12));
  REQUIRE(o1.c_global == Approx(p1.c_global).margin(1e-12));
}

TEST_CASE("capacity series grows with the number of qubits") {
  const auto rows = figure_series(1, 8, 0.25, SchurMode::Oracle);
  REQUIRE(rows.size() == 8);
  for (size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(rows[i].n == static_cast<int>(i) + 1);
    REQUIRE(rows[i].c_local >= -1e-9);
    REQUIRE(rows[i].c_oneway >= rows[i].c_local - 1e-9);
    REQUIRE(rows[i].c_global >= rows[i].c_oneway - 1e-9);
    if (i > 0) {
      REQUIRE(rows[i].c_local > rows[i - 1].c_local);
      REQUIRE(rows[i].c_oneway > rows[i - 1].c_oneway);
      REQUIRE(rows[i].c_global > rows[i - 1].c_global);
    }
  }
  // The closed-form route stays available past the explicit-twirl limit.
  const auto tail = figure_series(11, 14, 0.25, SchurMode::Paper);
  REQUIRE(tail.size() == 4);
  REQUIRE(tail.back().c_oneway > tail.front().c_oneway);
}

TEST_CASE("capacity domain errors") {
  REQUIRE_THROWS_AS(schur_example(2, 0.6, SchurMode::Oracle), std::invalid_argument);
  REQUIRE_THROWS_AS(schur_example(2, 0.0, SchurMode::Paper), std::invalid_argument);
  REQUIRE_THROWS_AS(schur_example(0, 0.25, SchurMode::Oracle), std::invalid_argument);
  REQUIRE_THROWS_AS(schur_example(11, 0.25, SchurMode::Oracle), std::invalid_argument);
  REQUIRE_THROWS_AS(figure_series(1, 21, 0.25, SchurMode::Paper), std::invalid_argument);
  REQUIRE_THROWS_AS(figure_series(3, 2, 0.25, SchurMode::Paper), std::invalid_argument);
  // No block decomposition on record: refuse rather than guess.
  REQUIRE_THROWS_AS(capacity_report(bell_state(), collective_rotation(1), "x"),
                    std::invalid_argument);
  // Ambient dimension mismatch.
  REQUIRE_THROWS_AS(capacity_report(bell_state(), casimir_su2_blocks(2), "x"),
                    std::invalid_argument);
}

TEST_CASE("cross-checked routes stay consistent on random inputs") {
  Sampler rng(12);
  const Twirler tw = casimir_su2_blocks(2);
  for (int i = 0; i < 5; ++i) {
    Vector v(4 * 6);
    for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = rng.cgaussian();
    v /= v.norm();
    const PureState psi(v, BipartiteLayout(4, 6));
    const CapacityReport r = capacity_report(psi, tw, "random");
    r.validate();
    REQUIRE(r.c_global <= r.h_a + r.h_f + 1e-7);
  }
}
