#pragma once

// Self-check registry behind the `verify` CLI subcommand. Each check is a
// named closure that throws on failure and returns a short detail string on
// success. The fast suite covers every module contract in seconds; the full
// suite adds the Monte Carlo and sweep checks.

#include <chrono>
#include <functional>
#include <vector>

#include "scenario.hpp"

namespace densecode {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double millis = 0.0;
};

namespace verify_detail {

inline void expect(bool ok, const std::string& msg) {
  if (!ok) throw std::runtime_error(msg);
}

inline std::string num(double v) {
  char b[48];
  std::snprintf(b, sizeof(b), "%.4g", v);
  return b;
}

struct NamedCheck {
  std::string name;
  bool full_only = false;
  std::function<std::string()> fn;
};

inline PureState schur_state(double p, int copies, Eigen::Index dim_f) {
  Matrix site(2, 2);
  site << 1.0 - p, 0.0, 0.0, p;
  Matrix rho = site;
  for (int c = 1; c < copies; ++c) rho = tensor(rho, site);
  return purify(DensityOp(rho), dim_f, PurifyMode::Uniform);
}

inline std::vector<NamedCheck> all_checks() {
  using namespace std::string_literals;
  std::vector<NamedCheck> checks;
  auto add = [&](std::string name, std::function<std::string()> fn) {
    checks.push_back({std::move(name), false, std::move(fn)});
  };
  auto add_full = [&](std::string name, std::function<std::string()> fn) {
    checks.push_back({std::move(name), true, std::move(fn)});
  };

  add("partial-trace-oracle", [] {
    Sampler rng(7);
    const BipartiteLayout layout(2, 3);
    Matrix m(6, 6);
    for (Eigen::Index i = 0; i < 6; ++i)
      for (Eigen::Index j = 0; j < 6; ++j) m(i, j) = rng.cgaussian();
    Matrix oa = Matrix::Zero(2, 2), of = Matrix::Zero(3, 3);
    for (Eigen::Index a = 0; a < 2; ++a)
      for (Eigen::Index a2 = 0; a2 < 2; ++a2)
        for (Eigen::Index f = 0; f < 3; ++f) oa(a, a2) += m(layout.index(a, f), layout.index(a2, f));
    for (Eigen::Index f = 0; f < 3; ++f)
      for (Eigen::Index f2 = 0; f2 < 3; ++f2)
        for (Eigen::Index a = 0; a < 2; ++a) of(f, f2) += m(layout.index(a, f), layout.index(a, f2));
    const double ra = max_abs(Matrix(partial_trace(m, layout, Subsystem::A) - oa));
    const double rf = max_abs(Matrix(partial_trace(m, layout, Subsystem::F) - of));
    expect(ra <= 1e-12 && rf <= 1e-12, "partial trace disagrees with the elementwise sum");
    return "residuals " + num(ra) + ", " + num(rf);
  });

  add("transpose-choi-spectrum", [] {
    const ChannelRep ch = transpose_channel(2);
    const double lo = hermitian_eig(ch.choi).values.minCoeff();
    expect(std::abs(lo + 0.5) <= 1e-10, "transpose Choi minimum eigenvalue moved from -1/2");
    expect(!ch.is_cp && ch.is_tp, "transpose must be trace preserving and not completely positive");
    return "min eig " + num(lo);
  });

  add("operator-abs-spectral", [] {
    Sampler rng(13);
    Matrix h(5, 5);
    for (Eigen::Index i = 0; i < 5; ++i)
      for (Eigen::Index j = 0; j < 5; ++j) h(i, j) = rng.cgaussian();
    h = ((h + h.adjoint()) / 2.0).eval();
    const Matrix a = operator_abs(h);
    RealVector eh = hermitian_eig(h).values, ea = hermitian_eig(a).values;
    RealVector want = eh.cwiseAbs();
    std::sort(want.data(), want.data() + want.size());
    std::sort(ea.data(), ea.data() + ea.size());
    expect((want - ea).cwiseAbs().maxCoeff() <= 1e-10, "|H| spectrum is not |spec(H)|");
    expect(std::real(a.trace()) >= std::abs(std::real(h.trace())) - 1e-10,
           "trace norm below |trace|");
    return "dim 5 spectrum matched";
  });

  add("purify-marginals", [] {
    Sampler rng(17);
    const DensityOp rho = rng.random_density(3, 2);
    for (const PurifyMode mode : {PurifyMode::Spectral, PurifyMode::Uniform}) {
      const PureState psi = purify(rho, 4, mode);
      const Matrix back = partial_trace(psi.projector(), psi.layout(), Subsystem::A);
      expect(max_abs(Matrix(back - rho.mat())) <= 1e-10, "purification marginal mismatch");
    }
    const PureState u = purify(rho, 4, PurifyMode::Uniform);
    for (Eigen::Index n = 0; n < 4; ++n) {
      double w = 0.0;
      for (Eigen::Index a = 0; a < 3; ++a) w += std::norm(u.vec()(u.layout().index(a, n)));
      expect(std::abs(w - 0.25) <= 1e-10, "uniform purification slice weight is not 1/dimF");
    }
    return "both modes, slices uniform";
  });

  add("twirl-projection", [] {
    Sampler rng(19);
    int i = 0;
    for (const Twirler& tw :
         {weyl_heisenberg(2), diagonal_phases(3, 3), casimir_su2_blocks(2)}) {
      const DensityOp rho = rng.random_density(tw.dim(), tw.dim());
      const Matrix g = tw.twirl(rho.mat());
      const Matrix gg = tw.twirl(g);
      expect(max_abs(Matrix(g - gg)) <= 1e-9, tw.name + ": twirl is not idempotent");
      expect(std::abs(std::real(g.trace()) - 1.0) <= 1e-10, tw.name + ": twirl broke the trace");
      ++i;
    }
    const Twirler wh = weyl_heisenberg(2);
    const DensityOp rho = rng.random_density(2, 2);
    const double gap = max_abs(Matrix(wh.twirl_average(rho.mat()) - wh.twirl_blocks(rho.mat())));
    expect(gap <= 1e-9, "group-average and block routes disagree");
    return std::to_string(i) + " twirlers, route gap " + num(gap);
  });

  add("multiplicity-certificates", [] {
    const MultFreeReport yes = multiplicity_free_check(casimir_su2_blocks(2), Sampler(11), 20);
    expect(yes.certificate, "rotation+permutation blocks on two qubits must certify");
    const MultFreeReport no = multiplicity_free_check(collective_rotation(2), Sampler(11), 20);
    expect(!no.certificate, "one-generator rotation on two qubits must fail the certificate");
    expect(no.commutant_dim == 6, "charge sectors 1+2+1 must give a 6-dimensional commutant");
    const MultFreeReport irr = multiplicity_free_check(weyl_heisenberg(2), Sampler(11), 20);
    expect(irr.certificate && irr.commutant_dim == 1, "irreducible action must have scalar commutant");
    return "commutant dims " + std::to_string(yes.commutant_dim) + "/" +
           std::to_string(no.commutant_dim) + "/" + std::to_string(irr.commutant_dim);
  });

  add("entropy-alpha-window", [] {
    Sampler rng(23);
    const DensityOp rho = rng.random_density(4, 4);
    const double vn = von_neumann(rho);
    expect(renyi_entropy(rho, 1.0 + 5e-5) == vn, "alpha within the window must reroute exactly");
    expect(std::abs(renyi_entropy(rho, 1.001) - vn) <= 0.01, "Renyi entropy not continuous at 1");
    const double h_half = renyi_entropy(rho, 0.5), h2 = renyi_entropy(rho, 2.0);
    expect(h_half >= vn - 1e-10 && vn >= h2 - 1e-10, "Renyi entropy must decrease in alpha");
    return "H_.5 " + num(h_half) + " >= H " + num(vn) + " >= H_2 " + num(h2);
  });

  add("sandwiched-pure-point", [] {
    Vector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const DensityOp rho((plus * plus.adjoint()).eval());
    const DensityOp sigma(Matrix(Matrix::Identity(2, 2) / 2.0));
    const double d2 = sandwiched_renyi(rho, sigma, 2.0);
    expect(std::abs(d2 - 1.0) <= 1e-10, "order-2 divergence of a pure state from I/2 must be 1 bit");
    return "D_2 = " + num(d2) + " bits";
  });

  add("data-processing", [] {
    Sampler rng(29);
    const Twirler tw = casimir_su2_blocks(2);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const DensityOp rho = rng.random_density(4, 4), sigma = rng.random_density(4, 4);
      const DensityOp gr = tw.twirl(rho), gs = tw.twirl(sigma);
      const double drop = relative_entropy(rho, sigma) - relative_entropy(gr, gs);
      const double drop_petz = petz_renyi(rho, sigma, 1.5) - petz_renyi(gr, gs, 1.5);
      expect(drop >= -1e-9 && drop_petz >= -1e-9, "twirl increased a divergence");
      worst = std::max(worst, -std::min(drop, drop_petz));
    }
    return "10 pairs, worst slack " + num(worst);
  });

  add("block-state-forms", [] {
    Sampler rng(31);
    const Twirler tw = casimir_su2_blocks(2);
    const BipartiteLayout layout(4, 3);
    Vector v(12);
    for (Eigen::Index i = 0; i < 12; ++i) v(i) = rng.cgaussian();
    v /= v.norm();
    const PureState psi(v, layout);
    const XiState xi = symmetric_decomposition(psi, *tw.blocks);
    const Matrix ident_f = Matrix::Identity(3, 3);
    for (size_t k = 0; k < xi.pk.size(); ++k) {
      const Matrix pk_full = tensor(xi.projectors[k], ident_f);
      const Matrix piece = pk_full * psi.projector() * pk_full;
      const double mass = std::real(piece.trace());
      expect(std::abs(mass - xi.pk[k]) <= 1e-10, "block probability mismatch");
      const Matrix rf = partial_trace(piece, layout, Subsystem::F) / mass;
      expect(max_abs(Matrix(rf - xi.rho_f[k])) <= 1e-9, "conditional helper state mismatch");
    }
    const double h_joint = xi_entropy_joint(xi);
    expect(std::abs(h_joint - von_neumann(xi.assemble())) <= 1e-9, "joint entropy route mismatch");
    expect(std::abs(xi_entropy_a(xi) - von_neumann(xi.marginal_a())) <= 1e-9,
           "marginal entropy route mismatch");
    expect(std::abs(h_joint - xi_entropy_a(xi) - xi_entropy_f_given_k(xi)) <= 1e-9,
           "chain rule over sectors failed");
    const double r17 = xi_renyi_joint(xi, 1.7);
    expect(std::abs(r17 - renyi_entropy(Matrix(xi.assemble()), 1.7)) <= 1e-9,
           "order-1.7 closed form mismatch");
    return std::to_string(xi.pk.size()) + " sectors matched";
  });

  add("asymmetry-divergence", [] {
    Sampler rng(37);
    const Twirler tw = casimir_su2_blocks(2);
    const DensityOp rho = rng.random_density(4, 4);
    const double a = relative_entropy_of_asymmetry(rho, tw);
    expect(a >= -1e-9, "asymmetry must be nonnegative");
    const double fixed = relative_entropy_of_asymmetry(tw.twirl(rho), tw);
    expect(std::abs(fixed) <= 1e-9, "twirled input must carry zero asymmetry");
    return "asymmetry " + num(a) + ", fixed point " + num(fixed);
  });

  add("capacity-hierarchy", [] {
    Sampler rng(41);
    const Twirler tw = casimir_su2_blocks(2);
    double worst = 0.0;
    for (int i = 0; i < 8; ++i) {
      Vector v(16);
      for (Eigen::Index j = 0; j < 16; ++j) v(j) = rng.cgaussian();
      v /= v.norm();
      const CapacityReport r = capacity_report(PureState(v, BipartiteLayout(4, 4)), tw, "check");
      worst = std::max(worst, std::abs(r.c_oneway - r.c_local - r.h_f));
    }
    return "8 states, worst gap identity slack " + num(worst);
  });

  add("product-family-point", [] {
    const PureState psi = schur_state(0.25, 2, 4);
    const Twirler tw = casimir_su2_blocks(2);
    const XiState xi = symmetric_decomposition(psi, *tw.blocks);
    expect(xi.pk.size() == 2, "two-qubit product family must occupy two sectors");
    const double p0 = std::max(xi.pk[0], xi.pk[1]);
    expect(std::abs(p0 - 13.0 / 16.0) <= 1e-10, "symmetric-sector weight must be 13/16 at p=1/4");
    const CapacityReport r = capacity_report(psi, tw, "check");
    const SchurRow row = schur_example(2, 0.25, SchurMode::Oracle);
    expect(std::abs(r.c_local - row.c_local) <= 1e-7 &&
               std::abs(r.c_oneway - row.c_oneway) <= 1e-7 &&
               std::abs(r.c_global - row.c_global) <= 1e-7,
           "closed forms disagree with the matrix route");
    const SchurRow printed = schur_example(2, 0.25, SchurMode::Paper);
    expect(printed.c_oneway > row.c_oneway + 0.1,
           "printed dimension factor should overshoot here");
    return "c = (" + num(row.c_local) + ", " + num(row.c_oneway) + ", " + num(row.c_global) + ")";
  });

  add("legendre-bell-line", [] {
    const Twirler tw = weyl_heisenberg(2);
    const XiState xi = symmetric_decomposition(bell_state(), *tw.blocks);
    const LegendreProfile prof = LegendreProfile::from_xi(xi);
    expect(prof.f1(0.0) == 0.0 && prof.f2(0.0) == 0.0, "exponent curves must vanish at s=0 exactly");
    expect(std::abs(legendre(prof, 0.0) - 1.0) <= 1e-9, "L(0) must be 1 for the maximally entangled pair");
    expect(legendre(prof, -2.0) <= 1e-12, "L(-2) must vanish");
    expect(std::abs(legendre(prof, 1.0) - 2.0) <= 1e-9, "L(1) must be 2");
    const OneShotRate r = oneshot_achievable_rate(prof, 0.5, RateVariant::Statement);
    expect(std::abs(r.rate_bits) <= 2e-6, "statement rate at eps=1/2 must be 0 bits");
    return "L(0)=1, statement rate " + num(r.rate_bits);
  });

  add("legendre-shape", [] {
    const Twirler tw = casimir_su2_blocks(2);
    const XiState xi = symmetric_decomposition(schur_state(0.25, 2, 4), *tw.blocks);
    const LegendreProfile prof = LegendreProfile::from_xi(xi);
    const std::vector<double> grid = {-1.0, -0.5, 0.0, 0.5, 1.0, 1.5};
    double prev = -1.0;
    for (size_t i = 0; i < grid.size(); ++i) {
      const double li = legendre(prof, grid[i]);
      expect(li >= prev - 1e-8, "L must be nondecreasing");
      prev = li;
      if (i + 2 < grid.size()) {
        const double mid = legendre(prof, (grid[i] + grid[i + 2]) / 2.0);
        const double sec = (legendre(prof, grid[i]) + legendre(prof, grid[i + 2])) / 2.0;
        expect(mid <= sec + 1e-8, "L violated a secant (convexity)");
      }
    }
    return "monotone and convex on [-1, 1.5]";
  });

  add("legendre-inverse-roundtrip", [] {
    const Twirler tw = casimir_su2_blocks(2);
    const XiState xi = symmetric_decomposition(schur_state(0.25, 2, 4), *tw.blocks);
    const LegendreProfile prof = LegendreProfile::from_xi(xi);
    double worst = 0.0;
    for (const double target : {0.2, 1.0, 2.5}) {
      const LegendreInverse inv = legendre_inverse(prof, target);
      expect(!inv.floored, "interior target reported as floored");
      worst = std::max(worst, std::abs(legendre(prof, inv.r_bits) - target));
    }
    expect(worst <= 2e-6, "inverse round trip drifted beyond 2e-6");
    const LegendreInverse zero = legendre_inverse(prof, 0.0);
    expect(legendre(prof, zero.r_bits) <= 1e-9, "target 0 must land on the flat region");
    return "worst round-trip " + num(worst);
  });

  add("legendre-tensorization", [] {
    const Twirler tw = casimir_su2_blocks(2);
    const XiState xi = symmetric_decomposition(schur_state(0.25, 2, 4), *tw.blocks);
    const LegendreProfile one = LegendreProfile::from_xi(xi);
    const LegendreProfile two = LegendreProfile::from_xi(xi_tensor_square(xi));
    double worst = 0.0;
    for (const double r : {-0.5, 0.3, 1.0}) {
      worst = std::max(worst, std::abs(legendre(two, 2.0 * r) - 2.0 * legendre(one, r)));
      worst = std::max(worst, std::abs(legendre(one.powered(2), 2.0 * r) - 2.0 * legendre(one, r)));
    }
    expect(worst <= 1e-7, "two-copy profile is not twice the one-copy profile");
    return "worst tensorization gap " + num(worst);
  });

  add("alphabet-measurement", [] {
    for (const int l : {1, 2, 3, 5}) {
      const auto b = fourier_measurement(l);
      Matrix sum = Matrix::Zero(l, l);
      for (const auto& v : b) sum += v * v.adjoint();
      expect(max_abs(Matrix(sum - Matrix::Identity(l, l))) <= 1e-12,
             "phase vectors do not resolve the identity");
    }
    return "resolutions at L = 1, 2, 3, 5";
  });

  add("hash-partition", [] {
    Sampler rng(43);
    const HashPartition h8 = build_hash(8, 2, rng);
    expect(h8.family == "linear-over-prime-field", "8 -> 2 should use the affine family");
    for (const auto& fiber : h8.fibers())
      expect(static_cast<int>(fiber.size()) == 4, "fibers must be balanced");
    const HashPartition h6 = build_hash(6, 3, rng);
    expect(h6.family == "balanced-random", "6 -> 3 should use the balanced-random family");
    const CollisionEstimate est = estimate_collision_rate(8, 2, 3000, rng);
    expect(est.rate <= 0.5 + 3.0 * est.sigma + 1e-12, "collision rate above the pairwise bound");
    return "collision " + num(est.rate) + " (sigma " + num(est.sigma) + ")";
  });

  add("trimmed-instance", [] {
    const Twirler tw = casimir_su2_blocks(2);
    std::vector<Vector> psi = {basis_vector(4, 0), basis_vector(4, 1)};
    const LemmaInstance inst = build_lemma_instance(psi, tw);
    expect(inst.delta >= 0.0 && inst.delta < 1.0, "trimming loss out of range");
    expect(std::abs(std::real(inst.sigma_bar.trace()) - (1.0 - inst.delta)) <= 1e-9,
           "averaged state trace must be 1 - delta");
    Matrix sum = Matrix::Zero(4, 4);
    for (const auto& q : inst.q) sum += q;
    const double top = hermitian_eig(Matrix(sum - Matrix::Identity(4, 4))).values.maxCoeff();
    expect(top <= 1e-9, "projectors must stay below the identity");
    return "delta " + num(inst.delta);
  });

  add("zero-error-pair", [] {
    Sampler rng(47);
    const Twirler tw = weyl_heisenberg(2);
    const HashPartition hash = build_hash(2, 2, rng);
    const auto words = rep_codewords(*tw.rep, {0, 2});  // identity and the shift
    const TwoStageResult r = two_stage_protocol(bell_state(), tw, hash, words, 16);
    expect(r.exact_error <= 1e-10, "the shift pair must be decoded without error");
    expect(r.delta <= 1e-12, "no trimming loss expected");
    expect(std::abs(r.rate_bits - 1.0) <= 1e-12, "rate must be exactly 1 bit");
    return "exact error " + num(r.exact_error);
  });

  add("single-message", [] {
    Sampler rng(53);
    const Twirler tw = weyl_heisenberg(2);
    // One state per fiber: no trimming, so the lone message always decodes.
    const HashPartition hash = build_hash(2, 2, rng);
    const auto words = rep_codewords(*tw.rep, {0});
    const TwoStageResult r = two_stage_protocol(bell_state(), tw, hash, words, 16);
    expect(r.exact_error <= 1e-10, "a single message must always be decoded");
    return "exact error " + num(r.exact_error);
  });

  add("success-exponent-point", [] {
    const double bound = strong_converse_success(1.0, 2.0, 1.5);
    expect(std::abs(bound - std::exp2(-1.0 / 3.0)) <= 1e-12,
           "success bound at (1 bit, 2 bits, alpha=3/2) must be 2^{-1/3}");
    return "bound " + num(bound);
  });

  add("factorization-identity", [] {
    Sampler rng(59);
    const IdentityReport rep = m6_identity_check(60, {{2, 2}, {2, 3}}, rng);
    expect(rep.max_residual <= 1e-8 && rep.max_residual_rotated <= 1e-8,
           "rank-one factorization residual above 1e-8");
    return "residuals " + num(rep.max_residual) + " / " + num(rep.max_residual_rotated);
  });

  add("transpose-witness", [] {
    Sampler rng(61);
    const Twirler wh = weyl_heisenberg(2);
    const TransposeReport rep = transpose_encoder_experiment(bell_state(), wh, rng, Matrix(), 200);
    expect(std::abs(rep.choi_min_eig + 0.5) <= 1e-9, "Choi eigenvalue moved");
    expect(std::abs(rep.output_min_eig + 0.5) <= 1e-9, "output eigenvalue moved");
    expect(rep.min_product_value >= -1e-9, "a product element saw negative mass");
    const Twirler cas = casimir_su2_blocks(2);
    const PureState psi4 = schur_state(0.25, 2, 4);
    bool rejected = false;
    try {
      transpose_encoder_experiment(psi4, cas, rng, rng.haar_unitary(4), 10);
    } catch (const std::invalid_argument&) {
      rejected = true;
    }
    expect(rejected, "a generic basis must be rejected for the block twirler");
    return "witness at -1/2, products >= " + num(rep.min_product_value);
  });

  add("tamper-detection", [] {
    Twirler tw = casimir_su2_blocks(2);
    tw.blocks->blocks[0].projector(0, 1) += 1e-3;
    bool caught = false;
    try {
      tw.blocks->validate();
    } catch (const std::exception&) {
      caught = true;
    }
    if (!caught) {
      try {
        capacity_report(schur_state(0.25, 2, 4), tw, "tampered");
      } catch (const std::exception&) {
        caught = true;
      }
    }
    expect(caught, "a perturbed projector slipped through every check");
    return "perturbation rejected";
  });

  add("matrix-json-roundtrip", [] {
    Sampler rng(67);
    Matrix m(3, 2);
    for (Eigen::Index i = 0; i < 3; ++i)
      for (Eigen::Index j = 0; j < 2; ++j) m(i, j) = rng.cgaussian();
    const Matrix back = matrix_from_json(json::parse(matrix_to_json(m).dump()));
    expect(max_abs(Matrix(back - m)) == 0.0, "matrix did not survive a JSON round trip");
    return "bit-exact through text";
  });

  add("bundle-determinism", [] {
    json cfg = {{"name", "determinism"},
                {"state", "bell"},
                {"group", "weyl_heisenberg"},
                {"group_dim", 2},
                {"tasks", json::array({"capacities", "simulate"})},
                {"seed", 5},
                {"N", 2},
                {"T", 2},
                {"M", 2},
                {"seeds", 6},
                {"s_grid", 16},
                {"codeword_rule", "random"}};
    const Scenario s = Scenario::parse(cfg);
    const RunResult a = run_scenario(s, 1);
    const RunResult b = run_scenario(s, 3);
    expect(a.report.dump() == b.report.dump(), "report differs across worker counts");
    expect(a.sim_lines == b.sim_lines, "per-seed lines differ across worker counts");
    return "identical across 1 and 3 workers";
  });

  // ----- Full-suite additions -----

  add_full("factorization-sweep", [] {
    Sampler rng(71);
    const IdentityReport rep =
        m6_identity_check(500, {{2, 2}, {3, 2}, {2, 3}, {3, 3}, {4, 2}}, rng);
    expect(rep.max_residual <= 1e-8 && rep.max_residual_rotated <= 1e-8,
           "rank-one factorization residual above 1e-8 in the sweep");
    return "500 samples, residuals " + num(rep.max_residual) + " / " +
           num(rep.max_residual_rotated);
  });

  add_full("dephasing-coherence", [] {
    Sampler rng(73);
    const Twirler tw = diagonal_phases(4, 3);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const DensityOp rho = rng.random_density(4, 4);
      Matrix diag = Matrix::Zero(4, 4);
      for (Eigen::Index k = 0; k < 4; ++k) diag(k, k) = rho.mat()(k, k);
      const double want = von_neumann(diag) - von_neumann(rho);
      worst = std::max(worst, std::abs(relative_entropy_of_asymmetry(rho, tw) - want));
    }
    expect(worst <= 1e-7, "asymmetry under dephasing must equal the entropy gap");
    return "50 states, worst gap " + num(worst);
  });

  add_full("monte-carlo-pair", [] {
    Sampler base(79);
    const Twirler tw = weyl_heisenberg(2);
    Sampler hrng = base.derive("hash", 0);
    const HashPartition hash = build_hash(2, 2, hrng);
    double mean = 0.0, bound = 0.0, var = 0.0;
    const int seeds = 100;
    std::vector<double> errs(seeds);
    for (int i = 0; i < seeds; ++i) {
      Sampler rng = base.derive("codewords", i);
      const auto words = random_rep_codewords(*tw.rep, 2, rng);
      const TwoStageResult r = two_stage_protocol(bell_state(), tw, hash, words, 32);
      errs[i] = r.exact_error;
      mean += r.exact_error;
      bound += r.bound;
    }
    mean /= seeds;
    bound /= seeds;
    for (const double e : errs) var += (e - mean) * (e - mean);
    const double sdev = std::sqrt(var / (seeds - 1));
    expect(mean <= bound + 3.0 * sdev / std::sqrt(double(seeds)) + 1e-12,
           "mean error above the random-coding bound");
    return "mean " + num(mean) + " vs bound " + num(bound);
  });

  add_full("monte-carlo-collective", [] {
    Sampler base(83);
    const Twirler tw = casimir_su2_blocks(2);
    const PureState psi = schur_state(0.25, 2, 4);
    Sampler hrng = base.derive("hash", 0);
    const HashPartition hash = build_hash(4, 2, hrng);
    double mean = 0.0, bound = 0.0, var = 0.0;
    const int seeds = 100;
    std::vector<double> errs(seeds);
    for (int i = 0; i < seeds; ++i) {
      Sampler rng = base.derive("codewords", i);
      const auto words = random_collective_codewords(2, 4, rng);
      const TwoStageResult r = two_stage_protocol(psi, tw, hash, words, 32);
      errs[i] = r.exact_error;
      mean += r.exact_error;
      bound += r.bound;
    }
    mean /= seeds;
    bound /= seeds;
    for (const double e : errs) var += (e - mean) * (e - mean);
    const double sdev = std::sqrt(var / (seeds - 1));
    expect(mean <= bound + 3.0 * sdev / std::sqrt(double(seeds)) + 1e-12,
           "mean error above the random-coding bound");
    return "mean " + num(mean) + " vs bound " + num(bound);
  });

  add_full("converse-domination", [] {
    Sampler base(89);
    const Twirler tw = weyl_heisenberg(2);
    Sampler hrng = base.derive("hash", 0);
    const HashPartition hash = build_hash(2, 2, hrng);
    const int seeds = 100;
    double mean = 0.0, var = 0.0;
    std::vector<double> succ(seeds);
    for (int i = 0; i < seeds; ++i) {
      Sampler rng = base.derive("codewords", i);
      const auto words = random_rep_codewords(*tw.rep, 4, rng);
      const TwoStageResult r = two_stage_protocol(bell_state(), tw, hash, words, 32);
      succ[i] = 1.0 - r.exact_error;
      mean += succ[i];
    }
    mean /= seeds;
    for (const double s : succ) var += (s - mean) * (s - mean);
    const double slack = 3.0 * std::sqrt(var / (seeds - 1)) / std::sqrt(double(seeds));
    const Matrix bell_a = partial_trace(bell_state().projector(), bell_state().layout(), Subsystem::A);
    const DensityOp g = tw.twirl(DensityOp(bell_a));
    for (const double alpha : {1.1, 1.5, 1.9}) {
      const double cap = strong_converse_success(g, 2.0, alpha);
      expect(mean <= cap + slack + 1e-12, "simulated success beat the converse bound");
    }
    return "success " + num(mean) + " under all three exponents";
  });

  add_full("second-order-trend", [] {
    const Twirler tw = casimir_su2_blocks(2);
    const XiState xi = symmetric_decomposition(schur_state(0.25, 2, 4), *tw.blocks);
    const SecondOrderResult r =
        second_order_check(xi, {4, 8, 16, 32, 64, 128, 256, 512, 1000}, 1e-3);
    expect(!r.skipped, "the product family must not be flat");
    for (const auto& row : r.rows)
      expect(std::isfinite(row.residual_sqrt_n), "non-finite residual");
    expect(r.rows.back().residual_sqrt_n <= r.rows.front().residual_sqrt_n + 1e-9,
           "scaled residual failed to shrink");
    return "residual*sqrt(n): " + num(r.rows.front().residual_sqrt_n) + " -> " +
           num(r.rows.back().residual_sqrt_n);
  });

  add_full("rate-sandwich", [] {
    const Twirler tw = casimir_su2_blocks(2);
    const PureState psi = schur_state(0.25, 2, 4);
    const XiState xi = symmetric_decomposition(psi, *tw.blocks);
    const LegendreProfile prof = LegendreProfile::from_xi(xi);
    const double cap = capacity_locality(psi, tw);
    double prev = -1e9;
    for (const double eps : {1e-2, 1e-1, 0.4}) {
      const OneShotRate st = oneshot_achievable_rate(prof, eps, RateVariant::Statement);
      const OneShotRate pf = oneshot_achievable_rate(prof, eps, RateVariant::Proof);
      expect(st.rate_bits <= cap + 1e-6, "one-shot rate above the asymptotic capacity");
      expect(pf.rate_bits <= st.rate_bits + 1e-9, "proof variant beat the statement variant");
      expect(st.rate_bits >= prev - 1e-9, "rate must grow with the error budget");
      prev = st.rate_bits;
    }
    return "rates below capacity " + num(cap);
  });

  add_full("assistance-window", [] {
    Sampler rng(97);
    const Twirler tw = diagonal_phases(3, 3);
    const DensityOp rho = rng.random_density(3, 3);
    const AssistanceBounds b = assistance_bounds(rho, tw, 100, Sampler(5));
    expect(b.lower >= -1e-9 && b.lower <= b.upper + 1e-9, "assistance window inverted");
    expect(std::abs(b.upper - von_neumann(tw.twirl(rho))) <= 1e-10,
           "upper end must be the twirled entropy");
    return "[" + num(b.lower) + ", " + num(b.upper) + "]";
  });

  add_full("collision-10k", [] {
    Sampler rng(101);
    const CollisionEstimate est = estimate_collision_rate(12, 3, 10000, rng);
    expect(est.rate <= 1.0 / 3.0 + 3.0 * est.sigma + 1e-12,
           "pairwise collision estimate above 1/T");
    return "rate " + num(est.rate) + " vs 1/3";
  });

  add_full("figure-series-shape", [] {
    const auto rows = figure_series(1, 8, 0.25, SchurMode::Oracle);
    expect(rows.size() == 8, "series row count");
    for (const auto& r : rows)
      expect(r.c_local <= r.c_oneway + 1e-9 && r.c_oneway <= r.c_global + 1e-9,
             "capacity hierarchy broken along the series");
    const SchurRow one_o = schur_example(1, 0.25, SchurMode::Oracle);
    const SchurRow one_p = schur_example(1, 0.25, SchurMode::Paper);
    expect(std::abs(one_o.c_oneway - one_p.c_oneway) <= 1e-12,
           "dimension factors must agree on a single site");
    return "8 rows, hierarchy holds";
  });

  return checks;
}

}  // namespace verify_detail

inline std::vector<CheckResult> run_verify(const std::string& suite) {
  if (suite != "fast" && suite != "full")
    throw ConfigError("config error: suite must be fast or full");
  const bool full = suite == "full";
  std::vector<CheckResult> out;
  for (const auto& check : verify_detail::all_checks()) {
    if (check.full_only && !full) continue;
    CheckResult r;
    r.name = check.name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r.detail = check.fn();
      r.pass = true;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = e.what();
    }
    const auto t1 = std::chrono::steady_clock::now();
    r.millis = std::chrono::duration<double, std::milli>(t1 - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace densecode
