#pragma once

// One-shot coding bounds on block states: the Legendre transform of the
// block cumulant functions, its inverse (achievable-rate engine), two
// strong-converse success bounds, and the second-order expansion check.
//
// Everything here works on the classical tables extracted from an XiState:
// the joint spectrum of xi_AF restricted to block k is p_k * mu_{k,i} / d_k
// with multiplicity d_k, so all Renyi quantities reduce to weighted
// log-sum-exp over small lists. Internal units are nats; every public
// boundary speaks bits.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "entropy.hpp"
#include "symmetry.hpp"

namespace densecode {

namespace detail {

// Stable log(sum_i m_i * exp(s * x_i)). Masses are assumed normalized.
inline double weighted_cgf(const std::vector<double>& mass,
                           const std::vector<double>& x, double s) {
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    peak = std::max(peak, s * x[i]);
  }
  if (!std::isfinite(peak)) return 0.0;  // empty list: CGF of a point mass
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += mass[i] * std::exp(s * x[i] - peak);
  }
  return peak + std::log(acc);
}

inline double weighted_mean(const std::vector<double>& mass,
                            const std::vector<double>& x) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m += mass[i] * x[i];
  return m;
}

inline double weighted_var(const std::vector<double>& mass,
                           const std::vector<double>& x) {
  const double m = weighted_mean(mass, x);
  double v = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - m;
    v += mass[i] * d * d;
  }
  return std::max(0.0, v);
}

}  // namespace detail

// Classical profile of a block state. Three weighted log tables drive
// everything:
//   joint:    mass p_k mu_{k,i}, log value ln(p_k mu_{k,i} / d_k)
//   marginal: mass p_k,          log value ln(p_k / d_k)
//   cond:     mass p_k mu_{k,i}, log value -ln mu_{k,i}
// f1(s) = s H_{1+s}(AF) - s H_{1-s}(F|A) and f2(s) = s H_{1+s}(A), in nats;
// both vanish at s = 0 exactly because the masses are normalized.
struct LegendreProfile {
  std::vector<double> joint_mass, joint_log;
  std::vector<double> marg_mass, marg_log;
  std::vector<double> cond_mass, cond_log;
  double h_a_nats = 0.0;       // -E[marg_log]
  double var_joint = 0.0;      // nats^2, curvature of s H_{1+s}(AF)
  double var_marginal = 0.0;   // nats^2, curvature of s H_{1+s}(A)
  double var_cond = 0.0;       // nats^2, curvature of s H_{1-s}(F|A)
  int copies = 1;              // tensor-power scaling of f1, f2

  static LegendreProfile from_xi(const XiState& xi) {
    LegendreProfile pr;
    double marg_total = 0.0;
    for (std::size_t k = 0; k < xi.pk.size(); ++k) marg_total += xi.pk[k];
    if (marg_total <= 0.0) {
      throw std::invalid_argument("LegendreProfile: empty block state");
    }
    double joint_total = 0.0;
    for (std::size_t k = 0; k < xi.pk.size(); ++k) {
      const double p = xi.pk[k] / marg_total;
      const double d = static_cast<double>(xi.block_dims[k]);
      pr.marg_mass.push_back(p);
      pr.marg_log.push_back(std::log(p / d));
      const RealVector mu = psd_spectrum(xi.rho_f[k]);
      for (Eigen::Index i = 0; i < mu.size(); ++i) {
        if (mu(i) <= tol::psd) continue;
        const double m = p * mu(i);
        pr.joint_mass.push_back(m);
        pr.joint_log.push_back(std::log(m / d));
        pr.cond_mass.push_back(m);
        pr.cond_log.push_back(-std::log(mu(i)));
        joint_total += m;
      }
    }
    // Renormalize the conditional-spectrum masses so the CGFs are exact
    // cumulant functions (guarantees f1(0) = f2(0) = 0 to machine epsilon).
    for (auto& m : pr.joint_mass) m /= joint_total;
    for (auto& m : pr.cond_mass) m /= joint_total;
    pr.h_a_nats = -detail::weighted_mean(pr.marg_mass, pr.marg_log);
    pr.var_joint = detail::weighted_var(pr.joint_mass, pr.joint_log);
    pr.var_marginal = detail::weighted_var(pr.marg_mass, pr.marg_log);
    pr.var_cond = detail::weighted_var(pr.cond_mass, pr.cond_log);
    return pr;
  }

  LegendreProfile powered(int n) const {
    if (n < 1) throw std::invalid_argument("LegendreProfile: copies < 1");
    LegendreProfile pr = *this;
    pr.copies = copies * n;
    return pr;
  }

  // s H_{1+s}(AF) - s H_{1-s}(F|A), nats, per `copies` tensor factors.
  double f1(double s) const {
    const double joint = -detail::weighted_cgf(joint_mass, joint_log, s);
    const double cond = detail::weighted_cgf(cond_mass, cond_log, s);
    return copies * (joint - cond);
  }

  // s H_{1+s}(A), nats.
  double f2(double s) const {
    return copies * -detail::weighted_cgf(marg_mass, marg_log, s);
  }

  double objective(double s, double r_nats) const {
    return s * r_nats + std::min(f1(s), f2(s));
  }

  // Lipschitz bound on min(f1, f2) over s in [0,1]; used to bracket the
  // Legendre inverse.
  double slope_bound() const {
    double c = 0.0;
    for (double v : joint_log) c = std::max(c, std::abs(v));
    for (double v : marg_log) c = std::max(c, std::abs(v));
    for (double v : cond_log) c = std::max(c, std::abs(v));
    return copies * 2.0 * (c + 1.0);
  }
};

namespace detail {

// Golden-section maximization of a unimodal-enough slice; used only to
// polish the winning grid cell, so a non-unimodal objective still ends up
// within one cell width of the true optimum before refinement.
inline double golden_max(const std::function<double(double)>& f, double lo,
                         double hi, int iters = 80) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && (b - a) > 1e-14; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return std::max({f(a), f(b), fc, fd});
}

}  // namespace detail

// L(R) = max_{s in [0,1]} [ s R + min(f1(s), f2(s)) ], bits in and out.
// Coarse grid plus golden-section refinement of the winning cell; s = 0 is
// always on the grid, so L >= 0.
inline double legendre(const LegendreProfile& pr, double r_bits,
                       int s_resolution = 1000) {
  if (s_resolution < 10) {
    throw std::invalid_argument("legendre: s_resolution too small");
  }
  const double r_nats = r_bits * kLn2;
  double best = -std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i <= s_resolution; ++i) {
    const double s = static_cast<double>(i) / s_resolution;
    const double v = pr.objective(s, r_nats);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  const double cell = 1.0 / s_resolution;
  const double lo = std::max(0.0, best_i * cell - cell);
  const double hi = std::min(1.0, best_i * cell + cell);
  const double refined = detail::golden_max(
      [&](double s) { return pr.objective(s, r_nats); }, lo, hi);
  return std::max(best, refined) / kLn2;
}

inline double legendre(const XiState& xi, double r_bits,
                       int s_resolution = 1000) {
  return legendre(LegendreProfile::from_xi(xi), r_bits, s_resolution);
}

struct LegendreInverse {
  double r_bits = 0.0;
  bool floored = false;   // target 0: every R on the floor already satisfies L >= 0
  double floor_bits = 0.0;
};

// Smallest R with L(R) >= target. L is nondecreasing in R (pointwise in s),
// and grows at unit slope once s = 1 dominates, so every positive target is
// reachable; target = 0 returns the domain floor as a sentinel.
inline LegendreInverse legendre_inverse(const LegendreProfile& pr,
                                        double target_bits,
                                        double tol_bits = 1e-6,
                                        int s_resolution = 1000) {
  if (target_bits < 0.0) {
    throw std::invalid_argument("legendre_inverse: negative target");
  }
  LegendreInverse out;
  const double floor_bits = -(pr.slope_bound() / kLn2 + 1.0);
  out.floor_bits = floor_bits;
  if (target_bits == 0.0) {
    out.r_bits = floor_bits;
    out.floored = true;
    return out;
  }
  double lo = floor_bits;                                  // L(lo) = 0 < target
  double hi = target_bits + pr.slope_bound() / kLn2 + 1.0;  // L(hi) >= target
  while (hi - lo > tol_bits) {
    const double mid = 0.5 * (lo + hi);
    if (legendre(pr, mid, s_resolution) >= target_bits) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.r_bits = hi;
  return out;
}

inline LegendreInverse legendre_inverse(const XiState& xi, double target_bits,
                                        double tol_bits = 1e-6) {
  return legendre_inverse(LegendreProfile::from_xi(xi), target_bits, tol_bits);
}

enum class RateVariant { Statement, Proof };

struct OneShotRate {
  double rate_bits = 0.0;
  double target_bits = 0.0;
  double r_bits = 0.0;
  RateVariant variant = RateVariant::Proof;
};

// Achievable one-shot rate at error budget eps: rate = -L^{-1}(target) with
// target = -log2(eps) for the statement form and -2 log2(eps/36) for the
// proof-backed form. Default is the proof form, which is the defensible one.
inline OneShotRate oneshot_achievable_rate(const LegendreProfile& pr,
                                           double eps,
                                           RateVariant variant = RateVariant::Proof) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("oneshot_achievable_rate: eps outside (0,1)");
  }
  OneShotRate out;
  out.variant = variant;
  out.target_bits = (variant == RateVariant::Statement)
                        ? -std::log2(eps)
                        : -2.0 * std::log2(eps / 36.0);
  out.r_bits = legendre_inverse(pr, out.target_bits).r_bits;
  out.rate_bits = -out.r_bits;
  return out;
}

inline OneShotRate oneshot_achievable_rate(const XiState& xi, double eps,
                                           RateVariant variant = RateVariant::Proof) {
  return oneshot_achievable_rate(LegendreProfile::from_xi(xi), eps, variant);
}

// Success-probability bound for any code of size M under one-way-local
// decoding: 2^{((a-1)/a) (H_{2-a}(G(Psi_A)) - log2 M)} for a in (1,2),
// clamped to 1 on report. The entropy argument is the twirled marginal.
inline double strong_converse_success(double h_2_minus_alpha_bits,
                                      double log2_m, double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    throw std::invalid_argument("strong_converse_success: alpha outside (1,2)");
  }
  const double expo = (alpha - 1.0) / alpha * (h_2_minus_alpha_bits - log2_m);
  return std::min(1.0, std::exp2(expo));
}

inline double strong_converse_success(const DensityOp& twirled_marginal,
                                      double log2_m, double alpha) {
  return strong_converse_success(
      renyi_entropy(twirled_marginal, 2.0 - alpha), log2_m, alpha);
}

struct ConverseBest {
  double bound = 1.0;
  double alpha = 1.5;
};

// Best (smallest) success bound over an alpha grid in (1,2). n-fold i.i.d.
// inputs enter through additivity: H_{2-a} of the n-fold twirled marginal is
// n times the single-copy value.
inline ConverseBest strong_converse_best(const DensityOp& twirled_marginal,
                                         double rate_bits, int n_copies = 1,
                                         int grid = 33) {
  ConverseBest best;
  for (int j = 1; j <= grid; ++j) {
    const double alpha = 1.0 + static_cast<double>(j) / (grid + 1);
    const double h1 = renyi_entropy(twirled_marginal, 2.0 - alpha);
    const double b =
        strong_converse_success(n_copies * h1, n_copies * rate_bits, alpha);
    if (b < best.bound) {
      best.bound = b;
      best.alpha = alpha;
    }
  }
  return best;
}

struct LocalConverse {
  double bound = 1.0;
  double divergence_bits = 0.0;
  bool support_violation = false;
  double alpha = 2.0;
};

// Success bound under fully local decoding, driven by the sandwiched
// divergence between the marginal and its twirl: 2^{((a-1)/a) (D_a - log2 M)}
// for a > 1. A support violation (infinite divergence) reports bound 1 with
// a flag rather than a vacuous infinity.
inline LocalConverse local_strong_converse_success(const DensityOp& rho_a,
                                                   const Twirler& tw,
                                                   double log2_m,
                                                   double alpha) {
  if (!(alpha > 1.0)) {
    throw std::invalid_argument("local_strong_converse_success: alpha <= 1");
  }
  LocalConverse out;
  out.alpha = alpha;
  const DensityOp g = tw.twirl(rho_a);
  const double div = sandwiched_renyi(rho_a, g, alpha);
  if (!std::isfinite(div)) {
    out.support_violation = true;
    out.bound = 1.0;
    out.divergence_bits = std::numeric_limits<double>::infinity();
    return out;
  }
  out.divergence_bits = div;
  out.bound =
      std::min(1.0, std::exp2((alpha - 1.0) / alpha * (div - log2_m)));
  return out;
}

// Best local-converse bound over an alpha grid reaching into large alpha;
// i.i.d. additivity of the sandwiched divergence gives the n-copy form.
inline LocalConverse local_strong_converse_best(const DensityOp& rho_a,
                                                const Twirler& tw,
                                                double rate_bits,
                                                int n_copies = 1) {
  LocalConverse best;
  best.bound = std::numeric_limits<double>::infinity();
  static const double grid[] = {1.05, 1.1, 1.25, 1.5, 1.75, 2.0, 2.5,
                                3.0,  4.0, 5.0,  6.0, 8.0,  12.0, 16.0};
  for (double alpha : grid) {
    LocalConverse cur = local_strong_converse_success(
        rho_a, tw, rate_bits, alpha);
    if (cur.support_violation) continue;
    const double scaled = std::min(
        1.0, std::exp2((alpha - 1.0) / alpha *
                       n_copies * (cur.divergence_bits - rate_bits)));
    cur.bound = scaled;
    if (cur.bound < best.bound) best = cur;
  }
  if (!std::isfinite(best.bound)) {
    best.bound = 1.0;
    best.support_violation = true;
  }
  return best;
}

struct SecondOrderRow {
  int n = 0;
  double rate_bits = 0.0;    // -L^{-1}_{n}( -log2 eps ) / n
  double approx_bits = 0.0;  // H(A) - sqrt(2 V log(1/eps) / n), in bits
  double residual = 0.0;
  double residual_sqrt_n = 0.0;
};

struct SecondOrderResult {
  bool skipped = false;
  std::string note;
  double h_a_bits = 0.0;
  double v_joint = 0.0;     // nats^2
  double v_marginal = 0.0;  // nats^2
  double v_cond = 0.0;      // nats^2
  double v_used = 0.0;      // nats^2, curvature of min(f1, f2) at s = 0
  std::vector<SecondOrderRow> rows;
};

// Compares the tensorized finite-n rate against the square-root expansion.
// The variance entering the expansion is the curvature of min(f1, f2) at
// s = 0: f1 carries V(AF) + V(F|A) and f2 carries V(A), so the min's
// curvature is max(V(AF) + V(F|A), V(A)).
inline SecondOrderResult second_order_check(const XiState& xi,
                                            const std::vector<int>& n_list,
                                            double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("second_order_check: eps outside (0,1)");
  }
  const LegendreProfile base = LegendreProfile::from_xi(xi);
  SecondOrderResult out;
  out.h_a_bits = base.h_a_nats / kLn2;
  out.v_joint = base.var_joint;
  out.v_marginal = base.var_marginal;
  out.v_cond = base.var_cond;
  out.v_used = std::max(base.var_joint + base.var_cond, base.var_marginal);
  if (out.v_used <= 1e-12) {
    out.skipped = true;
    out.note = "flat spectrum: variance is zero, expansion check skipped";
    return out;
  }
  const double target_bits = -std::log2(eps);
  const double log_inv_eps_nats = std::log(1.0 / eps);
  for (int n : n_list) {
    if (n < 1 || n > 1000) {
      throw std::invalid_argument("second_order_check: n outside [1, 1000]");
    }
    const LegendreProfile pn = base.powered(n);
    SecondOrderRow row;
    row.n = n;
    row.rate_bits = -legendre_inverse(pn, target_bits).r_bits / n;
    row.approx_bits =
        out.h_a_bits -
        std::sqrt(2.0 * out.v_used * log_inv_eps_nats / n) / kLn2;
    row.residual = std::abs(row.rate_bits - row.approx_bits);
    row.residual_sqrt_n = row.residual * std::sqrt(static_cast<double>(n));
    out.rows.push_back(row);
  }
  return out;
}

// Tensor square at the classical-table level: block pairs, kron'd F states.
// Projectors and layout are deliberately left empty; the result feeds
// spectrum-driven code (profiles, entropies), not assembly.
inline XiState xi_tensor_square(const XiState& xi) {
  XiState sq;
  sq.layout = BipartiteLayout{};
  const std::size_t nk = xi.pk.size();
  for (std::size_t k1 = 0; k1 < nk; ++k1) {
    for (std::size_t k2 = 0; k2 < nk; ++k2) {
      sq.pk.push_back(xi.pk[k1] * xi.pk[k2]);
      sq.block_dims.push_back(xi.block_dims[k1] * xi.block_dims[k2]);
      sq.block_labels.push_back(
          xi.block_labels[k1] * 1000 + xi.block_labels[k2]);
      sq.rho_f.push_back(tensor(xi.rho_f[k1], xi.rho_f[k2]));
    }
  }
  return sq;
}

}  // namespace densecode
