#pragma once

// Entropic quantities. Public values are in bits; internal sums use natural
// logarithms. Support convention: eigenvalues at or below the support cut
// are exact zeros, 0 log 0 = 0, and negative powers act on the support only.
// Renyi orders within 1e-4 of 1 reroute to the von Neumann limit.

#include <limits>

#include "densecode/symmetry.hpp"

namespace densecode {

inline constexpr double kAlphaLimitWindow = 1e-4;
inline const double kLn2 = std::log(2.0);

inline double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("binary_entropy: p in [0,1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p);
  return h / kLn2;
}

inline double shannon_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x < -tol::psd) throw std::invalid_argument("shannon_entropy: negative probability");
    if (x > tol::psd) h -= x * std::log(x);
  }
  return h / kLn2;
}

// Eigenvalues of a PSD operator with tiny negatives clamped to zero.
inline RealVector psd_spectrum(const Matrix& m) {
  EigResult e = hermitian_eig(m);
  RealVector v = e.values;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) < -tol::psd) throw std::invalid_argument("psd_spectrum: negative eigenvalue beyond tolerance");
    if (v(i) < 0.0) v(i) = 0.0;
  }
  return v;
}

inline double von_neumann(const Matrix& rho) {
  const RealVector v = psd_spectrum(rho);
  double h = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) > tol::psd) h -= v(i) * std::log(v(i));
  return h / kLn2;
}

inline double von_neumann(const DensityOp& rho) { return von_neumann(rho.mat()); }

namespace detail {

// Mass of rho outside the support of sigma.
inline double support_leak(const Matrix& rho, const Matrix& sigma) {
  const Matrix pi = support_projector(sigma);
  const double kept = (pi * rho * pi).trace().real();
  return rho.trace().real() - kept;
}

inline double relative_entropy_mat(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows()) throw std::invalid_argument("relative_entropy: dimension mismatch");
  if (detail::support_leak(rho, sigma) > tol::psd) return std::numeric_limits<double>::infinity();
  EigResult er = hermitian_eig(rho);
  double tr_rho_log_rho = 0.0;
  for (Eigen::Index i = 0; i < er.values.size(); ++i)
    if (er.values(i) > tol::psd) tr_rho_log_rho += er.values(i) * std::log(er.values(i));
  EigResult es = hermitian_eig(sigma);
  double tr_rho_log_sigma = 0.0;
  for (Eigen::Index j = 0; j < es.values.size(); ++j) {
    if (es.values(j) <= tol::psd) continue;
    const double weight = (es.vectors.col(j).adjoint() * rho * es.vectors.col(j))(0, 0).real();
    tr_rho_log_sigma += weight * std::log(es.values(j));
  }
  return (tr_rho_log_rho - tr_rho_log_sigma) / kLn2;
}

inline double petz_renyi_mat(const Matrix& rho, const Matrix& sigma, double alpha) {
  if (std::abs(alpha - 1.0) < kAlphaLimitWindow) return relative_entropy_mat(rho, sigma);
  if (alpha > 1.0 && detail::support_leak(rho, sigma) > tol::psd)
    return std::numeric_limits<double>::infinity();
  const double q = (matrix_power(rho, alpha) * matrix_power(sigma, 1.0 - alpha)).trace().real();
  if (q <= 0.0) return std::numeric_limits<double>::infinity();
  return std::log(q) / (alpha - 1.0) / kLn2;
}

inline double sandwiched_renyi_mat(const Matrix& rho, const Matrix& sigma, double alpha) {
  if (std::abs(alpha - 1.0) < kAlphaLimitWindow) return relative_entropy_mat(rho, sigma);
  if (alpha > 1.0 && detail::support_leak(rho, sigma) > tol::psd)
    return std::numeric_limits<double>::infinity();
  const Matrix half = matrix_power(sigma, (1.0 - alpha) / (2.0 * alpha));
  Matrix inner = half * rho * half;
  inner = (inner + inner.adjoint()).eval() / 2.0;
  const double q = matrix_power(inner, alpha).trace().real();
  if (q <= 0.0) return std::numeric_limits<double>::infinity();
  return std::log(q) / (alpha - 1.0) / kLn2;
}

}  // namespace detail

inline double relative_entropy(const DensityOp& rho, const DensityOp& sigma) {
  return detail::relative_entropy_mat(rho.mat(), sigma.mat());
}

inline double petz_renyi(const DensityOp& rho, const DensityOp& sigma, double alpha) {
  if (alpha <= 0.0 || alpha > 2.0)
    throw std::invalid_argument("petz_renyi: alpha in (0,1) u (1,2]");
  return detail::petz_renyi_mat(rho.mat(), sigma.mat(), alpha);
}

inline double sandwiched_renyi(const DensityOp& rho, const DensityOp& sigma, double alpha) {
  if (alpha < 0.5) throw std::invalid_argument("sandwiched_renyi: alpha in [1/2,1) u (1,inf)");
  return detail::sandwiched_renyi_mat(rho.mat(), sigma.mat(), alpha);
}

inline double renyi_entropy(const Matrix& rho, double alpha) {
  if (alpha <= 0.0) throw std::invalid_argument("renyi_entropy: alpha > 0");
  if (std::abs(alpha - 1.0) < kAlphaLimitWindow) return von_neumann(rho);
  const RealVector v = psd_spectrum(rho);
  double q = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) > tol::psd) q += std::pow(v(i), alpha);
  return std::log(q) / (1.0 - alpha) / kLn2;
}

inline double renyi_entropy(const DensityOp& rho, double alpha) { return renyi_entropy(rho.mat(), alpha); }

// Conditional Renyi entropy H_a(X|Y) = -D_a(rho_AF || 1_X (x) rho_Y) with the
// Petz divergence; X names the conditioned subsystem.
inline double conditional_renyi(const DensityOp& rho, double alpha, Subsystem conditioned) {
  const BipartiteLayout& layout = rho.layout();
  Matrix sigma;
  if (conditioned == Subsystem::A) {
    const Matrix marg_f = partial_trace(rho.mat(), layout, Subsystem::F);
    sigma = tensor(Matrix(Matrix::Identity(layout.dim_a, layout.dim_a)), marg_f);
  } else {
    const Matrix marg_a = partial_trace(rho.mat(), layout, Subsystem::A);
    sigma = tensor(marg_a, Matrix(Matrix::Identity(layout.dim_f, layout.dim_f)));
  }
  return -detail::petz_renyi_mat(rho.mat(), sigma, alpha);
}

// ----- Closed forms on a block-decomposed state -----

struct XiSpectra {
  std::vector<double> pk;
  std::vector<double> dims;
  std::vector<std::vector<double>> mu;  // conditional F spectra per block
};

inline XiSpectra xi_spectra(const XiState& xi) {
  XiSpectra s;
  for (size_t k = 0; k < xi.pk.size(); ++k) {
    s.pk.push_back(xi.pk[k]);
    s.dims.push_back(static_cast<double>(xi.block_dims[k]));
    const RealVector v = psd_spectrum(xi.rho_f[k]);
    std::vector<double> mu;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (v(i) > tol::psd) mu.push_back(v(i));
    s.mu.push_back(std::move(mu));
  }
  return s;
}

inline double xi_entropy_a(const XiState& xi) {
  double h = 0.0;
  for (size_t k = 0; k < xi.pk.size(); ++k)
    h -= xi.pk[k] * std::log(xi.pk[k] / static_cast<double>(xi.block_dims[k]));
  return h / kLn2;
}

inline double xi_entropy_k(const XiState& xi) { return shannon_entropy(xi.pk); }

inline double xi_entropy_f_given_k(const XiState& xi) {
  double h = 0.0;
  for (size_t k = 0; k < xi.pk.size(); ++k) h += xi.pk[k] * von_neumann(xi.rho_f[k]);
  return h;
}

inline double xi_entropy_joint(const XiState& xi) {
  return xi_entropy_a(xi) + xi_entropy_f_given_k(xi);
}

inline double xi_renyi_a(const XiState& xi, double alpha) {
  if (std::abs(alpha - 1.0) < kAlphaLimitWindow) return xi_entropy_a(xi);
  double q = 0.0;
  for (size_t k = 0; k < xi.pk.size(); ++k)
    q += std::pow(xi.pk[k], alpha) * std::pow(static_cast<double>(xi.block_dims[k]), 1.0 - alpha);
  return std::log(q) / (1.0 - alpha) / kLn2;
}

inline double xi_renyi_joint(const XiState& xi, double alpha) {
  if (std::abs(alpha - 1.0) < kAlphaLimitWindow) return xi_entropy_joint(xi);
  const XiSpectra s = xi_spectra(xi);
  double q = 0.0;
  for (size_t k = 0; k < s.pk.size(); ++k) {
    double trf = 0.0;
    for (double m : s.mu[k]) trf += std::pow(m, alpha);
    q += std::pow(s.pk[k], alpha) * std::pow(s.dims[k], 1.0 - alpha) * trf;
  }
  return std::log(q) / (1.0 - alpha) / kLn2;
}

inline double xi_renyi_f_given_a(const XiState& xi, double alpha) {
  if (std::abs(alpha - 1.0) < kAlphaLimitWindow) return xi_entropy_f_given_k(xi);
  const XiSpectra s = xi_spectra(xi);
  double q = 0.0;
  for (size_t k = 0; k < s.pk.size(); ++k) {
    double trf = 0.0;
    for (double m : s.mu[k]) trf += std::pow(m, alpha);
    q += s.pk[k] * trf;
  }
  return std::log(q) / (1.0 - alpha) / kLn2;
}

inline double xi_renyi_a_given_f(const XiState& xi, double alpha) {
  if (std::abs(alpha - 1.0) < kAlphaLimitWindow)
    return xi_entropy_joint(xi) - von_neumann(xi.marginal_f());
  const Matrix xf_pow = matrix_power(xi.marginal_f(), 1.0 - alpha);
  double q = 0.0;
  for (size_t k = 0; k < xi.pk.size(); ++k) {
    const double cross = (matrix_power(xi.rho_f[k], alpha) * xf_pow).trace().real();
    q += std::pow(xi.pk[k], alpha) * std::pow(static_cast<double>(xi.block_dims[k]), 1.0 - alpha) * cross;
  }
  return std::log(q) / (1.0 - alpha) / kLn2;
}

// ----- Asymmetry measures -----

// Relative entropy of asymmetry D(rho || G(rho)); verified against the
// entropy-difference route H(G(rho)) - H(rho).
inline double relative_entropy_of_asymmetry(const DensityOp& rho, const Twirler& t) {
  const DensityOp g = t.twirl(rho);
  const double direct = relative_entropy(rho, g);
  const double via_entropies = von_neumann(g) - von_neumann(rho);
  if (std::abs(direct - via_entropies) > 1e-7)
    throw std::runtime_error("relative_entropy_of_asymmetry: dual routes disagree");
  return direct;
}

struct AssistanceBounds {
  double lower = 0.0;  // best pure-decomposition average found
  double upper = 0.0;  // H(G(rho))
};

// Lower bound searches pure decompositions rho = sum_x p_x psi_x via the
// purification-unitary parametrization: deterministic eigenbasis and DFT
// candidates plus `budget` Haar samples.
inline AssistanceBounds assistance_bounds(const DensityOp& rho, const Twirler& t, int budget,
                                          Sampler sampler) {
  AssistanceBounds out;
  out.upper = von_neumann(t.twirl(rho));
  EigResult e = hermitian_eig(rho.mat());
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) > tol::psd) ++rank;
  const Eigen::Index d = rho.dim();
  const auto decomposition_value = [&](const Matrix& w) {
    double acc = 0.0;
    for (Eigen::Index x = 0; x < w.rows(); ++x) {
      Vector u = Vector::Zero(d);
      for (Eigen::Index i = 0; i < rank; ++i)
        u += w(x, i) * std::sqrt(std::max(e.values(i), 0.0)) * e.vectors.col(i);
      const double px = u.squaredNorm();
      if (px <= tol::psd) continue;
      acc += px * von_neumann(Matrix(t.twirl(Matrix(u * u.adjoint() / px))));
    }
    return acc;
  };
  out.lower = decomposition_value(Matrix::Identity(rank, rank));
  Matrix dft(rank, rank);
  for (Eigen::Index x = 0; x < rank; ++x)
    for (Eigen::Index i = 0; i < rank; ++i) {
      const double ang = 2.0 * M_PI * x * i / static_cast<double>(rank);
      dft(x, i) = cxd(std::cos(ang), std::sin(ang)) / std::sqrt(static_cast<double>(rank));
    }
  out.lower = std::max(out.lower, decomposition_value(dft));
  for (int trial = 0; trial < budget; ++trial)
    out.lower = std::max(out.lower, decomposition_value(sampler.haar_unitary(rank)));
  if (out.lower > out.upper + 1e-9)
    throw std::runtime_error("assistance_bounds: lower bound exceeded H(G(rho))");
  return out;
}

}  // namespace densecode
