#pragma once

// Dense complex linear algebra for finite-dimensional quantum states:
// strong types (hermitian / density / pure), bipartite index bookkeeping,
// tensor & partial operations, spectral calculus, and a deterministic
// sampler. Eigen supplies storage and eigensolvers.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace densecode {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// ----- Tolerance ladder -----
// herm: input symmetry checks; psd: eigenvalue floors / support cut;
// trace: normalization checks; report: cross-route agreement checks.
namespace tol {
inline constexpr double herm = 1e-10;
inline constexpr double psd = 1e-9;
inline constexpr double trace = 1e-9;
inline constexpr double report = 1e-8;
}  // namespace tol

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& m, double eps = tol::herm) {
  if (m.rows() != m.cols()) return false;
  return max_abs(Matrix(m - m.adjoint())) <= eps;
}

// ----- Bipartite layout -----
// Composite index convention: i = a * dim_f + f (A-major).
struct BipartiteLayout {
  Eigen::Index dim_a = 0;
  Eigen::Index dim_f = 0;

  BipartiteLayout() = default;
  BipartiteLayout(Eigen::Index a, Eigen::Index f) : dim_a(a), dim_f(f) {
    if (a <= 0 || f <= 0) throw std::invalid_argument("BipartiteLayout: dims must be positive");
  }
  Eigen::Index total() const { return dim_a * dim_f; }
  Eigen::Index index(Eigen::Index a, Eigen::Index f) const { return a * dim_f + f; }
};

enum class Subsystem { A, F };

// ----- Strong operator types -----

class HermitianOp {
 public:
  explicit HermitianOp(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0)
      throw std::invalid_argument("HermitianOp: matrix must be square and nonempty");
    if (!is_hermitian(m_))
      throw std::invalid_argument("HermitianOp: input violates hermiticity tolerance");
  }
  const Matrix& mat() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  Matrix m_;
};

struct EigResult {
  RealVector values;  // descending
  Matrix vectors;     // columns aligned with values
};

// Eigendecomposition of a (near-)Hermitian matrix, eigenvalues descending.
inline EigResult hermitian_eig(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("hermitian_eig: matrix must be square and nonempty");
  if (!is_hermitian(m))
    throw std::invalid_argument("hermitian_eig: input violates hermiticity tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
  EigResult r;
  const Eigen::Index d = m.rows();
  r.values = solver.eigenvalues().reverse();
  r.vectors.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) r.vectors.col(i) = solver.eigenvectors().col(d - 1 - i);
  return r;
}

inline EigResult hermitian_eig(const HermitianOp& op) { return hermitian_eig(op.mat()); }

class DensityOp {
 public:
  explicit DensityOp(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0)
      throw std::invalid_argument("DensityOp: matrix must be square and nonempty");
    if (!is_hermitian(m_))
      throw std::invalid_argument("DensityOp: input violates hermiticity tolerance");
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > tol::trace || std::abs(m_.trace().imag()) > tol::trace)
      throw std::invalid_argument("DensityOp: trace must equal 1");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m_);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("DensityOp: eigensolver failed to converge");
    if (solver.eigenvalues().minCoeff() < -tol::psd)
      throw std::invalid_argument("DensityOp: negative eigenvalue beyond tolerance");
  }
  DensityOp(Matrix m, BipartiteLayout layout) : DensityOp(std::move(m)) {
    if (layout.total() != m_.rows())
      throw std::invalid_argument("DensityOp: layout does not factor the dimension");
    layout_ = layout;
    has_layout_ = true;
  }
  const Matrix& mat() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  bool has_layout() const { return has_layout_; }
  const BipartiteLayout& layout() const {
    if (!has_layout_) throw std::logic_error("DensityOp: no bipartite layout attached");
    return layout_;
  }

 private:
  Matrix m_;
  BipartiteLayout layout_{};
  bool has_layout_ = false;
};

class PureState {
 public:
  explicit PureState(Vector v) : v_(std::move(v)) {
    if (v_.size() == 0) throw std::invalid_argument("PureState: empty amplitude vector");
    if (std::abs(v_.norm() - 1.0) > tol::psd)
      throw std::invalid_argument("PureState: amplitude vector must have unit norm");
  }
  PureState(Vector v, BipartiteLayout layout) : PureState(std::move(v)) {
    if (layout.total() != v_.size())
      throw std::invalid_argument("PureState: layout does not factor the dimension");
    layout_ = layout;
    has_layout_ = true;
  }
  const Vector& vec() const { return v_; }
  Eigen::Index dim() const { return v_.size(); }
  Matrix projector() const { return v_ * v_.adjoint(); }
  DensityOp density() const {
    if (has_layout_) return DensityOp(projector(), layout_);
    return DensityOp(projector());
  }
  bool has_layout() const { return has_layout_; }
  const BipartiteLayout& layout() const {
    if (!has_layout_) throw std::logic_error("PureState: no bipartite layout attached");
    return layout_;
  }

 private:
  Vector v_;
  BipartiteLayout layout_{};
  bool has_layout_ = false;
};

// ----- Tensor and partial operations -----

inline Matrix tensor(const Matrix& a, const Matrix& b) {
  if (a.size() == 0 || b.size() == 0)
    throw std::invalid_argument("tensor: empty factor");
  return Eigen::kroneckerProduct(a, b).eval();
}

inline Vector tensor(const Vector& a, const Vector& b) {
  if (a.size() == 0 || b.size() == 0)
    throw std::invalid_argument("tensor: empty factor");
  return Eigen::kroneckerProduct(a, b).eval();
}

inline void check_layout(const Matrix& m, const BipartiteLayout& layout, const char* who) {
  if (m.rows() != m.cols()) throw std::invalid_argument(std::string(who) + ": matrix must be square");
  if (layout.total() != m.rows())
    throw std::invalid_argument(std::string(who) + ": layout does not factor the matrix dimension");
}

inline Matrix partial_trace(const Matrix& m, const BipartiteLayout& layout, Subsystem keep) {
  check_layout(m, layout, "partial_trace");
  const Eigen::Index da = layout.dim_a, df = layout.dim_f;
  if (keep == Subsystem::A) {
    Matrix out = Matrix::Zero(da, da);
    for (Eigen::Index a = 0; a < da; ++a)
      for (Eigen::Index b = 0; b < da; ++b)
        for (Eigen::Index f = 0; f < df; ++f) out(a, b) += m(layout.index(a, f), layout.index(b, f));
    return out;
  }
  Matrix out = Matrix::Zero(df, df);
  for (Eigen::Index f = 0; f < df; ++f)
    for (Eigen::Index g = 0; g < df; ++g)
      for (Eigen::Index a = 0; a < da; ++a) out(f, g) += m(layout.index(a, f), layout.index(a, g));
  return out;
}

inline Matrix partial_transpose(const Matrix& m, const BipartiteLayout& layout, Subsystem side) {
  check_layout(m, layout, "partial_transpose");
  const Eigen::Index da = layout.dim_a, df = layout.dim_f;
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index a = 0; a < da; ++a)
    for (Eigen::Index b = 0; b < da; ++b)
      for (Eigen::Index f = 0; f < df; ++f)
        for (Eigen::Index g = 0; g < df; ++g) {
          if (side == Subsystem::F)
            out(layout.index(a, f), layout.index(b, g)) = m(layout.index(a, g), layout.index(b, f));
          else
            out(layout.index(a, f), layout.index(b, g)) = m(layout.index(b, f), layout.index(a, g));
        }
  return out;
}

// ----- Spectral calculus -----
// Support convention: eigenvalues in [-tol::psd, tol::psd] count as exact
// zeros; fractional and negative powers act on the support only.

inline Matrix apply_spectral(const Matrix& m, const std::function<double(double)>& f) {
  EigResult e = hermitian_eig(m);
  RealVector mapped(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) mapped(i) = f(e.values(i));
  return e.vectors * mapped.asDiagonal() * e.vectors.adjoint();
}

inline Matrix operator_abs(const Matrix& m) {
  return apply_spectral(m, [](double x) { return std::abs(x); });
}

inline Matrix matrix_power(const Matrix& m, double p) {
  EigResult e = hermitian_eig(m);
  const Eigen::Index d = e.values.size();
  bool any_support = false;
  RealVector mapped(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    double x = e.values(i);
    if (x < -tol::psd)
      throw std::invalid_argument("matrix_power: negative eigenvalue beyond tolerance");
    if (x <= tol::psd) {
      mapped(i) = 0.0;  // outside support
      continue;
    }
    any_support = true;
    mapped(i) = std::pow(x, p);
  }
  if (!any_support && p < 0.0)
    throw std::invalid_argument("matrix_power: negative power of the zero operator");
  return e.vectors * mapped.asDiagonal() * e.vectors.adjoint();
}

// Projector onto the support (eigenvalues above the support cut).
inline Matrix support_projector(const Matrix& m) {
  return apply_spectral(m, [](double x) { return x > tol::psd ? 1.0 : 0.0; });
}

// ----- Purifications -----

enum class PurifyMode { Spectral, Uniform };

// Spectral: |psi> = sum_i sqrt(l_i) |v_i>|i>.  Uniform: the spectral
// purification rotated by a DFT on F, so every F-slice carries weight 1/dimF.
inline PureState purify(const DensityOp& rho, Eigen::Index dim_f, PurifyMode mode = PurifyMode::Spectral) {
  EigResult e = hermitian_eig(rho.mat());
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) > tol::psd) ++rank;
  if (dim_f < rank)
    throw std::invalid_argument("purify: purifying dimension smaller than rank");
  const Eigen::Index da = rho.dim();
  Vector out = Vector::Zero(da * dim_f);
  BipartiteLayout layout(da, dim_f);
  if (mode == PurifyMode::Spectral) {
    for (Eigen::Index i = 0; i < rank; ++i) {
      const double w = std::sqrt(std::max(e.values(i), 0.0));
      for (Eigen::Index a = 0; a < da; ++a) out(layout.index(a, i)) += w * e.vectors(a, i);
    }
  } else {
    const double ang = 2.0 * M_PI / static_cast<double>(dim_f);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim_f));
    for (Eigen::Index n = 0; n < dim_f; ++n)
      for (Eigen::Index i = 0; i < rank; ++i) {
        const cxd w = std::sqrt(std::max(e.values(i), 0.0)) * scale *
                      cxd(std::cos(ang * n * i), std::sin(ang * n * i));
        for (Eigen::Index a = 0; a < da; ++a) out(layout.index(a, n)) += w * e.vectors(a, i);
      }
  }
  out /= out.norm();
  return PureState(out, layout);
}

// ----- Deterministic sampler -----
// splitmix64 core; sub-streams derived from (label, index) so every random
// quantity in a run is a pure function of the root seed.

inline uint64_t splitmix64_next(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

class Sampler {
 public:
  explicit Sampler(uint64_t seed) : root_(seed), state_(seed) {}

  uint64_t next_u64() { return splitmix64_next(state_); }

  double uniform() {  // [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = 0.0;
    do { u = uniform(); } while (u <= 0.0);
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    spare_ = r * std::sin(2.0 * M_PI * v);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * v);
  }

  cxd cgaussian() { return cxd(gaussian(), gaussian()) / std::sqrt(2.0); }

  Matrix ginibre(Eigen::Index rows, Eigen::Index cols) {
    Matrix g(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = cgaussian();
    return g;
  }

  Matrix haar_unitary(Eigen::Index d) {
    Matrix g = ginibre(d, d);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < d; ++i) {
      cxd rii = r(i, i);
      const double a = std::abs(rii);
      q.col(i) *= (a > 0.0) ? rii / a : cxd(1.0, 0.0);
    }
    return q;
  }

  DensityOp random_density(Eigen::Index d, Eigen::Index rank) {
    if (rank <= 0 || rank > d) throw std::invalid_argument("random_density: bad rank");
    Matrix g = ginibre(d, rank);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = (rho + rho.adjoint()).eval() / 2.0;
    return DensityOp(rho);
  }

  PureState random_pure(Eigen::Index d) {
    Vector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = cgaussian();
    v /= v.norm();
    return PureState(v);
  }

  // Independent sub-stream for a named task instance.
  Sampler derive(const std::string& label, uint64_t index = 0) const {
    uint64_t mix = root_ ^ fnv1a64(label) ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    splitmix64_next(mix);
    return Sampler(mix);
  }

  uint64_t root_seed() const { return root_; }

 private:
  uint64_t root_;
  uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// ----- Small constructors used across modules -----

inline Vector basis_vector(Eigen::Index d, Eigen::Index i) {
  Vector v = Vector::Zero(d);
  v(i) = 1.0;
  return v;
}

inline PureState bell_state() {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return PureState(v, BipartiteLayout(2, 2));
}

inline PureState max_entangled(Eigen::Index d) {
  Vector v = Vector::Zero(d * d);
  BipartiteLayout layout(d, d);
  for (Eigen::Index i = 0; i < d; ++i) v(layout.index(i, i)) = 1.0 / std::sqrt(static_cast<double>(d));
  return PureState(v, layout);
}

}  // namespace densecode
