#pragma once

// Group actions on finite-dimensional systems: unitary representations,
// twirling channels, isotypic (block) decompositions with multiplicity-free
// certificates, the block decomposition of a bipartite pure state under a
// one-sided twirl, and superoperator/Choi machinery for encoder checks.

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "densecode/qmat.hpp"

namespace densecode {

// ----- Representations and block structures -----

struct UnitaryRep {
  std::string name;
  Eigen::Index dim = 0;
  bool projective = false;
  // Full element list for finite groups; a generating sample when
  // elements_are_generators is set (compact actions).
  std::vector<Matrix> elements;
  bool elements_are_generators = false;
};

struct IsotypicBlock {
  int label = 0;
  Eigen::Index dim = 0;
  Matrix projector;
};

struct IsotypicDecomposition {
  Eigen::Index ambient_dim = 0;
  std::vector<IsotypicBlock> blocks;

  void validate() const {
    Matrix sum = Matrix::Zero(ambient_dim, ambient_dim);
    for (const auto& b : blocks) {
      if (b.projector.rows() != ambient_dim || b.projector.cols() != ambient_dim)
        throw std::invalid_argument("IsotypicDecomposition: projector dimension mismatch");
      if (max_abs(Matrix(b.projector * b.projector - b.projector)) > tol::psd)
        throw std::invalid_argument("IsotypicDecomposition: projector not idempotent");
      const double tr = b.projector.trace().real();
      if (std::abs(tr - static_cast<double>(b.dim)) > tol::psd * ambient_dim)
        throw std::invalid_argument("IsotypicDecomposition: projector rank disagrees with block dim");
      sum += b.projector;
    }
    if (max_abs(Matrix(sum - Matrix::Identity(ambient_dim, ambient_dim))) > tol::psd)
      throw std::invalid_argument("IsotypicDecomposition: projectors do not resolve the identity");
    for (size_t i = 0; i < blocks.size(); ++i)
      for (size_t j = i + 1; j < blocks.size(); ++j)
        if (max_abs(Matrix(blocks[i].projector * blocks[j].projector)) > tol::psd)
          throw std::invalid_argument("IsotypicDecomposition: projectors not mutually orthogonal");
  }
};

// A twirling channel. Block form is the exact closed form whenever the
// decomposition is multiplicity-free; the finite average is kept alongside
// for dual-route checks on finite groups.
struct Twirler {
  std::string name;
  std::optional<UnitaryRep> rep;
  std::optional<IsotypicDecomposition> blocks;
  bool mult_free = false;
  // Number of invariant sectors the construction predicts (used by the
  // certificate check; equals blocks.size() when blocks are present).
  int expected_sectors = 0;

  Eigen::Index dim() const {
    if (blocks) return blocks->ambient_dim;
    if (rep) return rep->dim;
    throw std::logic_error("Twirler: empty");
  }

  Matrix twirl_average(const Matrix& x) const {
    if (!rep || rep->elements_are_generators)
      throw std::logic_error("Twirler: finite-average mode needs a full element list");
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    for (const auto& u : rep->elements) out += u * x * u.adjoint();
    return out / static_cast<double>(rep->elements.size());
  }

  Matrix twirl_blocks(const Matrix& x) const {
    if (!blocks) throw std::logic_error("Twirler: no block decomposition available");
    if (!mult_free)
      throw std::invalid_argument("Twirler: block-mode twirl requires a multiplicity-free decomposition");
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    for (const auto& b : blocks->blocks) {
      const cxd w = (b.projector * x).trace() / static_cast<double>(b.dim);
      out += w * b.projector;
    }
    return out;
  }

  Matrix twirl(const Matrix& x) const {
    if (x.rows() != dim() || x.cols() != dim())
      throw std::invalid_argument("Twirler: dimension mismatch");
    if (blocks && mult_free) return twirl_blocks(x);
    return twirl_average(x);
  }

  DensityOp twirl(const DensityOp& rho) const {
    Matrix g = twirl(rho.mat());
    g = (g + g.adjoint()).eval() / 2.0;
    return DensityOp(g);
  }

  // d^2 x d^2 superoperator in the column-stacking convention.
  Matrix superop() const {
    const Eigen::Index d = dim();
    Matrix s = Matrix::Zero(d * d, d * d);
    if (blocks && mult_free) {
      for (const auto& b : blocks->blocks) {
        Eigen::Map<const Vector> vp(b.projector.data(), d * d);
        s += (vp * vp.adjoint()) / static_cast<double>(b.dim);
      }
      return s;
    }
    if (!rep || rep->elements_are_generators)
      throw std::logic_error("Twirler: superoperator needs blocks or a full element list");
    for (const auto& u : rep->elements) s += tensor(u.conjugate(), u);
    return s / static_cast<double>(rep->elements.size());
  }
};

// ----- Standard constructions -----

inline Matrix pauli(int a) {
  Matrix m(2, 2);
  switch (a) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, cxd(0, -1), cxd(0, 1), 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli: index in 0..3");
  }
  return m;
}

inline Matrix clock_matrix(Eigen::Index d) {
  Matrix z = Matrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double ang = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(d);
    z(j, j) = cxd(std::cos(ang), std::sin(ang));
  }
  return z;
}

inline Matrix shift_matrix(Eigen::Index d) {
  Matrix x = Matrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) x((j + 1) % d, j) = 1.0;
  return x;
}

inline IsotypicDecomposition single_block_decomposition(Eigen::Index d) {
  IsotypicDecomposition dec;
  dec.ambient_dim = d;
  dec.blocks.push_back({0, d, Matrix::Identity(d, d)});
  return dec;
}

// Discrete Weyl-Heisenberg group on C^d: the d^2 words X^a Z^b. Projective
// and irreducible, so its twirl is the full depolarizer.
inline Twirler weyl_heisenberg(Eigen::Index d) {
  if (d < 2) throw std::invalid_argument("weyl_heisenberg: d >= 2");
  UnitaryRep rep;
  rep.name = "weyl_heisenberg(" + std::to_string(d) + ")";
  rep.dim = d;
  rep.projective = true;
  const Matrix x = shift_matrix(d), z = clock_matrix(d);
  Matrix xa = Matrix::Identity(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    Matrix w = xa;
    for (Eigen::Index b = 0; b < d; ++b) {
      rep.elements.push_back(w);
      w = w * z;
    }
    xa = x * xa;
  }
  Twirler t;
  t.name = rep.name;
  t.rep = std::move(rep);
  t.blocks = single_block_decomposition(d);
  t.mult_free = true;
  t.expected_sectors = 1;
  return t;
}

// Finite abelian phase group diag(1, w^{m_2}, ..., w^{m_d}) with w the
// levels-th root of unity; its twirl dephases in the computational basis.
inline Twirler diagonal_phases(Eigen::Index d, int levels) {
  if (d < 2 || levels < 2) throw std::invalid_argument("diagonal_phases: d >= 2 and levels >= 2");
  double count = std::pow(static_cast<double>(levels), static_cast<double>(d - 1));
  if (count > 4096.0) throw std::invalid_argument("diagonal_phases: group too large to enumerate");
  UnitaryRep rep;
  rep.name = "diagonal_phases(" + std::to_string(d) + "," + std::to_string(levels) + ")";
  rep.dim = d;
  rep.projective = false;
  const Eigen::Index n = static_cast<Eigen::Index>(count);
  for (Eigen::Index idx = 0; idx < n; ++idx) {
    Matrix u = Matrix::Zero(d, d);
    u(0, 0) = 1.0;
    Eigen::Index rem = idx;
    for (Eigen::Index i = 1; i < d; ++i) {
      const int m = static_cast<int>(rem % levels);
      rem /= levels;
      const double ang = 2.0 * M_PI * m / levels;
      u(i, i) = cxd(std::cos(ang), std::sin(ang));
    }
    rep.elements.push_back(std::move(u));
  }
  IsotypicDecomposition dec;
  dec.ambient_dim = d;
  for (Eigen::Index i = 0; i < d; ++i) {
    Matrix p = Matrix::Zero(d, d);
    p(i, i) = 1.0;
    dec.blocks.push_back({static_cast<int>(i), 1, std::move(p)});
  }
  Twirler t;
  t.name = rep.name;
  t.rep = std::move(rep);
  t.blocks = std::move(dec);
  t.mult_free = true;
  t.expected_sectors = static_cast<int>(d);
  return t;
}

// n-qubit Pauli words (4^n elements, projective, irreducible on 2^n).
inline Twirler pauli_words(int n) {
  if (n < 1 || n > 5) throw std::invalid_argument("pauli_words: n in 1..5");
  UnitaryRep rep;
  rep.name = "pauli_words(" + std::to_string(n) + ")";
  rep.dim = Eigen::Index(1) << n;
  rep.projective = true;
  const Eigen::Index count = Eigen::Index(1) << (2 * n);
  for (Eigen::Index idx = 0; idx < count; ++idx) {
    Matrix w = Matrix::Ones(1, 1);
    Eigen::Index rem = idx;
    for (int q = 0; q < n; ++q) {
      w = tensor(w, pauli(static_cast<int>(rem % 4)));
      rem /= 4;
    }
    rep.elements.push_back(std::move(w));
  }
  Twirler t;
  t.name = rep.name;
  t.rep = std::move(rep);
  t.blocks = single_block_decomposition(rep.dim);
  t.mult_free = true;
  t.expected_sectors = 1;
  return t;
}

inline Matrix embed_single_site(const Matrix& op, int site, int n) {
  Matrix out = Matrix::Ones(1, 1);
  for (int q = 0; q < n; ++q) out = tensor(out, q == site ? op : Matrix(Matrix::Identity(2, 2)));
  return out;
}

// Joint unitary-plus-permutation symmetry on N qubits: isotypic blocks are
// the eigenspaces of the total-spin Casimir operator. Element list stores a
// generating sample (collective rotations and adjacent transpositions) for
// commutant checks; the twirl itself uses the closed block form.
inline Twirler casimir_su2_blocks(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 10) throw std::invalid_argument("casimir_su2_blocks: N in 1..10");
  const int n = n_qubits;
  const Eigen::Index d = Eigen::Index(1) << n;
  Matrix casimir = Matrix::Zero(d, d);
  for (int a = 1; a <= 3; ++a) {
    Matrix total = Matrix::Zero(d, d);
    for (int site = 0; site < n; ++site) total += embed_single_site(pauli(a) / 2.0, site, n);
    casimir += total * total;
  }
  EigResult e = hermitian_eig(casimir);
  // Eigenvalues cluster at j(j+1), j = N/2 - k; label blocks by k.
  std::map<long, std::vector<Eigen::Index>> clusters;
  for (Eigen::Index i = 0; i < d; ++i) clusters[std::lround(e.values(i) * 4.0)].push_back(i);
  IsotypicDecomposition dec;
  dec.ambient_dim = d;
  std::vector<std::pair<double, std::vector<Eigen::Index>>> ordered;
  for (auto& [key, idx] : clusters) ordered.push_back({static_cast<double>(key) / 4.0, idx});
  std::sort(ordered.begin(), ordered.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  int k = 0;
  for (auto& [eig, idx] : ordered) {
    Matrix p = Matrix::Zero(d, d);
    for (Eigen::Index col : idx) p += e.vectors.col(col) * e.vectors.col(col).adjoint();
    p = (p + p.adjoint()).eval() / 2.0;
    dec.blocks.push_back({k++, static_cast<Eigen::Index>(idx.size()), std::move(p)});
  }
  UnitaryRep rep;
  rep.name = "casimir_su2_blocks(" + std::to_string(n) + ")";
  rep.dim = d;
  rep.projective = true;
  rep.elements_are_generators = true;
  Sampler sampler(0xC0FFEEULL + static_cast<uint64_t>(n));
  for (int rgen = 0; rgen < 2; ++rgen) {
    const Matrix u = sampler.haar_unitary(2);
    Matrix site = Matrix::Ones(1, 1);
    for (int q = 0; q < n; ++q) site = tensor(site, u);
    rep.elements.push_back(std::move(site));
  }
  for (int site = 0; site + 1 < n; ++site) {
    Matrix swap = Matrix::Zero(d, d);
    for (Eigen::Index x = 0; x < d; ++x) {
      const Eigen::Index bi = (x >> (n - 1 - site)) & 1, bj = (x >> (n - 2 - site)) & 1;
      Eigen::Index y = x & ~((Eigen::Index(1) << (n - 1 - site)) | (Eigen::Index(1) << (n - 2 - site)));
      y |= (bj << (n - 1 - site)) | (bi << (n - 2 - site));
      swap(y, x) = 1.0;
    }
    rep.elements.push_back(std::move(swap));
  }
  Twirler t;
  t.name = rep.name;
  t.rep = std::move(rep);
  t.blocks = std::move(dec);
  t.mult_free = true;
  t.expected_sectors = static_cast<int>(t.blocks->blocks.size());
  return t;
}

// One-generator collective rotation about a fixed axis on N qubits,
// e^{i theta s} x ... x e^{i theta s}, sampled as the cyclic group of order
// 2N+1 so the average reproduces the compact twirl exactly. Charge sectors
// carry multiplicities for N >= 2, so this action is not multiplicity-free.
inline Twirler collective_rotation(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 10) throw std::invalid_argument("collective_rotation: N in 1..10");
  const int n = n_qubits;
  const Eigen::Index d = Eigen::Index(1) << n;
  const int order = 2 * n + 1;
  UnitaryRep rep;
  rep.name = "collective_rotation(" + std::to_string(n) + ")";
  rep.dim = d;
  rep.projective = true;
  for (int j = 0; j < order; ++j) {
    Matrix u = Matrix::Zero(d, d);
    for (Eigen::Index x = 0; x < d; ++x) {
      int charge = 0;
      for (int q = 0; q < n; ++q) charge += ((x >> q) & 1) ? -1 : 1;
      const double ang = 2.0 * M_PI * j * charge / order;
      u(x, x) = cxd(std::cos(ang), std::sin(ang));
    }
    rep.elements.push_back(std::move(u));
  }
  Twirler t;
  t.name = rep.name;
  t.rep = std::move(rep);
  t.mult_free = false;
  t.expected_sectors = n + 1;  // distinct charges
  return t;
}

// ----- Multiplicity-free certificate -----

struct MultFreeReport {
  int commutant_dim = 0;
  bool commutant_abelian = false;
  bool certificate = false;
  double witness_max_commutator = 0.0;
  bool randomized_witness = false;
};

inline std::vector<Matrix> hermitian_basis(Eigen::Index d) {
  std::vector<Matrix> basis;
  for (Eigen::Index i = 0; i < d; ++i) {
    Matrix b = Matrix::Zero(d, d);
    b(i, i) = 1.0;
    basis.push_back(std::move(b));
  }
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j) {
      Matrix b = Matrix::Zero(d, d);
      b(i, j) = s;
      b(j, i) = s;
      basis.push_back(b);
      b(i, j) = cxd(0, s);
      b(j, i) = cxd(0, -s);
      basis.push_back(std::move(b));
    }
  return basis;
}

// Exact path: solve [X, U_g] = 0 over Hermitian X for every listed element
// (or generator); the commutant dimension is the nullity of the stacked
// system and the certificate additionally requires an abelian commutant.
inline MultFreeReport multiplicity_free_check(const UnitaryRep& rep, int expected_sectors = -1) {
  const Eigen::Index d = rep.dim;
  const auto basis = hermitian_basis(d);
  const Eigen::Index nb = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd sys(2 * d * d * static_cast<Eigen::Index>(rep.elements.size()), nb);
  for (Eigen::Index col = 0; col < nb; ++col) {
    Eigen::Index row = 0;
    for (const auto& u : rep.elements) {
      const Matrix r = u * basis[col] - basis[col] * u;
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
          sys(row++, col) = r(i, j).real();
          sys(row++, col) = r(i, j).imag();
        }
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys, Eigen::ComputeThinV);
  const double cut = 1e-8 * std::max(1.0, svd.singularValues().size() ? svd.singularValues()(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > cut) ++rank;
  MultFreeReport report;
  report.commutant_dim = static_cast<int>(nb - rank);
  std::vector<Matrix> commutant;
  for (Eigen::Index c = rank; c < nb; ++c) {
    Matrix x = Matrix::Zero(d, d);
    for (Eigen::Index b = 0; b < nb; ++b) x += svd.matrixV()(b, c) * basis[b];
    commutant.push_back(std::move(x));
  }
  report.commutant_abelian = true;
  for (size_t i = 0; i < commutant.size() && report.commutant_abelian; ++i)
    for (size_t j = i + 1; j < commutant.size(); ++j) {
      if (max_abs(Matrix(commutant[i] * commutant[j] - commutant[j] * commutant[i])) > 1e-8) {
        report.commutant_abelian = false;
        break;
      }
    }
  report.certificate = report.commutant_abelian &&
                       (expected_sectors < 0 || report.commutant_dim == expected_sectors);
  return report;
}

// Randomized witness: twirled outputs of a multiplicity-free action commute.
inline void attach_randomized_witness(MultFreeReport& report, const Twirler& t, Sampler sampler,
                                      int pairs = 100) {
  double worst = 0.0;
  const Eigen::Index d = t.dim();
  for (int i = 0; i < pairs; ++i) {
    const Matrix a = t.twirl(sampler.random_density(d, d).mat());
    const Matrix b = t.twirl(sampler.random_density(d, d).mat());
    worst = std::max(worst, max_abs(Matrix(a * b - b * a)));
  }
  report.witness_max_commutator = worst;
  report.randomized_witness = worst <= 1e-8;
}

inline MultFreeReport multiplicity_free_check(const Twirler& t, Sampler sampler, int pairs = 100) {
  if (!t.rep) throw std::invalid_argument("multiplicity_free_check: twirler carries no representation");
  MultFreeReport report = multiplicity_free_check(*t.rep, t.expected_sectors);
  attach_randomized_witness(report, t, sampler, pairs);
  return report;
}

// ----- Block decomposition of a bipartite pure state -----

struct XiState {
  std::vector<double> pk;
  std::vector<Eigen::Index> block_dims;
  std::vector<int> block_labels;
  std::vector<Matrix> rho_f;       // conditional F states, one per kept block
  std::vector<Matrix> projectors;  // A-side projectors of kept blocks
  BipartiteLayout layout;
  std::vector<int> omitted_blocks;  // labels with vanishing probability

  Matrix assemble() const {
    Matrix out = Matrix::Zero(layout.total(), layout.total());
    for (size_t k = 0; k < pk.size(); ++k)
      out += pk[k] * tensor(Matrix(projectors[k] / static_cast<double>(block_dims[k])), rho_f[k]);
    return out;
  }

  Matrix marginal_a() const {
    Matrix out = Matrix::Zero(layout.dim_a, layout.dim_a);
    for (size_t k = 0; k < pk.size(); ++k)
      out += pk[k] * projectors[k] / static_cast<double>(block_dims[k]);
    return out;
  }

  Matrix marginal_f() const {
    Matrix out = Matrix::Zero(layout.dim_f, layout.dim_f);
    for (size_t k = 0; k < pk.size(); ++k) out += pk[k] * rho_f[k];
    return out;
  }
};

inline XiState symmetric_decomposition(const PureState& psi, const IsotypicDecomposition& dec) {
  const BipartiteLayout layout = psi.layout();
  if (dec.ambient_dim != layout.dim_a)
    throw std::invalid_argument("symmetric_decomposition: blocks do not match the A dimension");
  XiState xi;
  xi.layout = layout;
  const Matrix ident_f = Matrix::Identity(layout.dim_f, layout.dim_f);
  double total = 0.0;
  for (const auto& b : dec.blocks) {
    const Matrix pk_full = tensor(b.projector, ident_f);
    const Vector projected = pk_full * psi.vec();
    const double p = projected.squaredNorm();
    total += p;
    if (p <= tol::psd) {
      xi.omitted_blocks.push_back(b.label);
      continue;
    }
    Matrix rho_fk = partial_trace(Matrix(projected * projected.adjoint()), layout, Subsystem::F) / p;
    rho_fk = (rho_fk + rho_fk.adjoint()).eval() / 2.0;
    xi.pk.push_back(p);
    xi.block_dims.push_back(b.dim);
    xi.block_labels.push_back(b.label);
    xi.rho_f.push_back(std::move(rho_fk));
    xi.projectors.push_back(b.projector);
  }
  if (std::abs(total - 1.0) > tol::trace)
    throw std::runtime_error("symmetric_decomposition: block probabilities do not sum to 1");
  return xi;
}

// ----- Channels as superoperators / Choi operators -----

inline Vector vec_of(const Matrix& x) { return Eigen::Map<const Vector>(x.data(), x.size()); }

inline Matrix unvec(const Vector& v, Eigen::Index d) {
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

inline Matrix apply_superop(const Matrix& s, const Matrix& x) {
  const Eigen::Index d = x.rows();
  return unvec(s * vec_of(x), d);
}

inline Matrix superop_of_unitary(const Matrix& u) { return tensor(u.conjugate(), u); }

// Channel on a d-dimensional system. Choi operator is trace-normalized
// (in x out layout), so complete positivity reads "choi PSD" and trace
// preservation reads "in-marginal of choi = I/d".
struct ChannelRep {
  std::string name;
  Eigen::Index d = 0;
  Matrix superop;
  Matrix choi;
  bool is_cp = false;
  bool is_tp = false;
  bool is_unital = false;
  bool choi_ppt = false;

  static ChannelRep from_superop(std::string name, const Matrix& s) {
    ChannelRep ch;
    ch.name = std::move(name);
    const auto dd = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(s.rows()))));
    if (dd * dd != s.rows() || s.rows() != s.cols())
      throw std::invalid_argument("ChannelRep: superoperator must be d^2 x d^2");
    ch.d = dd;
    ch.superop = s;
    BipartiteLayout layout(dd, dd);
    ch.choi = Matrix::Zero(dd * dd, dd * dd);
    for (Eigen::Index i = 0; i < dd; ++i)
      for (Eigen::Index j = 0; j < dd; ++j) {
        const Matrix eij = basis_vector(dd, i) * basis_vector(dd, j).adjoint();
        const Matrix out = apply_superop(s, eij);
        for (Eigen::Index k = 0; k < dd; ++k)
          for (Eigen::Index l = 0; l < dd; ++l)
            ch.choi(layout.index(i, k), layout.index(j, l)) = out(k, l) / static_cast<double>(dd);
      }
    ch.choi = ((ch.choi + ch.choi.adjoint()) / 2.0).eval();
    EigResult ce = hermitian_eig(ch.choi);
    ch.is_cp = ce.values.minCoeff() >= -tol::psd;
    const Matrix in_marginal = partial_trace(ch.choi, layout, Subsystem::A);
    ch.is_tp = max_abs(Matrix(in_marginal - Matrix::Identity(dd, dd) / static_cast<double>(dd))) <= tol::report;
    ch.is_unital =
        max_abs(Matrix(apply_superop(s, Matrix::Identity(dd, dd)) - Matrix::Identity(dd, dd))) <= tol::report;
    const Matrix pt = partial_transpose(ch.choi, layout, Subsystem::F);
    ch.choi_ppt = hermitian_eig(pt).values.minCoeff() >= -tol::psd;
    return ch;
  }
};

inline ChannelRep unitary_channel(const Matrix& u, std::string name = "unitary") {
  return ChannelRep::from_superop(std::move(name), superop_of_unitary(u));
}

// Transpose in the basis given by the columns of v (default computational).
inline ChannelRep transpose_channel(Eigen::Index d, const Matrix& v = Matrix()) {
  Matrix basis = v.size() ? v : Matrix(Matrix::Identity(d, d));
  Matrix s = Matrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      // Matrix units in the chosen basis are Hilbert-Schmidt orthonormal,
      // so summing |image><unit| over all of them assembles the map.
      const Matrix eij = basis.col(i) * basis.col(j).adjoint();
      const Matrix out = basis.col(j) * basis.col(i).adjoint();
      s += vec_of(out) * vec_of(eij).adjoint();
    }
  return ChannelRep::from_superop("transpose", s);
}

inline ChannelRep dephasing_channel(Eigen::Index d) {
  Matrix s = Matrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Matrix eii = basis_vector(d, i) * basis_vector(d, i).adjoint();
    s += vec_of(eii) * vec_of(eii).adjoint();
  }
  return ChannelRep::from_superop("dephasing", s);
}

inline ChannelRep depolarizing_channel(Eigen::Index d) {
  const Matrix ident = Matrix::Identity(d, d);
  Matrix s = vec_of(ident) * vec_of(ident).adjoint() / static_cast<double>(d);
  return ChannelRep::from_superop("depolarizing", s);
}

inline ChannelRep replacer_channel(const DensityOp& sigma) {
  const Eigen::Index d = sigma.dim();
  const Matrix ident = Matrix::Identity(d, d);
  Matrix s = vec_of(sigma.mat()) * vec_of(ident).adjoint();
  return ChannelRep::from_superop("replacer", s);
}

// ----- Covariance condition and encoder classes -----

struct Co1Report {
  bool holds = false;
  double max_violation = 0.0;
};

// A valid encoder must commute with the twirl and preserve it:
// E o G = G o E = G as superoperators.
inline Co1Report check_co1(const ChannelRep& ch, const Twirler& t) {
  const Matrix sg = t.superop();
  const double a = max_abs(Matrix(ch.superop * sg - sg));
  const double b = max_abs(Matrix(sg * ch.superop - sg));
  Co1Report r;
  r.max_violation = std::max(a, b);
  r.holds = r.max_violation <= tol::report;
  return r;
}

enum class TriState { Yes, No, Unknown };

struct EncoderClass {
  Co1Report co1;
  TriState in_eg = TriState::Unknown;
  bool in_ecp = false;
  bool in_eppt = false;
  bool in_ep_necessary = false;
  double min_output_eig = 0.0;  // over sampled pure inputs
};

inline EncoderClass classify_encoder(const ChannelRep& ch, const Twirler& t, Sampler sampler,
                                     int positivity_samples = 1000) {
  EncoderClass ec;
  ec.co1 = check_co1(ch, t);
  double min_eig = 0.0;
  bool first = true;
  for (int i = 0; i < positivity_samples; ++i) {
    const PureState psi = sampler.random_pure(ch.d);
    const Matrix out = apply_superop(ch.superop, psi.projector());
    const double m = hermitian_eig(Matrix((out + out.adjoint()) / 2.0)).values.minCoeff();
    min_eig = first ? m : std::min(min_eig, m);
    first = false;
  }
  ec.min_output_eig = min_eig;
  const bool positive_on_samples = min_eig >= -tol::psd;
  ec.in_ecp = ch.is_cp && ch.is_tp && ec.co1.holds;
  ec.in_eppt = ch.choi_ppt && ch.is_tp && positive_on_samples && ec.co1.holds;
  ec.in_ep_necessary = ch.is_tp && positive_on_samples && ec.co1.holds;
  if (t.rep && !t.rep->elements_are_generators) {
    ec.in_eg = TriState::No;
    for (const auto& u : t.rep->elements) {
      if (max_abs(Matrix(ch.superop - superop_of_unitary(u))) <= tol::report) {
        ec.in_eg = TriState::Yes;
        break;
      }
    }
  }
  return ec;
}

}  // namespace densecode
