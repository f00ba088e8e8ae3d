#pragma once

// Explicit two-stage coding construction and its exact decoding error:
// hash partition of the purifying alphabet, block-projector trimming of the
// conditional states, Fourier measurement on each fiber, random (or given)
// group codewords, and the square-root decoder. Also the transpose-encoder
// witness experiment and the rank-one partial-transpose identity sweep.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qmat.hpp"
#include "symmetry.hpp"

namespace densecode {

// ----- Hash partitions of the purifying alphabet -----

namespace detail {

struct PrimePower {
  int p = 0;
  int e = 0;
  bool ok = false;
};

inline PrimePower prime_power_of(int n) {
  PrimePower r;
  if (n < 2) return r;
  int m = n;
  for (int p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      int e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      if (m != 1) return r;  // second prime factor
      r.p = p;
      r.e = e;
      r.ok = true;
      return r;
    }
  }
  r.p = m;  // n itself prime
  r.e = 1;
  r.ok = true;
  return r;
}

// Row rank of a b x a matrix over F_p by Gaussian elimination.
inline int fp_row_rank(std::vector<std::vector<int>> m, int p) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r) {
      if (m[r][c] % p != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    // scale pivot row to 1
    int inv = 1;
    for (int k = 1; k < p; ++k) {
      if (m[rank][c] * k % p == 1) {
        inv = k;
        break;
      }
    }
    for (int c2 = 0; c2 < cols; ++c2) m[rank][c2] = m[rank][c2] * inv % p;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || m[r][c] == 0) continue;
      const int f = m[r][c];
      for (int c2 = 0; c2 < cols; ++c2)
        m[r][c2] = ((m[r][c2] - f * m[rank][c2]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

inline int uniform_index(Sampler& rng, int n) {
  const int i = static_cast<int>(rng.uniform() * n);
  return std::min(i, n - 1);
}

}  // namespace detail

struct HashPartition {
  int n = 0;  // alphabet size
  int t = 0;  // image size, divides n
  std::vector<int> map;
  std::string family;

  int fiber_size() const { return n / t; }

  std::vector<std::vector<int>> fibers() const {
    std::vector<std::vector<int>> out(t);
    for (int x = 0; x < n; ++x) out[map[x]].push_back(x);
    return out;
  }

  void validate() const {
    if (n < 1 || t < 1 || n % t != 0)
      throw std::invalid_argument("HashPartition: image size must divide the alphabet");
    if (static_cast<int>(map.size()) != n)
      throw std::invalid_argument("HashPartition: map size mismatch");
    std::vector<int> counts(t, 0);
    for (int v : map) {
      if (v < 0 || v >= t) throw std::invalid_argument("HashPartition: value out of range");
      ++counts[v];
    }
    for (int c : counts)
      if (c != n / t)
        throw std::invalid_argument("HashPartition: fibers are not of equal size");
  }
};

// Surjective equal-fiber hash. When both sizes are powers of the same prime
// the map is affine and full-rank over F_p (a 2-universal family restricted
// to its surjective members); otherwise a random balanced assignment stands
// in, which still meets the collision budget 1/T.
inline HashPartition build_hash(int n, int t, Sampler& rng) {
  if (n < 1 || t < 1 || n % t != 0)
    throw std::invalid_argument("build_hash: image size must divide the alphabet");
  HashPartition h;
  h.n = n;
  h.t = t;
  h.map.assign(n, 0);
  if (t == 1) {
    h.family = "linear-over-prime-field";
    h.validate();
    return h;
  }
  const auto pn = detail::prime_power_of(n);
  const auto pt = detail::prime_power_of(t);
  if (pn.ok && pt.ok && pn.p == pt.p) {
    const int p = pn.p, a = pn.e, b = pt.e;
    std::vector<std::vector<int>> mat(b, std::vector<int>(a, 0));
    for (int tries = 0;; ++tries) {
      for (auto& row : mat)
        for (auto& v : row) v = detail::uniform_index(rng, p);
      if (detail::fp_row_rank(mat, p) == b) break;
      if (tries > 512) throw std::runtime_error("build_hash: could not sample a surjective map");
    }
    std::vector<int> shift(b);
    for (auto& v : shift) v = detail::uniform_index(rng, p);
    for (int x = 0; x < n; ++x) {
      int digits = x;
      std::vector<int> xd(a);
      for (int i = 0; i < a; ++i) {
        xd[i] = digits % p;
        digits /= p;
      }
      int y = 0;
      for (int r = b - 1; r >= 0; --r) {
        int acc = shift[r];
        for (int c = 0; c < a; ++c) acc += mat[r][c] * xd[c];
        y = y * p + acc % p;
      }
      h.map[x] = y;
    }
    h.family = "linear-over-prime-field";
  } else {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i)
      std::swap(perm[i], perm[detail::uniform_index(rng, i + 1)]);
    for (int i = 0; i < n; ++i) h.map[perm[i]] = i % t;
    h.family = "balanced-random";
  }
  h.validate();
  return h;
}

// Empirical collision rate of the family: fresh hash per sampled pair.
struct CollisionEstimate {
  double rate = 0.0;
  double sigma = 0.0;
  int pairs = 0;
};

inline CollisionEstimate estimate_collision_rate(int n, int t, int pairs, Sampler& rng) {
  if (n < 2) throw std::invalid_argument("estimate_collision_rate: alphabet too small");
  int hits = 0;
  for (int i = 0; i < pairs; ++i) {
    const HashPartition h = build_hash(n, t, rng);
    const int x = detail::uniform_index(rng, n);
    int y = detail::uniform_index(rng, n - 1);
    if (y >= x) ++y;
    if (h.map[x] == h.map[y]) ++hits;
  }
  CollisionEstimate est;
  est.pairs = pairs;
  est.rate = static_cast<double>(hits) / pairs;
  est.sigma = std::sqrt(std::max(est.rate * (1.0 - est.rate), 1e-12) / pairs);
  return est;
}

// ----- Trimmed conditional ensembles (the achievability lemma's objects) -----

struct LemmaInstance {
  Eigen::Index dim = 0;         // ambient A dimension
  int count = 0;                // number of conditional states L
  std::vector<Vector> psi;      // conditional pure states (unit norm)
  std::vector<Matrix> q;        // orthogonal invariant projectors, one per l
  std::vector<int> assignment;  // block index -> conditional index
  std::vector<Matrix> twirled;  // twirl of each conditional state
  double delta = 0.0;           // trimming loss
  Matrix sigma_bar;             // (1/L) sum_l Q_l G(psi_l) Q_l, trace 1 - delta
};

// Assigns every invariant block to one conditional state (greedy: the state
// with the largest weight in that block, ties to the smallest index) and
// builds the trimmed ensemble. An explicit assignment may be supplied; it
// must cover every block with a valid index, disjointness is then automatic.
inline LemmaInstance build_lemma_instance(const std::vector<Vector>& psi, const Twirler& tw,
                                          const std::vector<int>* explicit_assignment = nullptr) {
  if (!tw.mult_free || !tw.blocks)
    throw std::invalid_argument("build_lemma_instance: multiplicity-free block twirler required");
  if (psi.empty()) throw std::invalid_argument("build_lemma_instance: no conditional states");
  const auto& blocks = tw.blocks->blocks;
  LemmaInstance inst;
  inst.dim = tw.dim();
  inst.count = static_cast<int>(psi.size());
  inst.psi = psi;
  for (const auto& v : psi) {
    if (v.size() != inst.dim)
      throw std::invalid_argument("build_lemma_instance: conditional state dimension mismatch");
    if (std::abs(v.norm() - 1.0) > tol::psd)
      throw std::invalid_argument("build_lemma_instance: conditional states must be normalized");
  }
  if (explicit_assignment) {
    if (explicit_assignment->size() != blocks.size())
      throw std::invalid_argument("build_lemma_instance: assignment must cover every block");
    for (int l : *explicit_assignment)
      if (l < 0 || l >= inst.count)
        throw std::invalid_argument("build_lemma_instance: assignment index out of range");
    inst.assignment = *explicit_assignment;
  } else {
    for (const auto& b : blocks) {
      int best_l = 0;
      double best = -1.0;
      for (int l = 0; l < inst.count; ++l) {
        const double w = std::real(psi[l].dot(b.projector * psi[l]));
        if (w > best + 1e-15) {
          best = w;
          best_l = l;
        }
      }
      inst.assignment.push_back(best_l);
    }
  }
  inst.q.assign(inst.count, Matrix::Zero(inst.dim, inst.dim));
  for (std::size_t k = 0; k < blocks.size(); ++k) inst.q[inst.assignment[k]] += blocks[k].projector;

  double kept = 0.0;
  for (int l = 0; l < inst.count; ++l) kept += std::real(psi[l].dot(inst.q[l] * psi[l]));
  inst.delta = 1.0 - kept / inst.count;
  if (inst.delta > 1.0 - 1e-12)
    throw std::runtime_error("build_lemma_instance: degenerate instance, all weight trimmed");
  inst.delta = std::clamp(inst.delta, 0.0, 1.0);

  inst.sigma_bar = Matrix::Zero(inst.dim, inst.dim);
  for (int l = 0; l < inst.count; ++l) {
    const Matrix g = tw.twirl(Matrix(psi[l] * psi[l].adjoint()));
    inst.twirled.push_back(g);
    inst.sigma_bar += inst.q[l] * g * inst.q[l];
  }
  inst.sigma_bar /= static_cast<double>(inst.count);
  inst.sigma_bar = ((inst.sigma_bar + inst.sigma_bar.adjoint()) / 2.0).eval();
  if (std::abs(inst.sigma_bar.trace().real() - (1.0 - inst.delta)) > 1e-9)
    throw std::runtime_error("build_lemma_instance: trimmed average trace != 1 - delta");
  return inst;
}

// Fourier basis on the fiber register: b_{l'} has components zeta^{l l'}/sqrt(L).
inline std::vector<Vector> fourier_measurement(int count) {
  if (count < 1) throw std::invalid_argument("fourier_measurement: count must be positive");
  std::vector<Vector> out;
  const double step = 2.0 * M_PI / count;
  for (int lp = 0; lp < count; ++lp) {
    Vector b(count);
    for (int l = 0; l < count; ++l)
      b(l) = std::polar(1.0 / std::sqrt(static_cast<double>(count)), step * l * lp);
    out.push_back(std::move(b));
  }
  return out;
}

// ----- Codebooks -----

inline std::vector<Matrix> rep_codewords(const UnitaryRep& rep, const std::vector<int>& indices) {
  if (rep.elements_are_generators || rep.elements.empty())
    throw std::invalid_argument("rep_codewords: explicit codewords need a full element list");
  if (indices.empty()) throw std::invalid_argument("rep_codewords: empty codebook");
  if (indices.size() > rep.elements.size())
    throw std::invalid_argument("rep_codewords: more codewords than group elements");
  std::vector<int> seen;
  std::vector<Matrix> out;
  for (int i : indices) {
    if (i < 0 || i >= static_cast<int>(rep.elements.size()))
      throw std::invalid_argument("rep_codewords: index out of range");
    if (std::find(seen.begin(), seen.end(), i) != seen.end())
      throw std::invalid_argument("rep_codewords: explicit codewords must not repeat");
    seen.push_back(i);
    out.push_back(rep.elements[i]);
  }
  return out;
}

// Independent uniform draws from a finite element list (repetition allowed).
inline std::vector<Matrix> random_rep_codewords(const UnitaryRep& rep, int m, Sampler& rng) {
  if (rep.elements_are_generators || rep.elements.empty())
    throw std::invalid_argument("random_rep_codewords: need a full element list");
  if (m < 1) throw std::invalid_argument("random_rep_codewords: empty codebook");
  std::vector<Matrix> out;
  for (int i = 0; i < m; ++i)
    out.push_back(rep.elements[detail::uniform_index(rng, static_cast<int>(rep.elements.size()))]);
  return out;
}

// Haar draws lifted to a collective action u -> u^{(x) sites} on qubits.
inline std::vector<Matrix> random_collective_codewords(int sites, int m, Sampler& rng) {
  if (sites < 1 || m < 1) throw std::invalid_argument("random_collective_codewords: bad sizes");
  std::vector<Matrix> out;
  for (int i = 0; i < m; ++i) {
    const Matrix u = rng.haar_unitary(2);
    Matrix lift = u;
    for (int s = 1; s < sites; ++s) lift = tensor(lift, u);
    out.push_back(std::move(lift));
  }
  return out;
}

// ----- The coded protocol on one instance -----

struct DenseCode {
  int m = 0;  // codebook size
  double rate_bits = 0.0;
  std::vector<Matrix> codewords;
  std::vector<Vector> fred_vectors;            // rank-one measurement on the fiber register
  std::vector<std::vector<Matrix>> bob_povm;   // per Fred outcome: M elements then abort
  double exact_error = 1.0;
  double bound = std::numeric_limits<double>::infinity();
  double best_s = 0.0;
  double delta = 0.0;

  void validate() const {
    for (const auto& povm : bob_povm) {
      Matrix sum = Matrix::Zero(povm[0].rows(), povm[0].cols());
      for (const auto& e : povm) {
        if (hermitian_eig(Matrix((e + e.adjoint()) / 2.0)).values.minCoeff() < -tol::psd)
          throw std::runtime_error("DenseCode: POVM element not PSD");
        sum += e;
      }
      if (max_abs(Matrix(sum - Matrix::Identity(sum.rows(), sum.cols()))) > tol::report)
        throw std::runtime_error("DenseCode: POVM does not resolve the identity");
    }
    if (exact_error < -1e-12 || exact_error > 1.0 + 1e-12)
      throw std::runtime_error("DenseCode: error outside [0,1]");
  }
};

// Random-coding error bound for the instance: min over the s grid of
// 8 M^s (1-delta)^{-s} tr sigma_bar^{1+s} + 2 delta.
inline std::pair<double, double> random_coding_bound(const LemmaInstance& inst, int m,
                                                     int s_grid = 64) {
  if (s_grid < 2) throw std::invalid_argument("random_coding_bound: grid too small");
  const RealVector w = hermitian_eig(inst.sigma_bar).values;
  double best = std::numeric_limits<double>::infinity();
  double best_s = 0.0;
  for (int j = 0; j < s_grid; ++j) {
    const double s = static_cast<double>(j) / (s_grid - 1);
    double tr_pow = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i)
      if (w(i) > tol::psd) tr_pow += std::pow(w(i), 1.0 + s);
    const double value =
        8.0 * std::pow(static_cast<double>(m), s) * std::pow(1.0 - inst.delta, -s) * tr_pow +
        2.0 * inst.delta;
    if (value < best) {
      best = value;
      best_s = s;
    }
  }
  return {best, best_s};
}

// Builds the coded protocol for one instance: Fourier measurement on the
// fiber register, codeword modulation, and the square-root decoder over the
// trimmed ensemble. The exact error is evaluated against the true
// (untrimmed) post-measurement states; the trimmed states only shape the
// decoder, exactly as in the construction.
inline DenseCode build_code(const LemmaInstance& inst, const std::vector<Matrix>& codewords,
                            int s_grid = 64) {
  if (codewords.empty()) throw std::invalid_argument("build_code: empty codebook");
  for (const auto& u : codewords)
    if (u.rows() != inst.dim || u.cols() != inst.dim)
      throw std::invalid_argument("build_code: codeword dimension mismatch");
  DenseCode code;
  code.m = static_cast<int>(codewords.size());
  code.rate_bits = std::log2(static_cast<double>(code.m));
  code.codewords = codewords;
  code.delta = inst.delta;

  const int count = inst.count;
  const double step = 2.0 * M_PI / count;
  const Matrix ident = Matrix::Identity(inst.dim, inst.dim);

  // Fourier-combined vectors; trimmed ones steer the decoder, raw ones are
  // the actual post-measurement states.
  std::vector<Vector> phi(count), raw(count);
  for (int lp = 0; lp < count; ++lp) {
    Vector p = Vector::Zero(inst.dim);
    Vector r = Vector::Zero(inst.dim);
    for (int l = 0; l < count; ++l) {
      const cxd z = std::polar(1.0 / count, -step * l * lp);
      p += z * (inst.q[l] * inst.psi[l]);
      r += z * inst.psi[l];
    }
    // Orthogonality of the Q_l makes every combination carry the same weight.
    if (std::abs(p.squaredNorm() - (1.0 - inst.delta) / count) > 1e-9)
      throw std::runtime_error("build_code: trimmed vector norm != (1-delta)/L");
    phi[lp] = std::move(p);
    raw[lp] = std::move(r);
  }

  code.fred_vectors = fourier_measurement(count);

  double success = 0.0;
  for (int lp = 0; lp < count; ++lp) {
    std::vector<Vector> modulated;
    Matrix s_op = Matrix::Zero(inst.dim, inst.dim);
    for (const auto& u : codewords) {
      Vector v = u * phi[lp];
      s_op += v * v.adjoint();
      modulated.push_back(std::move(v));
    }
    const Matrix root = matrix_power(Matrix((s_op + s_op.adjoint()) / 2.0), -0.5);
    std::vector<Matrix> povm;
    Matrix total = Matrix::Zero(inst.dim, inst.dim);
    for (const auto& v : modulated) {
      const Vector w = root * v;
      Matrix g = w * w.adjoint();
      total += g;
      povm.push_back(std::move(g));
    }
    povm.push_back(ident - total);  // abort outcome
    for (int m_idx = 0; m_idx < code.m; ++m_idx) {
      const Vector received = codewords[m_idx] * raw[lp];
      success += std::real(received.dot(povm[m_idx] * received)) / code.m;
    }
    code.bob_povm.push_back(std::move(povm));
  }
  code.exact_error = std::clamp(1.0 - success, 0.0, 1.0);

  const auto [bound, best_s] = random_coding_bound(inst, code.m, s_grid);
  code.bound = bound;
  code.best_s = best_s;
  code.validate();
  return code;
}

// ----- Two-stage protocol over a hashed alphabet -----

struct TwoStageResult {
  HashPartition hash;
  std::vector<LemmaInstance> instances;
  std::vector<DenseCode> codes;
  std::vector<Vector> fred_vectors;  // rank-one vectors on the full alphabet, (t, l') order
  double exact_error = 1.0;
  double bound = std::numeric_limits<double>::infinity();
  double delta = 0.0;
  double rate_bits = 0.0;
};

// Splits the uniform purification alphabet by the hash, runs the coded
// protocol on every fiber with a shared codebook, and averages. The fiber
// register outcome (t, l') is the classical message from the measurement
// side to the decoder.
inline TwoStageResult two_stage_protocol(const PureState& psi_af, const Twirler& tw,
                                         const HashPartition& hash,
                                         const std::vector<Matrix>& codewords, int s_grid = 64) {
  const BipartiteLayout layout = psi_af.layout();
  if (layout.dim_f != hash.n)
    throw std::invalid_argument("two_stage_protocol: hash alphabet must match the purifier");
  hash.validate();
  const Eigen::Index da = layout.dim_a;
  const double slice_norm = 1.0 / static_cast<double>(hash.n);
  std::vector<Vector> cond(hash.n);
  for (int n = 0; n < hash.n; ++n) {
    Vector w(da);
    for (Eigen::Index a = 0; a < da; ++a) w(a) = psi_af.vec()(layout.index(a, n));
    if (std::abs(w.squaredNorm() - slice_norm) > 1e-8)
      throw std::invalid_argument("two_stage_protocol: purification is not uniform over the alphabet");
    cond[n] = w / w.norm();
  }

  TwoStageResult out;
  out.hash = hash;
  const auto fibers = hash.fibers();
  const int fiber_len = hash.fiber_size();
  double err = 0.0, bnd = 0.0, del = 0.0;
  for (int t = 0; t < hash.t; ++t) {
    std::vector<Vector> psi_t;
    for (int n : fibers[t]) psi_t.push_back(cond[n]);
    LemmaInstance inst = build_lemma_instance(psi_t, tw);
    DenseCode code = build_code(inst, codewords, s_grid);
    err += code.exact_error;
    bnd += code.bound;
    del += code.delta;
    const double step = 2.0 * M_PI / fiber_len;
    for (int lp = 0; lp < fiber_len; ++lp) {
      Vector b = Vector::Zero(hash.n);
      for (int j = 0; j < fiber_len; ++j)
        b(fibers[t][j]) = std::polar(1.0 / std::sqrt(static_cast<double>(fiber_len)), step * j * lp);
      out.fred_vectors.push_back(std::move(b));
    }
    out.instances.push_back(std::move(inst));
    out.codes.push_back(std::move(code));
  }
  out.exact_error = err / hash.t;
  out.bound = bnd / hash.t;
  out.delta = del / hash.t;
  out.rate_bits = std::log2(static_cast<double>(codewords.size()));
  return out;
}

// ----- Super-quantum encoder witness -----

struct TransposeReport {
  Co1Report co1;
  ChannelRep channel;
  double choi_min_eig = 0.0;
  double output_min_eig = 0.0;     // (tau (x) id) applied to the shared state
  double min_product_value = 0.0;  // over sampled product measurement elements
  int samples = 0;
};

// The transpose commutes with the twirl yet is not completely positive:
// applied to one side of an entangled state it can leave the state cone,
// while every product measurement element still sees nonnegative mass.
inline TransposeReport transpose_encoder_experiment(const PureState& psi_af, const Twirler& tw,
                                                    Sampler& rng, const Matrix& basis = Matrix(),
                                                    int samples = 1000) {
  const BipartiteLayout layout = psi_af.layout();
  const Eigen::Index da = layout.dim_a, df = layout.dim_f;
  TransposeReport rep;
  rep.samples = samples;
  rep.channel = transpose_channel(da, basis);
  rep.co1 = check_co1(rep.channel, tw);
  if (!rep.co1.holds)
    throw std::invalid_argument(
        "transpose_encoder_experiment: basis does not commute with the invariant states");
  rep.choi_min_eig = hermitian_eig(rep.channel.choi).values.minCoeff();

  Matrix x = psi_af.projector();
  if (basis.size()) {
    const Matrix rot = tensor(basis, Matrix(Matrix::Identity(df, df)));
    x = (rot.adjoint() * x * rot).eval();
  }
  Matrix out = partial_transpose(x, layout, Subsystem::A);
  if (basis.size()) {
    const Matrix rot = tensor(basis, Matrix(Matrix::Identity(df, df)));
    out = (rot * out * rot.adjoint()).eval();
  }
  out = ((out + out.adjoint()) / 2.0).eval();
  rep.output_min_eig = hermitian_eig(out).values.minCoeff();

  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const Matrix va = rng.haar_unitary(da);
    const Matrix vf = rng.haar_unitary(df);
    Matrix pa = Matrix::Zero(da, da), qf = Matrix::Zero(df, df);
    for (Eigen::Index k = 0; k < da; ++k)
      pa += rng.uniform() * (va.col(k) * va.col(k).adjoint());
    for (Eigen::Index k = 0; k < df; ++k)
      qf += rng.uniform() * (vf.col(k) * vf.col(k).adjoint());
    lo = std::min(lo, std::real((tensor(pa, qf) * out).trace()));
  }
  rep.min_product_value = lo;
  return rep;
}

// ----- Rank-one partial-transpose identity -----

struct IdentityReport {
  double max_residual = 0.0;
  double max_residual_rotated = 0.0;
  int samples = 0;
};

// For rank-one PSD X on A (x) F, |tau_F(X)| factorizes into marginal square
// roots: |tau_F(X)| = sqrt(tr_F X) (x) sqrt(tr_A X)^T. (The transpose on the
// second factor makes the identity exact for complex amplitudes; both
// factors share a spectrum, so every norm of the left side is basis-free.)
// The rotated pass re-runs the check in a Haar-moved F frame.
inline IdentityReport m6_identity_check(int samples,
                                        const std::vector<std::pair<int, int>>& dims,
                                        Sampler& rng) {
  if (dims.empty()) throw std::invalid_argument("m6_identity_check: no dimensions");
  IdentityReport rep;
  rep.samples = samples;
  auto residual = [](const Matrix& x, const BipartiteLayout& layout) {
    const Matrix lhs = operator_abs(partial_transpose(x, layout, Subsystem::F));
    const Matrix rhs = tensor(matrix_power(partial_trace(x, layout, Subsystem::A), 0.5),
                              Matrix(matrix_power(partial_trace(x, layout, Subsystem::F), 0.5)
                                         .transpose()));
    return max_abs(Matrix(lhs - rhs));
  };
  for (int i = 0; i < samples; ++i) {
    const auto [da, df] = dims[i % dims.size()];
    const BipartiteLayout layout(da, df);
    const Vector v = rng.random_pure(da * df).vec();
    const Matrix x = v * v.adjoint();
    rep.max_residual = std::max(rep.max_residual, residual(x, layout));
    const Matrix rot = tensor(Matrix(Matrix::Identity(da, da)), rng.haar_unitary(df));
    const Matrix xr = rot * x * rot.adjoint();
    rep.max_residual_rotated = std::max(rep.max_residual_rotated, residual(xr, layout));
  }
  return rep;
}

}  // namespace densecode
