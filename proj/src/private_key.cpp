#include "boundkey/private_key.hpp"

#include <cmath>
#include <stdexcept>

namespace boundkey {

namespace {

bool is_unitary(const CMatrix& u, double tolerance = tol::hermitian) {
  if (u.rows() != u.cols()) return false;
  const Eigen::Index n = u.rows();
  return (u.adjoint() * u - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() <=
         tolerance;
}

bool is_density_matrix(const CMatrix& m, double tolerance = 1e-10) {
  if (!is_hermitian_matrix(m, tol::hermitian)) return false;
  if (std::abs(m.trace() - Complex(1.0)) > tolerance) return false;
  const RVector vals = hermitian_eigenvalues(m);
  return vals(vals.size() - 1) >= -tolerance;
}

}  // namespace

ProductBasis ProductBasis::standard(int d) {
  if (d < 2) throw std::invalid_argument("ProductBasis: d must be >= 2");
  return ProductBasis{d, CMatrix::Identity(d, d), CMatrix::Identity(d, d)};
}

CVector ProductBasis::key_ket(int i, int j) const {
  if (i < 0 || j < 0 || i >= d || j >= d)
    throw std::out_of_range("ProductBasis::key_ket: index out of range");
  CVector out(static_cast<Eigen::Index>(d) * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) out(a * d + b) = alice(a, i) * bob(b, j);
  return out;
}

Eigen::Index Purification::system_size() const {
  Eigen::Index n = 1;
  for (int d : system_dims) n *= d;
  return n;
}

Purification purify(const MultipartiteOperator& rho) {
  if (!rho.is_hermitian())
    throw std::invalid_argument("purify: input is not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > tol::purify_cutoff)
    throw std::invalid_argument("purify: input does not have unit trace");
  const Spectrum spec = hermitian_eig(rho);

  int rank = 0;
  for (Eigen::Index m = 0; m < spec.eigenvalues.size(); ++m) {
    const double lambda = spec.eigenvalues(m);
    if (lambda < -tol::purify_cutoff)
      throw std::invalid_argument("purify: input is not positive semidefinite");
    if (lambda > tol::purify_cutoff) ++rank;
  }
  if (rank == 0) throw std::invalid_argument("purify: input has no support");

  const Eigen::Index n = rho.dim();
  Purification pur;
  pur.system_dims = rho.dims();
  pur.eve_dim = rank;
  pur.psi = CVector::Zero(n * rank);
  for (int m = 0; m < rank; ++m) {
    const double amp = std::sqrt(spec.eigenvalues(m));
    for (Eigen::Index s = 0; s < n; ++s)
      pur.psi(s * rank + m) = amp * spec.eigenvectors(s, m);
  }
  return pur;
}

Purification apply_to_purification(const CMatrix& unitary, const Purification& pur) {
  const Eigen::Index n = pur.system_size();
  if (unitary.rows() != n || unitary.cols() != n)
    throw std::invalid_argument("apply_to_purification: dimension mismatch");
  Purification out = pur;
  Eigen::Map<const CMatrix> psi(pur.psi.data(), pur.eve_dim, n);  // column s = system index
  CMatrix rotated = psi * unitary.transpose();  // (U (x) I) psi
  out.psi = Eigen::Map<CVector>(rotated.data(), rotated.size());
  return out;
}

bool CcqState::has_eve_state(int i, int j) const {
  return eve_states[i][j].size() > 0;
}

CcqState ccq_from_purification(const Purification& pur, const ProductBasis& basis) {
  const auto& dims = pur.system_dims;
  if (dims.size() != 4 || dims[0] != dims[1])
    throw std::invalid_argument("ccq: purification is not over a key-shield state");
  const int d = dims[0];
  if (basis.d != d)
    throw std::invalid_argument("ccq: basis dimension does not match key");
  const Eigen::Index shield = static_cast<Eigen::Index>(dims[2]) * dims[3];
  const int r = pur.eve_dim;

  // psi viewed as (key, shield, eve); Eve index least significant.
  CcqState out;
  out.d = d;
  out.eve_dim = r;
  out.p = RMatrix::Zero(d, d);
  out.eve_states.assign(d, std::vector<CMatrix>(d));

  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const CVector key = basis.key_ket(i, j);
      // Amplitudes of the post-measurement (shield, Eve) vector.
      CMatrix phi = CMatrix::Zero(shield, r);
      for (int kappa = 0; kappa < d * d; ++kappa) {
        const Complex w = std::conj(key(kappa));
        if (w == Complex(0.0)) continue;
        for (Eigen::Index s = 0; s < shield; ++s)
          phi.row(s) += w * pur.psi.segment((kappa * shield + s) * r, r).transpose();
      }
      CMatrix rho_eve = (phi.adjoint() * phi).conjugate();
      const double prob = rho_eve.real().trace();
      out.p(i, j) = prob;
      if (prob > tol::prob_floor) out.eve_states[i][j] = rho_eve / prob;
    }
  }
  return out;
}

CcqState ccq(const KeyShieldState& state, const ProductBasis& basis) {
  return ccq_from_purification(purify(state.rho()), basis);
}

double max_pairwise_eve_distance(const CcqState& c, double prob_cutoff) {
  double worst = 0.0;
  std::vector<const CMatrix*> live;
  for (int i = 0; i < c.d; ++i)
    for (int j = 0; j < c.d; ++j)
      if (c.p(i, j) > prob_cutoff && c.has_eve_state(i, j))
        live.push_back(&c.eve_states[i][j]);
  for (std::size_t a = 0; a < live.size(); ++a) {
    for (std::size_t b = a + 1; b < live.size(); ++b) {
      const CMatrix diff = *live[a] - *live[b];
      const double dist =
          0.5 * hermitian_eigenvalues(diff).cwiseAbs().sum();
      worst = std::max(worst, dist);
    }
  }
  return worst;
}

bool is_secure(const CcqState& c, double tolerance) {
  return max_pairwise_eve_distance(c, tolerance) <= tolerance;
}

MultipartiteOperator twisting_unitary(const Twisting& t, const ProductBasis& basis,
                                      std::pair<int, int> shield_dims) {
  const int d = t.d;
  if (basis.d != d)
    throw std::invalid_argument("twisting_unitary: basis dimension mismatch");
  const Eigen::Index shield =
      static_cast<Eigen::Index>(shield_dims.first) * shield_dims.second;
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d * shield;
  CMatrix u = CMatrix::Zero(n, n);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const CMatrix& control = t.controls[i][j];
      if (!is_unitary(control) || control.rows() != shield)
        throw std::invalid_argument("twisting_unitary: invalid control unitary");
      const CVector key = basis.key_ket(i, j);
      const CMatrix proj = key * key.adjoint();
      for (int a = 0; a < d * d; ++a)
        for (int b = 0; b < d * d; ++b)
          u.block(a * shield, b * shield, shield, shield) += proj(a, b) * control;
    }
  }
  return MultipartiteOperator(
      {d, d, shield_dims.first, shield_dims.second}, std::move(u));
}

KeyShieldState apply_twisting(const KeyShieldState& state, const Twisting& t,
                              const ProductBasis& basis) {
  if (t.d != state.key_dim())
    throw std::invalid_argument("apply_twisting: key dimension mismatch");
  const MultipartiteOperator u =
      twisting_unitary(t, basis, state.shield_dims());
  CMatrix rotated = u.matrix() * state.rho().matrix() * u.matrix().adjoint();
  // Conjugation keeps Hermiticity exactly in exact arithmetic; round off the
  // numerical skew so downstream validation sees a clean state.
  rotated = 0.5 * (rotated + rotated.adjoint().eval());
  return KeyShieldState(MultipartiteOperator(state.rho().dims(), std::move(rotated)));
}

KeyShieldState PrivateState::assemble() const {
  const Eigen::Index shield =
      static_cast<Eigen::Index>(shield_dims.first) * shield_dims.second;
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d * shield;
  CMatrix m = CMatrix::Zero(n, n);
  for (int i = 0; i < d; ++i) {
    const CVector ki = basis.key_ket(i, i);
    for (int j = 0; j < d; ++j) {
      const CVector kj = basis.key_ket(j, j);
      const CMatrix key_part = ki * kj.adjoint();
      const CMatrix shield_part =
          unitaries[i] * sigma * unitaries[j].adjoint() / static_cast<double>(d);
      for (int a = 0; a < d * d; ++a)
        for (int b = 0; b < d * d; ++b) {
          if (key_part(a, b) == Complex(0.0)) continue;
          m.block(a * shield, b * shield, shield, shield) +=
              key_part(a, b) * shield_part;
        }
    }
  }
  return KeyShieldState(MultipartiteOperator(
      {d, d, shield_dims.first, shield_dims.second}, std::move(m)));
}

Twisting PrivateState::untwisting() const {
  const Eigen::Index shield =
      static_cast<Eigen::Index>(shield_dims.first) * shield_dims.second;
  Twisting t;
  t.d = d;
  t.controls.assign(d, std::vector<CMatrix>(d, CMatrix::Identity(shield, shield)));
  for (int i = 0; i < d; ++i) t.controls[i][i] = unitaries[i].adjoint();
  return t;
}

PrivateState make_pdit(const ProductBasis& basis, std::pair<int, int> shield_dims,
                       const CMatrix& sigma, std::vector<CMatrix> unitaries) {
  const Eigen::Index shield =
      static_cast<Eigen::Index>(shield_dims.first) * shield_dims.second;
  if (!is_unitary(basis.alice) || !is_unitary(basis.bob))
    throw std::invalid_argument("make_pdit: basis is not unitary");
  if (sigma.rows() != shield || !is_density_matrix(sigma))
    throw std::invalid_argument("make_pdit: sigma is not a shield density matrix");
  if (static_cast<int>(unitaries.size()) != basis.d)
    throw std::invalid_argument("make_pdit: need one unitary per key value");
  for (const CMatrix& u : unitaries)
    if (u.rows() != shield || !is_unitary(u, 1e-10))
      throw std::invalid_argument("make_pdit: invalid shield unitary");
  return PrivateState{basis.d, basis, shield_dims, sigma, std::move(unitaries)};
}

double shannon_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

double binary_entropy(double p) {
  return shannon_entropy({p, 1.0 - p});
}

double dw_rate(const CcqState& c) {
  const int d = c.d;
  std::vector<double> joint, pa(d, 0.0), pb(d, 0.0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double p = c.p(i, j);
      joint.push_back(p);
      pa[i] += p;
      pb[j] += p;
    }
  }
  const double mutual_ab =
      shannon_entropy(pa) + shannon_entropy(pb) - shannon_entropy(joint);

  // Holevo quantity of Eve's ensemble conditioned on Alice's outcome.
  const Eigen::Index r = c.eve_dim;
  CMatrix eve_avg = CMatrix::Zero(r, r);
  double conditional = 0.0;
  for (int i = 0; i < d; ++i) {
    if (pa[i] <= tol::prob_floor) continue;
    CMatrix eve_a = CMatrix::Zero(r, r);
    for (int j = 0; j < d; ++j)
      if (c.has_eve_state(i, j)) eve_a += (c.p(i, j) / pa[i]) * c.eve_states[i][j];
    eve_avg += pa[i] * eve_a;
    conditional += pa[i] * von_neumann_entropy(eve_a);
  }
  const double mutual_ae = von_neumann_entropy(eve_avg) - conditional;
  return mutual_ab - mutual_ae;
}

KeyShieldState pbit_mixture(const PrivateState& gamma1,
                                const PrivateState& gamma2, double p1) {
  if (gamma1.d != 2 || gamma2.d != 2)
    throw std::invalid_argument("pbit_mixture: inputs must be pbits (d = 2)");
  if (gamma1.shield_dims != gamma2.shield_dims)
    throw std::invalid_argument("pbit_mixture: shield dimension mismatch");
  if (p1 < 0.0 || p1 > 1.0)
    throw std::invalid_argument("pbit_mixture: p1 must lie in [0, 1]");

  const KeyShieldState g1 = gamma1.assemble();
  const KeyShieldState g2 = gamma2.assemble();

  // sigma_x on Alice's key qubit, identity elsewhere.
  CMatrix sx = CMatrix::Zero(2, 2);
  sx(0, 1) = 1.0;
  sx(1, 0) = 1.0;
  const MultipartiteOperator flip = tensor(
      tensor(MultipartiteOperator({2}, sx), MultipartiteOperator::identity({2})),
      MultipartiteOperator::identity(
          {gamma1.shield_dims.first, gamma1.shield_dims.second}));

  CMatrix flipped =
      flip.matrix() * g2.rho().matrix() * flip.matrix().adjoint();
  CMatrix mix = p1 * g1.rho().matrix() + (1.0 - p1) * flipped;
  return KeyShieldState(MultipartiteOperator(g1.rho().dims(), std::move(mix)));
}

}  // namespace boundkey
