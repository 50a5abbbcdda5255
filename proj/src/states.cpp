#include "boundkey/states.hpp"

#include <numeric>
#include <stdexcept>

namespace boundkey {

namespace {

CMatrix diagonal_pair_sum(int D) {
  // sum_i |ii><ii|
  CMatrix out = CMatrix::Zero(D * D, D * D);
  for (int i = 0; i < D; ++i) out(i * D + i, i * D + i) = 1.0;
  return out;
}

}  // namespace

ProjectorFamily make_projector_family(int D) {
  if (D < 2) throw std::invalid_argument("make_projector_family: D must be >= 2");
  const int n = D * D;
  const std::vector<int> dims{D, D};

  CMatrix plus = CMatrix::Zero(n, n);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) plus(i * D + i, j * D + j) = 1.0 / D;

  CMatrix diag = diagonal_pair_sum(D);

  CMatrix swap = CMatrix::Zero(n, n);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) swap(j * D + i, i * D + j) = 1.0;

  ProjectorFamily f;
  f.D = D;
  f.P_plus = MultipartiteOperator(dims, plus);
  f.P = MultipartiteOperator(dims, diag - plus);
  f.Q = MultipartiteOperator(dims, CMatrix::Identity(n, n) - diag);
  f.S = MultipartiteOperator(dims, 0.5 * (CMatrix::Identity(n, n) + swap - 2.0 * diag));
  f.V = MultipartiteOperator(dims, swap);
  f.identity = MultipartiteOperator::identity(dims);
  return f;
}

XFamily make_x(int D) {
  if (D < 3) throw std::invalid_argument("make_x: D must be >= 3");
  const ProjectorFamily f = make_projector_family(D);
  const double n = 1.0 / (D * D + 2 * D - 4);
  const std::vector<int> dims{D, D};
  const Eigen::Index size = f.identity.dim();

  XFamily x;
  x.D = D;
  x.normalizer = n;
  x.X = MultipartiteOperator(
      dims, n * ((D - 2.0) * f.P_plus.matrix() - 2.0 * f.P.matrix() + f.Q.matrix()));
  x.absX = MultipartiteOperator(
      dims, n * ((D - 2.0) * f.P_plus.matrix() + 2.0 * f.P.matrix() + f.Q.matrix()));
  // X^{T_B'} = n [2S - (I - Q)]; S and I - Q are orthogonal projectors, so
  // the absolute value flips the sign of the second term.
  x.X_ptB = MultipartiteOperator(
      dims, n * (2.0 * f.S.matrix() -
                 (CMatrix::Identity(size, size) - f.Q.matrix())));
  x.abs_X_ptB = MultipartiteOperator(
      dims, n * (2.0 * f.S.matrix() +
                 (CMatrix::Identity(size, size) - f.Q.matrix())));
  x.abs_X_ptB_ptB = MultipartiteOperator(
      dims, n * (static_cast<double>(D) * f.P_plus.matrix() + f.Q.matrix()));
  return x;
}

Rational rho_prefactor(int D) {
  if (D < 3) throw std::invalid_argument("rho_prefactor: D must be >= 3");
  const std::int64_t num = static_cast<std::int64_t>(D) * D + 2 * D - 4;
  const std::int64_t den = 4 * (static_cast<std::int64_t>(D) * D + D - 2);
  const std::int64_t g = std::gcd(num, den);
  return Rational{num / g, den / g};
}

KeyShieldState::KeyShieldState(MultipartiteOperator rho) : rho_(std::move(rho)) {
  const auto& d = rho_.dims();
  if (d.size() != 4)
    throw std::invalid_argument("KeyShieldState: expected dims [d, d, dA', dB']");
  if (d[0] != d[1])
    throw std::invalid_argument("KeyShieldState: key dimensions must match");
  if (!rho_.is_hermitian())
    throw std::invalid_argument("KeyShieldState: state is not Hermitian");
  if (std::abs(rho_.trace() - Complex(1.0)) > tol::hermitian)
    throw std::invalid_argument("KeyShieldState: state does not have unit trace");
  key_dim_ = d[0];
  shield_dims_ = {d[2], d[3]};
}

Eigen::Index KeyShieldState::shield_size() const {
  return static_cast<Eigen::Index>(shield_dims_.first) * shield_dims_.second;
}

CMatrix KeyShieldState::block(int i, int j, int k, int l) const {
  const int d = key_dim_;
  if (i < 0 || j < 0 || k < 0 || l < 0 || i >= d || j >= d || k >= d || l >= d)
    throw std::out_of_range("KeyShieldState::block: key index out of range");
  const Eigen::Index s = shield_size();
  return rho_.matrix().block((i * d + j) * s, (k * d + l) * s, s, s);
}

KeyShieldState make_rho(int D) {
  const XFamily x = make_x(D);
  const double c = rho_prefactor(D).value();
  const Eigen::Index s = x.X.dim();

  CMatrix m = CMatrix::Zero(4 * s, 4 * s);
  m.block(0 * s, 0 * s, s, s) = c * x.absX.matrix();
  m.block(3 * s, 3 * s, s, s) = c * x.absX.matrix();
  m.block(1 * s, 1 * s, s, s) = c * x.abs_X_ptB_ptB.matrix();
  m.block(2 * s, 2 * s, s, s) = c * x.abs_X_ptB_ptB.matrix();
  m.block(0 * s, 3 * s, s, s) = c * x.X.matrix();
  m.block(3 * s, 0 * s, s, s) = c * x.X.matrix();
  return KeyShieldState(MultipartiteOperator({2, 2, D, D}, std::move(m)));
}

PptReport check_ppt(const KeyShieldState& state, double tolerance) {
  const MultipartiteOperator transposed =
      partial_transpose(state.rho(), {1, 3});
  PptReport report;
  report.min_eigenvalue_after_T_BBprime = min_eigenvalue(transposed);
  report.is_ppt = report.min_eigenvalue_after_T_BBprime >= -tolerance;
  return report;
}

}  // namespace boundkey
