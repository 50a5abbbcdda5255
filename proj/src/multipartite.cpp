#include "boundkey/multipartite.hpp"

#include <cmath>
#include <stdexcept>

namespace boundkey {

namespace {

Eigen::Index dims_product(const std::vector<int>& dims) {
  Eigen::Index n = 1;
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("subsystem dimensions must be >= 1");
    n *= d;
  }
  return n;
}

// For every composite index, the partial index contribution of the selected
// subsystems (the rest zeroed out). Splitting an index i into selected and
// complementary parts is then i = sel[i] + (i - sel[i]).
std::vector<Eigen::Index> selected_contribution(const std::vector<int>& dims,
                                                const std::vector<bool>& pick) {
  const Eigen::Index n = dims_product(dims);
  std::vector<Eigen::Index> strides(dims.size());
  Eigen::Index s = 1;
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    strides[k] = s;
    s *= dims[k];
  }
  std::vector<Eigen::Index> sel(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index rem = i;
    Eigen::Index acc = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      const Eigen::Index digit = rem / strides[k];
      rem -= digit * strides[k];
      if (pick[k]) acc += digit * strides[k];
    }
    sel[i] = acc;
  }
  return sel;
}

std::vector<bool> subsystem_mask(const std::vector<int>& dims,
                                 const std::vector<int>& subsystems) {
  std::vector<bool> pick(dims.size(), false);
  for (int s : subsystems) {
    if (s < 0 || s >= static_cast<int>(dims.size()))
      throw std::out_of_range("subsystem index out of range");
    pick[s] = true;
  }
  return pick;
}

}  // namespace

MultipartiteOperator::MultipartiteOperator(std::vector<int> dims, CMatrix data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  const Eigen::Index n = dims_product(dims_);
  if (data_.rows() != n || data_.cols() != n)
    throw std::invalid_argument("matrix size does not match subsystem dimensions");
}

MultipartiteOperator MultipartiteOperator::identity(std::vector<int> dims) {
  const Eigen::Index n = dims_product(dims);
  return MultipartiteOperator(std::move(dims), CMatrix::Identity(n, n));
}

bool MultipartiteOperator::is_hermitian(double tolerance) const {
  return is_hermitian_matrix(data_, tolerance);
}

bool MultipartiteOperator::is_real() const {
  return data_.imag().cwiseAbs().maxCoeff() == 0.0;
}

MultipartiteOperator MultipartiteOperator::with_dims(std::vector<int> new_dims) const {
  if (dims_product(new_dims) != dim())
    throw std::invalid_argument("with_dims: dimension product mismatch");
  return MultipartiteOperator(std::move(new_dims), data_);
}

MultipartiteOperator tensor(const MultipartiteOperator& a,
                            const MultipartiteOperator& b) {
  const Eigen::Index na = a.dim(), nb = b.dim();
  CMatrix out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index j = 0; j < na; ++j)
      out.block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return MultipartiteOperator(std::move(dims), std::move(out));
}

MultipartiteOperator tensor_power(const MultipartiteOperator& m, int k) {
  if (k < 1) throw std::invalid_argument("tensor_power: k must be >= 1");
  MultipartiteOperator out = m;
  for (int i = 1; i < k; ++i) out = tensor(out, m);
  return out;
}

MultipartiteOperator partial_transpose(const MultipartiteOperator& m,
                                       const std::vector<int>& subsystems) {
  const auto pick = subsystem_mask(m.dims(), subsystems);
  const auto sel = selected_contribution(m.dims(), pick);
  const Eigen::Index n = m.dim();
  CMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index rest_i = i - sel[i];
    for (Eigen::Index j = 0; j < n; ++j) {
      out(rest_i + sel[j], j - sel[j] + sel[i]) = m.matrix()(i, j);
    }
  }
  return MultipartiteOperator(m.dims(), std::move(out));
}

MultipartiteOperator partial_trace(const MultipartiteOperator& m,
                                   const std::vector<int>& subsystems) {
  const auto& dims = m.dims();
  const auto pick = subsystem_mask(dims, subsystems);

  std::vector<int> kept_dims;
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (!pick[k]) kept_dims.push_back(dims[k]);

  // Composite index of the kept part, densely re-enumerated.
  const Eigen::Index n = m.dim();
  const auto sel = selected_contribution(m.dims(), pick);
  std::vector<Eigen::Index> kept(n), traced(n);
  {
    std::vector<Eigen::Index> strides(dims.size());
    Eigen::Index s = 1;
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
      strides[k] = s;
      s *= dims[k];
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index rem = i, kp = 0;
      for (std::size_t k = 0; k < dims.size(); ++k) {
        const Eigen::Index digit = rem / strides[k];
        rem -= digit * strides[k];
        if (!pick[k]) kp = kp * dims[k] + digit;
      }
      kept[i] = kp;
      traced[i] = sel[i];
    }
  }

  Eigen::Index nk = 1;
  for (int d : kept_dims) nk *= d;
  CMatrix out = CMatrix::Zero(nk, nk);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (traced[i] == traced[j]) out(kept[i], kept[j]) += m.matrix()(i, j);
  return MultipartiteOperator(std::move(kept_dims), std::move(out));
}

MultipartiteOperator permute_subsystems(const MultipartiteOperator& m,
                                        const std::vector<int>& order) {
  const auto& dims = m.dims();
  if (order.size() != dims.size())
    throw std::invalid_argument("permute_subsystems: order size mismatch");
  std::vector<bool> seen(dims.size(), false);
  for (int s : order) {
    if (s < 0 || s >= static_cast<int>(dims.size()) || seen[s])
      throw std::invalid_argument("permute_subsystems: not a permutation");
    seen[s] = true;
  }

  std::vector<int> new_dims(dims.size());
  for (std::size_t k = 0; k < order.size(); ++k) new_dims[k] = dims[order[k]];

  std::vector<Eigen::Index> in_strides(dims.size());
  Eigen::Index s = 1;
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    in_strides[k] = s;
    s *= dims[k];
  }

  // map[i] = composite index in the new ordering of input basis vector i
  const Eigen::Index n = m.dim();
  std::vector<Eigen::Index> map(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index rem = i;
    std::vector<Eigen::Index> digit(dims.size());
    for (std::size_t k = 0; k < dims.size(); ++k) {
      digit[k] = rem / in_strides[k];
      rem -= digit[k] * in_strides[k];
    }
    Eigen::Index out_idx = 0;
    for (std::size_t k = 0; k < order.size(); ++k)
      out_idx = out_idx * new_dims[k] + digit[order[k]];
    map[i] = out_idx;
  }

  CMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(map[i], map[j]) = m.matrix()(i, j);
  return MultipartiteOperator(std::move(new_dims), std::move(out));
}

bool is_hermitian_matrix(const CMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

namespace {

// Eigen's solver returns ascending eigenvalues; everything here reports
// descending. Real symmetric input goes through the real solver, which is
// markedly faster and keeps eigenvectors real.
Spectrum hermitian_eig_impl(const CMatrix& m, bool exactly_real) {
  Spectrum out;
  if (exactly_real) {
    Eigen::SelfAdjointEigenSolver<RMatrix> solver(m.real());
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("eigendecomposition failed to converge");
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors = solver.eigenvectors().rowwise().reverse().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("eigendecomposition failed to converge");
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  }
  return out;
}

RVector hermitian_eigenvalues_impl(const CMatrix& m, bool exactly_real) {
  if (exactly_real) {
    Eigen::SelfAdjointEigenSolver<RMatrix> solver(m.real(), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().reverse();
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

}  // namespace

Spectrum hermitian_eig(const MultipartiteOperator& m) {
  if (!m.is_hermitian())
    throw std::invalid_argument("hermitian_eig: input is not Hermitian");
  return hermitian_eig_impl(m.matrix(), m.is_real());
}

RVector hermitian_eigenvalues(const CMatrix& m) {
  return hermitian_eigenvalues_impl(m, m.imag().cwiseAbs().maxCoeff() == 0.0);
}

MultipartiteOperator matrix_abs(const MultipartiteOperator& m) {
  if (!m.is_hermitian())
    throw std::invalid_argument("matrix_abs: input is not Hermitian");
  const Spectrum spec = hermitian_eig_impl(m.matrix(), m.is_real());
  const RVector absvals = spec.eigenvalues.cwiseAbs();
  CMatrix out = spec.eigenvectors * absvals.asDiagonal() *
                spec.eigenvectors.adjoint();
  if (m.is_real()) out = out.real().cast<Complex>();  // discard rounding dust
  return MultipartiteOperator(m.dims(), std::move(out));
}

double trace_norm(const MultipartiteOperator& m) {
  const CMatrix& a = m.matrix();
  if (is_hermitian_matrix(a)) {
    return hermitian_eigenvalues_impl(a, m.is_real()).cwiseAbs().sum();
  }
  if (m.is_real()) {
    Eigen::BDCSVD<RMatrix> svd(a.real());
    return svd.singularValues().sum();
  }
  Eigen::BDCSVD<CMatrix> svd(a);
  return svd.singularValues().sum();
}

double trace_distance(const MultipartiteOperator& a,
                      const MultipartiteOperator& b) {
  if (a.dims() != b.dims())
    throw std::invalid_argument("trace_distance: dimension mismatch");
  return 0.5 * trace_norm(MultipartiteOperator(a.dims(), a.matrix() - b.matrix()));
}

double min_eigenvalue(const MultipartiteOperator& m) {
  if (!m.is_hermitian())
    throw std::invalid_argument("min_eigenvalue: input is not Hermitian");
  const RVector vals = hermitian_eigenvalues_impl(m.matrix(), m.is_real());
  return vals(vals.size() - 1);
}

bool is_psd(const MultipartiteOperator& m, double tolerance) {
  return min_eigenvalue(m) >= -tolerance;
}

double von_neumann_entropy(const CMatrix& rho) {
  const RVector vals = hermitian_eigenvalues(rho);
  double h = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals(i) > 0.0) h -= vals(i) * std::log2(vals(i));
  }
  return h;
}

}  // namespace boundkey
