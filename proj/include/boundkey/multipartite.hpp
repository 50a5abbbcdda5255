#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace boundkey {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

namespace tol {
inline constexpr double hermitian = 1e-12;      // entrywise |M - M^dag|
inline constexpr double psd = 1e-12;            // min eigenvalue floor
inline constexpr double spectral = 1e-10;       // eigendecomposition residual
inline constexpr double purify_cutoff = 1e-10;  // eigenvalues dropped by purify
inline constexpr double prob_floor = 1e-14;     // outcome probabilities treated as zero
}  // namespace tol

/// Dense operator on a tensor product of finite-dimensional subsystems.
///
/// `dims` lists the subsystem dimensions left to right; the leftmost
/// subsystem is the most significant digit of a row/column index, i.e.
/// index = ((i0 * d1 + i1) * d2 + i2) ...
class MultipartiteOperator {
 public:
  MultipartiteOperator() = default;
  MultipartiteOperator(std::vector<int> dims, CMatrix data);

  static MultipartiteOperator identity(std::vector<int> dims);

  const std::vector<int>& dims() const { return dims_; }
  const CMatrix& matrix() const { return data_; }
  Eigen::Index dim() const { return data_.rows(); }
  int subsystem_count() const { return static_cast<int>(dims_.size()); }

  Complex trace() const { return data_.trace(); }
  bool is_hermitian(double tolerance = tol::hermitian) const;
  /// True when every entry has exactly zero imaginary part.
  bool is_real() const;

  /// Same matrix retagged with a compatible dims list (e.g. merging the
  /// adjacent factors [2,2,3,3] into [4,9]). The dimension product must match.
  MultipartiteOperator with_dims(std::vector<int> new_dims) const;

 private:
  std::vector<int> dims_;
  CMatrix data_;
};

/// Hermitian eigendecomposition, eigenvalues sorted descending.
struct Spectrum {
  RVector eigenvalues;
  CMatrix eigenvectors;  // unitary, columns aligned with eigenvalues
};

/// Kronecker product; result dims = concat(a.dims, b.dims).
MultipartiteOperator tensor(const MultipartiteOperator& a,
                            const MultipartiteOperator& b);

/// k-fold Kronecker power (k >= 1).
MultipartiteOperator tensor_power(const MultipartiteOperator& m, int k);

/// Transposes the indices of the selected subsystems; involutive.
MultipartiteOperator partial_transpose(const MultipartiteOperator& m,
                                       const std::vector<int>& subsystems);

/// Traces out the selected subsystems; result dims = remaining dims.
/// Tracing out everything leaves a 1x1 operator with empty dims.
MultipartiteOperator partial_trace(const MultipartiteOperator& m,
                                   const std::vector<int>& subsystems);

/// Reorders subsystems: output subsystem i is input subsystem order[i].
/// `order` must be a permutation of 0..n-1.
MultipartiteOperator permute_subsystems(const MultipartiteOperator& m,
                                        const std::vector<int>& order);

/// Throws unless m is Hermitian within tol::hermitian.
Spectrum hermitian_eig(const MultipartiteOperator& m);

/// |m| = sqrt(m^dag m) for Hermitian m, via eigendecomposition.
MultipartiteOperator matrix_abs(const MultipartiteOperator& m);

/// Sum of singular values. Uses |eigenvalues| when m is Hermitian.
double trace_norm(const MultipartiteOperator& m);

/// (1/2) ||a - b||_tr. Note the conventional 1/2 factor; trace_norm has none.
double trace_distance(const MultipartiteOperator& a,
                      const MultipartiteOperator& b);

/// Smallest eigenvalue of a Hermitian operator.
double min_eigenvalue(const MultipartiteOperator& m);

/// True iff min eigenvalue >= -tolerance. Throws on non-Hermitian input.
bool is_psd(const MultipartiteOperator& m, double tolerance = tol::psd);

// Raw-matrix helpers shared across modules.
bool is_hermitian_matrix(const CMatrix& m, double tolerance = tol::hermitian);
RVector hermitian_eigenvalues(const CMatrix& m);  // descending
double von_neumann_entropy(const CMatrix& rho);   // base-2, 0 log 0 := 0

}  // namespace boundkey
