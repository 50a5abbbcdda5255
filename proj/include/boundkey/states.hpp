#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "boundkey/multipartite.hpp"

namespace boundkey {

/// The standard projector family on C^D (x) C^D:
///   P_plus — projector onto the maximally entangled state,
///   P      — sum_i |ii><ii| minus P_plus,
///   Q      — complement of the diagonal subspace,
///   S      — symmetric states orthogonal to every |ii>,
///   V      — the swap permutation.
struct ProjectorFamily {
  int D = 0;
  MultipartiteOperator P_plus;
  MultipartiteOperator P;
  MultipartiteOperator Q;
  MultipartiteOperator S;
  MultipartiteOperator V;
  MultipartiteOperator identity;
};

ProjectorFamily make_projector_family(int D);  // D >= 2

/// The unit-trace-norm operator family built from the projectors,
///   X = n [(D-2) P_plus - 2 P + Q],  n = 1/(D^2 + 2D - 4),
/// together with its absolute value and the partial-transpose variants used
/// as state blocks. All members are shipped in projector closed form; the
/// numeric routes (matrix_abs, partial_transpose) are cross-checked in tests.
struct XFamily {
  int D = 0;
  double normalizer = 0.0;  // 1/(D^2 + 2D - 4)
  MultipartiteOperator X;
  MultipartiteOperator absX;            // |X|
  MultipartiteOperator X_ptB;           // X^{T_B'}
  MultipartiteOperator abs_X_ptB;       // |X^{T_B'}|
  MultipartiteOperator abs_X_ptB_ptB;   // |X^{T_B'}|^{T_B'}
};

XFamily make_x(int D);  // D >= 3

/// Exact reduced fraction; used for the state prefactors so that reports can
/// print the integer ratio next to the floating-point value.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Prefactor of the key-shield state: (D^2 + 2D - 4) / (4 (D^2 + D - 2)).
Rational rho_prefactor(int D);

/// A state on key part (d (x) d) plus shield part (d_A' (x) d_B'), stored
/// with subsystem order [A, B, A', B'] so that the key-basis blocks are
/// literal submatrices: block(i,j,k,l) sits at block row i*d+j, column k*d+l.
class KeyShieldState {
 public:
  /// rho must have exactly four subsystems [d, d, dA', dB'] and be Hermitian
  /// with unit trace. Positivity is not checked here (it costs an
  /// eigendecomposition); call is_psd on rho() where needed.
  explicit KeyShieldState(MultipartiteOperator rho);

  int key_dim() const { return key_dim_; }
  std::pair<int, int> shield_dims() const { return shield_dims_; }
  Eigen::Index shield_size() const;  // dA' * dB'
  const MultipartiteOperator& rho() const { return rho_; }

  CMatrix block(int i, int j, int k, int l) const;

 private:
  int key_dim_ = 0;
  std::pair<int, int> shield_dims_{0, 0};
  MultipartiteOperator rho_;
};

/// The PPT-invariant key-shield state with shield dimension D per side:
/// corner blocks |X_D| and X_D, middle blocks |X_D^{T_B'}|^{T_B'}, scaled by
/// rho_prefactor(D).
KeyShieldState make_rho(int D);  // D >= 3

struct PptReport {
  double min_eigenvalue_after_T_BBprime = 0.0;
  bool is_ppt = false;
};

/// Partial transpose over Bob's subsystems {B, B'} followed by an
/// eigenvalue check at the given tolerance.
PptReport check_ppt(const KeyShieldState& state, double tolerance = tol::psd);

}  // namespace boundkey
