#pragma once

#include <utility>
#include <vector>

#include "boundkey/multipartite.hpp"
#include "boundkey/states.hpp"

namespace boundkey {

/// A product measurement basis on the key part: columns of `alice` are the
/// kets |e_i^A>, columns of `bob` the kets |e_j^B>. Both matrices unitary.
struct ProductBasis {
  int d = 0;
  CMatrix alice;
  CMatrix bob;

  static ProductBasis standard(int d);
  /// |e_i^A> (x) |e_j^B> as a d^2 column vector.
  CVector key_ket(int i, int j) const;
};

/// Canonical purification |psi> = sum_m sqrt(lambda_m) |v_m>|m>, eigenvalues
/// descending, eigenvalues <= tol::purify_cutoff dropped. Eve's index is the
/// least significant one, so psi(s * eve_dim + m) is the (system s, Eve m)
/// amplitude.
struct Purification {
  std::vector<int> system_dims;
  int eve_dim = 0;
  CVector psi;

  Eigen::Index system_size() const;
};

Purification purify(const MultipartiteOperator& rho);

/// Transports a purification through a unitary acting on the system alone.
Purification apply_to_purification(const CMatrix& unitary, const Purification& pur);

/// Outcome distribution over the key basis plus Eve's conditional states.
/// eve_states[i][j] is empty (0x0) where p(i,j) <= tol::prob_floor.
struct CcqState {
  int d = 0;
  RMatrix p;
  std::vector<std::vector<CMatrix>> eve_states;
  int eve_dim = 0;

  bool has_eve_state(int i, int j) const;
};

/// Measures the key part of the canonical purification of `state` in the
/// product basis and collects Eve's conditional states.
CcqState ccq(const KeyShieldState& state, const ProductBasis& basis);

/// Same, but from a caller-supplied purification (system dims must be the
/// key-shield layout [d, d, dA', dB']).
CcqState ccq_from_purification(const Purification& pur, const ProductBasis& basis);

/// Largest trace distance between Eve states of any two outcomes whose
/// probability exceeds prob_cutoff.
double max_pairwise_eve_distance(const CcqState& c, double prob_cutoff);

/// True iff every pair of Eve conditional states (over outcomes with
/// probability > tolerance) is within trace distance `tolerance`.
bool is_secure(const CcqState& c, double tolerance);

/// Controlled unitary diagonal in the key product basis: the shield control
/// attached to key outcome (i,j) is controls[i][j].
struct Twisting {
  int d = 0;
  std::vector<std::vector<CMatrix>> controls;
};

/// Assembles U = sum_ij |e_i e_j><e_i e_j| (x) U_ij on [d, d, dA', dB'].
MultipartiteOperator twisting_unitary(const Twisting& t, const ProductBasis& basis,
                                      std::pair<int, int> shield_dims);

/// U rho U^dag; positivity and unit trace are preserved.
KeyShieldState apply_twisting(const KeyShieldState& state, const Twisting& t,
                              const ProductBasis& basis);

/// A private state (pdit): gamma = (1/d) sum_ij |e_i e_i><e_j e_j| (x)
/// U_i sigma U_j^dag. For d = 2 this is a pbit.
struct PrivateState {
  int d = 0;
  ProductBasis basis;
  std::pair<int, int> shield_dims{0, 0};
  CMatrix sigma;                  // density matrix on the shield
  std::vector<CMatrix> unitaries; // d controls on the shield

  KeyShieldState assemble() const;
  /// Twisting with controls U_ii = U_i^dag (identity off the diagonal);
  /// maps the assembled state to P_plus^(d) (x) sigma.
  Twisting untwisting() const;
};

PrivateState make_pdit(const ProductBasis& basis, std::pair<int, int> shield_dims,
                       const CMatrix& sigma, std::vector<CMatrix> unitaries);

double shannon_entropy(const std::vector<double>& p);  // base 2
double binary_entropy(double p);

/// One-way (Alice -> Bob) Devetak-Winter rate of a ccq state,
/// I(A:B) - I(A:E), in bits.
double dw_rate(const CcqState& c);

/// p1 gamma1 + (1 - p1) sigma_x^(A) gamma2 sigma_x^(A), with sigma_x acting
/// on Alice's key qubit only. Both inputs must be pbits (d = 2) with equal
/// shield dimensions.
KeyShieldState pbit_mixture(const PrivateState& gamma1,
                                const PrivateState& gamma2, double p1);

}  // namespace boundkey
