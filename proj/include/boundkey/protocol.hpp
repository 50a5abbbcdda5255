#pragma once

#include <optional>
#include <string>
#include <vector>

#include "boundkey/private_key.hpp"
#include "boundkey/states.hpp"

namespace boundkey {

/// Largest total matrix dimension handled densely. Read from the
/// BOUNDKEY_MEM_CAP environment variable, defaulting to 4096.
int dense_dim_cap();

/// Outcome of one postselected recurrence step.
struct RecurrenceResult {
  KeyShieldState state;
  double success_probability = 0.0;
  /// Number of copies consumed so far when recognizable (accumulated shield
  /// a power of the fresh shield), 0 otherwise.
  int step_index = 0;
};

/// The state reached after consuming k copies (k - 1 steps): corner blocks
/// |X_D|^(x)k and X_D^(x)k, middle blocks (|X_D^{T_B'}|^{T_B'})^(x)k, all
/// divided by N_{D,k} = 2 [1 + (D^2/(D^2+2D-4))^k]. Shield subsystems are
/// grouped as (all Alice factors | all Bob factors).
KeyShieldState rho_k_closed_form(int D, int k, int cap = dense_dim_cap());

/// N_{D,k}, evaluated from the traces of the dense D-family blocks.
double recurrence_normalization(int D, int k);

/// One exact protocol step: tensor the two states, apply the key-qubit
/// C-NOTs (fresh copy as source, accumulated as target, on both sides),
/// postselect the target qubits on equal outcomes, trace them out, and
/// regroup shields to (Alice factors | Bob factors). Throws when the joint
/// dimension exceeds `cap` or the postselection probability falls below 1e-14.
RecurrenceResult recurrence_step(const KeyShieldState& accumulated,
                                 const KeyShieldState& fresh,
                                 int cap = dense_dim_cap());

/// Runs copies - 1 steps starting from make_rho(D); entry i holds the state
/// after consuming i + 2 copies.
std::vector<RecurrenceResult> run_protocol(int D, int copies,
                                           int cap = dense_dim_cap());

/// ||A_{00,11}||_tr of a key-qubit state; the key criterion value.
double key_block_trace_norm(const KeyShieldState& state);

/// The pbit the recurrence converges to: shield state |X_D^(x)k| with the
/// orthogonal sign factor of X_D^(x)k as Alice's first control. Throws when
/// the recovered factor fails unitarity at 1e-10.
PrivateState limiting_pbit(int D, int k, int cap = dense_dim_cap());

struct CriterionEntry {
  int k = 0;
  double key_block_trace_norm = 0.0;  // from the trace formula
  double gap_to_half = 0.0;
  bool dense_checked = false;
  std::optional<double> dense_key_block_trace_norm;
  std::optional<double> pbit_trace_distance;
};

struct CriterionSeries {
  int D = 0;
  std::vector<CriterionEntry> entries;
};

/// Entries for k = 1..k_max; dense cross-checks (key block norm from the
/// assembled matrix, trace distance to the limiting pbit) only where the
/// total dimension stays within `cap`.
CriterionSeries criterion_series(int D, int k_max, int cap = dense_dim_cap());

/// CSV with header D,k,key_block_trace_norm,gap_to_half,pbit_trace_distance,
/// dense_checked; the distance column is empty for analytic-only rows.
std::string criterion_series_csv(const CriterionSeries& series);

}  // namespace boundkey
