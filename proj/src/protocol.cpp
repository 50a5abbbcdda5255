#include "boundkey/protocol.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace boundkey {

namespace {

constexpr double kMinSuccessProbability = 1e-14;

// Relabels computational basis vectors: out = P rho P^T for the permutation
// P |i> = |map[i]>. Exact (entry moves, no arithmetic).
CMatrix relabel_basis(const CMatrix& m, const std::vector<Eigen::Index>& map) {
  CMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(map[i], map[j]) = m(i, j);
  return out;
}

// Shield factors of the accumulated state grouped before those of the fresh
// copy, separately for Alice and Bob.
MultipartiteOperator regroup_shields(const MultipartiteOperator& m) {
  // dims on entry: [A'1, B'1, A, B, A'2, B'2]
  MultipartiteOperator permuted = permute_subsystems(m, {2, 3, 0, 4, 1, 5});
  const auto& d = permuted.dims();
  return permuted.with_dims({d[0], d[1], d[2] * d[3], d[4] * d[5]});
}

int infer_step_index(const KeyShieldState& accumulated,
                     const KeyShieldState& fresh) {
  const int base = fresh.shield_dims().first;
  if (base < 2 || fresh.shield_dims().second != base) return 0;
  int shield = accumulated.shield_dims().first;
  if (accumulated.shield_dims().second != shield) return 0;
  int copies = 0;
  while (shield > 1 && shield % base == 0) {
    shield /= base;
    ++copies;
  }
  return shield == 1 ? copies + 1 : 0;
}

}  // namespace

int dense_dim_cap() {
  if (const char* env = std::getenv("BOUNDKEY_MEM_CAP")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) return static_cast<int>(cap);
  }
  return 4096;
}

double recurrence_normalization(int D, int k) {
  if (k < 1) throw std::invalid_argument("recurrence_normalization: k must be >= 1");
  const XFamily x = make_x(D);
  const double trace_abs = x.absX.matrix().real().trace();
  const double trace_middle = x.abs_X_ptB_ptB.matrix().real().trace();
  return 2.0 * (std::pow(trace_abs, k) + std::pow(trace_middle, k));
}

KeyShieldState rho_k_closed_form(int D, int k, int cap) {
  if (k < 1) throw std::invalid_argument("rho_k_closed_form: k must be >= 1");
  const XFamily x = make_x(D);
  double total_dim = 4.0 * std::pow(static_cast<double>(D), 2.0 * k);
  if (total_dim > static_cast<double>(cap))
    throw std::invalid_argument("rho_k_closed_form: dimension exceeds dense cap");

  // Tensor powers carry interleaved (A'_i, B'_i) factors; regroup each block
  // to (all A' | all B') before assembling the key structure.
  std::vector<int> order;
  for (int i = 0; i < k; ++i) order.push_back(2 * i);
  for (int i = 0; i < k; ++i) order.push_back(2 * i + 1);
  const auto grouped_power = [&](const MultipartiteOperator& m) {
    MultipartiteOperator p = permute_subsystems(tensor_power(m, k), order);
    const int side = static_cast<int>(std::lround(std::pow(D, k)));
    return p.with_dims({side, side});
  };

  const MultipartiteOperator corner_abs = grouped_power(x.absX);
  const MultipartiteOperator corner_x = grouped_power(x.X);
  const MultipartiteOperator middle = grouped_power(x.abs_X_ptB_ptB);

  const double n = recurrence_normalization(D, k);
  const Eigen::Index s = corner_abs.dim();
  CMatrix m = CMatrix::Zero(4 * s, 4 * s);
  m.block(0 * s, 0 * s, s, s) = corner_abs.matrix() / n;
  m.block(3 * s, 3 * s, s, s) = corner_abs.matrix() / n;
  m.block(1 * s, 1 * s, s, s) = middle.matrix() / n;
  m.block(2 * s, 2 * s, s, s) = middle.matrix() / n;
  m.block(0 * s, 3 * s, s, s) = corner_x.matrix() / n;
  m.block(3 * s, 0 * s, s, s) = corner_x.matrix() / n;

  const int side = static_cast<int>(std::lround(std::pow(D, k)));
  return KeyShieldState(MultipartiteOperator({2, 2, side, side}, std::move(m)));
}

RecurrenceResult recurrence_step(const KeyShieldState& accumulated,
                                 const KeyShieldState& fresh, int cap) {
  if (accumulated.key_dim() != 2 || fresh.key_dim() != 2)
    throw std::invalid_argument("recurrence_step: key parts must be qubits");
  const Eigen::Index joint_dim = accumulated.rho().dim() * fresh.rho().dim();
  if (joint_dim > cap)
    throw std::invalid_argument("recurrence_step: dimension exceeds dense cap");

  // Subsystems: 0 = A target, 1 = B target, 2/3 = accumulated shields,
  // 4 = A source, 5 = B source, 6/7 = fresh shields.
  MultipartiteOperator joint = tensor(accumulated.rho(), fresh.rho());
  const auto& dims = joint.dims();
  const Eigen::Index n = joint.dim();

  std::vector<Eigen::Index> strides(dims.size());
  {
    Eigen::Index s = 1;
    for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
      strides[i] = s;
      s *= dims[i];
    }
  }
  const auto digit = [&](Eigen::Index idx, int sub) {
    return (idx / strides[sub]) % dims[sub];
  };

  // Both C-NOTs at once: each target key bit picks up its source key bit.
  std::vector<Eigen::Index> cnot(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index out = i;
    if (digit(i, 4) == 1) out += digit(i, 0) == 0 ? strides[0] : -strides[0];
    if (digit(i, 5) == 1) out += digit(i, 1) == 0 ? strides[1] : -strides[1];
    cnot[i] = out;
  }
  CMatrix evolved = relabel_basis(joint.matrix(), cnot);

  // Keep only rows and columns whose target key qubits agree (00 or 11).
  for (Eigen::Index i = 0; i < n; ++i) {
    if (digit(i, 0) == digit(i, 1)) continue;
    evolved.row(i).setZero();
    evolved.col(i).setZero();
  }

  const double success = evolved.real().trace();
  if (success < kMinSuccessProbability)
    throw std::runtime_error("recurrence_step: postselection probability vanished");

  MultipartiteOperator remaining =
      partial_trace(MultipartiteOperator(dims, std::move(evolved)), {0, 1});
  MultipartiteOperator regrouped = regroup_shields(remaining);

  RecurrenceResult result{
      KeyShieldState(MultipartiteOperator(regrouped.dims(),
                                          regrouped.matrix() / success)),
      success, infer_step_index(accumulated, fresh)};
  return result;
}

std::vector<RecurrenceResult> run_protocol(int D, int copies, int cap) {
  if (copies < 2)
    throw std::invalid_argument("run_protocol: need at least two copies");
  const KeyShieldState fresh = make_rho(D);
  KeyShieldState state = fresh;
  std::vector<RecurrenceResult> steps;
  for (int consumed = 2; consumed <= copies; ++consumed) {
    steps.push_back(recurrence_step(state, fresh, cap));
    state = steps.back().state;
  }
  return steps;
}

double key_block_trace_norm(const KeyShieldState& state) {
  if (state.key_dim() != 2)
    throw std::invalid_argument("key_block_trace_norm: key part must be qubits");
  const auto [sa, sb] = state.shield_dims();
  return trace_norm(MultipartiteOperator({sa, sb}, state.block(0, 0, 1, 1)));
}

PrivateState limiting_pbit(int D, int k, int cap) {
  if (k < 1) throw std::invalid_argument("limiting_pbit: k must be >= 1");
  const double shield_dim = std::pow(static_cast<double>(D), 2.0 * k);
  if (4.0 * shield_dim > static_cast<double>(cap))
    throw std::invalid_argument("limiting_pbit: dimension exceeds dense cap");

  const XFamily x = make_x(D);
  // Sign factor of the polar decomposition X = W |X|; orthogonal because X
  // is real symmetric with trivial kernel. Tensor powers and the shield
  // regrouping commute with taking the sign factor.
  const Spectrum spec = hermitian_eig(x.X);
  CMatrix w = CMatrix::Zero(x.X.dim(), x.X.dim());
  for (Eigen::Index m = 0; m < spec.eigenvalues.size(); ++m) {
    const double sign = spec.eigenvalues(m) >= 0.0 ? 1.0 : -1.0;
    w += sign * spec.eigenvectors.col(m) * spec.eigenvectors.col(m).adjoint();
  }

  std::vector<int> order;
  for (int i = 0; i < k; ++i) order.push_back(2 * i);
  for (int i = 0; i < k; ++i) order.push_back(2 * i + 1);
  const int side = static_cast<int>(std::lround(std::pow(D, k)));
  const auto grouped_power = [&](const MultipartiteOperator& m) {
    return permute_subsystems(tensor_power(m, k), order)
        .with_dims({side, side});
  };

  const MultipartiteOperator sigma = grouped_power(x.absX);
  const MultipartiteOperator w_k =
      grouped_power(MultipartiteOperator({D, D}, w));

  const Eigen::Index s = w_k.dim();
  if ((w_k.matrix() * w_k.matrix().adjoint() - CMatrix::Identity(s, s))
          .cwiseAbs()
          .maxCoeff() > 1e-10)
    throw std::runtime_error("limiting_pbit: recovered factor is not unitary");

  return make_pdit(ProductBasis::standard(2), {side, side}, sigma.matrix(),
                   {w_k.matrix(), CMatrix::Identity(s, s)});
}

CriterionSeries criterion_series(int D, int k_max, int cap) {
  if (k_max < 1) throw std::invalid_argument("criterion_series: k_max must be >= 1");
  const XFamily x = make_x(D);
  const double x_norm = trace_norm(x.X);

  CriterionSeries series;
  series.D = D;
  for (int k = 1; k <= k_max; ++k) {
    CriterionEntry entry;
    entry.k = k;
    entry.key_block_trace_norm =
        std::pow(x_norm, k) / recurrence_normalization(D, k);
    entry.gap_to_half = 0.5 - entry.key_block_trace_norm;

    const double total_dim = 4.0 * std::pow(static_cast<double>(D), 2.0 * k);
    if (total_dim <= static_cast<double>(cap)) {
      const KeyShieldState dense = rho_k_closed_form(D, k, cap);
      entry.dense_checked = true;
      entry.dense_key_block_trace_norm = key_block_trace_norm(dense);
      entry.pbit_trace_distance = trace_distance(
          dense.rho(), limiting_pbit(D, k, cap).assemble().rho());
    }
    series.entries.push_back(std::move(entry));
  }
  return series;
}

std::string criterion_series_csv(const CriterionSeries& series) {
  std::string out =
      "D,k,key_block_trace_norm,gap_to_half,pbit_trace_distance,dense_checked\n";
  char buf[64];
  for (const CriterionEntry& e : series.entries) {
    out += std::to_string(series.D) + "," + std::to_string(e.k) + ",";
    std::snprintf(buf, sizeof(buf), "%.12g", e.key_block_trace_norm);
    out += buf;
    std::snprintf(buf, sizeof(buf), ",%.12g", e.gap_to_half);
    out += buf;
    if (e.pbit_trace_distance) {
      std::snprintf(buf, sizeof(buf), ",%.12g", *e.pbit_trace_distance);
      out += buf;
    } else {
      out += ",";
    }
    out += e.dense_checked ? ",true\n" : ",false\n";
  }
  return out;
}

}  // namespace boundkey
