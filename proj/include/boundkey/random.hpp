#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "boundkey/private_key.hpp"

namespace boundkey {

/// Seeded PRNG handle; every sampler takes one explicitly so that runs are
/// reproducible from the seed alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double gaussian() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Complex matrix with i.i.d. standard complex Gaussian entries.
CMatrix random_ginibre(int n, Rng& rng);

/// Haar-distributed unitary (QR of a Ginibre matrix with phase-fixed R).
CMatrix random_unitary(int n, Rng& rng);

/// Full-rank random density matrix G G^dag / tr(G G^dag).
CMatrix random_density(int n, Rng& rng);

MultipartiteOperator random_hermitian(const std::vector<int>& dims, Rng& rng);

ProductBasis random_product_basis(int d, Rng& rng);

/// Random private state: random shield density matrix and d random controls
/// in the standard basis.
PrivateState random_pdit(int d, std::pair<int, int> shield_dims, Rng& rng);

Twisting random_twisting(int d, std::pair<int, int> shield_dims, Rng& rng);

}  // namespace boundkey
