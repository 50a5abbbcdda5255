#include "boundkey/random.hpp"

#include <cmath>

namespace boundkey {

CMatrix random_ginibre(int n, Rng& rng) {
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  return g;
}

CMatrix random_unitary(int n, Rng& rng) {
  const CMatrix g = random_ginibre(n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity of QR so the distribution is Haar.
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

CMatrix random_density(int n, Rng& rng) {
  const CMatrix g = random_ginibre(n, rng);
  CMatrix rho = g * g.adjoint();
  return rho / rho.real().trace();
}

MultipartiteOperator random_hermitian(const std::vector<int>& dims, Rng& rng) {
  Eigen::Index n = 1;
  for (int d : dims) n *= d;
  const CMatrix g = random_ginibre(static_cast<int>(n), rng);
  return MultipartiteOperator(dims, 0.5 * (g + g.adjoint()));
}

ProductBasis random_product_basis(int d, Rng& rng) {
  return ProductBasis{d, random_unitary(d, rng), random_unitary(d, rng)};
}

PrivateState random_pdit(int d, std::pair<int, int> shield_dims, Rng& rng) {
  const int shield = shield_dims.first * shield_dims.second;
  std::vector<CMatrix> controls;
  for (int i = 0; i < d; ++i) controls.push_back(random_unitary(shield, rng));
  return make_pdit(ProductBasis::standard(d), shield_dims,
                   random_density(shield, rng), std::move(controls));
}

Twisting random_twisting(int d, std::pair<int, int> shield_dims, Rng& rng) {
  const int shield = shield_dims.first * shield_dims.second;
  Twisting t;
  t.d = d;
  t.controls.assign(d, std::vector<CMatrix>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) t.controls[i][j] = random_unitary(shield, rng);
  return t;
}

}  // namespace boundkey
